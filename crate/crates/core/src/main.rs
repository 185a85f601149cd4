fn main() {
    std::process::exit(egl::cli::run(std::env::args_os()));
}
