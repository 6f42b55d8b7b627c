fn main() {
    std::process::exit(focallab::cli::run(std::env::args_os()));
}
