fn main() {
    std::process::exit(cupforge::cli::run(std::env::args_os()));
}
