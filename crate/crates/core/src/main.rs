fn main() {
    std::process::exit(argsumm::cli::run(std::env::args_os()));
}
