fn main() {
    std::process::exit(dhj::cli::run(std::env::args().collect()));
}
