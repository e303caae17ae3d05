fn main() {
    std::process::exit(kpbbm::cli::run(std::env::args().collect()));
}
