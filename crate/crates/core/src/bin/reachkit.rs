fn main() {
    std::process::exit(reachkit::cli::run(std::env::args().collect()));
}
