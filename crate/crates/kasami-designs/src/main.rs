fn main() {
    std::process::exit(kasami_designs::cli::run(std::env::args()));
}
