fn main() {
    std::process::exit(pslab::cli::run(std::env::args()));
}
