fn main() {
    std::process::exit(esdsim::cli::run(std::env::args_os()));
}
