fn main() {
    std::process::exit(maxwellqm::cli::run(std::env::args_os()));
}
