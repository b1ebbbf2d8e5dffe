fn main() {
    std::process::exit(triplex::cli::run(std::env::args_os()));
}
