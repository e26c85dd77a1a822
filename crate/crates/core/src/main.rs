fn main() {
    std::process::exit(sweepout::cli::run(std::env::args_os()));
}
