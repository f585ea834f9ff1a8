fn main() {
    std::process::exit(pite_sim::cli::run_cli(std::env::args_os()));
}
