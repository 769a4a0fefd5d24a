fn main() {
    std::process::exit(elle::cli::run_cli(std::env::args_os()));
}
