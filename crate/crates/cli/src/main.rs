fn main() {
    std::process::exit(lpq_cli::run_cli(std::env::args_os()));
}
