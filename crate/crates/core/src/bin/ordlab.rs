fn main() {
    std::process::exit(ordlab::cli::run_command(std::env::args_os()));
}
