fn main() -> std::process::ExitCode {
    hetprobit::cli::run(std::env::args_os())
}
