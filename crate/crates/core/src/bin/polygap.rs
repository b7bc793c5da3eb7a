fn main() -> std::process::ExitCode {
    polygap::cli::main_with(std::env::args_os())
}
