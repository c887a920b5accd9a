fn main() -> std::process::ExitCode {
    difflab::cli::main()
}
