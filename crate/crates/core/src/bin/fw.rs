fn main() -> std::process::ExitCode {
    fornberg_whitham::cli::main()
}
