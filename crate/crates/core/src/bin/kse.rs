fn main() -> std::process::ExitCode {
    kse::cli::main()
}
