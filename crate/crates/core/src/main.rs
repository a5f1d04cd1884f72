fn main() -> std::process::ExitCode {
    ecpeg::cli::main()
}
