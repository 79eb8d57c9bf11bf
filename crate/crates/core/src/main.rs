fn main() {
    std::process::exit(strokecx::cli::run(std::env::args_os()));
}
