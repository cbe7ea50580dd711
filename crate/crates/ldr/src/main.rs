fn main() {
    std::process::exit(ldr::cli::run_command(std::env::args()));
}
