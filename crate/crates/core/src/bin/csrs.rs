fn main() {
    std::process::exit(csrs_fiber::cli::run(std::env::args_os()));
}
