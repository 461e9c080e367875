fn main() {
    std::process::exit(lpoly_core::cli::main_with_args(std::env::args_os()));
}
