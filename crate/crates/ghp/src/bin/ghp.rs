fn main() {
    std::process::exit(ghp::cli::main_with_args(std::env::args_os()));
}
