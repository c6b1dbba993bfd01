fn main() {
    std::process::exit(numrange::cli::main_with_args(std::env::args_os()));
}
