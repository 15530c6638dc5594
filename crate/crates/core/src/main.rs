fn main() {
    std::process::exit(symform::cli::main_with_args(std::env::args_os()));
}
