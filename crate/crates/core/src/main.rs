fn main() {
    std::process::exit(anline::cli::main_with_args(std::env::args_os()));
}
