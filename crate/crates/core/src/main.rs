fn main() {
    std::process::exit(minfill::cli::main_with_args(std::env::args_os()));
}
