fn main() {
    std::process::exit(hilbloc::cli::main_with_args(std::env::args_os()));
}
