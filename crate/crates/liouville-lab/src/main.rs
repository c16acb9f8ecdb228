fn main() {
    std::process::exit(liouville_lab::cli::main_with_args(std::env::args_os()));
}
