fn main() {
    std::process::exit(ancilla_control::cli::main_with_args(std::env::args_os()));
}
