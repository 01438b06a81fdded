fn main() {
    std::process::exit(quasiseq_cli::main_with_args(std::env::args_os()));
}
