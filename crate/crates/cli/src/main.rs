fn main() {
    std::process::exit(hgineq_cli::main_with_args(std::env::args_os()));
}
