fn main() {
    std::process::exit(hypmetrica::cli::main_with_args(std::env::args_os()));
}
