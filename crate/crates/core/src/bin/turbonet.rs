fn main() {
    std::process::exit(turbonet::cli::main_with_args(std::env::args_os()));
}
