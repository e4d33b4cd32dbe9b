fn main() {
    std::process::exit(eulerdag_cli::run(std::env::args_os()));
}
