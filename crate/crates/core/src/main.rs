fn main() {
    std::process::exit(unitary_sandwich::cli::run(std::env::args_os()));
}
