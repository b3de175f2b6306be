fn main() {
    std::process::exit(riccati_cascade::cli::main_from(std::env::args_os()));
}
