fn main() {
    std::process::exit(morphcat::cli::run(std::env::args_os()));
}
