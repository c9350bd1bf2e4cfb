fn main() {
    std::process::exit(entaudit::cli::run(std::env::args_os()));
}
