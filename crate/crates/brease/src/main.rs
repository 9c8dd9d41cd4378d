fn main() {
    std::process::exit(brease::cli::run(std::env::args_os()));
}
