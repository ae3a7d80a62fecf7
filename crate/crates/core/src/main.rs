fn main() {
    std::process::exit(krichever::cli::run(std::env::args_os()));
}
