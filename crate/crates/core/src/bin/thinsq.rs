fn main() {
    std::process::exit(thin_squares::cli::run(std::env::args_os()));
}
