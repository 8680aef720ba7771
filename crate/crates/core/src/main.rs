fn main() {
    std::process::exit(dilatation::cli::run(std::env::args_os()));
}
