fn main() {
    std::process::exit(ogplab::cli::run(std::env::args_os()));
}
