fn main() {
    std::process::exit(limitper::cli::run(std::env::args_os()));
}
