fn main() {
    std::process::exit(qbounded::cli::run(std::env::args_os()));
}
