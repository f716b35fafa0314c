fn main() {
    std::process::exit(draf::cli::run(std::env::args_os(), None));
}
