fn main() {
    std::process::exit(scatterqual::cli::run(std::env::args_os()));
}
