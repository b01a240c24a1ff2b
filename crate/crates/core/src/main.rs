fn main() {
    std::process::exit(berge_spectral::cli::run_from(std::env::args_os()));
}
