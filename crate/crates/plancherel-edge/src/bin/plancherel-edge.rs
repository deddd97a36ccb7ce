fn main() {
    std::process::exit(plancherel_edge::cli::run(std::env::args_os()));
}
