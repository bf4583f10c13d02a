fn main() {
    std::process::exit(dagas::cli::run(std::env::args_os(), &mut std::io::stdout()));
}
