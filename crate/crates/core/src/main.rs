fn main() {
    std::process::exit(bernstein_mass::cli::run(std::env::args_os()));
}
