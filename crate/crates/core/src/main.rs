fn main() {
    std::process::exit(polar_bounds::cli::run(std::env::args_os()));
}
