fn main() {
    std::process::exit(semitoric::cli::run(std::env::args_os()));
}
