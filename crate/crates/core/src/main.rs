fn main() {
    std::process::exit(scatter1d::cli::run(std::env::args_os()));
}
