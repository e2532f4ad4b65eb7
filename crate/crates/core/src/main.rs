fn main() {
    std::process::exit(ghcs::cli::run());
}
