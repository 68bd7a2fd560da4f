fn main() {
    std::process::exit(sdar::cli::run());
}
