fn main() {
    std::process::exit(haarproj::cli::run());
}
