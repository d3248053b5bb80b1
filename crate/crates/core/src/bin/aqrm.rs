fn main() {
    std::process::exit(aqrm::cli::run());
}
