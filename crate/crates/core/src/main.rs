fn main() {
    std::process::exit(ritt_core::cli::run());
}
