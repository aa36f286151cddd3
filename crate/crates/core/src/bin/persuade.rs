fn main() {
    std::process::exit(persuasion::cli::run());
}
