fn main() {
    std::process::exit(reclab::cli::run());
}
