fn main() {
    env_logger::init();
    std::process::exit(covent::cli::main());
}
