fn main() {
    std::process::exit(incoherence::cli::main());
}
