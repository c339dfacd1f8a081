fn main() {
    std::process::exit(exptrop::cli::main());
}
