fn main() {
    std::process::exit(fatf_core::cli::main());
}
