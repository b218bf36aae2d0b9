fn main() {
    std::process::exit(keyless_vigenere::cli::main());
}
