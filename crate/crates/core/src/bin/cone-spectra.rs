fn main() {
    std::process::exit(cone_spectra::cli::main());
}
