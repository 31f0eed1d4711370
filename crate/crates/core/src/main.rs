fn main() {
    std::process::exit(bimatrix::cli::main_entry());
}
