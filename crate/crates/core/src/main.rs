fn main() {
    std::process::exit(chebyeuler::cli::main_with_std());
}
