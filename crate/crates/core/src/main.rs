fn main() {
    std::process::exit(practium::cli::main());
}
