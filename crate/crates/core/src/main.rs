fn main() {
    std::process::exit(satflow::cli::main_entry());
}
