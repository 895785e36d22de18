fn main() {
    std::process::exit(mhopf::cli::main());
}
