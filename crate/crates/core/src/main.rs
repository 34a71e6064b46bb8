fn main() {
    std::process::exit(hodisc::cli::main_with_env());
}
