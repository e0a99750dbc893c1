fn main() {
    std::process::exit(ore_nakayama::cli::main_with(std::env::args_os()));
}
