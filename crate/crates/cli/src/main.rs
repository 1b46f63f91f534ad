fn main() {
    std::process::exit(equi_cli::run(std::env::args_os()));
}
