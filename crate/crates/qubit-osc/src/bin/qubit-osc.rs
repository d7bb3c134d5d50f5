fn main() {
    std::process::exit(qubit_osc::cli::run(std::env::args_os()));
}
