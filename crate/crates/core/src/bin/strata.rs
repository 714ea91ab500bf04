fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(strata::cli::run(&argv));
}
