fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(lpfsieve_cli::run(&args));
}
