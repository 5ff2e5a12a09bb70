fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = affine_walker_cli::run_cli(&args);
    print!("{}", out);
    std::process::exit(code);
}
