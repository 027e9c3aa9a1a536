fn main() {
    if let Err(e) = quantum_graph::cli::configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
    let args: Vec<String> = std::env::args().collect();
    let code =
        quantum_graph::cli::run_command(&args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
