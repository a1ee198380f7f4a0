fn main() {
    gamma_lab::cli::configure_threads();
    let code = gamma_lab::cli::run(std::env::args_os(), &mut std::io::stdin().lock(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
