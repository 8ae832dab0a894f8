fn main() {
    let code = ising_reductions::cli::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
