use clap::Parser;

fn main() {
    let cli = pt_eta_cli::Cli::parse();
    let code = match pt_eta_cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pt-eta: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
