use clap::Parser;

fn main() {
    let cli = polaron_cli::Cli::parse();
    let code = polaron_cli::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
