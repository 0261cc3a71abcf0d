use clap::Parser;

fn main() {
    let cli = conceptor_embedding_cli::Cli::parse();
    if let Err(err) = conceptor_embedding_cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
