use clap::Parser;
use fairgraph::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let level = if cli.quiet { log::LevelFilter::Off } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    if let Err(e) = execute(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
