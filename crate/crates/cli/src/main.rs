use clap::Parser;
use qboson_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("qboson: {e}");
        std::process::exit(e.exit_code());
    }
}
