use clap::error::ErrorKind;
use clap::Parser;
use compdiff::series::GRAMMAR;
use compdiff_cli::{parse_config, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprintln!("{e}");
            eprintln!("symbol grammar:\n{GRAMMAR}");
            std::process::exit(2);
        }
    };
    let outcome = parse_config(cli.command, cli.flags).and_then(|cfg| run(&cfg));
    if let Err(e) = outcome {
        eprintln!("{e}");
        if e.exit_code() == 2 {
            eprintln!("symbol grammar:\n{GRAMMAR}");
        }
        std::process::exit(e.exit_code());
    }
}
