use std::process::ExitCode;

use clap::Parser;
use diagcount_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} worker threads: {e}");
            return ExitCode::from(diagcount_cli::EXIT_USAGE as u8);
        }
    }
    let result = run(&cli);
    print!("{}", result.render(cli.format));
    if let Some(msg) = result.error() {
        eprintln!("error: {msg}");
    }
    ExitCode::from(result.exit_code as u8)
}
