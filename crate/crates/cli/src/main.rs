use std::io::Write;

use clap::Parser;
use geomsem_cli::{color_enabled, lsp, run, Cli, Command};

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Lsp => lsp::serve(std::io::BufReader::new(std::io::stdin()), &mut std::io::stdout().lock()),
        ref command => {
            let mut out = std::io::stdout().lock();
            let code = run(command, color_enabled(), &mut out, &mut std::io::stderr());
            let _ = out.flush();
            code
        }
    };
    std::process::exit(code);
}
