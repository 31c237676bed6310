use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match bbs_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => bbs_cli::EXIT_USAGE,
            });
        }
    };
    let (text, code) = bbs_cli::execute(&cli);
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}
