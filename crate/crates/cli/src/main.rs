use std::process::ExitCode;

use clap::Parser;
use mvtensor_cli::{run, save_json, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    let report = run(&cli, argv[1..].to_vec());
    match &cli.out {
        Some(path) => {
            let v = serde_json::to_value(&report).expect("reports serialize");
            if let Err(e) = save_json(path, &v) {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.render(cli.json)),
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.exit_code() as u8)
}
