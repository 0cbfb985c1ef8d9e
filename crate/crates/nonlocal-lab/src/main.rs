use clap::Parser;
use nonlocal_lab::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let output = run(&config);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &output.report) {
                eprintln!("failed to write {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{}", output.report),
    }
    std::process::exit(output.exit_code);
}
