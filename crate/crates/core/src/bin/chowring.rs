use clap::Parser;

use chowring::cli::{run_command, Command};

fn main() {
    let cmd = Command::parse();
    let outcome = run_command(&cmd);
    if outcome.status == 2 {
        eprintln!("{}", outcome.output);
    } else {
        println!("{}", outcome.output);
    }
    std::process::exit(outcome.status);
}
