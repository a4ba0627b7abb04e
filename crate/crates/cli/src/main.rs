mod args;
mod commands;
mod io;

use clap::Parser;

use args::{Cli, Command};
use io::{load_space, Failure};

fn run(cli: Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate(a) => commands::validate::run(a),
        Command::Delta(a) => commands::delta::run(a),
        Command::Cover(a) => commands::cover::run(a),
        Command::Embed(a) => commands::embed::run(a),
        Command::Report(a) => commands::report::run(a),
    }
}

fn main() {
    if let Ok(cap) = std::env::var("STONE_CLIQUE_CAP") {
        match cap.parse::<usize>() {
            Ok(v) => stone_core::cliques::set_clique_cap(v),
            Err(_) => {
                eprintln!("STONE_CLIQUE_CAP must be an unsigned integer, got {cap:?}");
                std::process::exit(1);
            }
        }
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{failure}");
            failure.exit_code()
        }
    };
    std::process::exit(code);
}
