use clap::Parser;
use superchevalley::cli;

fn main() {
    let args = cli::Cli::parse();
    std::process::exit(cli::run(args));
}
