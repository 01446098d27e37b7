use clap::Parser;

fn main() {
    let cli = boxtop::cli::Cli::parse();
    std::process::exit(boxtop::cli::run(cli));
}
