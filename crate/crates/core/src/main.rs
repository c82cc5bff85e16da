use std::io;

use clap::Parser;
use workbench::cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let code = run(&cfg, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
