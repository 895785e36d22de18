//! Loads a spec file and runs the same suites as `mhopf verify`.
//!
//!     cargo run --example verify_file -- crates/core/data/z2_pair.json

use mhopf::cli::{format, suites};
use mhopf::report::Report;

fn main() -> mhopf::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/z2_pair.json").into());
    let loaded = format::load_path(path.as_ref())?;
    let reports = suites(&loaded, &format::suite_config(8, 0), &mut std::io::sink());
    for r in &reports {
        println!("{}", r.render());
    }
    println!("all passed: {}", reports.iter().all(Report::all_passed));
    Ok(())
}
