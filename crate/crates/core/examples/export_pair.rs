//! Writes a catalog group pairing as an explicit structure-constant file.
//!
//!     cargo run --example export_pair -- Z2 > data/z2_pair.json

use mhopf::catalog::{finite_group_pair, Group};
use mhopf::cli::format::{pairing_file, to_json_text};

fn main() -> mhopf::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "Z2".into());
    let p = finite_group_pair(&Group::named(&name)?)?;
    let doc = pairing_file(&p)?;
    print!("{}", to_json_text(&doc));
    Ok(())
}
