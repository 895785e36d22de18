//! The non-unital pairing between finitely supported functions on ℤ and kℤ,
//! checked on a window, and its double.
//!
//!     cargo run --example lazy_integers -- 6

use mhopf::catalog::{lazy_int_group_pair, no_unit_witness};
use mhopf::double::DoubleHandle;
use mhopf::mha::SuiteConfig;

fn main() -> mhopf::Result<()> {
    let window = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let cfg = SuiteConfig::with_window(window);
    let p = lazy_int_group_pair()?;
    if let Some(w) = no_unit_witness(p.a(), window)? {
        println!("no unit in {}: {w}", p.a().name());
    }
    for r in [p.a().verify(&cfg), p.b().verify(&cfg), p.verify_pairing(&cfg)] {
        println!("{}", r.render());
    }
    let d = DoubleHandle::new(&p)?;
    println!("twist via {}", d.twist_formula());
    println!("{}", d.verify(&cfg).render());
    Ok(())
}
