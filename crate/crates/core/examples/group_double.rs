//! Builds D(C(G), kG) and compares it with the textbook Drinfeld double.
//!
//!     cargo run --example group_double -- S3

use mhopf::catalog::{finite_group_pair, ClassicalDouble, Group};
use mhopf::double::build_double;
use mhopf::mha::SuiteConfig;
use mhopf::Tensor;

fn main() -> mhopf::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "S3".into());
    let g = Group::named(&name)?;
    let cfg = SuiteConfig::default();
    let d = build_double(&finite_group_pair(&g)?, &cfg)?;
    let oracle = ClassicalDouble::new(&g);

    let mut mismatches = 0;
    let table = oracle.multiplication_table();
    for (k, want) in &table {
        let got = d.d_mul(&Tensor::basis(k[0].clone()), &Tensor::basis(k[1].clone()))?;
        if &got != want {
            mismatches += 1;
        }
    }
    for p in oracle.basis() {
        let x = Tensor::basis(ClassicalDouble::label(p.0, p.1));
        if d.handle().delta_n_covered(&x, &[], 1)? != oracle.coproduct(p) {
            mismatches += 1;
        }
    }
    println!("{}: dim {}, {} products, {} mismatches", d.handle().name(), d.window(0).len(), table.len(), mismatches);
    println!("{}", d.handle().verify(&cfg).render());
    Ok(())
}
