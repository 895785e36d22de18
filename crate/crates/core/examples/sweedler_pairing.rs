//! Sweedler's 4-dimensional Hopf algebra over the Gaussian rationals,
//! paired with itself, through the classical-Hopf adapter.

use mhopf::catalog::{hopf_as_mha, sweedler_hopf_data, sweedler_pair};
use mhopf::double::build_double;
use mhopf::mha::SuiteConfig;
use mhopf::Scalar;

fn main() -> mhopf::Result<()> {
    let cfg = SuiteConfig::default();
    let h = hopf_as_mha(&sweedler_hopf_data())?;
    println!("{}", h.verify(&cfg).render());

    let p = sweedler_pair(Scalar::i())?;
    for r in [p.verify_prepairing(&cfg), p.verify_pairing(&cfg), p.verify_properties(&cfg)] {
        println!("{}", r.render());
    }
    let d = build_double(&p.certify(&cfg)?, &cfg)?;
    println!("double: dim {}", d.window(0).len());
    println!("{}", d.handle().verify(&cfg).render());
    Ok(())
}
