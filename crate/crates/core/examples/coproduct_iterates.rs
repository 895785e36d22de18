//! Covered iterated coproducts: both nestings of Δ⁽ⁿ⁾ give the same tensor.

use mhopf::catalog::{function_algebra, Group};
use mhopf::mha::{Cover, Nesting, Side};
use mhopf::sample;

fn main() -> mhopf::Result<()> {
    let h = function_algebra(&Group::symmetric3())?;
    let w = h.window(0);
    let mut rng = sample::rng(1);
    for n in 1..=3 {
        let a = sample::vector(&mut rng, &w, 6);
        let covers: Vec<Cover> = (0..=n).map(|leg| Cover::new(leg, Side::Right, sample::vector(&mut rng, &w, 5))).collect();
        let l = h.delta_n_covered_with(&a, &covers, n, Nesting::Leftmost)?;
        let r = h.delta_n_covered_with(&a, &covers, n, Nesting::Rightmost)?;
        println!("n = {n}: {} terms, nestings agree: {}", l.len(), l == r);
    }
    Ok(())
}
