//! The star of D(C(G), kG): involution, antimultiplicativity and the
//! embeddings of A and B.

use mhopf::algebra::Multiplier;
use mhopf::catalog::{finite_group_pair, Group};
use mhopf::double::{DoubleHandle, Lift};
use mhopf::Tensor;

fn main() -> mhopf::Result<()> {
    let d = DoubleHandle::new(&finite_group_pair(&Group::symmetric3())?)?;
    let w = d.window(0);
    let (mut involutive, mut anti) = (0, 0);
    for x in &w {
        let x = Tensor::basis(x.clone());
        involutive += usize::from(d.d_star(&d.d_star(&x)?)? == x);
        for y in w.iter().step_by(7) {
            let y = Tensor::basis(y.clone());
            let lhs = d.d_star(&d.d_mul(&x, &y)?)?;
            anti += usize::from(lhs == d.d_mul(&d.d_star(&y)?, &d.d_star(&x)?)?);
        }
    }
    println!("ι² = id on {involutive}/{} basis elements", w.len());
    println!("(xy)* = y*x* on {anti} pairs");

    let a = d.a().algebra();
    let m = Multiplier::embed(a, &Tensor::basis(d.a().window(0)[1].clone()));
    let lhs = d.lift_multiplier(Lift::InA(&m.star()?))?;
    let rhs = d.lift_multiplier(Lift::InA(&m))?.star()?;
    println!("i_A(m*) = i_A(m)*: {}", lhs.equals_on(&rhs, &w)?);
    Ok(())
}
