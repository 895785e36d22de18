use mhopf::algebra::Multiplier;
use mhopf::catalog::*;
use mhopf::double::*;
use mhopf::mha::{CanonicalMap, SuiteConfig};
use mhopf::sample;
use mhopf::tensor::key;
use mhopf::{Label, Scalar, Tensor};
use num_traits::{One, Zero};
use std::sync::OnceLock;

fn lab(i: usize) -> Label {
    Label::Int(i as i64)
}

fn ba(b: usize, a: usize) -> Tensor {
    Tensor::basis_key(key([lab(b), lab(a)]))
}

fn ab(a: usize, b: usize) -> Tensor {
    Tensor::basis_key(key([lab(a), lab(b)]))
}

fn dv(g: usize, x: usize) -> Tensor {
    Tensor::basis(ClassicalDouble::label(g, x))
}

fn s3() -> &'static (Group, DoubleHandle) {
    static D: OnceLock<(Group, DoubleHandle)> = OnceLock::new();
    D.get_or_init(|| {
        let g = Group::symmetric3();
        let d = DoubleHandle::new(&finite_group_pair(&g).unwrap()).unwrap();
        (g, d)
    })
}

fn z2() -> &'static (Group, DoubleHandle) {
    static D: OnceLock<(Group, DoubleHandle)> = OnceLock::new();
    D.get_or_init(|| {
        let g = Group::cyclic(2);
        let d = DoubleHandle::new(&finite_group_pair(&g).unwrap()).unwrap();
        (g, d)
    })
}

#[test]
fn twist_conjugates() {
    let (g, d) = s3();
    for h in 0..6 {
        for x in 0..6 {
            let want = ab(g.mul(g.mul(h, x), g.inv(h)), h);
            assert_eq!(d.twist(&ba(h, x), Direction::Forward).unwrap(), want, "T(h⊗δ_g), h={h} g={x}");
        }
    }
}

#[test]
fn twist_inverse_round_trip() {
    let (_, d) = z2();
    let labels = d.b().window(0);
    let mut rng = sample::rng(7);
    for _ in 0..20 {
        let mut x = Tensor::zero(2);
        for _ in 0..3 {
            let (b, a) = (sample::label(&mut rng, &labels), sample::label(&mut rng, &labels));
            x.add_term(key([b, a]), sample::small_scalar(&mut rng));
        }
        let y = d.twist(&x, Direction::Forward).unwrap();
        assert_eq!(d.twist(&y, Direction::Inverse).unwrap(), x);
    }
}

#[test]
fn abelian_twist_is_flip() {
    let (_, d) = z2();
    assert_eq!(d.twist(&ba(1, 1), Direction::Forward).unwrap(), ab(1, 1));
}

#[test]
fn closed_forms_agree_with_composite() {
    let (_, d) = s3();
    for h in 0..6 {
        for x in 0..6 {
            let t = ba(h, x);
            let want = d.twist_with(TwistFormula::Composite, &t).unwrap();
            for f in TwistFormula::CLOSED {
                assert_eq!(d.twist_with(f, &t).unwrap(), want, "{f} on ({h},{x})");
            }
        }
    }
}

#[test]
fn product_matches_classical_double() {
    let (g, d) = s3();
    let oracle = ClassicalDouble::new(g);
    for (k, v) in oracle.multiplication_table() {
        let got = d.d_mul(&Tensor::basis(k[0].clone()), &Tensor::basis(k[1].clone())).unwrap();
        assert_eq!(got, v, "{} · {}", k[0], k[1]);
    }
}

#[test]
fn identity_slot_products() {
    let (g, d) = s3();
    let e = g.identity();
    for x in 0..6 {
        for y in 0..6 {
            let want = if x == y { dv(x, e) } else { Tensor::zero(1) };
            assert_eq!(d.d_mul(&dv(x, e), &dv(y, e)).unwrap(), want);
        }
    }
}

#[test]
fn product_is_associative_on_samples() {
    let (_, d) = s3();
    let w = d.window(0);
    let mut rng = sample::rng(11);
    for _ in 0..50 {
        let [x, y, z] = [0; 3].map(|_| Tensor::basis(sample::label(&mut rng, &w)));
        let left = d.d_mul(&d.d_mul(&x, &y).unwrap(), &z).unwrap();
        let right = d.d_mul(&x, &d.d_mul(&y, &z).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn star_fixes_function_slot() {
    let (g, d) = s3();
    for x in 0..6 {
        let v = dv(x, g.identity());
        assert_eq!(d.d_star(&v).unwrap(), v);
    }
}

#[test]
fn star_is_involutive_on_random_vectors() {
    let (_, d) = z2();
    let w = d.window(0);
    let mut rng = sample::rng(3);
    for _ in 0..20 {
        let v = sample::vector(&mut rng, &w, 4);
        assert_eq!(d.d_star(&d.d_star(&v).unwrap()).unwrap(), v);
    }
}

#[test]
fn embeddings_multiply_to_pure_tensor() {
    let (_, d) = z2();
    let (aa, bb) = (d.a().algebra(), d.b().algebra());
    let unit = ClassicalDouble::new(&z2().0).unit();
    for a in 0..2 {
        for b in 0..2 {
            let ia = d.lift_multiplier(Lift::InA(&Multiplier::embed(aa, &Tensor::basis(lab(a))))).unwrap();
            let ib = d.lift_multiplier(Lift::InB(&Multiplier::embed(bb, &Tensor::basis(lab(b))))).unwrap();
            let v = ia.apply_left(&ib.apply_left(&unit).unwrap()).unwrap();
            assert_eq!(v, dv(a, b));
        }
    }
}

#[test]
fn unit_lifts_to_unit() {
    let (_, d) = s3();
    let one = Multiplier::unit(d.a().algebra());
    let m = d.lift_multiplier(Lift::InA(&one)).unwrap();
    assert!(m.equals_on(&Multiplier::unit(d.algebra()), &d.window(0)).unwrap());
}

#[test]
fn counit_slice_of_t1_is_product() {
    let (_, d) = z2();
    let w = d.window(0);
    for x in &w {
        for y in &w {
            let t = Tensor::basis_key(key([x.clone(), y.clone()]));
            let t1 = d.d_canonical_map(CanonicalMap::T1, &t).unwrap();
            let mut sliced = Tensor::zero(1);
            for (k, c) in t1.terms() {
                let e = d.counit(&Tensor::basis(k[0].clone())).unwrap();
                sliced.add_term(key([k[1].clone()]), c * &e);
            }
            let prod = d.d_mul(&Tensor::basis(x.clone()), &Tensor::basis(y.clone())).unwrap();
            assert_eq!(sliced, prod, "{x}⊗{y}");
        }
    }
}

#[test]
fn t2_matches_classical_expansion() {
    // T2(x⊗y) = (x⊗1)Δ(y), with Δ taken from the textbook double
    let (g, d) = s3();
    let oracle = ClassicalDouble::new(g);
    let b = oracle.basis();
    let mut rng = sample::rng(5);
    for _ in 0..30 {
        let p = b[rand::Rng::gen_range(&mut rng, 0..b.len())];
        let q = b[rand::Rng::gen_range(&mut rng, 0..b.len())];
        let x = Tensor::basis(ClassicalDouble::label(p.0, p.1));
        let y = Tensor::basis(ClassicalDouble::label(q.0, q.1));
        let mut want = Tensor::zero(2);
        for (k, c) in oracle.coproduct(q).terms() {
            let left = d.d_mul(&x, &Tensor::basis(k[0].clone())).unwrap();
            want.add_scaled(c, &left.tensor(&Tensor::basis(k[1].clone())));
        }
        let got = d.d_canonical_map(CanonicalMap::T2, &x.tensor(&y)).unwrap();
        assert_eq!(got, want);
    }
}

#[test]
fn z2_double_is_a_four_dimensional_mha() {
    let (g, d) = z2();
    assert_eq!(d.window(0).len(), 4);
    assert!(d.handle().is_regular());
    let r = d.handle().verify(&SuiteConfig::default());
    assert!(r.all_passed(), "{}", r.render());
    for x in 0..2 {
        for h in 0..2 {
            let want = if x == g.identity() { Scalar::one() } else { Scalar::zero() };
            assert_eq!(d.counit(&dv(x, h)).unwrap(), want);
        }
    }
}

#[test]
fn build_double_certifies() {
    let p = finite_group_pair(&Group::cyclic(3)).unwrap();
    let d = build_double(&p, &SuiteConfig::default()).unwrap();
    assert_eq!(d.window(0).len(), 9);
}

#[test]
fn lemma_reading_is_flagged() {
    let (_, d) = z2();
    let r = d.verify(&SuiteConfig::default());
    assert!(r.all_passed(), "{}", r.render());
    assert!(r.render().contains("ambiguous source"));
}

#[test]
fn opposite_double_is_isomorphic() {
    let (_, d) = z2();
    let r = d.opposite_double_iso(&SuiteConfig::default());
    assert!(r.all_passed(), "{}", r.render());
}
