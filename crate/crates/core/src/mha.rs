//! Multiplier Hopf algebras presented by their canonical maps `T1`, `T2`.
//!
//! `Δ` itself lives in `M(A⊗A)` and is never materialized; it is only ever
//! evaluated against covers, i.e. multiplied by algebra elements on enough
//! legs that the result is a finite tensor.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{describe_window, mul_on_leg, Algebra, Multiplier};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert};
use crate::report::{check, Check, Report};
use crate::sample;
use crate::scalar::Scalar;
use crate::tensor::{apply_on_legs, fmt_key, key, product_keys, Functional, Key, Label, LinMap, Tensor, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Multiplication of one leg by an algebra element: `Left` puts it in
/// front (`c·x`), `Right` behind (`x·c`).
#[derive(Clone, Debug)]
pub struct Cover {
    pub leg: usize,
    pub side: Side,
    pub by: Vector,
}

impl Cover {
    pub fn new(leg: usize, side: Side, by: Vector) -> Cover {
        Cover { leg, side, by }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalMap {
    T1,
    T2,
    T1Inv,
    T2Inv,
    TOp1,
    TOp2,
    TOp1Inv,
    TOp2Inv,
}

/// Which leg is split first when expanding `Δ⁽ⁿ⁾`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct Integral {
    pub side: Side,
    pub functional: Functional,
}

/// Sampling policy of the verification suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Radius of the window on lazy bases.
    pub window: usize,
    /// Sweep all basis triples when there are at most this many.
    pub triple_limit: usize,
    /// Random triples otherwise.
    pub samples: usize,
    pub seed: u64,
    /// Random (ω, a, cover) cases for the slice identities.
    pub lemma_cases: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            window: 8,
            triple_limit: 10_000,
            samples: 200,
            seed: 0,
            lemma_cases: 20,
        }
    }
}

impl SuiteConfig {
    pub fn with_window(window: usize) -> Self {
        SuiteConfig {
            window,
            ..Self::default()
        }
    }
}

struct MhaInner {
    name: String,
    alg: Algebra,
    t1: LinMap,
    t2: LinMap,
    t1_inv: LinMap,
    t2_inv: LinMap,
    counit: Functional,
    antipode: LinMap,
    antipode_inv: Option<LinMap>,
    t_op: Option<[LinMap; 4]>,
    left_integral: Option<Functional>,
    right_integral: Option<Functional>,
}

/// An algebra with canonical maps `T1(a⊗a') = Δ(a)(1⊗a')`,
/// `T2(a⊗a') = (a⊗1)Δ(a')`, their inverses, counit, antipode and optional
/// integrals.
#[derive(Clone)]
pub struct MhaHandle(Arc<MhaInner>);

impl fmt::Debug for MhaHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MhaHandle({})", self.0.name)
    }
}

/// Assembles an [`MhaHandle`]. On finite bases anything not supplied is
/// solved for, and anything supplied is checked against the solution.
pub struct MhaBuilder {
    name: String,
    alg: Algebra,
    t1: LinMap,
    t2: LinMap,
    t1_inv: Option<LinMap>,
    t2_inv: Option<LinMap>,
    counit: Option<Functional>,
    antipode: Option<LinMap>,
    antipode_inv: Option<LinMap>,
    left_integral: Option<Functional>,
    right_integral: Option<Functional>,
}

impl MhaBuilder {
    pub fn inverses(mut self, t1_inv: LinMap, t2_inv: LinMap) -> Self {
        self.t1_inv = Some(t1_inv);
        self.t2_inv = Some(t2_inv);
        self
    }

    pub fn counit(mut self, eps: Functional) -> Self {
        self.counit = Some(eps);
        self
    }

    pub fn antipode(mut self, s: LinMap, s_inv: Option<LinMap>) -> Self {
        self.antipode = Some(s);
        self.antipode_inv = s_inv;
        self
    }

    pub fn left_integral(mut self, phi: Functional) -> Self {
        self.left_integral = Some(phi);
        self
    }

    pub fn right_integral(mut self, psi: Functional) -> Self {
        self.right_integral = Some(psi);
        self
    }

    pub fn build(self) -> Result<MhaHandle> {
        let finite = self.alg.basis().labels().map(<[Label]>::to_vec);
        let t1 = self.t1.cached();
        let t2 = self.t2.cached();
        let (t1_inv, t2_inv) = match (self.t1_inv, self.t2_inv, &finite) {
            (Some(a), Some(b), _) => (a.cached(), b.cached()),
            (a, b, Some(labels)) => (
                match a {
                    Some(a) => a.cached(),
                    None => solve_inverse(&t1, labels, 2, "T1")?,
                },
                match b {
                    Some(b) => b.cached(),
                    None => solve_inverse(&t2, labels, 2, "T2")?,
                },
            ),
            _ => {
                return Err(Error::NotInvertible(format!(
                    "{}: lazy handles need supplied T1/T2 inverses",
                    self.name
                )))
            }
        };
        let alg = self.alg.clone();
        let (counit, antipode, antipode_inv) = match &finite {
            Some(labels) => {
                let eps = extract_counit(&alg, &t1_inv, labels)?;
                if let Some(given) = &self.counit {
                    for l in labels {
                        if given.at(l)? != eps.at(l)? {
                            return Err(Error::InconsistentCounit(format!(
                                "closed form gives {} at {l}, extraction gives {}",
                                given.at(l)?,
                                eps.at(l)?
                            )));
                        }
                    }
                }
                let eps = self.counit.unwrap_or(eps);
                let s = extract_antipode(&alg, &t1_inv, &eps, labels)?;
                if let Some(given) = &self.antipode {
                    let keys: Vec<Key> = labels.iter().map(|l| key([l.clone()])).collect();
                    if let Some((k, x, y)) = given.first_difference(&s, &keys)? {
                        return Err(Error::InconsistentAntipode(format!(
                            "closed form gives {x} at {}, extraction gives {y}",
                            fmt_key(&k)
                        )));
                    }
                }
                let s = self.antipode.map(|m| m.cached()).unwrap_or(s);
                let s_inv = match self.antipode_inv {
                    Some(m) => Some(m.cached()),
                    None => solve_inverse(&s, labels, 1, "S").ok(),
                };
                (eps, s, s_inv)
            }
            None => {
                let eps = self.counit.ok_or_else(|| {
                    Error::Unavailable(format!("{}: lazy handles need a closed-form counit", self.name))
                })?;
                let s = self.antipode.ok_or_else(|| {
                    Error::Unavailable(format!("{}: lazy handles need a closed-form antipode", self.name))
                })?;
                (eps, s.cached(), self.antipode_inv.map(|m| m.cached()))
            }
        };
        let t_op = antipode_inv
            .as_ref()
            .map(|s_inv| op_maps(&t1, &t2, &t1_inv, &t2_inv, &antipode, s_inv));
        Ok(MhaHandle(Arc::new(MhaInner {
            name: self.name,
            alg,
            t1,
            t2,
            t1_inv,
            t2_inv,
            counit,
            antipode,
            antipode_inv,
            t_op,
            left_integral: self.left_integral,
            right_integral: self.right_integral,
        })))
    }
}

/// `T_op1 = (id⊗S⁻¹)τT2⁻¹τ(id⊗S)`, `T_op2 = (S⁻¹⊗id)τT1⁻¹τ(S⊗id)` and
/// their inverses (same composites through `T2`, `T1`).
fn op_maps(t1: &LinMap, t2: &LinMap, t1_inv: &LinMap, t2_inv: &LinMap, s: &LinMap, s_inv: &LinMap) -> [LinMap; 4] {
    let build = |name: &str, mid: &LinMap, first_leg: usize| {
        let (mid, s, s_inv) = (mid.clone(), s.clone(), s_inv.clone());
        LinMap::memoized(name, 2, 2, move |k| {
            let x = Tensor::basis_key(key(k.iter().cloned()));
            let x = apply_on_legs(&s, &[first_leg], &x)?;
            let x = mid.apply(&x.swap())?.swap();
            apply_on_legs(&s_inv, &[first_leg], &x)
        })
    };
    [
        build("T_op1", t2_inv, 1),
        build("T_op2", t1_inv, 0),
        build("T_op1⁻¹", t2, 1),
        build("T_op2⁻¹", t1, 0),
    ]
}

/// Inverse of a bijective map on `labels^degree`, by exact solve.
pub fn solve_inverse(f: &LinMap, labels: &[Label], degree: usize, what: &str) -> Result<LinMap> {
    let keys = product_keys(labels, degree);
    let mut e = Echelon::new();
    for k in &keys {
        if let Insert::Dependent(_) = e.insert(&f.eval_key(k)?) {
            return Err(Error::NotInvertible(what.to_string()));
        }
    }
    let (e, keys) = (Arc::new(e), Arc::new(keys));
    let name = format!("{what}⁻¹");
    let out_degree = f.in_degree();
    Ok(LinMap::memoized(name.clone(), f.out_degree(), out_degree, move |k| {
        let target = Tensor::basis_key(key(k.iter().cloned()));
        let sol = e.solve(&target).ok_or_else(|| Error::NotInvertible(name.clone()))?;
        Ok(Tensor::from_terms(
            out_degree,
            sol.into_iter().map(|(j, c)| (keys[j].clone(), c)),
        ))
    }))
}

/// `ε(a)a' = m∘T1⁻¹(a⊗a')`, probed on every basis element.
fn extract_counit(alg: &Algebra, t1_inv: &LinMap, labels: &[Label]) -> Result<Functional> {
    let mut values = std::collections::BTreeMap::new();
    for a in labels {
        let mut value: Option<Scalar> = None;
        for p in labels {
            let v = alg.mul_map().apply(&t1_inv.eval_key(&[a.clone(), p.clone()])?)?;
            let lambda = v.coeff_of(p);
            if v != Tensor::basis(p.clone()).scale(&lambda) {
                return Err(Error::InconsistentCounit(format!(
                    "m∘T1⁻¹({a}⊗{p}) = {v} is not a multiple of the probe"
                )));
            }
            match &value {
                None => value = Some(lambda),
                Some(x) if *x != lambda => {
                    return Err(Error::InconsistentCounit(format!(
                        "probes disagree at {a}: {x} vs {lambda} (probe {p})"
                    )))
                }
                Some(_) => {}
            }
        }
        values.insert(a.clone(), value.unwrap_or_default());
    }
    Ok(Functional::from_coeffs("ε", values))
}

/// `S(a)a' = (ε⊗id)T1⁻¹(a⊗a')`, solved for `S(a)` over all probes.
fn extract_antipode(alg: &Algebra, t1_inv: &LinMap, eps: &Functional, labels: &[Label]) -> Result<LinMap> {
    // column for x: (x·p)_p
    let mut e = Echelon::new();
    for x in labels {
        let mut col = Tensor::zero(2);
        for p in labels {
            for (k, c) in alg.mul_labels(x, p)?.terms() {
                col.add_term(key([p.clone(), k[0].clone()]), c.clone());
            }
        }
        e.insert(&col);
    }
    let mut table = std::collections::HashMap::new();
    for a in labels {
        let mut target = Tensor::zero(2);
        for p in labels {
            let r = apply_on_legs(eps.map(), &[0], &t1_inv.eval_key(&[a.clone(), p.clone()])?)?;
            for (k, c) in r.terms() {
                target.add_term(key([p.clone(), k[0].clone()]), c.clone());
            }
        }
        let sol = e.solve(&target).ok_or_else(|| {
            Error::InconsistentAntipode(format!("no element x with x·a' = (ε⊗id)T1⁻¹({a}⊗a') for all a'"))
        })?;
        let s = Tensor::from_terms(1, sol.into_iter().map(|(j, c)| (key([labels[j].clone()]), c)));
        table.insert(key([a.clone()]), s);
    }
    Ok(LinMap::from_table("S", 1, 1, table))
}

impl MhaHandle {
    pub fn builder(name: impl Into<String>, alg: &Algebra, t1: LinMap, t2: LinMap) -> MhaBuilder {
        MhaBuilder {
            name: name.into(),
            alg: alg.clone(),
            t1,
            t2,
            t1_inv: None,
            t2_inv: None,
            counit: None,
            antipode: None,
            antipode_inv: None,
            left_integral: None,
            right_integral: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn algebra(&self) -> &Algebra {
        &self.0.alg
    }

    pub fn is_finite(&self) -> bool {
        self.0.alg.is_finite()
    }

    pub fn is_regular(&self) -> bool {
        self.0.t_op.is_some()
    }

    pub fn t1(&self) -> &LinMap {
        &self.0.t1
    }

    pub fn t2(&self) -> &LinMap {
        &self.0.t2
    }

    pub fn t1_inv(&self) -> &LinMap {
        &self.0.t1_inv
    }

    pub fn t2_inv(&self) -> &LinMap {
        &self.0.t2_inv
    }

    fn op(&self, i: usize) -> Result<&LinMap> {
        self.0
            .t_op
            .as_ref()
            .map(|m| &m[i])
            .ok_or_else(|| Error::NotRegular(self.0.name.clone()))
    }

    pub fn t_op1(&self) -> Result<&LinMap> {
        self.op(0)
    }

    pub fn t_op2(&self) -> Result<&LinMap> {
        self.op(1)
    }

    pub fn t_op1_inv(&self) -> Result<&LinMap> {
        self.op(2)
    }

    pub fn t_op2_inv(&self) -> Result<&LinMap> {
        self.op(3)
    }

    pub fn map(&self, which: CanonicalMap) -> Result<&LinMap> {
        Ok(match which {
            CanonicalMap::T1 => self.t1(),
            CanonicalMap::T2 => self.t2(),
            CanonicalMap::T1Inv => self.t1_inv(),
            CanonicalMap::T2Inv => self.t2_inv(),
            CanonicalMap::TOp1 => self.t_op1()?,
            CanonicalMap::TOp2 => self.t_op2()?,
            CanonicalMap::TOp1Inv => self.t_op1_inv()?,
            CanonicalMap::TOp2Inv => self.t_op2_inv()?,
        })
    }

    pub fn canonical_map(&self, which: CanonicalMap, x: &Tensor) -> Result<Tensor> {
        self.map(which)?.apply(x)
    }

    pub fn counit_functional(&self) -> &Functional {
        &self.0.counit
    }

    pub fn counit(&self, a: &Vector) -> Result<Scalar> {
        self.0.counit.eval(a)
    }

    pub fn antipode_map(&self) -> &LinMap {
        &self.0.antipode
    }

    pub fn antipode_inv_map(&self) -> Result<&LinMap> {
        self.0
            .antipode_inv
            .as_ref()
            .ok_or_else(|| Error::NotRegular(self.0.name.clone()))
    }

    /// `S(a)` for `power = 1`, `S⁻¹(a)` for `power = -1`.
    pub fn antipode(&self, a: &Vector, power: i32) -> Result<Vector> {
        match power {
            1 => self.0.antipode.apply(a),
            -1 => self.antipode_inv_map()?.apply(a),
            p => Err(Error::Unavailable(format!("antipode power {p}"))),
        }
    }

    pub fn left_integral(&self) -> Option<Integral> {
        self.0.left_integral.clone().map(|f| Integral {
            side: Side::Left,
            functional: f,
        })
    }

    pub fn right_integral(&self) -> Option<Integral> {
        self.0.right_integral.clone().map(|f| Integral {
            side: Side::Right,
            functional: f,
        })
    }

    /// Verification window: the whole basis, or radius `n` when lazy.
    pub fn window(&self, n: usize) -> Vec<Label> {
        self.0.alg.window(n)
    }

    fn describe(&self, w: &[Label]) -> String {
        describe_window(w, self.is_finite())
    }

    /// `(l0⊗l1)Δ(a)(r0⊗r1)` with absent entries read as `1`.
    ///
    /// The first present cover picks the canonical map: `r1` → `T1`,
    /// `l0` → `T2`, `r0` → `τT_op1`, `l1` → `τT_op2`; the others are then
    /// multiplied on.
    pub fn delta_covered(&self, a: &Vector, left: [Option<&Vector>; 2], right: [Option<&Vector>; 2]) -> Result<Tensor> {
        let alg = &self.0.alg;
        let (mut l, mut r) = (left, right);
        let base = if let Some(y) = r[1].take() {
            self.0.t1.apply(&a.tensor(y))?
        } else if let Some(x) = l[0].take() {
            self.0.t2.apply(&x.tensor(a))?
        } else if let Some(x) = r[0].take() {
            self.t_op1()?.apply(&a.tensor(x))?.swap()
        } else if let Some(y) = l[1].take() {
            self.t_op2()?.apply(&y.tensor(a))?.swap()
        } else if let Some(u) = alg.unit() {
            self.0.t1.apply(&a.tensor(u))?
        } else {
            return Err(Error::InsufficientCover(format!(
                "Δ({a}) with no cover in the non-unital {}",
                self.0.name
            )));
        };
        let mut t = base;
        for leg in 0..2 {
            if let Some(x) = l[leg] {
                t = mul_on_leg(alg, &t, leg, x, true)?;
            }
            if let Some(x) = r[leg] {
                t = mul_on_leg(alg, &t, leg, x, false)?;
            }
        }
        Ok(t)
    }

    /// `Δ(a)·t` (`Left`) or `t·Δ(a)` (`Right`) for a degree-2 tensor `t`.
    pub fn delta_apply(&self, a: &Vector, t: &Tensor, side: Side) -> Result<Tensor> {
        if t.degree() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                got: t.degree(),
            });
        }
        let mut out = Tensor::zero(2);
        for (k, c) in t.terms() {
            let (x, y) = (Tensor::basis(k[0].clone()), Tensor::basis(k[1].clone()));
            let part = match side {
                Side::Left => self.delta_covered(a, [None, None], [Some(&x), Some(&y)])?,
                Side::Right => self.delta_covered(a, [Some(&x), Some(&y)], [None, None])?,
            };
            out.add_scaled(c, &part);
        }
        Ok(out)
    }

    /// The multiplier `(id⊗ω)Δ(a)` (`Right`: `ω` on the right leg) or
    /// `(ω⊗id)Δ(a)` (`Left`).
    pub fn slice(&self, omega: &Functional, side: Side, a: &Vector) -> Multiplier {
        let h1 = self.clone();
        let h2 = self.clone();
        let (o1, o2) = (omega.clone(), omega.clone());
        let (a1, a2) = (a.clone(), a.clone());
        let leg = match side {
            Side::Left => 0,
            Side::Right => 1,
        };
        let other = 1 - leg;
        let rho1 = LinMap::new("slice·", 1, 1, move |k| {
            let x = Tensor::basis(k[0].clone());
            let mut r = [None, None];
            r[other] = Some(&x);
            let t = h1.delta_covered(&a1, [None, None], r)?;
            apply_on_legs(o1.map(), &[leg], &t)
        });
        let rho2 = LinMap::new("·slice", 1, 1, move |k| {
            let x = Tensor::basis(k[0].clone());
            let mut l = [None, None];
            l[other] = Some(&x);
            let t = h2.delta_covered(&a2, l, [None, None])?;
            apply_on_legs(o2.map(), &[leg], &t)
        });
        Multiplier::unchecked(&self.0.alg, rho1, rho2)
    }

    /// The slice as an element of `A`, computed through a local unit `e` for
    /// the functional: `(id⊗ω)Δ(a) = (id⊗ω)T1(a⊗e)` and
    /// `(ω⊗id)Δ(a) = (ω⊗id)T2(e⊗a)`. Needs `ω(ye) = ω(y) = ω(ey)`, which
    /// holds for the unit and for finitely supported `ω` with the local units
    /// of function algebras.
    pub fn slice_element(&self, omega: &Functional, side: Side, a: &Vector) -> Result<Vector> {
        let support: BTreeSet<Label> = match omega.support() {
            Some(s) => s.iter().cloned().collect(),
            None => BTreeSet::new(),
        };
        let e = self.0.alg.local_unit(&support).ok_or_else(|| {
            Error::InsufficientCover(format!(
                "{} has no unit and no local unit for the support of {}",
                self.0.name,
                omega.name()
            ))
        })?;
        if self.0.alg.unit().is_none() && omega.support().is_none() {
            return Err(Error::InsufficientCover(format!(
                "functional {} has no declared finite support",
                omega.name()
            )));
        }
        match side {
            Side::Right => apply_on_legs(omega.map(), &[1], &self.0.t1.apply(&a.tensor(&e))?),
            Side::Left => apply_on_legs(omega.map(), &[0], &self.0.t2.apply(&e.tensor(a))?),
        }
    }

    /// `Δ⁽ⁿ⁾(a)` (with `n + 1` legs) multiplied by the covers. At most one
    /// leg may stay free unless the algebra is unital, and free legs must be
    /// contiguous; otherwise the result is not a finite tensor.
    pub fn delta_n_covered(&self, a: &Vector, covers: &[Cover], n: usize) -> Result<Tensor> {
        self.delta_n_covered_with(a, covers, n, Nesting::Leftmost)
    }

    pub fn delta_n_covered_with(&self, a: &Vector, covers: &[Cover], n: usize, nesting: Nesting) -> Result<Tensor> {
        let legs = n + 1;
        let alg = &self.0.alg;
        let mut lc: Vec<Option<Vector>> = vec![None; legs];
        let mut rc: Vec<Option<Vector>> = vec![None; legs];
        for c in covers {
            if c.leg >= legs {
                return Err(Error::ArityMismatch {
                    expected: legs,
                    got: c.leg + 1,
                });
            }
            match c.side {
                Side::Left => {
                    lc[c.leg] = Some(match &lc[c.leg] {
                        None => c.by.clone(),
                        Some(prev) => alg.mul_unchecked(&c.by, prev)?,
                    })
                }
                Side::Right => {
                    rc[c.leg] = Some(match &rc[c.leg] {
                        None => c.by.clone(),
                        Some(prev) => alg.mul_unchecked(prev, &c.by)?,
                    })
                }
            }
        }
        let free: Vec<usize> = (0..legs).filter(|&i| lc[i].is_none() && rc[i].is_none()).collect();
        if free.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::InsufficientCover(format!("free legs {free:?} are not contiguous")));
        }
        if free.len() > 1 || (legs == 2 && free.len() == 2) {
            match alg.unit() {
                Some(u) => {
                    for &i in &free[1..] {
                        rc[i] = Some(u.clone());
                    }
                }
                None => {
                    return Err(Error::InsufficientCover(format!(
                        "{} free legs {free:?} in the non-unital {}",
                        free.len(),
                        self.0.name
                    )))
                }
            }
        }
        if legs == 1 {
            let mut x = a.clone();
            if let Some(l) = &lc[0] {
                x = alg.mul_unchecked(l, &x)?;
            }
            if let Some(r) = &rc[0] {
                x = alg.mul_unchecked(&x, r)?;
            }
            return Ok(x);
        }
        self.expand(a, &lc, &rc, nesting)
    }

    fn expand(&self, a: &Vector, lc: &[Option<Vector>], rc: &[Option<Vector>], nesting: Nesting) -> Result<Tensor> {
        let legs = lc.len();
        if legs == 2 {
            return self.delta_covered(a, [lc[0].as_ref(), lc[1].as_ref()], [rc[0].as_ref(), rc[1].as_ref()]);
        }
        let free = (0..legs).find(|&i| lc[i].is_none() && rc[i].is_none());
        let candidates: Vec<usize> = (0..legs - 1)
            .filter(|&k| free.is_none_or(|f| f == k || f == k + 1))
            .collect();
        let k = match nesting {
            Nesting::Leftmost => candidates[0],
            Nesting::Rightmost => *candidates.last().expect("candidate split"),
        };
        let merge = |c: &[Option<Vector>]| {
            let mut v: Vec<Option<Vector>> = c[..k].to_vec();
            v.push(None);
            v.extend(c[k + 2..].iter().cloned());
            v
        };
        let inner = self.expand(a, &merge(lc), &merge(rc), nesting)?;
        let h = self.clone();
        let (l, r) = ([lc[k].clone(), lc[k + 1].clone()], [rc[k].clone(), rc[k + 1].clone()]);
        let split = LinMap::new("Δ", 1, 2, move |key| {
            h.delta_covered(
                &Tensor::basis(key[0].clone()),
                [l[0].as_ref(), l[1].as_ref()],
                [r[0].as_ref(), r[1].as_ref()],
            )
        });
        apply_on_legs(&split, &[k], &inner)
    }

    /// Left: `(id⊗φ)T2(a⊗a') = φ(a')a`; right: `(id⊗ψ)T_op2(a⊗a') = ψ(a')a`.
    pub fn check_integral(&self, integral: &Integral, window: &[Label]) -> Check {
        let name = format!("{} integral {}", integral.side, integral.functional.name());
        check(&name, &self.describe(window), |cs| {
            let map = match integral.side {
                Side::Left => self.t2().clone(),
                Side::Right => self.t_op2()?.clone(),
            };
            for a in window {
                for b in window {
                    let t = map.eval_key(&[a.clone(), b.clone()])?;
                    let lhs = apply_on_legs(integral.functional.map(), &[1], &t)?;
                    let rhs = Tensor::basis(a.clone()).scale(&integral.functional.at(b)?);
                    cs.expect_eq(&lhs, &rhs, || format!("(a,a') = ({a},{b})"))?;
                }
            }
            Ok(())
        })
    }

    /// Co-opposite handle `(A, Δ^op)`: canonical maps `T_op1`, `T_op2`,
    /// counit `ε`, antipode `S⁻¹`. On finite bases the build re-extracts
    /// counit and antipode and fails if they differ.
    pub fn co_opposite(&self) -> Result<MhaHandle> {
        let s_inv = self.antipode_inv_map()?.clone();
        MhaHandle::builder(format!("{}_op", self.name()), self.algebra(), self.t_op1()?.clone(), self.t_op2()?.clone())
            .inverses(self.t_op1_inv()?.clone(), self.t_op2_inv()?.clone())
            .counit(self.0.counit.clone())
            .antipode(s_inv, Some(self.0.antipode.clone()))
            .build()
    }

    /// `A^op_op`: opposite product and opposite coproduct,
    /// `T1 ↦ τT2τ`, `T2 ↦ τT1τ`, same counit and antipode.
    pub fn op_op(&self) -> Result<MhaHandle> {
        let flip = |m: &LinMap, name: &str| {
            let m = m.clone();
            LinMap::new(name, 2, 2, move |k| Ok(m.eval_key(&[k[1].clone(), k[0].clone()])?.swap()))
        };
        let mut b = MhaHandle::builder(
            format!("{}^op_op", self.name()),
            &self.algebra().opposite(),
            flip(self.t2(), "τT2τ"),
            flip(self.t1(), "τT1τ"),
        )
        .inverses(flip(self.t2_inv(), "τT2⁻¹τ"), flip(self.t1_inv(), "τT1⁻¹τ"))
        .counit(self.0.counit.clone())
        .antipode(self.0.antipode.clone(), self.0.antipode_inv.clone());
        // under Δ^op a right integral of A becomes a left one and vice versa
        if let Some(f) = &self.0.right_integral {
            b = b.left_integral(f.clone());
        }
        if let Some(f) = &self.0.left_integral {
            b = b.right_integral(f.clone());
        }
        b.build()
    }

    /// Applies `*` on every leg of a tensor over `A`.
    pub fn star_legs(&self, t: &Tensor) -> Result<Tensor> {
        star_legs(&vec![self.algebra(); t.degree()], t)
    }

    /// The full invariant suite.
    pub fn verify(&self, cfg: &SuiteConfig) -> Report {
        let mut r = Report::new(format!("mha suite: {}", self.name()));
        let w = self.window(cfg.window);
        let desc = self.describe(&w);
        let alg = self.algebra();
        r.push(alg.check_associative(&w));
        r.push(alg.check_nondegenerate(&w));
        if alg.has_star() {
            r.push(alg.check_star(&w));
        }
        let mut rng = sample::rng(cfg.seed);
        let pairs = product_keys(&w, 2);
        let (triples, exhaustive) = sample::tuples(&mut rng, &w, 3, cfg.triple_limit, cfg.samples);
        let total = w.len().pow(3);
        let tdesc = format!("{desc}; {} triples", sample::describe_tuples(triples.len(), exhaustive, total));

        r.push(check("T-maps land in A⊗A", &desc, |cs| {
            for k in &pairs {
                for m in [self.t1(), self.t2()] {
                    let img = m.eval_key(k)?;
                    let bad = img.support_labels().into_iter().find(|l| !alg.basis().contains(l));
                    cs.expect(bad.is_none(), || format!("{}({}) leaves the basis", m.name(), fmt_key(k)))?;
                }
            }
            Ok(())
        }));

        r.push(check("mixed coassociativity (T2⊗id)(id⊗T1) = (id⊗T1)(T2⊗id)", &tdesc, |cs| {
            for t in &triples {
                let x = Tensor::basis_key(key(t.iter().cloned()));
                let lhs = apply_on_legs(self.t2(), &[0, 1], &apply_on_legs(self.t1(), &[1, 2], &x)?)?;
                let rhs = apply_on_legs(self.t1(), &[1, 2], &apply_on_legs(self.t2(), &[0, 1], &x)?)?;
                cs.expect_eq(&lhs, &rhs, || format!("triple {}", fmt_key(t)))?;
            }
            Ok(())
        }));

        for (name, f, g) in [
            ("T1 bijective", self.t1(), self.t1_inv()),
            ("T2 bijective", self.t2(), self.t2_inv()),
        ] {
            r.push(check(name, &desc, |cs| {
                for k in &pairs {
                    let x = Tensor::basis_key(k.clone());
                    cs.expect_eq(&f.apply(&g.eval_key(k)?)?, &x, || format!("T∘T⁻¹ at {}", fmt_key(k)))?;
                    cs.expect_eq(&g.apply(&f.eval_key(k)?)?, &x, || format!("T⁻¹∘T at {}", fmt_key(k)))?;
                }
                Ok(())
            }));
        }

        r.push(check("Δ multiplicative: T1(ab⊗c) = Δ(a)T1(b⊗c), T2(a⊗bc) = T2(a⊗b)Δ(c)", &tdesc, |cs| {
            for t in &triples {
                let (a, b, c) = (Tensor::basis(t[0].clone()), &t[1], &t[2]);
                let ab = alg.mul_unchecked(&a, &Tensor::basis(b.clone()))?;
                let lhs = self.t1().apply(&ab.tensor(&Tensor::basis(c.clone())))?;
                let rhs = self.delta_apply(&a, &self.t1().eval_key(&[b.clone(), c.clone()])?, Side::Left)?;
                cs.expect_eq(&lhs, &rhs, || format!("T1 at {}", fmt_key(t)))?;
                let (a, b, c) = (&t[0], &t[1], Tensor::basis(t[2].clone()));
                let lhs = self.t2().apply(&Tensor::basis(a.clone()).tensor(&alg.mul_labels(b, &t[2])?))?;
                let rhs = self.delta_apply(&c, &self.t2().eval_key(&[a.clone(), b.clone()])?, Side::Right)?;
                cs.expect_eq(&lhs, &rhs, || format!("T2 at {}", fmt_key(t)))?;
            }
            Ok(())
        }));

        if alg.has_star() {
            r.push(check("Δ is a *-map: T1(a*⊗b) = (*⊗*)τT_op2(b*⊗a)", &desc, |cs| {
                for k in &pairs {
                    let (a, b) = (Tensor::basis(k[0].clone()), Tensor::basis(k[1].clone()));
                    let lhs = self.t1().apply(&alg.star(&a)?.tensor(&b))?;
                    let inner = self.t_op2()?.apply(&alg.star(&b)?.tensor(&a))?.swap();
                    let rhs = self.star_legs(&inner)?;
                    cs.expect_eq(&lhs, &rhs, || format!("(a,b) = {}", fmt_key(k)))?;
                }
                Ok(())
            }));
        }

        let eps = self.counit_functional().clone();
        r.push(check("counit from m∘T1⁻¹", &desc, |cs| {
            for k in &pairs {
                let v = alg.mul_map().apply(&self.t1_inv().eval_key(k)?)?;
                let rhs = Tensor::basis(k[1].clone()).scale(&eps.at(&k[0])?);
                cs.expect_eq(&v, &rhs, || format!("m∘T1⁻¹ at {}", fmt_key(k)))?;
            }
            Ok(())
        }));
        r.push(check("counit laws (ε⊗id)T1(a⊗b) = ab = (id⊗ε)T2(a⊗b)", &desc, |cs| {
            for k in &pairs {
                let ab = alg.mul_map().eval_key(k)?;
                let l = apply_on_legs(eps.map(), &[0], &self.t1().eval_key(k)?)?;
                cs.expect_eq(&l, &ab, || format!("(ε⊗id)T1 at {}", fmt_key(k)))?;
                let rr = apply_on_legs(eps.map(), &[1], &self.t2().eval_key(k)?)?;
                cs.expect_eq(&rr, &ab, || format!("(id⊗ε)T2 at {}", fmt_key(k)))?;
            }
            Ok(())
        }));
        r.push(check("counit is multiplicative", &desc, |cs| {
            for k in &pairs {
                let lhs = eps.eval(&alg.mul_map().eval_key(k)?)?;
                let rhs = eps.at(&k[0])? * eps.at(&k[1])?;
                cs.expect_eq(&lhs, &rhs, || format!("ε(ab) at {}", fmt_key(k)))?;
            }
            Ok(())
        }));
        let s = self.antipode_map().clone();
        r.push(check("antipode from (ε⊗id)T1⁻¹", &desc, |cs| {
            for k in &pairs {
                let lhs = apply_on_legs(eps.map(), &[0], &self.t1_inv().eval_key(k)?)?;
                let rhs = alg.mul_unchecked(&s.eval_key(&k[..1])?, &Tensor::basis(k[1].clone()))?;
                cs.expect_eq(&lhs, &rhs, || format!("S(a)a' at {}", fmt_key(k)))?;
            }
            Ok(())
        }));
        r.push(check("antipode laws m(S⊗id)T1(a⊗b) = ε(a)b, m(id⊗S)T2(a⊗b) = ε(b)a", &desc, |cs| {
            for k in &pairs {
                let t = apply_on_legs(&s, &[0], &self.t1().eval_key(k)?)?;
                let lhs = alg.mul_map().apply(&t)?;
                let rhs = Tensor::basis(k[1].clone()).scale(&eps.at(&k[0])?);
                cs.expect_eq(&lhs, &rhs, || format!("left law at {}", fmt_key(k)))?;
                let t = apply_on_legs(&s, &[1], &self.t2().eval_key(k)?)?;
                let lhs = alg.mul_map().apply(&t)?;
                let rhs = Tensor::basis(k[0].clone()).scale(&eps.at(&k[1])?);
                cs.expect_eq(&lhs, &rhs, || format!("right law at {}", fmt_key(k)))?;
            }
            Ok(())
        }));

        if self.is_regular() {
            let s_inv = self.antipode_inv_map().expect("regular").clone();
            r.push(check("S⁻¹∘S = id = S∘S⁻¹", &desc, |cs| {
                for l in &w {
                    let x = Tensor::basis(l.clone());
                    cs.expect_eq(&s_inv.apply(&s.eval_key(std::slice::from_ref(l))?)?, &x, || format!("at {l}"))?;
                    cs.expect_eq(&s.apply(&s_inv.eval_key(std::slice::from_ref(l))?)?, &x, || format!("at {l}"))?;
                }
                Ok(())
            }));
            r.push(check("regular: co-opposite handle has ε_op = ε, S_op = S⁻¹", &desc, |cs| {
                let op = self.co_opposite()?;
                for k in &pairs {
                    let v = alg.mul_map().apply(&op.t1_inv().eval_key(k)?)?;
                    let rhs = Tensor::basis(k[1].clone()).scale(&eps.at(&k[0])?);
                    cs.expect_eq(&v, &rhs, || format!("m∘T_op1⁻¹ at {}", fmt_key(k)))?;
                    let lhs = apply_on_legs(eps.map(), &[0], &op.t1_inv().eval_key(k)?)?;
                    let rhs = alg.mul_unchecked(&s_inv.eval_key(&k[..1])?, &Tensor::basis(k[1].clone()))?;
                    cs.expect_eq(&lhs, &rhs, || format!("(ε⊗id)T_op1⁻¹ at {}", fmt_key(k)))?;
                }
                Ok(())
            }));
            r.push(check("(id⊗ε)T_op1(b⊗b') = ε(b')b", &desc, |cs| {
                for k in &pairs {
                    let lhs = apply_on_legs(eps.map(), &[1], &self.t_op1()?.eval_key(k)?)?;
                    let rhs = Tensor::basis(k[0].clone()).scale(&eps.at(&k[1])?);
                    cs.expect_eq(&lhs, &rhs, || format!("at {}", fmt_key(k)))?;
                }
                Ok(())
            }));
            r.push(check("co-opposite mixed coassociativity", &tdesc, |cs| {
                let (o1, o2) = (self.t_op1()?, self.t_op2()?);
                for t in &triples {
                    let x = Tensor::basis_key(key(t.iter().cloned()));
                    let lhs = apply_on_legs(o2, &[0, 1], &apply_on_legs(o1, &[1, 2], &x)?)?;
                    let rhs = apply_on_legs(o1, &[1, 2], &apply_on_legs(o2, &[0, 1], &x)?)?;
                    cs.expect_eq(&lhs, &rhs, || format!("triple {}", fmt_key(t)))?;
                }
                Ok(())
            }));
        } else {
            r.push(Check::skipped("regularity", "antipode not invertible"));
        }

        r.push(self.check_slice_lemma(cfg, &w));

        if let Some(i) = self.left_integral() {
            r.push(self.check_integral(&i, &w));
        }
        if let Some(i) = self.right_integral() {
            r.push(self.check_integral(&i, &w));
        }
        r
    }

    /// `(ω⊗id⊗id)Δ⁽²⁾(a) = Δ((ω⊗id)Δ(a))` and
    /// `(id⊗id⊗ω)Δ⁽²⁾(a) = Δ((id⊗ω)Δ(a))`, both applied to random covers.
    fn check_slice_lemma(&self, cfg: &SuiteConfig, w: &[Label]) -> Check {
        let mut rng = sample::rng(cfg.seed ^ 0x5eed);
        let desc = format!("{}; {} random (ω, a, cover) cases", self.describe(w), cfg.lemma_cases);
        check("slice commutes with Δ (ω⊗id⊗id and id⊗id⊗ω)", &desc, |cs| {
            for case in 0..cfg.lemma_cases {
                let omega = sample::functional(&mut rng, w, 3);
                let a = sample::vector(&mut rng, w, 2);
                let x = sample::vector(&mut rng, w, 2);
                let y = sample::vector(&mut rng, w, 2);
                let side = if case % 2 == 0 { Side::Right } else { Side::Left };
                for first in [true, false] {
                    // surviving legs: (1,2) when ω sits on leg 0, else (0,1)
                    let (legs, omega_leg, slice_side) = if first {
                        ([1, 2], 0, Side::Left)
                    } else {
                        ([0, 1], 2, Side::Right)
                    };
                    let covers = vec![Cover::new(legs[0], side, x.clone()), Cover::new(legs[1], side, y.clone())];
                    let full = self.delta_n_covered(&a, &covers, 2)?;
                    let lhs = apply_on_legs(omega.map(), &[omega_leg], &full)?;
                    let z = self.slice_element(&omega, slice_side, &a)?;
                    let rhs = match side {
                        Side::Right => self.delta_covered(&z, [None, None], [Some(&x), Some(&y)])?,
                        Side::Left => self.delta_covered(&z, [Some(&x), Some(&y)], [None, None])?,
                    };
                    cs.expect_eq(&lhs, &rhs, || {
                        format!("case {case}: a = {a}, cover {side} by {x} ⊗ {y}, ω on leg {omega_leg}")
                    })?;
                }
            }
            Ok(())
        })
    }
}

/// `*` on every leg, leg `i` living in `algs[i]`; coefficients conjugated.
pub fn star_legs(algs: &[&Algebra], t: &Tensor) -> Result<Tensor> {
    let mut out = Tensor::zero(t.degree());
    for (k, c) in t.terms() {
        let mut acc = Tensor::scalar(c.conj());
        for (i, alg) in algs.iter().enumerate() {
            acc = acc.tensor(&alg.star_label(&k[i])?);
        }
        out.add_scaled(&Scalar::one(), &acc);
    }
    Ok(out)
}

/// `1` if `b`, else `0`.
pub fn indicator(b: bool) -> Scalar {
    if b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{function_algebra, group_algebra, Group};
    use proptest::prelude::*;

    fn v(i: i64) -> Vector {
        Tensor::basis(Label::Int(i))
    }

    fn t(i: i64, j: i64) -> Tensor {
        Tensor::basis_key(key([Label::Int(i), Label::Int(j)]))
    }

    fn cz2() -> MhaHandle {
        function_algebra(&Group::cyclic(2)).unwrap()
    }

    fn kz2() -> MhaHandle {
        group_algebra(&Group::cyclic(2)).unwrap()
    }

    #[test]
    fn canonical_maps_on_z2() {
        assert_eq!(cz2().canonical_map(CanonicalMap::T1, &t(0, 1)).unwrap(), t(1, 1));
        assert_eq!(kz2().canonical_map(CanonicalMap::T1, &t(1, 0)).unwrap(), t(1, 1));
        let h = function_algebra(&Group::symmetric3()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let x = h.canonical_map(CanonicalMap::T1, &t(a, b)).unwrap();
                assert_eq!(h.canonical_map(CanonicalMap::T1Inv, &x).unwrap(), t(a, b));
            }
        }
    }

    #[test]
    fn delta_apply_collapses() {
        let h = cz2();
        assert_eq!(h.delta_apply(&v(0), &t(1, 1), Side::Left).unwrap(), t(1, 1));
        // Δ(a)(1⊗y) = T1(a⊗y)
        let one = h.algebra().unit().unwrap().clone();
        for a in 0..2 {
            for y in 0..2 {
                let lhs = h.delta_apply(&v(a), &one.tensor(&v(y)), Side::Left).unwrap();
                assert_eq!(lhs, h.canonical_map(CanonicalMap::T1, &t(a, y)).unwrap());
            }
        }
    }

    #[test]
    fn delta_apply_sides_match_oracle() {
        let g = Group::symmetric3();
        let h = function_algebra(&g).unwrap();
        for a in 0..6usize {
            for (x, y) in [(0usize, 3usize), (2, 5), (4, 4)] {
                // Δ(δ_a) = Σ_{uv=a} δ_u⊗δ_v, so both sides pick the single term u=x, v=y
                let want = if g.mul(x, y) == a { t(x as i64, y as i64) } else { Tensor::zero(2) };
                let cover = t(x as i64, y as i64);
                assert_eq!(h.delta_apply(&v(a as i64), &cover, Side::Left).unwrap(), want);
                assert_eq!(h.delta_apply(&v(a as i64), &cover, Side::Right).unwrap(), want);
            }
        }
    }

    #[test]
    fn counits() {
        let h = cz2();
        assert_eq!(h.counit(&v(0)).unwrap(), Scalar::one());
        assert_eq!(h.counit(&v(1)).unwrap(), Scalar::zero());
        assert_eq!(h.counit(&Tensor::zero(1)).unwrap(), Scalar::zero());
        let k = group_algebra(&Group::symmetric3()).unwrap();
        for g in 0..6 {
            assert_eq!(k.counit(&v(g)).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn antipodes() {
        assert_eq!(cz2().antipode(&v(1), 1).unwrap(), v(1));
        let g = Group::symmetric3();
        let k = group_algebra(&g).unwrap();
        for x in 0..6 {
            assert_eq!(k.antipode(&v(x as i64), 1).unwrap(), v(g.inv(x) as i64));
        }
    }

    #[test]
    fn slices() {
        let h = cz2();
        let w = h.window(0);
        let eps = h.counit_functional().clone();
        for a in 0..2 {
            let m = h.slice(&eps, Side::Right, &v(a));
            assert!(m.equals_on(&Multiplier::embed(h.algebra(), &v(a)), &w).unwrap());
        }
        let at_s = Functional::from_coeffs("δ_s*", [(Label::Int(1), Scalar::one())].into_iter().collect());
        let m = h.slice(&at_s, Side::Right, &v(0));
        assert!(m.equals_on(&Multiplier::embed(h.algebra(), &v(1)), &w).unwrap());
        let z = h.slice(&at_s, Side::Right, &Tensor::zero(1));
        assert!(z.equals_on(&Multiplier::zero(h.algebra()), &w).unwrap());
    }

    #[test]
    fn covered_iterates() {
        let h = cz2();
        // n=1 with the second leg covered on the right is T1
        let c = [Cover::new(1, Side::Right, v(1))];
        assert_eq!(h.delta_n_covered(&v(0), &c, 1).unwrap(), t(1, 1));
        // Δ²(δ_e) = Σ_{uvw=e} δ_u⊗δ_v⊗δ_w; covering legs 0, 2 by δ_s leaves v = e
        let c = [Cover::new(0, Side::Right, v(1)), Cover::new(2, Side::Right, v(1))];
        let want = Tensor::basis_key(key([Label::Int(1), Label::Int(0), Label::Int(1)]));
        assert_eq!(h.delta_n_covered(&v(0), &c, 2).unwrap(), want);
    }

    #[test]
    fn integrals() {
        let w = cz2().window(0);
        let left = Integral { side: Side::Left, functional: Functional::new("φ", |_| Scalar::one()) };
        assert!(cz2().check_integral(&left, &w).passed());
        let k = kz2();
        let psi = Integral { side: Side::Right, functional: Functional::new("ψ", |l| indicator(l == &Label::Int(0))) };
        assert!(k.check_integral(&psi, &w).passed());
        let flat = Integral { side: Side::Right, functional: Functional::new("1", |_| Scalar::one()) };
        let c = k.check_integral(&flat, &w);
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn co_opposite_of_regular() {
        let h = function_algebra(&Group::symmetric3()).unwrap();
        let op = h.co_opposite().unwrap();
        for x in h.window(0) {
            let x = Tensor::basis(x);
            assert_eq!(op.counit(&x).unwrap(), h.counit(&x).unwrap());
            assert_eq!(op.antipode(&x, 1).unwrap(), h.antipode(&x, -1).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn nestings_agree(seed in any::<u64>(), n in 1usize..=3) {
            let h = function_algebra(&Group::symmetric3()).unwrap();
            let w = h.window(0);
            let mut rng = sample::rng(seed);
            let a = sample::vector(&mut rng, &w, 3);
            let covers: Vec<Cover> = (0..=n)
                .map(|leg| Cover::new(leg, if leg % 2 == 0 { Side::Left } else { Side::Right }, sample::vector(&mut rng, &w, 2)))
                .collect();
            let l = h.delta_n_covered_with(&a, &covers, n, Nesting::Leftmost).unwrap();
            let r = h.delta_n_covered_with(&a, &covers, n, Nesting::Rightmost).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn antipode_inverse_round_trip(seed in any::<u64>()) {
            let h = function_algebra(&Group::symmetric3()).unwrap();
            let mut rng = sample::rng(seed);
            let a = sample::vector(&mut rng, &h.window(0), 4);
            let s = h.antipode(&a, 1).unwrap();
            prop_assert_eq!(h.antipode(&s, -1).unwrap(), a);
        }
    }
}
