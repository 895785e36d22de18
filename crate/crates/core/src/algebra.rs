//! Non-unital algebras with non-degenerate product, star structures, and
//! multipliers as compatible pairs of maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert};
use crate::report::{check, Check};
use crate::scalar::Scalar;
use crate::tensor::{apply_on_legs, key, product_keys, Key, Label, LinMap, Tensor, Vector};

type Contains = dyn Fn(&Label) -> bool + Send + Sync;
type Enumerate = dyn Fn(usize) -> Vec<Label> + Send + Sync;

/// A basis: an explicit finite label list, or a lazily presented countable
/// one given by a membership predicate and a window enumerator.
#[derive(Clone)]
pub enum Basis {
    Finite(Arc<[Label]>),
    Lazy {
        name: String,
        contains: Arc<Contains>,
        window: Arc<Enumerate>,
    },
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Finite(l) => write!(f, "Finite({} labels)", l.len()),
            Basis::Lazy { name, .. } => write!(f, "Lazy({name})"),
        }
    }
}

impl Basis {
    pub fn finite<I: IntoIterator<Item = Label>>(labels: I) -> Basis {
        Basis::Finite(labels.into_iter().collect::<Vec<_>>().into())
    }

    pub fn lazy<C, W>(name: impl Into<String>, contains: C, window: W) -> Basis
    where
        C: Fn(&Label) -> bool + Send + Sync + 'static,
        W: Fn(usize) -> Vec<Label> + Send + Sync + 'static,
    {
        Basis::Lazy {
            name: name.into(),
            contains: Arc::new(contains),
            window: Arc::new(window),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Basis::Finite(_))
    }

    pub fn labels(&self) -> Option<&[Label]> {
        match self {
            Basis::Finite(l) => Some(l),
            Basis::Lazy { .. } => None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.labels().map(<[Label]>::len)
    }

    pub fn contains(&self, l: &Label) -> bool {
        match self {
            Basis::Finite(ls) => ls.contains(l),
            Basis::Lazy { contains, .. } => contains(l),
        }
    }

    /// The whole basis when finite, else the radius-`n` window.
    pub fn window(&self, n: usize) -> Vec<Label> {
        match self {
            Basis::Finite(l) => l.to_vec(),
            Basis::Lazy { window, .. } => window(n),
        }
    }

    /// Basis of a tensor product, on pair labels.
    pub fn product(&self, other: &Basis) -> Basis {
        match (self, other) {
            (Basis::Finite(a), Basis::Finite(b)) => Basis::finite(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| Label::pair(x.clone(), y.clone()))),
            ),
            _ => {
                let (p, q) = (self.clone(), other.clone());
                let (r, s) = (self.clone(), other.clone());
                Basis::lazy(
                    "product",
                    move |l| match l.as_tuple() {
                        Some([a, b]) => p.contains(a) && q.contains(b),
                        _ => false,
                    },
                    move |n| {
                        let (wa, wb) = (r.window(n), s.window(n));
                        wa.iter()
                            .flat_map(|x| wb.iter().map(move |y| Label::pair(x.clone(), y.clone())))
                            .collect()
                    },
                )
            }
        }
    }
}

/// Human-readable window description for reports.
pub fn describe_window(labels: &[Label], finite: bool) -> String {
    if finite {
        return format!("full basis ({} labels)", labels.len());
    }
    let ints: Option<Vec<i64>> = labels.iter().map(Label::as_int).collect();
    match ints {
        Some(v) if !v.is_empty() => format!(
            "[{}, {}] ({} labels)",
            v.iter().min().unwrap(),
            v.iter().max().unwrap(),
            v.len()
        ),
        _ => format!("{} labels", labels.len()),
    }
}

type StarFn = dyn Fn(&Label) -> Vector + Send + Sync;
type LocalUnitFn = dyn Fn(&BTreeSet<Label>) -> Vector + Send + Sync;

struct AlgebraInner {
    name: String,
    basis: Basis,
    mul: LinMap,
    unit: Option<Vector>,
    star: Option<Arc<StarFn>>,
    local_unit: Option<Arc<LocalUnitFn>>,
}

/// An associative algebra presented on a basis, with optional unit, star
/// and local units (an element acting as identity on a given finite set,
/// which every algebra with local units has).
#[derive(Clone)]
pub struct Algebra(Arc<AlgebraInner>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, {:?})", self.0.name, self.0.basis)
    }
}

impl Algebra {
    /// `mul` sends a pair of labels to the product vector.
    pub fn new<F>(name: impl Into<String>, basis: Basis, mul: F) -> Algebra
    where
        F: Fn(&Label, &Label) -> Vector + Send + Sync + 'static,
    {
        let name = name.into();
        let m = LinMap::new(format!("m_{name}"), 2, 1, move |k| Ok(mul(&k[0], &k[1])));
        Algebra::from_map(name, basis, m)
    }

    pub fn from_map(name: impl Into<String>, basis: Basis, mul: LinMap) -> Algebra {
        Algebra(Arc::new(AlgebraInner {
            name: name.into(),
            basis,
            mul,
            unit: None,
            star: None,
            local_unit: None,
        }))
    }

    fn edit(self, f: impl FnOnce(&mut AlgebraInner)) -> Algebra {
        let mut inner = match Arc::try_unwrap(self.0) {
            Ok(inner) => inner,
            Err(shared) => AlgebraInner {
                name: shared.name.clone(),
                basis: shared.basis.clone(),
                mul: shared.mul.clone(),
                unit: shared.unit.clone(),
                star: shared.star.clone(),
                local_unit: shared.local_unit.clone(),
            },
        };
        f(&mut inner);
        Algebra(Arc::new(inner))
    }

    pub fn with_unit(self, unit: Vector) -> Algebra {
        self.edit(|a| a.unit = Some(unit))
    }

    /// Star on basis labels, extended conjugate-linearly.
    pub fn with_star<F>(self, star: F) -> Algebra
    where
        F: Fn(&Label) -> Vector + Send + Sync + 'static,
    {
        self.edit(|a| a.star = Some(Arc::new(star)))
    }

    pub fn with_local_unit<F>(self, f: F) -> Algebra
    where
        F: Fn(&BTreeSet<Label>) -> Vector + Send + Sync + 'static,
    {
        self.edit(|a| a.local_unit = Some(Arc::new(f)))
    }

    pub fn without_star(self) -> Algebra {
        self.edit(|a| a.star = None)
    }

    pub fn renamed(self, name: impl Into<String>) -> Algebra {
        let name = name.into();
        self.edit(|a| a.name = name)
    }

    /// Finds the unit of a finite algebra by exact linear solve, if it has one.
    pub fn with_solved_unit(self) -> Algebra {
        if self.0.unit.is_some() {
            return self;
        }
        match self.solve_unit() {
            Some(u) => self.with_unit(u),
            None => self,
        }
    }

    fn solve_unit(&self) -> Option<Vector> {
        let labels = self.basis().labels()?.to_vec();
        self.unit_on(&labels)
    }

    /// The vector supported on `labels` acting as a two-sided identity on
    /// each of them, when one exists.
    pub fn unit_on(&self, labels: &[Label]) -> Option<Vector> {
        // unknown u = Σ x_l l ; equations u·b = b and b·u = b for all b
        let mut columns = Vec::with_capacity(labels.len());
        for l in labels {
            let mut col = Tensor::zero(3);
            for b in labels {
                let lb = self.mul_labels(l, b).ok()?;
                let bl = self.mul_labels(b, l).ok()?;
                for (k, c) in lb.terms() {
                    col.add_term(key([Label::Int(0), b.clone(), k[0].clone()]), c.clone());
                }
                for (k, c) in bl.terms() {
                    col.add_term(key([Label::Int(1), b.clone(), k[0].clone()]), c.clone());
                }
            }
            columns.push(col);
        }
        let mut target = Tensor::zero(3);
        for b in labels {
            target.add_term(key([Label::Int(0), b.clone(), b.clone()]), Scalar::one());
            target.add_term(key([Label::Int(1), b.clone(), b.clone()]), Scalar::one());
        }
        let sol = crate::linalg::solve(&columns, &target)?;
        Some(Tensor::from_terms(
            1,
            sol.into_iter().map(|(j, c)| (key([labels[j].clone()]), c)),
        ))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn basis(&self) -> &Basis {
        &self.0.basis
    }

    pub fn is_finite(&self) -> bool {
        self.0.basis.is_finite()
    }

    pub fn mul_map(&self) -> &LinMap {
        &self.0.mul
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.0.unit.as_ref()
    }

    pub fn has_star(&self) -> bool {
        self.0.star.is_some()
    }

    pub fn window(&self, n: usize) -> Vec<Label> {
        self.0.basis.window(n)
    }

    fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.degree() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: v.degree(),
            });
        }
        for (k, _) in v.terms() {
            if !self.0.basis.contains(&k[0]) {
                return Err(Error::BasisMismatch(format!(
                    "label {} is not in the basis of {}",
                    k[0], self.0.name
                )));
            }
        }
        Ok(())
    }

    pub fn mul_labels(&self, a: &Label, b: &Label) -> Result<Vector> {
        self.0.mul.eval_key(&[a.clone(), b.clone()])
    }

    /// Bilinear product; checks that both inputs live on this basis.
    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        self.mul_unchecked(x, y)
    }

    pub fn mul_unchecked(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let mut out = Tensor::zero(1);
        for (kx, cx) in x.terms() {
            for (ky, cy) in y.terms() {
                out.add_scaled(&(cx * cy), &self.mul_labels(&kx[0], &ky[0])?);
            }
        }
        Ok(out)
    }

    pub fn star_label(&self, l: &Label) -> Result<Vector> {
        match &self.0.star {
            Some(s) => Ok(s(l)),
            None => Err(Error::NoStar(self.0.name.clone())),
        }
    }

    /// Conjugate-linear involution.
    pub fn star(&self, x: &Vector) -> Result<Vector> {
        let mut out = Tensor::zero(1);
        for (k, c) in x.terms() {
            out.add_scaled(&c.conj(), &self.star_label(&k[0])?);
        }
        Ok(out)
    }

    /// An element `e` with `e·x = x = x·e` for every `x` supported on
    /// `support`: the unit when there is one.
    pub fn local_unit(&self, support: &BTreeSet<Label>) -> Option<Vector> {
        if let Some(u) = &self.0.unit {
            return Some(u.clone());
        }
        self.0.local_unit.as_ref().map(|f| f(support))
    }

    /// Product map lifted to act leg-wise on two tensors of equal degree
    /// over the same algebra on every leg.
    pub fn mul_legwise(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let algs: Vec<&Algebra> = std::iter::repeat_n(self, x.degree()).collect();
        legwise_product(&algs, x, y)
    }

    /// Opposite algebra: same basis and star, product `a·b := ba`.
    pub fn opposite(&self) -> Algebra {
        let m = self.0.mul.clone();
        let mul = LinMap::new(format!("{}^op", m.name()), 2, 1, move |k| {
            m.eval_key(&[k[1].clone(), k[0].clone()])
        });
        let mut a = Algebra::from_map(format!("{}^op", self.0.name), self.0.basis.clone(), mul.cached());
        if let Some(u) = &self.0.unit {
            a = a.with_unit(u.clone());
        }
        let inner = self.0.clone();
        if inner.star.is_some() {
            let s = inner.star.clone().unwrap();
            a = a.with_star(move |l| s(l));
        }
        if let Some(lu) = inner.local_unit.clone() {
            a = a.with_local_unit(move |s| lu(s));
        }
        a
    }

    /// Tensor product algebra on pair labels.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let (a, b) = (self.clone(), other.clone());
        let name = format!("{}⊗{}", self.name(), other.name());
        let mul = LinMap::new(format!("m_{name}"), 2, 1, move |k| {
            let (x1, y1) = k[0].split_pair();
            let (x2, y2) = k[1].split_pair();
            let p = a.mul_labels(x1, x2)?;
            let q = b.mul_labels(y1, y2)?;
            Ok(p.tensor(&q).group_legs(&[2]))
        });
        let mut alg = Algebra::from_map(name, self.basis().product(other.basis()), mul);
        if let (Some(u), Some(v)) = (self.unit(), other.unit()) {
            alg = alg.with_unit(u.tensor(v).group_legs(&[2]));
        }
        if self.has_star() && other.has_star() {
            let (a, b) = (self.clone(), other.clone());
            alg = alg.with_star(move |l| {
                let (x, y) = l.split_pair();
                let sx = a.star_label(x).expect("star");
                let sy = b.star_label(y).expect("star");
                sx.tensor(&sy).group_legs(&[2])
            });
        }
        if self.0.local_unit.is_some() || other.0.local_unit.is_some() {
            let (a, b) = (self.clone(), other.clone());
            alg = alg.with_local_unit(move |s| {
                let left: BTreeSet<Label> = s.iter().map(|l| l.split_pair().0.clone()).collect();
                let right: BTreeSet<Label> = s.iter().map(|l| l.split_pair().1.clone()).collect();
                let ea = a.local_unit(&left).expect("local unit");
                let eb = b.local_unit(&right).expect("local unit");
                ea.tensor(&eb).group_legs(&[2])
            });
        }
        alg
    }

    /// The one-dimensional algebra `k` on the label `0`.
    pub fn ground_field() -> Algebra {
        let one = Tensor::basis(Label::Int(0));
        let o = one.clone();
        Algebra::new("k", Basis::finite([Label::Int(0)]), move |_, _| o.clone())
            .with_unit(one)
            .with_star(|l| Tensor::basis(l.clone()))
    }

    pub fn check_associative(&self, window: &[Label]) -> Check {
        let desc = describe_window(window, self.is_finite());
        check("associativity", &desc, |cs| {
            for a in window {
                for b in window {
                    let ab = self.mul_labels(a, b)?;
                    for c in window {
                        let lhs = self.mul_unchecked(&ab, &Tensor::basis(c.clone()))?;
                        let bc = self.mul_labels(b, c)?;
                        let rhs = self.mul_unchecked(&Tensor::basis(a.clone()), &bc)?;
                        cs.expect_eq(&lhs, &rhs, || format!("(a,b,c) = ({a},{b},{c})"))?;
                    }
                }
            }
            Ok(())
        })
    }

    /// Fails iff some nonzero vector supported on `window` is annihilated by
    /// all window multiplications on one side.
    pub fn check_nondegenerate(&self, window: &[Label]) -> Check {
        let desc = describe_window(window, self.is_finite());
        check("non-degeneracy", &desc, |cs| {
            for (side, left) in [("left", true), ("right", false)] {
                let mut e = Echelon::new();
                for l in window {
                    let mut col = Tensor::zero(2);
                    for b in window {
                        let p = if left { self.mul_labels(l, b)? } else { self.mul_labels(b, l)? };
                        for (k, c) in p.terms() {
                            col.add_term(key([b.clone(), k[0].clone()]), c.clone());
                        }
                    }
                    let ins = e.insert(&col);
                    cs.expect(ins == Insert::Independent, || {
                        let Insert::Dependent(dep) = &ins else { unreachable!() };
                        let w = Tensor::from_terms(
                            1,
                            dep.iter().map(|(j, c)| (key([window[*j].clone()]), c.clone())),
                        );
                        format!("{w} is annihilated by every {side} multiplication on the window")
                    })?;
                }
            }
            Ok(())
        })
    }

    pub fn check_star(&self, window: &[Label]) -> Check {
        let desc = describe_window(window, self.is_finite());
        if !self.has_star() {
            return Check::skipped("star involution", format!("{} has no star", self.name()));
        }
        check("star involution", &desc, |cs| {
            for a in window {
                let va = Tensor::basis(a.clone());
                let back = self.star(&self.star(&va)?)?;
                cs.expect_eq(&back, &va, || format!("(a*)* at a = {a}"))?;
                let ia = va.scale(&Scalar::i());
                let lhs = self.star(&ia)?;
                let rhs = self.star(&va)?.scale(&-Scalar::i());
                cs.expect_eq(&lhs, &rhs, || format!("conjugate linearity at {a}"))?;
                for b in window {
                    let lhs = self.star(&self.mul_labels(a, b)?)?;
                    let rhs = self.mul_unchecked(&self.star_label(b)?, &self.star_label(a)?)?;
                    cs.expect_eq(&lhs, &rhs, || format!("(ab)* = b*a* at (a,b) = ({a},{b})"))?;
                }
            }
            Ok(())
        })
    }

    /// Support of the inputs closed once under multiplication.
    pub fn support_window(&self, inputs: &[&Vector]) -> Result<Vec<Label>> {
        let mut s: BTreeSet<Label> = inputs.iter().flat_map(|v| v.support_on_leg(0)).collect();
        let base: Vec<Label> = s.iter().cloned().collect();
        for a in &base {
            for b in &base {
                s.extend(self.mul_labels(a, b)?.support_on_leg(0));
            }
        }
        Ok(s.into_iter().collect())
    }
}

/// Leg-wise product of two tensors whose leg `i` lives in `algs[i]`.
pub fn legwise_product(algs: &[&Algebra], x: &Tensor, y: &Tensor) -> Result<Tensor> {
    if x.degree() != algs.len() || y.degree() != algs.len() {
        return Err(Error::ArityMismatch {
            expected: algs.len(),
            got: x.degree().max(y.degree()),
        });
    }
    let mut out = Tensor::zero(algs.len());
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            let mut acc = Tensor::scalar(cx * cy);
            for (i, alg) in algs.iter().enumerate() {
                let p = alg.mul_labels(&kx[i], &ky[i])?;
                if p.is_zero() {
                    acc = Tensor::zero(0);
                    break;
                }
                acc = acc.tensor(&p);
            }
            out.add_scaled(&Scalar::one(), &acc);
        }
    }
    Ok(out)
}

/// Multiplies leg `leg` of `t` by `v`, on the left (`v·t_leg`) or on the
/// right (`t_leg·v`).
pub fn mul_on_leg(alg: &Algebra, t: &Tensor, leg: usize, v: &Vector, left: bool) -> Result<Tensor> {
    let (a, v) = (alg.clone(), v.clone());
    let f = LinMap::new("cover", 1, 1, move |k| {
        let x = Tensor::basis(k[0].clone());
        if left {
            a.mul_unchecked(&v, &x)
        } else {
            a.mul_unchecked(&x, &v)
        }
    });
    apply_on_legs(&f, &[leg], t)
}

/// A multiplier `ρ = (ρ1, ρ2)`: `ρ·a = ρ1(a)`, `a·ρ = ρ2(a)`, with
/// `ρ2(a)b = aρ1(b)`.
#[derive(Clone, Debug)]
pub struct Multiplier {
    alg: Algebra,
    rho1: LinMap,
    rho2: LinMap,
}

impl Multiplier {
    /// Wraps a pair without checking compatibility.
    pub fn unchecked(alg: &Algebra, rho1: LinMap, rho2: LinMap) -> Multiplier {
        Multiplier {
            alg: alg.clone(),
            rho1,
            rho2,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn rho1(&self) -> &LinMap {
        &self.rho1
    }

    pub fn rho2(&self) -> &LinMap {
        &self.rho2
    }

    pub fn unit(alg: &Algebra) -> Multiplier {
        Multiplier::unchecked(alg, LinMap::identity(1), LinMap::identity(1))
    }

    pub fn zero(alg: &Algebra) -> Multiplier {
        let z = LinMap::new("0", 1, 1, |_| Ok(Tensor::zero(1)));
        Multiplier::unchecked(alg, z.clone(), z)
    }

    /// `a ↦ (a·, ·a)`.
    pub fn embed(alg: &Algebra, a: &Vector) -> Multiplier {
        let (al, ar) = (alg.clone(), alg.clone());
        let (x, y) = (a.clone(), a.clone());
        Multiplier::unchecked(
            alg,
            LinMap::new("a·", 1, 1, move |k| al.mul_unchecked(&x, &Tensor::basis(k[0].clone()))),
            LinMap::new("·a", 1, 1, move |k| ar.mul_unchecked(&Tensor::basis(k[0].clone()), &y)),
        )
    }

    pub fn apply_left(&self, a: &Vector) -> Result<Vector> {
        self.rho1.apply(a)
    }

    pub fn apply_right(&self, a: &Vector) -> Result<Vector> {
        self.rho2.apply(a)
    }

    /// `(ρσ)_1 = ρ1∘σ1`, `(ρσ)_2 = σ2∘ρ2`.
    pub fn mul(&self, other: &Multiplier) -> Result<Multiplier> {
        Ok(Multiplier::unchecked(
            &self.alg,
            self.rho1.compose(&other.rho1)?,
            other.rho2.compose(&self.rho2)?,
        ))
    }

    /// `ρ* = (ρ2*, ρ1*)` with `ψ*(a) = ψ(a*)*`.
    pub fn star(&self) -> Result<Multiplier> {
        if !self.alg.has_star() {
            return Err(Error::NoStar(self.alg.name().to_string()));
        }
        let conj = |f: LinMap, alg: Algebra| {
            LinMap::new(format!("{}*", f.name()), 1, 1, move |k| {
                let s = alg.star_label(&k[0])?;
                alg.star(&f.apply(&s)?)
            })
        };
        Ok(Multiplier::unchecked(
            &self.alg,
            conj(self.rho2.clone(), self.alg.clone()),
            conj(self.rho1.clone(), self.alg.clone()),
        ))
    }

    pub fn scale(&self, c: &Scalar) -> Multiplier {
        let (f, g) = (self.rho1.clone(), self.rho2.clone());
        let (c1, c2) = (c.clone(), c.clone());
        Multiplier::unchecked(
            &self.alg,
            LinMap::new("c·ρ1", 1, 1, move |k| Ok(f.eval_key(k)?.scale(&c1))),
            LinMap::new("c·ρ2", 1, 1, move |k| Ok(g.eval_key(k)?.scale(&c2))),
        )
    }

    /// First basis pair `(a, b)` of the window violating `ρ2(a)b = aρ1(b)`.
    pub fn compatibility_witness(&self, window: &[Label]) -> Result<Option<(Label, Label)>> {
        for a in window {
            let ra = self.rho2.eval_key(std::slice::from_ref(a))?;
            for b in window {
                let lhs = self.alg.mul_unchecked(&ra, &Tensor::basis(b.clone()))?;
                let rb = self.rho1.eval_key(std::slice::from_ref(b))?;
                let rhs = self.alg.mul_unchecked(&Tensor::basis(a.clone()), &rb)?;
                if lhs != rhs {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }

    /// Window-restricted equality of both components.
    pub fn equals_on(&self, other: &Multiplier, window: &[Label]) -> Result<bool> {
        let keys: Vec<Key> = window.iter().map(|l| key([l.clone()])).collect();
        Ok(self.rho1.agrees_on(&other.rho1, &keys)? && self.rho2.agrees_on(&other.rho2, &keys)?)
    }
}

/// Verifies compatibility on the window (the full basis when finite) and
/// returns the multiplier.
pub fn multiplier_from_pair(alg: &Algebra, rho1: LinMap, rho2: LinMap, window: &[Label]) -> Result<Multiplier> {
    let m = Multiplier::unchecked(alg, rho1, rho2);
    match m.compatibility_witness(window)? {
        None => Ok(m),
        Some((a, b)) => Err(Error::CompatibilityViolation {
            witness: format!("(a,b) = ({a},{b})"),
        }),
    }
}

type Image = Arc<dyn Fn(&Label) -> Result<Multiplier> + Send + Sync>;

/// An algebra map `φ: A → M(B)`, given by the multiplier image of each
/// basis label.
#[derive(Clone)]
pub struct Morphism {
    pub source: Algebra,
    pub target: Algebra,
    image: Image,
}

impl Morphism {
    pub fn new<F>(source: &Algebra, target: &Algebra, image: F) -> Morphism
    where
        F: Fn(&Label) -> Result<Multiplier> + Send + Sync + 'static,
    {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            image: Arc::new(image),
        }
    }

    /// `φ(v)·b`.
    pub fn left_act(&self, v: &Vector, b: &Vector) -> Result<Vector> {
        let mut out = Tensor::zero(1);
        for (k, c) in v.terms() {
            out.add_scaled(c, &(self.image)(&k[0])?.apply_left(b)?);
        }
        Ok(out)
    }

    /// `b·φ(v)`.
    pub fn right_act(&self, b: &Vector, v: &Vector) -> Result<Vector> {
        let mut out = Tensor::zero(1);
        for (k, c) in v.terms() {
            out.add_scaled(c, &(self.image)(&k[0])?.apply_right(b)?);
        }
        Ok(out)
    }
}

/// The unique extension of a non-degenerate `φ: A → M(B)` to `M(A)`,
/// evaluated at `m`: `φ(m)·(φ(a)b) = φ(m·a)b` and `(bφ(a))·φ(m) = bφ(a·m)`.
///
/// `B` is decomposed over products `φ(a)b` with `a`, `b` from the given
/// windows; failure to span the `B` window is `NotNondegenerate`.
pub fn extend_morphism(phi: &Morphism, m: &Multiplier, window_a: &[Label], window_b: &[Label]) -> Result<Multiplier> {
    let mut pairs: Vec<(Label, Label)> = Vec::new();
    let mut left = Echelon::new();
    let mut right = Echelon::new();
    for a in window_a {
        let va = Tensor::basis(a.clone());
        for b in window_b {
            let vb = Tensor::basis(b.clone());
            let l = phi.left_act(&va, &vb)?;
            let r = phi.right_act(&vb, &va)?;
            left.insert(&l);
            right.insert(&r);
            pairs.push((a.clone(), b.clone()));
        }
    }
    for b in window_b {
        let vb = Tensor::basis(b.clone());
        if !left.contains(&vb) || !right.contains(&vb) {
            return Err(Error::NotNondegenerate(format!(
                "{b} is not in the span of φ(A)B and Bφ(A) on the window"
            )));
        }
    }
    let pairs = Arc::new(pairs);
    let (left, right) = (Arc::new(left), Arc::new(right));
    let (phi1, phi2) = (phi.clone(), phi.clone());
    let (m1, m2) = (m.clone(), m.clone());
    let (p1, p2) = (pairs.clone(), pairs);
    let rho1 = LinMap::memoized("φ(m)·", 1, 1, move |k| {
        let sol = left
            .solve(&Tensor::basis(k[0].clone()))
            .ok_or_else(|| Error::NotNondegenerate(format!("{} outside the decomposed window", k[0])))?;
        let mut out = Tensor::zero(1);
        for (j, c) in sol {
            let (a, b) = &p1[j];
            let ma = m1.apply_left(&Tensor::basis(a.clone()))?;
            out.add_scaled(&c, &phi1.left_act(&ma, &Tensor::basis(b.clone()))?);
        }
        Ok(out)
    });
    let rho2 = LinMap::memoized("·φ(m)", 1, 1, move |k| {
        let sol = right
            .solve(&Tensor::basis(k[0].clone()))
            .ok_or_else(|| Error::NotNondegenerate(format!("{} outside the decomposed window", k[0])))?;
        let mut out = Tensor::zero(1);
        for (j, c) in sol {
            let (a, b) = &p2[j];
            let am = m2.apply_right(&Tensor::basis(a.clone()))?;
            out.add_scaled(&c, &phi2.right_act(&Tensor::basis(b.clone()), &am)?);
        }
        Ok(out)
    });
    Ok(Multiplier::unchecked(&phi.target, rho1, rho2))
}

/// All keys of `labels^degree`, exposed for suites that sweep basis tuples.
pub fn basis_tuples(labels: &[Label], degree: usize) -> Vec<Key> {
    product_keys(labels, degree)
}

/// Evaluates the named structure map of a finite algebra into a sorted
/// constant table `[(a, b, out, coeff)]`.
pub fn structure_constants(alg: &Algebra) -> Result<Vec<(Key, Scalar)>> {
    let labels = alg
        .basis()
        .labels()
        .ok_or_else(|| Error::Unavailable("structure constants of a lazy algebra".into()))?;
    let mut out = BTreeMap::new();
    for k in product_keys(labels, 2) {
        for (o, c) in alg.mul_map().eval_key(&k)?.terms() {
            let mut full = k.clone();
            full.extend(o.iter().cloned());
            out.insert(full, c.clone());
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn l(n: i64) -> Label {
        Label::Int(n)
    }

    fn d(n: i64) -> Vector {
        Tensor::basis(l(n))
    }

    /// C(ℤ₂): pointwise functions, basis δ_0, δ_1.
    fn c_z2() -> Algebra {
        Algebra::new("C(Z2)", Basis::finite([l(0), l(1)]), |a, b| {
            if a == b { Tensor::basis(a.clone()) } else { Tensor::zero(1) }
        })
        .with_star(|a| Tensor::basis(a.clone()))
        .with_solved_unit()
    }

    /// kℤ₂: group algebra, basis e = 0, s = 1.
    fn k_z2() -> Algebra {
        Algebra::new("kZ2", Basis::finite([l(0), l(1)]), |a, b| {
            Tensor::basis(Label::Int((a.as_int().unwrap() + b.as_int().unwrap()) % 2))
        })
        .with_star(|a| Tensor::basis(a.clone()))
        .with_solved_unit()
    }

    fn c_int() -> Algebra {
        Algebra::new(
            "Cc(Z)",
            Basis::lazy("Z", |l| l.as_int().is_some(), |n| (-(n as i64)..=n as i64).map(Label::Int).collect()),
            |a, b| if a == b { Tensor::basis(a.clone()) } else { Tensor::zero(1) },
        )
        .with_local_unit(|s| Tensor::from_terms(1, s.iter().map(|x| (key([x.clone()]), Scalar::one()))))
    }

    #[test]
    fn multiply_examples() {
        let c = c_z2();
        assert_eq!(c.multiply(&d(0), &d(0)).unwrap(), d(0));
        assert!(c.multiply(&d(0), &d(1)).unwrap().is_zero());
        assert_eq!(k_z2().multiply(&d(1), &d(1)).unwrap(), d(0));
        assert!(matches!(c.multiply(&d(0), &d(7)), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn solved_units() {
        assert_eq!(c_z2().unit().unwrap(), &(&d(0) + &d(1)));
        assert_eq!(k_z2().unit().unwrap(), &d(0));
        let null = Algebra::new("null", Basis::finite([l(0)]), |_, _| Tensor::zero(1)).with_solved_unit();
        assert!(null.unit().is_none());
    }

    #[test]
    fn nondegeneracy() {
        let c = c_z2();
        assert!(c.check_nondegenerate(&c.window(0)).passed());
        let null = Algebra::new("null", Basis::finite([l(0)]), |_, _| Tensor::zero(1));
        let chk = null.check_nondegenerate(&null.window(0));
        assert!(!chk.passed());
        assert!(chk.witness.unwrap().contains('0'));
        let z = c_int();
        assert!(z.check_nondegenerate(&z.window(2)).passed());
        let zz = c_z2().tensor(&k_z2());
        assert!(zz.check_nondegenerate(&zz.window(0)).passed());
    }

    #[test]
    fn associativity_and_star() {
        for a in [c_z2(), k_z2(), c_z2().tensor(&k_z2())] {
            let w = a.window(0);
            assert!(a.check_associative(&w).passed());
            assert!(a.check_star(&w).passed());
        }
    }

    #[test]
    fn multiplier_pairs() {
        let c = c_z2();
        let w = c.window(0);
        let id = multiplier_from_pair(&c, LinMap::identity(1), LinMap::identity(1), &w).unwrap();
        assert!(id.equals_on(&Multiplier::unit(&c), &w).unwrap());
        let e = Multiplier::embed(&c, &d(0));
        assert!(multiplier_from_pair(&c, e.rho1().clone(), e.rho2().clone(), &w).is_ok());
        let s = Multiplier::embed(&c, &d(1));
        let bad = multiplier_from_pair(&c, e.rho1().clone(), s.rho2().clone(), &w);
        assert!(matches!(bad, Err(Error::CompatibilityViolation { .. })));
    }

    #[test]
    fn multiplier_ops() {
        let c = c_z2();
        let w = c.window(0);
        let rho = Multiplier::embed(&c, &(&d(0) + &d(1).scale(&Scalar::from_int(3))));
        assert!(Multiplier::unit(&c).mul(&rho).unwrap().equals_on(&rho, &w).unwrap());
        for x in [d(0), d(1)] {
            for y in [d(0), d(1)] {
                let lhs = Multiplier::embed(&c, &x).mul(&Multiplier::embed(&c, &y)).unwrap();
                let rhs = Multiplier::embed(&c, &c.multiply(&x, &y).unwrap());
                assert!(lhs.equals_on(&rhs, &w).unwrap());
            }
        }
        // kℤ₂ with h* = h⁻¹ (= h): embed(a)* = embed(a*) including i-coefficients
        let k = k_z2();
        let a = &d(0) + &d(1).scale(&Scalar::i());
        let lhs = Multiplier::embed(&k, &a).star().unwrap();
        let rhs = Multiplier::embed(&k, &k.star(&a).unwrap());
        assert!(lhs.equals_on(&rhs, &k.window(0)).unwrap());
        let nostar = Algebra::new("x", Basis::finite([l(0)]), |_, _| d(0));
        assert!(matches!(Multiplier::unit(&nostar).star(), Err(Error::NoStar(_))));
    }

    #[test]
    fn multiplier_determined_by_first_component() {
        let c = c_z2();
        let w = c.window(0);
        let a = Multiplier::embed(&c, &d(1));
        let rho2 = Multiplier::embed(&c, &d(1)).rho2().clone();
        let b = multiplier_from_pair(&c, a.rho1().clone(), rho2, &w).unwrap();
        assert!(a.equals_on(&b, &w).unwrap());
    }

    #[test]
    fn essential_ideal() {
        let c = c_int();
        let rho = Multiplier::unit(&c).scale(&Scalar::from_int(2));
        for n in -2..=2 {
            let out = rho.apply_left(&d(n)).unwrap();
            assert!(out.support_on_leg(0).iter().all(|x| c.basis().contains(x)));
        }
    }

    #[test]
    fn extend_identity_embedding() {
        let c = c_z2();
        let w = c.window(0);
        let cc = c.clone();
        let id = Morphism::new(&c, &c, move |l| Ok(Multiplier::embed(&cc, &Tensor::basis(l.clone()))));
        let ext = extend_morphism(&id, &Multiplier::unit(&c), &w, &w).unwrap();
        assert!(ext.equals_on(&Multiplier::unit(&c), &w).unwrap());
    }

    #[test]
    fn extend_counit_gives_scalar() {
        // ε on C(ℤ₂) is evaluation at the identity 0
        let c = c_z2();
        let k = Algebra::ground_field();
        let kk = k.clone();
        let eps = Morphism::new(&c, &k, move |l| {
            let v = if l == &Label::Int(0) { Scalar::one() } else { Scalar::zero() };
            Ok(Multiplier::embed(&kk, &Tensor::basis(Label::Int(0)).scale(&v)))
        });
        let m = Multiplier::embed(&c, &(&d(0).scale(&Scalar::from_int(5)) + &d(1)));
        let ext = extend_morphism(&eps, &m, &c.window(0), &k.window(0)).unwrap();
        assert_eq!(ext.apply_left(&Tensor::basis(Label::Int(0))).unwrap(), Tensor::basis(Label::Int(0)).scale(&Scalar::from_int(5)));
    }
}
