//! Sparse tensors over structured basis labels and linear maps between them.
//!
//! A [`Tensor`] of degree `n` is a finite formal combination of `n`-tuples of
//! [`Label`]s; degree 1 is an ordinary vector and degree 0 a scalar. Maps are
//! only ever defined on basis keys and extended linearly, which is what lets
//! infinite (lazily presented) bases work without truncation: every map the
//! library builds sends a basis key to a finite tensor.
//!
//! Leg positions are 0-based throughout the API.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Basis identifier: an integer (group element index, ℤ element, ...) or a
/// tuple of labels (basis of a tensor-product carrier such as the double).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Int(i64),
    Tuple(Arc<[Label]>),
}

impl Label {
    pub fn pair(a: Label, b: Label) -> Label {
        Label::Tuple(Arc::from(vec![a, b]))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Label::Int(n) => Some(*n),
            Label::Tuple(_) => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Label]> {
        match self {
            Label::Int(_) => None,
            Label::Tuple(t) => Some(t),
        }
    }

    /// Splits a pair label; panics on anything else.
    pub fn split_pair(&self) -> (&Label, &Label) {
        match self.as_tuple() {
            Some([a, b]) => (a, b),
            _ => panic!("label {self} is not a pair"),
        }
    }
}

impl From<i64> for Label {
    fn from(n: i64) -> Self {
        Label::Int(n)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "{n}"),
            Label::Tuple(t) => {
                f.write_str("(")?;
                for (k, l) in t.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A basis key of a degree-`n` tensor: one label per leg.
pub type Key = SmallVec<[Label; 4]>;

pub fn key<I: IntoIterator<Item = Label>>(labels: I) -> Key {
    labels.into_iter().collect()
}

pub fn fmt_key(k: &[Label]) -> String {
    let parts: Vec<String> = k.iter().map(|l| l.to_string()).collect();
    format!("[{}]", parts.join("⊗"))
}

/// Sparse tensor; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    degree: usize,
    terms: BTreeMap<Key, Scalar>,
}

/// Degree-1 tensors.
pub type Vector = Tensor;

impl Tensor {
    pub fn zero(degree: usize) -> Self {
        Tensor {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 tensor holding `c`.
    pub fn scalar(c: Scalar) -> Self {
        let mut t = Tensor::zero(0);
        t.add_term(Key::new(), c);
        t
    }

    pub fn basis(label: Label) -> Self {
        Tensor::basis_key(key([label]))
    }

    pub fn basis_key(k: Key) -> Self {
        let mut t = Tensor::zero(k.len());
        t.add_term(k, Scalar::one());
        t
    }

    pub fn term(c: Scalar, k: Key) -> Self {
        let mut t = Tensor::zero(k.len());
        t.add_term(k, c);
        t
    }

    /// Sums duplicate keys; every key must have arity `degree`.
    pub fn from_terms<I: IntoIterator<Item = (Key, Scalar)>>(degree: usize, terms: I) -> Self {
        let mut t = Tensor::zero(degree);
        for (k, c) in terms {
            t.add_term(k, c);
        }
        t
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Key, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, k: &[Label]) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    /// Coefficient of a single label in a vector.
    pub fn coeff_of(&self, l: &Label) -> Scalar {
        debug_assert_eq!(self.degree, 1);
        self.coeff(std::slice::from_ref(l))
    }

    /// Value of a degree-0 tensor.
    pub fn scalar_value(&self) -> Scalar {
        assert_eq!(self.degree, 0, "scalar_value on degree {}", self.degree);
        self.coeff(&[])
    }

    /// Labels appearing on leg `leg`.
    pub fn support_on_leg(&self, leg: usize) -> BTreeSet<Label> {
        self.terms.keys().map(|k| k[leg].clone()).collect()
    }

    /// All labels appearing on any leg.
    pub fn support_labels(&self) -> BTreeSet<Label> {
        self.terms.keys().flat_map(|k| k.iter().cloned()).collect()
    }

    pub fn add_term(&mut self, k: Key, c: Scalar) {
        debug_assert_eq!(k.len(), self.degree, "key arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Tensor) {
        assert_eq!(self.degree, other.degree, "degree mismatch in sum");
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (k, v) in &other.terms {
            let v = if unit { v.clone() } else { c * v };
            self.add_term(k.clone(), v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut t = Tensor::zero(self.degree);
        t.add_scaled(c, self);
        t
    }

    /// Applies complex conjugation to every coefficient.
    pub fn conj(&self) -> Tensor {
        Tensor {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect(),
        }
    }

    /// `v ⊗ w`: degrees add, coefficients multiply.
    pub fn tensor(&self, other: &Tensor) -> Tensor {
        let mut t = Tensor::zero(self.degree + other.degree);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = k1.clone();
                k.extend(k2.iter().cloned());
                t.add_term(k, c1 * c2);
            }
        }
        t
    }

    /// Reorders legs: leg `i` of the result is leg `perm[i]` of `self`.
    pub fn permute_legs(&self, perm: &[usize]) -> Result<Tensor> {
        check_permutation(perm, self.degree)?;
        let mut t = Tensor::zero(self.degree);
        for (k, c) in &self.terms {
            let nk: Key = perm.iter().map(|&p| k[p].clone()).collect();
            t.add_term(nk, c.clone());
        }
        Ok(t)
    }

    /// Tensor flip `τ` on a degree-2 tensor.
    pub fn swap(&self) -> Tensor {
        self.permute_legs(&[1, 0]).expect("swap needs degree 2")
    }

    /// Groups consecutive legs into tuple labels, e.g. `[2, 2]` turns a
    /// degree-4 tensor into a degree-2 tensor over pair labels.
    pub fn group_legs(&self, sizes: &[usize]) -> Tensor {
        assert_eq!(sizes.iter().sum::<usize>(), self.degree);
        let mut t = Tensor::zero(sizes.len());
        for (k, c) in &self.terms {
            let mut nk = Key::new();
            let mut pos = 0;
            for &s in sizes {
                nk.push(Label::Tuple(Arc::from(&k[pos..pos + s])));
                pos += s;
            }
            t.add_term(nk, c.clone());
        }
        t
    }

    /// Inverse of [`Tensor::group_legs`]: expands every tuple label in place.
    pub fn flatten_legs(&self) -> Tensor {
        let mut degree = None;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let mut nk = Key::new();
            for l in k {
                match l {
                    Label::Tuple(parts) => nk.extend(parts.iter().cloned()),
                    Label::Int(_) => nk.push(l.clone()),
                }
            }
            degree = Some(nk.len());
            terms.push((nk, c.clone()));
        }
        Tensor::from_terms(degree.unwrap_or(0), terms)
    }
}

impl std::ops::Add<&Tensor> for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_scaled(&Scalar::one(), rhs);
        t
    }
}

impl std::ops::Sub<&Tensor> for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        let mut t = self.clone();
        t.add_scaled(&-Scalar::one(), rhs);
        t
    }
}

impl std::ops::Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if self.degree == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", fmt_key(k))?;
            } else {
                write!(f, "({c})·{}", fmt_key(k))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free-standing form of [`Tensor::tensor`].
pub fn tensor_product(v: &Tensor, w: &Tensor) -> Tensor {
    v.tensor(w)
}

/// Free-standing form of [`Tensor::permute_legs`].
pub fn permute_legs(t: &Tensor, perm: &[usize]) -> Result<Tensor> {
    t.permute_legs(perm)
}

fn check_permutation(perm: &[usize], degree: usize) -> Result<()> {
    if perm.len() != degree {
        return Err(Error::ArityMismatch {
            expected: degree,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; degree];
    for &p in perm {
        if p >= degree || seen[p] {
            return Err(Error::BasisMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

type EvalFn = dyn Fn(&[Label]) -> Result<Tensor> + Send + Sync;

struct LinMapInner {
    name: String,
    in_degree: usize,
    out_degree: usize,
    eval: Box<EvalFn>,
    cache: Option<RwLock<HashMap<Key, Tensor>>>,
}

/// A linear map defined by its values on basis keys.
///
/// Evaluation may be lazy; a memoizing map caches basis images behind a
/// lock, which keeps it observationally pure and shareable across threads.
#[derive(Clone)]
pub struct LinMap(Arc<LinMapInner>);

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinMap({}: deg {} -> deg {})",
            self.0.name, self.0.in_degree, self.0.out_degree
        )
    }
}

impl LinMap {
    pub fn new<F>(name: impl Into<String>, in_degree: usize, out_degree: usize, eval: F) -> Self
    where
        F: Fn(&[Label]) -> Result<Tensor> + Send + Sync + 'static,
    {
        LinMap(Arc::new(LinMapInner {
            name: name.into(),
            in_degree,
            out_degree,
            eval: Box::new(eval),
            cache: None,
        }))
    }

    /// Like [`LinMap::new`] but caches every basis image.
    pub fn memoized<F>(name: impl Into<String>, in_degree: usize, out_degree: usize, eval: F) -> Self
    where
        F: Fn(&[Label]) -> Result<Tensor> + Send + Sync + 'static,
    {
        LinMap(Arc::new(LinMapInner {
            name: name.into(),
            in_degree,
            out_degree,
            eval: Box::new(eval),
            cache: Some(RwLock::new(HashMap::new())),
        }))
    }

    /// Map given by an explicit finite table; keys absent from the table map
    /// to zero.
    pub fn from_table(
        name: impl Into<String>,
        in_degree: usize,
        out_degree: usize,
        table: HashMap<Key, Tensor>,
    ) -> Self {
        LinMap::new(name, in_degree, out_degree, move |k| {
            Ok(table.get(k).cloned().unwrap_or_else(|| Tensor::zero(out_degree)))
        })
    }

    pub fn identity(degree: usize) -> Self {
        LinMap::new("id", degree, degree, |k| Ok(Tensor::basis_key(key(k.iter().cloned()))))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn in_degree(&self) -> usize {
        self.0.in_degree
    }

    pub fn out_degree(&self) -> usize {
        self.0.out_degree
    }

    /// Same map, with a memo table in front of it.
    pub fn cached(&self) -> LinMap {
        if self.0.cache.is_some() {
            return self.clone();
        }
        let inner = self.clone();
        LinMap::memoized(self.0.name.clone(), self.0.in_degree, self.0.out_degree, move |k| {
            inner.eval_key(k)
        })
    }

    pub fn renamed(&self, name: impl Into<String>) -> LinMap {
        let inner = self.clone();
        LinMap::new(name, self.0.in_degree, self.0.out_degree, move |k| inner.eval_key(k))
    }

    pub fn eval_key(&self, k: &[Label]) -> Result<Tensor> {
        if k.len() != self.0.in_degree {
            return Err(Error::ArityMismatch {
                expected: self.0.in_degree,
                got: k.len(),
            });
        }
        if let Some(cache) = &self.0.cache {
            if let Some(t) = cache.read().expect("cache poisoned").get(k) {
                return Ok(t.clone());
            }
            let t = (self.0.eval)(k)?;
            cache
                .write()
                .expect("cache poisoned")
                .insert(key(k.iter().cloned()), t.clone());
            return Ok(t);
        }
        (self.0.eval)(k)
    }

    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.degree() != self.0.in_degree {
            return Err(Error::ArityMismatch {
                expected: self.0.in_degree,
                got: t.degree(),
            });
        }
        let mut out = Tensor::zero(self.0.out_degree);
        for (k, c) in t.terms() {
            out.add_scaled(c, &self.eval_key(k)?);
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if inner.out_degree() != self.in_degree() {
            return Err(Error::ArityMismatch {
                expected: self.in_degree(),
                got: inner.out_degree(),
            });
        }
        let (f, g) = (self.clone(), inner.clone());
        Ok(LinMap::new(
            format!("{}∘{}", self.name(), inner.name()),
            inner.in_degree(),
            self.out_degree(),
            move |k| f.apply(&g.eval_key(k)?),
        ))
    }

    /// Lifts `self` to a map on degree-`total` tensors acting on `legs`.
    pub fn on_legs(&self, legs: &[usize], total: usize) -> Result<LinMap> {
        check_legs(self, legs, total)?;
        let f = self.clone();
        let legs = legs.to_vec();
        let out_total = total - f.in_degree() + f.out_degree();
        Ok(LinMap::new(
            format!("({})_{:?}", self.name(), legs),
            total,
            out_total,
            move |k| apply_on_legs(&f, &legs, &Tensor::basis_key(key(k.iter().cloned()))),
        ))
    }

    /// First key of `keys` where the two maps differ, with both images.
    pub fn first_difference<'a, I>(&self, other: &LinMap, keys: I) -> Result<Option<(Key, Tensor, Tensor)>>
    where
        I: IntoIterator<Item = &'a Key>,
    {
        for k in keys {
            let (x, y) = (self.eval_key(k)?, other.eval_key(k)?);
            if x != y {
                return Ok(Some((k.clone(), x, y)));
            }
        }
        Ok(None)
    }

    /// Window-restricted equality; on a finite basis pass every key.
    pub fn agrees_on<'a, I>(&self, other: &LinMap, keys: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a Key>,
    {
        Ok(self.first_difference(other, keys)?.is_none())
    }

    /// Dense matrix `M[row][col]` with columns indexed by `domain` keys and
    /// rows by `codomain` keys. Only meaningful on finite bases.
    pub fn matrix(&self, domain: &[Key], codomain: &[Key]) -> Result<Vec<Vec<Scalar>>> {
        let index: HashMap<&Key, usize> = codomain.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut m = vec![vec![Scalar::zero(); domain.len()]; codomain.len()];
        for (j, k) in domain.iter().enumerate() {
            for (kk, c) in self.eval_key(k)?.terms() {
                let i = *index.get(kk).ok_or_else(|| {
                    Error::BasisMismatch(format!("{} sends {} outside codomain", self.name(), fmt_key(k)))
                })?;
                m[i][j] = c.clone();
            }
        }
        Ok(m)
    }
}

fn check_legs(f: &LinMap, legs: &[usize], total: usize) -> Result<()> {
    if legs.len() != f.in_degree() {
        return Err(Error::ArityMismatch {
            expected: f.in_degree(),
            got: legs.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for &l in legs {
        if l >= total || !seen.insert(l) {
            return Err(Error::BasisMismatch(format!(
                "legs {legs:?} invalid for a degree-{total} tensor"
            )));
        }
    }
    if f.in_degree() != f.out_degree() && legs.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::BasisMismatch(format!(
            "degree-changing map {} needs contiguous ascending legs, got {legs:?}",
            f.name()
        )));
    }
    Ok(())
}

/// Applies `f` on the given legs of `t`, identity elsewhere.
///
/// A degree-preserving `f` writes its output back onto the same legs (in the
/// listed order, so `(M)_{1 3}`-style placements work). A degree-changing `f`
/// (a functional, a product) needs contiguous ascending legs and its output
/// legs replace them in place.
pub fn apply_on_legs(f: &LinMap, legs: &[usize], t: &Tensor) -> Result<Tensor> {
    check_legs(f, legs, t.degree())?;
    let total = t.degree();
    let out_degree = total - f.in_degree() + f.out_degree();
    let same = f.in_degree() == f.out_degree();
    let mut out = Tensor::zero(out_degree);
    let mut memo: HashMap<Key, Tensor> = HashMap::new();
    for (k, c) in t.terms() {
        let sub: Key = legs.iter().map(|&l| k[l].clone()).collect();
        let image = match memo.get(&sub) {
            Some(v) => v.clone(),
            None => {
                let v = f.eval_key(&sub)?;
                memo.insert(sub, v.clone());
                v
            }
        };
        for (ik, ic) in image.terms() {
            let nk: Key = if same {
                let mut nk = k.clone();
                for (pos, &l) in legs.iter().enumerate() {
                    nk[l] = ik[pos].clone();
                }
                nk
            } else {
                let first = legs.first().copied().unwrap_or(0);
                let mut nk = Key::new();
                nk.extend(k[..first].iter().cloned());
                nk.extend(ik.iter().cloned());
                nk.extend(k[first + legs.len()..].iter().cloned());
                nk
            };
            out.add_term(nk, c * ic);
        }
    }
    Ok(out)
}

/// A linear functional on a vector space, optionally with a declared finite
/// support (required for slicing over infinite bases).
#[derive(Clone, Debug)]
pub struct Functional {
    map: LinMap,
    support: Option<Arc<[Label]>>,
}

impl Functional {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Label) -> Scalar + Send + Sync + 'static,
    {
        Functional {
            map: LinMap::new(name, 1, 0, move |k| Ok(Tensor::scalar(eval(&k[0])))),
            support: None,
        }
    }

    /// Functional with finite support given by explicit coefficients.
    pub fn from_coeffs(name: impl Into<String>, coeffs: BTreeMap<Label, Scalar>) -> Self {
        let support: Arc<[Label]> = coeffs.keys().cloned().collect::<Vec<_>>().into();
        Functional {
            map: LinMap::new(name, 1, 0, move |k| {
                Ok(Tensor::scalar(coeffs.get(&k[0]).cloned().unwrap_or_default()))
            }),
            support: Some(support),
        }
    }

    pub fn from_map(map: LinMap) -> Result<Self> {
        if map.in_degree() != 1 || map.out_degree() != 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: map.in_degree(),
            });
        }
        Ok(Functional { map, support: None })
    }

    pub fn with_support(mut self, support: impl IntoIterator<Item = Label>) -> Self {
        self.support = Some(support.into_iter().collect::<Vec<_>>().into());
        self
    }

    pub fn map(&self) -> &LinMap {
        &self.map
    }

    pub fn name(&self) -> &str {
        self.map.name()
    }

    pub fn support(&self) -> Option<&[Label]> {
        self.support.as_deref()
    }

    pub fn at(&self, l: &Label) -> Result<Scalar> {
        Ok(self.map.eval_key(std::slice::from_ref(l))?.scalar_value())
    }

    pub fn eval(&self, v: &Vector) -> Result<Scalar> {
        Ok(self.map.apply(v)?.scalar_value())
    }

    /// Tensor product of functionals `ω ⊗ ω'` on pair labels.
    pub fn pair_product(&self, other: &Functional) -> Functional {
        let (f, g) = (self.clone(), other.clone());
        let support = match (self.support(), other.support()) {
            (Some(s), Some(t)) => Some(
                s.iter()
                    .flat_map(|a| t.iter().map(move |b| Label::pair(a.clone(), b.clone())))
                    .collect::<Vec<_>>()
                    .into(),
            ),
            _ => None,
        };
        Functional {
            map: LinMap::new(format!("{}⊗{}", self.name(), other.name()), 1, 0, move |k| {
                let (a, b) = k[0].split_pair();
                Ok(Tensor::scalar(f.at(a)? * g.at(b)?))
            }),
            support,
        }
    }
}

/// All keys of the `degree`-fold cartesian power of `labels`.
pub fn product_keys(labels: &[Label], degree: usize) -> Vec<Key> {
    let mut keys = vec![Key::new()];
    for _ in 0..degree {
        let mut next = Vec::with_capacity(keys.len() * labels.len());
        for k in &keys {
            for l in labels {
                let mut nk = k.clone();
                nk.push(l.clone());
                next.push(nk);
            }
        }
        keys = next;
    }
    keys
}

/// Keys of a product of possibly different label sets.
pub fn mixed_keys(factors: &[&[Label]]) -> Vec<Key> {
    let mut keys = vec![Key::new()];
    for labels in factors {
        let mut next = Vec::with_capacity(keys.len() * labels.len());
        for k in &keys {
            for l in labels.iter() {
                let mut nk = k.clone();
                nk.push(l.clone());
                next.push(nk);
            }
        }
        keys = next;
    }
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(n: i64) -> Label {
        Label::Int(n)
    }

    fn v(terms: &[(i64, i64)]) -> Tensor {
        Tensor::from_terms(1, terms.iter().map(|&(n, c)| (key([l(n)]), Scalar::from_int(c))))
    }

    #[test]
    fn tensor_product_is_bilinear() {
        let x = v(&[(0, 1), (1, 1)]);
        let y = v(&[(0, 1)]);
        let expect = Tensor::from_terms(
            2,
            [(key([l(0), l(0)]), Scalar::one()), (key([l(1), l(0)]), Scalar::one())],
        );
        assert_eq!(tensor_product(&x, &y), expect);
        assert!(tensor_product(&Tensor::zero(1), &y).is_zero());
        let two = Scalar::from_int(2);
        assert_eq!(x.scale(&two).tensor(&y), x.tensor(&y).scale(&two));
    }

    #[test]
    fn swap_is_an_involution() {
        let t = Tensor::basis_key(key([l(1), l(2)]));
        assert_eq!(t.swap(), Tensor::basis_key(key([l(2), l(1)])));
        assert_eq!(t.swap().swap(), t);
    }

    #[test]
    fn disjoint_swaps_match_cycle_permutation() {
        let t = Tensor::basis_key(key([l(1), l(2), l(3), l(4)]));
        // (1 3)(2 4) in 1-based cycle notation
        let direct = t.permute_legs(&[2, 3, 0, 1]).unwrap();
        let first = t.permute_legs(&[2, 1, 0, 3]).unwrap();
        let both = first.permute_legs(&[0, 3, 2, 1]).unwrap();
        assert_eq!(direct, both);
    }

    #[test]
    fn permute_rejects_bad_arity() {
        let t = Tensor::basis_key(key([l(1), l(2)]));
        assert!(matches!(t.permute_legs(&[0]), Err(Error::ArityMismatch { .. })));
        assert!(t.permute_legs(&[0, 0]).is_err());
    }

    #[test]
    fn apply_identity_and_functional_on_legs() {
        let t = Tensor::basis_key(key([l(1), l(2)])).scale(&Scalar::from_int(3));
        let id = LinMap::identity(1);
        assert_eq!(apply_on_legs(&id, &[0], &t).unwrap(), t);
        let omega = Functional::new("ω", |x| Scalar::from_int(x.as_int().unwrap() * 10));
        let sliced = apply_on_legs(omega.map(), &[1], &t).unwrap();
        assert_eq!(sliced, v(&[(1, 60)]));
    }

    #[test]
    fn degree_changing_map_needs_contiguous_legs() {
        let m = LinMap::new("m", 2, 1, |k| Ok(Tensor::basis(k[0].clone())));
        let t = Tensor::basis_key(key([l(1), l(2), l(3)]));
        assert!(apply_on_legs(&m, &[0, 2], &t).is_err());
        assert_eq!(apply_on_legs(&m, &[1, 2], &t).unwrap(), Tensor::basis_key(key([l(1), l(2)])));
    }

    #[test]
    fn group_and_flatten_are_inverse() {
        let t = Tensor::basis_key(key([l(1), l(2), l(3), l(4)]));
        let g = t.group_legs(&[2, 2]);
        assert_eq!(g.degree(), 2);
        assert_eq!(g.flatten_legs(), t);
    }

    #[test]
    fn memoized_map_agrees_with_plain() {
        let f = LinMap::new("neg", 1, 1, |k| {
            Ok(Tensor::basis(Label::Int(-k[0].as_int().unwrap())))
        });
        let g = f.cached();
        let keys = product_keys(&[l(-2), l(0), l(3)], 1);
        assert!(f.agrees_on(&g, &keys).unwrap());
        assert!(g.agrees_on(&f, &keys).unwrap());
    }

    fn arb_tensor(degree: usize) -> impl Strategy<Value = Tensor> {
        proptest::collection::vec((proptest::collection::vec(0i64..3, degree), -3i64..4), 0..6)
            .prop_map(move |terms| {
                Tensor::from_terms(
                    degree,
                    terms.into_iter().map(|(k, c)| (key(k.into_iter().map(Label::Int)), Scalar::from_int(c))),
                )
            })
    }

    fn shift(by: i64) -> LinMap {
        LinMap::new(format!("shift{by}"), 1, 1, move |k| {
            let n = k[0].as_int().unwrap();
            Ok(Tensor::from_terms(
                1,
                [(key([Label::Int(n + by)]), Scalar::one()), (key([Label::Int(n)]), Scalar::from_int(by))],
            ))
        })
    }

    proptest! {
        #[test]
        fn disjoint_leg_maps_commute(t in arb_tensor(3)) {
            let (f, g) = (shift(1), shift(2));
            let fg = apply_on_legs(&f, &[0], &apply_on_legs(&g, &[2], &t).unwrap()).unwrap();
            let gf = apply_on_legs(&g, &[2], &apply_on_legs(&f, &[0], &t).unwrap()).unwrap();
            prop_assert_eq!(fg, gf);
        }

        #[test]
        fn permutations_compose(t in arb_tensor(3), a in 0usize..6, b in 0usize..6) {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let (p, q) = (perms[a], perms[b]);
            // applying p then q equals applying the composite r with r[i] = p[q[i]]
            let r: Vec<usize> = q.iter().map(|&i| p[i]).collect();
            let two_step = t.permute_legs(&p).unwrap().permute_legs(&q).unwrap();
            prop_assert_eq!(two_step, t.permute_legs(&r).unwrap());
        }
    }
}
