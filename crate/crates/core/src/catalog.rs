//! Built-in examples: function algebras and group algebras of finite
//! groups, the lazily presented pair for ℤ, an adapter for classical Hopf
//! algebra data, and an independent textbook model of the classical
//! Drinfeld double used as an oracle.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use crate::algebra::{Algebra, Basis};
use crate::error::{Error, Result};
use crate::mha::{indicator, MhaHandle, SuiteConfig};
use crate::pairing::{PairingHandle, StarMode};
use crate::scalar::Scalar;
use crate::tensor::{key, product_keys, Functional, Key, Label, LinMap, Tensor, Vector};

/// A finite group on elements `0..n`, by multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub name: String,
    pub names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    /// Checks closure, associativity, identity and inverses.
    pub fn from_table(name: impl Into<String>, names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Group> {
        let name = name.into();
        let n = table.len();
        if n == 0 || names.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::NotAGroup(format!("{name}: table is not a closed n×n table")));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("{name}: ({a}{b}){c} ≠ {a}({b}{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup(format!("{name}: no identity")))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("{name}: {} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        Ok(Group {
            name,
            names,
            table,
            identity,
            inverse,
        })
    }

    /// Group generated by closing a set of permutations under composition;
    /// element 0 is the identity.
    pub fn from_permutations(name: impl Into<String>, generators: &[Vec<usize>]) -> Result<Group> {
        let degree = generators.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let p: Vec<usize> = (0..degree).map(|x| elems[i][g[x]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        // (p·q)(x) = p(q(x))
        let table = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| index[&(0..degree).map(|x| p[q[x]]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let names = elems
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        Group::from_table(name, names, table)
    }

    pub fn cyclic(n: usize) -> Group {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(format!("Z{n}"), (0..n).map(|a| a.to_string()).collect(), table).expect("cyclic group")
    }

    pub fn trivial() -> Group {
        Group::cyclic(1).renamed("1")
    }

    pub fn klein() -> Group {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Group::from_table("Z2xZ2", vec!["e".into(), "a".into(), "b".into(), "ab".into()], table).expect("klein group")
    }

    pub fn symmetric3() -> Group {
        Group::from_permutations("S3", &[vec![1, 0, 2], vec![0, 2, 1]]).expect("S3")
    }

    /// Symmetries of the square, order 8.
    pub fn dihedral4() -> Group {
        Group::from_permutations("D4", &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).expect("D4")
    }

    /// Looks a group up by its short name.
    pub fn named(name: &str) -> Result<Group> {
        match name {
            "1" | "trivial" => Ok(Group::trivial()),
            "Z2" => Ok(Group::cyclic(2)),
            "Z3" => Ok(Group::cyclic(3)),
            "Z2xZ2" | "V4" => Ok(Group::klein()),
            "S3" => Ok(Group::symmetric3()),
            "D4" => Ok(Group::dihedral4()),
            other => {
                if let Some(n) = other.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                    if n > 0 {
                        return Ok(Group::cyclic(n));
                    }
                }
                Err(Error::NotAGroup(format!("unknown group `{other}`")))
            }
        }
    }

    fn renamed(mut self, name: &str) -> Group {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.order()).map(|i| Label::Int(i as i64)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Element index of a label.
    pub fn index(&self, l: &Label) -> usize {
        l.as_int().expect("group label") as usize
    }
}

fn lab(i: usize) -> Label {
    Label::Int(i as i64)
}

fn d(i: usize) -> Vector {
    Tensor::basis(lab(i))
}

fn d2(i: usize, j: usize) -> Tensor {
    Tensor::basis_key(key([lab(i), lab(j)]))
}

/// `C(G)`: functions on `G`, pointwise product,
/// `Δ(δ_g) = Σ_{uv=g} δ_u⊗δ_v`, star `δ_g* = δ_g`, integral `φ(δ_g) = 1`.
pub fn function_algebra(g: &Group) -> Result<MhaHandle> {
    let alg = Algebra::new(format!("C({})", g.name), Basis::finite(g.labels()), |a, b| {
        if a == b { Tensor::basis(a.clone()) } else { Tensor::zero(1) }
    })
    .with_star(|a| Tensor::basis(a.clone()))
    .with_solved_unit();
    let (g1, g2, g3) = (g.clone(), g.clone(), g.clone());
    // T1(δ_a⊗δ_b) = δ_{ab⁻¹}⊗δ_b, T2(δ_a⊗δ_b) = δ_a⊗δ_{a⁻¹b}
    let t1 = LinMap::new("T1", 2, 2, move |k| {
        let (a, b) = (g1.index(&k[0]), g1.index(&k[1]));
        Ok(d2(g1.mul(a, g1.inv(b)), b))
    });
    let t2 = LinMap::new("T2", 2, 2, move |k| {
        let (a, b) = (g2.index(&k[0]), g2.index(&k[1]));
        Ok(d2(a, g2.mul(g2.inv(a), b)))
    });
    let e = g.identity();
    let s = LinMap::new("S", 1, 1, move |k| Ok(d(g3.inv(g3.index(&k[0])))));
    MhaHandle::builder(format!("C({})", g.name), &alg, t1, t2)
        .counit(Functional::new("ε", move |l| indicator(l == &lab(e))))
        .antipode(s.clone(), Some(s))
        .left_integral(Functional::new("φ", |_| Scalar::one()))
        .right_integral(Functional::new("φ", |_| Scalar::one()))
        .build()
}

/// `kG`: group algebra, `Δ(h) = h⊗h`, star `h* = h⁻¹`, integral
/// `ψ(h) = [h = e]`.
pub fn group_algebra(g: &Group) -> Result<MhaHandle> {
    let gm = g.clone();
    let gs = g.clone();
    let alg = Algebra::new(format!("k{}", g.name), Basis::finite(g.labels()), move |a, b| {
        d(gm.mul(gm.index(a), gm.index(b)))
    })
    .with_unit(d(g.identity()))
    .with_star(move |a| d(gs.inv(gs.index(a))));
    let (g1, g2, g3) = (g.clone(), g.clone(), g.clone());
    // T1(g⊗h) = g⊗gh, T2(g⊗h) = gh⊗h
    let t1 = LinMap::new("T1", 2, 2, move |k| {
        let (a, b) = (g1.index(&k[0]), g1.index(&k[1]));
        Ok(d2(a, g1.mul(a, b)))
    });
    let t2 = LinMap::new("T2", 2, 2, move |k| {
        let (a, b) = (g2.index(&k[0]), g2.index(&k[1]));
        Ok(d2(g2.mul(a, b), b))
    });
    let e = g.identity();
    let s = LinMap::new("S", 1, 1, move |k| Ok(d(g3.inv(g3.index(&k[0])))));
    let psi = Functional::from_coeffs("ψ", [(lab(e), Scalar::one())].into_iter().collect());
    MhaHandle::builder(format!("k{}", g.name), &alg, t1, t2)
        .counit(Functional::new("ε", |_| Scalar::one()))
        .antipode(s.clone(), Some(s))
        .left_integral(psi.clone())
        .right_integral(psi)
        .build()
}

/// `⟨δ_g, h⟩ = [g = h]` between `C(G)` and `kG`, star mode on; certified
/// exhaustively before it is returned.
pub fn finite_group_pair(g: &Group) -> Result<PairingHandle> {
    let a = function_algebra(g)?;
    let b = group_algebra(g)?;
    PairingHandle::new(
        format!("C({0})/k{0}", g.name),
        &a,
        &b,
        |x, y| indicator(x == y),
        StarMode::On,
    )?
    .certify(&SuiteConfig::default())
}

fn int_window(n: usize) -> Vec<Label> {
    let n = n as i64;
    (-n..=n).map(Label::Int).collect()
}

fn int_basis() -> Basis {
    Basis::lazy("Z", |l| l.as_int().is_some(), int_window)
}

fn int(l: &Label) -> i64 {
    l.as_int().expect("integer label")
}

fn di(n: i64) -> Vector {
    Tensor::basis(Label::Int(n))
}

fn di2(a: i64, b: i64) -> Tensor {
    Tensor::basis_key(key([Label::Int(a), Label::Int(b)]))
}

/// Finitely supported functions on ℤ: non-unital, with local units
/// `Σ_{l∈L} δ_l`.
pub fn int_function_algebra() -> Result<MhaHandle> {
    let alg = Algebra::new("Cc(Z)", int_basis(), |a, b| {
        if a == b { Tensor::basis(a.clone()) } else { Tensor::zero(1) }
    })
    .with_star(|a| Tensor::basis(a.clone()))
    .with_local_unit(|s| Tensor::from_terms(1, s.iter().map(|l| (key([l.clone()]), Scalar::one()))));
    let t1 = LinMap::new("T1", 2, 2, |k| Ok(di2(int(&k[0]) - int(&k[1]), int(&k[1]))));
    let t2 = LinMap::new("T2", 2, 2, |k| Ok(di2(int(&k[0]), int(&k[1]) - int(&k[0]))));
    let t1_inv = LinMap::new("T1⁻¹", 2, 2, |k| Ok(di2(int(&k[0]) + int(&k[1]), int(&k[1]))));
    let t2_inv = LinMap::new("T2⁻¹", 2, 2, |k| Ok(di2(int(&k[0]), int(&k[0]) + int(&k[1]))));
    let s = LinMap::new("S", 1, 1, |k| Ok(di(-int(&k[0]))));
    MhaHandle::builder("Cc(Z)", &alg, t1, t2)
        .inverses(t1_inv, t2_inv)
        .counit(Functional::new("ε", |l| indicator(int(l) == 0)).with_support([Label::Int(0)]))
        .antipode(s.clone(), Some(s))
        .left_integral(Functional::new("φ", |_| Scalar::one()))
        .right_integral(Functional::new("φ", |_| Scalar::one()))
        .build()
}

/// The group algebra `kℤ`, lazily presented.
pub fn int_group_algebra() -> Result<MhaHandle> {
    let alg = Algebra::new("kZ", int_basis(), |a, b| di(int(a) + int(b)))
        .with_unit(di(0))
        .with_star(|a| di(-int(a)));
    let t1 = LinMap::new("T1", 2, 2, |k| Ok(di2(int(&k[0]), int(&k[0]) + int(&k[1]))));
    let t2 = LinMap::new("T2", 2, 2, |k| Ok(di2(int(&k[0]) + int(&k[1]), int(&k[1]))));
    let t1_inv = LinMap::new("T1⁻¹", 2, 2, |k| Ok(di2(int(&k[0]), int(&k[1]) - int(&k[0]))));
    let t2_inv = LinMap::new("T2⁻¹", 2, 2, |k| Ok(di2(int(&k[0]) - int(&k[1]), int(&k[1]))));
    let s = LinMap::new("S", 1, 1, |k| Ok(di(-int(&k[0]))));
    let psi = Functional::from_coeffs("ψ", [(Label::Int(0), Scalar::one())].into_iter().collect());
    MhaHandle::builder("kZ", &alg, t1, t2)
        .inverses(t1_inv, t2_inv)
        .counit(Functional::new("ε", |_| Scalar::one()))
        .antipode(s.clone(), Some(s))
        .left_integral(psi.clone())
        .right_integral(psi)
        .build()
}

/// `⟨δ_n, m⟩ = [n = m]` between `Cc(ℤ)` and `kℤ`, with the action
/// sections `0▷δ_n = δ_n` and `k◁δ_k = k` as surjectivity witnesses.
pub fn lazy_int_group_pair() -> Result<PairingHandle> {
    let a = int_function_algebra()?;
    let b = int_group_algebra()?;
    PairingHandle::new("Cc(Z)/kZ", &a, &b, |x, y| indicator(x == y), StarMode::On)?
        .with_supports(|m| vec![m.clone()], |n| vec![n.clone()])
        .with_sections(crate::pairing::Sections {
            // b▷a: δ_n = 0▷δ_n
            b_on_a_left: Arc::new(|l: &Label| Ok(vec![(Label::Int(0), l.clone(), Scalar::one())])),
            // a◁b: δ_n = δ_n◁0
            b_on_a_right: Arc::new(|l: &Label| Ok(vec![(l.clone(), Label::Int(0), Scalar::one())])),
            // a▷b: k = δ_k▷k
            a_on_b_left: Arc::new(|l: &Label| Ok(vec![(l.clone(), l.clone(), Scalar::one())])),
            // b◁a: k = k◁δ_k
            a_on_b_right: Arc::new(|l: &Label| Ok(vec![(l.clone(), l.clone(), Scalar::one())])),
        })?
        .certify(&SuiteConfig::with_window(default_window()))
}

/// `MHOPF_DEFAULT_WINDOW`, else 8.
pub fn default_window() -> usize {
    std::env::var("MHOPF_DEFAULT_WINDOW")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(8)
}

pub type LabelMap<T> = Arc<dyn Fn(&Label) -> T + Send + Sync>;
pub type LabelProduct = Arc<dyn Fn(&Label, &Label) -> Vector + Send + Sync>;

/// Classical Hopf algebra data on a finite basis.
#[derive(Clone)]
pub struct HopfData {
    pub name: String,
    pub basis: Vec<Label>,
    pub mul: LabelProduct,
    pub unit: Vector,
    pub delta: LabelMap<Tensor>,
    pub counit: LabelMap<Scalar>,
    pub antipode: LabelMap<Vector>,
    pub star: Option<LabelMap<Vector>>,
}

/// `T1(a⊗b) = Δ(a)(1⊗b)`, `T2(a⊗b) = (a⊗1)Δ(b)`.
pub fn hopf_as_mha(h: &HopfData) -> Result<MhaHandle> {
    let m = h.mul.clone();
    let mut alg = Algebra::new(h.name.clone(), Basis::finite(h.basis.clone()), move |a, b| m(a, b))
        .with_unit(h.unit.clone());
    if let Some(s) = h.star.clone() {
        alg = alg.with_star(move |l| s(l));
    }
    let (alg1, alg2) = (alg.clone(), alg.clone());
    let (d1, d2) = (h.delta.clone(), h.delta.clone());
    let t1 = LinMap::new("T1", 2, 2, move |k| {
        let y = Tensor::basis(k[1].clone());
        let mut out = Tensor::zero(2);
        for (dk, c) in d1(&k[0]).terms() {
            let right = alg1.mul_unchecked(&Tensor::basis(dk[1].clone()), &y)?;
            out.add_scaled(c, &Tensor::basis(dk[0].clone()).tensor(&right));
        }
        Ok(out)
    });
    let t2 = LinMap::new("T2", 2, 2, move |k| {
        let x = Tensor::basis(k[0].clone());
        let mut out = Tensor::zero(2);
        for (dk, c) in d2(&k[1]).terms() {
            let left = alg2.mul_unchecked(&x, &Tensor::basis(dk[0].clone()))?;
            out.add_scaled(c, &left.tensor(&Tensor::basis(dk[1].clone())));
        }
        Ok(out)
    });
    let sf = h.antipode.clone();
    let s = LinMap::new("S", 1, 1, move |k| Ok(sf(&k[0])));
    let s_inv = crate::mha::solve_inverse(&s, &h.basis, 1, "S")
        .map_err(|_| Error::AntipodeNotInvertible(h.name.clone()))?;
    let eps = h.counit.clone();
    MhaHandle::builder(h.name.clone(), &alg, t1, t2)
        .counit(Functional::new("ε", move |l| eps(l)))
        .antipode(s, Some(s_inv))
        .build()
}

/// `kG` as classical Hopf data.
pub fn group_hopf_data(g: &Group) -> HopfData {
    let (gm, gs, gi) = (g.clone(), g.clone(), g.clone());
    HopfData {
        name: format!("k{}", g.name),
        basis: g.labels(),
        mul: Arc::new(move |a, b| d(gm.mul(gm.index(a), gm.index(b)))),
        unit: d(g.identity()),
        delta: Arc::new(|a| Tensor::basis_key(key([a.clone(), a.clone()]))),
        counit: Arc::new(|_| Scalar::one()),
        antipode: Arc::new(move |a| d(gs.inv(gs.index(a)))),
        star: Some(Arc::new(move |a| d(gi.inv(gi.index(a))))),
    }
}

/// Sweedler's four-dimensional Hopf algebra: basis `1, g, x, gx`
/// (labels 0..3), `g² = 1`, `x² = 0`, `xg = -gx`, `Δ(g) = g⊗g`,
/// `Δ(x) = x⊗1 + g⊗x`.
pub fn sweedler_hopf_data() -> HopfData {
    // words as (g-power, x-power); label = g + 2x
    fn word(l: &Label) -> (i64, i64) {
        let n = l.as_int().expect("label");
        (n % 2, n / 2)
    }
    fn from_word(gp: i64, xp: i64) -> Label {
        Label::Int(gp + 2 * xp)
    }
    let mul = |a: &Label, b: &Label| {
        let ((g1, x1), (g2, x2)) = (word(a), word(b));
        if x1 + x2 > 1 {
            return Tensor::zero(1);
        }
        // g^g1 x^x1 g^g2 x^x2 = (-1)^{x1 g2} g^{g1+g2} x^{x1+x2}
        let sign = if x1 * g2 % 2 == 1 { -Scalar::one() } else { Scalar::one() };
        Tensor::basis(from_word((g1 + g2) % 2, x1 + x2)).scale(&sign)
    };
    let l = |n: i64| Label::Int(n);
    let delta = move |a: &Label| {
        let t = |x: i64, y: i64| Tensor::basis_key(key([l(x), l(y)]));
        match a.as_int().expect("label") {
            0 => t(0, 0),
            1 => t(1, 1),
            // Δ(x) = x⊗1 + g⊗x
            2 => &t(2, 0) + &t(1, 2),
            // Δ(gx) = (g⊗g)(x⊗1 + g⊗x) = gx⊗g + 1⊗gx
            _ => &t(3, 1) + &t(0, 3),
        }
    };
    let antipode = |a: &Label| match a.as_int().expect("label") {
        0 => Tensor::basis(Label::Int(0)),
        1 => Tensor::basis(Label::Int(1)),
        // S(x) = -gx, S(gx) = x
        2 => Tensor::basis(Label::Int(3)).scale(&-Scalar::one()),
        _ => Tensor::basis(Label::Int(2)),
    };
    HopfData {
        name: "H4".into(),
        basis: (0..4).map(Label::Int).collect(),
        mul: Arc::new(mul),
        unit: Tensor::basis(Label::Int(0)),
        delta: Arc::new(delta),
        counit: Arc::new(|a| indicator(a.as_int() == Some(0) || a.as_int() == Some(1))),
        antipode: Arc::new(antipode),
        star: None,
    }
}

/// Sweedler's algebra paired with itself: `⟨g, g⟩ = -1`, `⟨x, x⟩ = λ`,
/// `⟨1, ·⟩ = ε = ⟨·, 1⟩`. Any nonzero `λ` works; the catalog uses `λ = i`.
pub fn sweedler_pair(lambda: Scalar) -> Result<PairingHandle> {
    let h = hopf_as_mha(&sweedler_hopf_data())?;
    // products of generators: ⟨g^a x^b, g^c x^d⟩ for the basis 1, g, x, gx
    let mut table: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
    let one = Scalar::one();
    let m1 = -Scalar::one();
    table.insert((0, 0), one.clone());
    table.insert((0, 1), one.clone());
    table.insert((1, 0), one.clone());
    table.insert((1, 1), m1);
    table.insert((2, 2), lambda.clone());
    table.insert((3, 3), -lambda.clone());
    table.insert((2, 3), -lambda.clone());
    table.insert((3, 2), -lambda);
    PairingHandle::new(
        "H4/H4",
        &h,
        &h,
        move |a, b| table.get(&(a.as_int().unwrap(), b.as_int().unwrap())).cloned().unwrap_or_default(),
        StarMode::Off,
    )
}

/// Labels of a finite handle, or the radius-`n` window.
pub fn window_labels(h: &MhaHandle, n: usize) -> Vec<Label> {
    h.window(n)
}

/// The classical Drinfeld double `D(G)` on the basis `δ_g⊗x`, written from
/// the textbook formulas:
/// `(δ_g⊗x)(δ_h⊗y) = [g = xhx⁻¹] δ_g⊗xy`,
/// `Δ(δ_g⊗x) = Σ_{uv=g} (δ_u⊗x)⊗(δ_v⊗x)`.
pub struct ClassicalDouble {
    group: Group,
}

impl ClassicalDouble {
    pub fn new(group: &Group) -> ClassicalDouble {
        ClassicalDouble { group: group.clone() }
    }

    pub fn basis(&self) -> Vec<(usize, usize)> {
        let n = self.group.order();
        (0..n).flat_map(|g| (0..n).map(move |x| (g, x))).collect()
    }

    pub fn label(g: usize, x: usize) -> Label {
        Label::pair(lab(g), lab(x))
    }

    /// Product of two basis elements, as an optional basis element.
    pub fn product(&self, (g, x): (usize, usize), (h, y): (usize, usize)) -> Option<(usize, usize)> {
        let gr = &self.group;
        let conj = gr.mul(gr.mul(x, h), gr.inv(x));
        (g == conj).then(|| (g, gr.mul(x, y)))
    }

    pub fn product_vector(&self, p: (usize, usize), q: (usize, usize)) -> Vector {
        match self.product(p, q) {
            Some((g, x)) => Tensor::basis(Self::label(g, x)),
            None => Tensor::zero(1),
        }
    }

    /// `Δ(δ_g⊗x)` as a degree-2 tensor over pair labels.
    pub fn coproduct(&self, (g, x): (usize, usize)) -> Tensor {
        let gr = &self.group;
        let n = gr.order();
        Tensor::from_terms(
            2,
            (0..n).map(|u| {
                let v = gr.mul(gr.inv(u), g);
                (key([Self::label(u, x), Self::label(v, x)]), Scalar::one())
            }),
        )
    }

    pub fn unit(&self) -> Vector {
        let e = self.group.identity();
        Tensor::from_terms(
            1,
            (0..self.group.order()).map(|g| (key([Self::label(g, e)]), Scalar::one())),
        )
    }

    pub fn counit(&self, (g, _x): (usize, usize)) -> Scalar {
        indicator(g == self.group.identity())
    }

    /// Full multiplication table as `[(p, q, product)]`.
    pub fn multiplication_table(&self) -> Vec<(Key, Vector)> {
        let b = self.basis();
        let mut out = Vec::with_capacity(b.len() * b.len());
        for &p in &b {
            for &q in &b {
                out.push((
                    key([Self::label(p.0, p.1), Self::label(q.0, q.1)]),
                    self.product_vector(p, q),
                ));
            }
        }
        out
    }
}

/// All basis pairs of a finite group, for sweeps.
pub fn group_pairs(g: &Group) -> Vec<Key> {
    product_keys(&g.labels(), 2)
}

/// Witness that a lazy algebra has no unit: the only vector acting as the
/// identity on the radius-`n` window fails on the label `n + 1`.
pub fn no_unit_witness(h: &MhaHandle, n: usize) -> Result<Option<String>> {
    let alg = h.algebra();
    if alg.unit().is_some() || alg.is_finite() {
        return Ok(None);
    }
    let w = h.window(n);
    let outside = Label::Int(n as i64 + 1);
    let probe = Tensor::basis(outside.clone());
    Ok(Some(match alg.unit_on(&w) {
        None => format!("no vector supported on {} labels acts as identity on them", w.len()),
        Some(u) => {
            let image = alg.mul_unchecked(&u, &probe)?;
            if image == probe {
                return Ok(None);
            }
            format!("u = {u} is the identity on the window but u·δ_{outside} = {image}")
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{Direction, DoubleHandle};
    use crate::mha::CanonicalMap;
    use proptest::prelude::*;

    fn di(n: i64) -> Vector {
        Tensor::basis(Label::Int(n))
    }

    #[test]
    fn z2_pairing_has_rank_two() {
        let p = finite_group_pair(&Group::cyclic(2)).unwrap();
        assert_eq!(p.form_rank(0), (2, 2, 2));
        assert!(p.verify_pairing(&SuiteConfig::default()).all_passed());
    }

    #[test]
    fn s3_double_has_dimension_36() {
        let p = finite_group_pair(&Group::symmetric3()).unwrap();
        assert_eq!(DoubleHandle::new(&p).unwrap().window(0).len(), 36);
    }

    #[test]
    fn trivial_group_maps_are_identities() {
        let p = finite_group_pair(&Group::trivial()).unwrap();
        let x = d2(0, 0);
        for h in [p.a(), p.b()] {
            assert_eq!(h.window(0).len(), 1);
            for m in [CanonicalMap::T1, CanonicalMap::T2, CanonicalMap::T1Inv, CanonicalMap::T2Inv] {
                assert_eq!(h.canonical_map(m, &x).unwrap(), x);
            }
            assert_eq!(h.antipode(&d(0), 1).unwrap(), d(0));
        }
    }

    #[test]
    fn integers_have_no_unit() {
        let p = lazy_int_group_pair().unwrap();
        assert!(no_unit_witness(p.a(), 8).unwrap().is_some());
        assert!(no_unit_witness(p.b(), 8).unwrap().is_none());
    }

    #[test]
    fn t1_on_integers_matches_expansion() {
        // Δ(δ_0)(1⊗δ_5) = Σ_{u+v=0} δ_u⊗δ_vδ_5, expanded over a range wide enough to hit v = 5
        let mut want = Tensor::zero(2);
        for u in -10i64..=10 {
            let v = -u;
            if v == 5 {
                want.add_term(key([Label::Int(u), Label::Int(v)]), Scalar::one());
            }
        }
        let h = int_function_algebra().unwrap();
        let x = di(0).tensor(&di(5));
        assert_eq!(h.canonical_map(CanonicalMap::T1, &x).unwrap(), want);
        assert_eq!(want, di2(-5, 5));
    }

    #[test]
    fn integer_twist_is_flip() {
        let d = DoubleHandle::new(&lazy_int_group_pair().unwrap()).unwrap();
        for (n, m) in [(0, 0), (3, -2), (-4, 7)] {
            let x = di(n).tensor(&di(m));
            assert_eq!(d.twist(&x, Direction::Forward).unwrap(), di2(m, n));
        }
    }

    #[test]
    fn adapter_reproduces_group_algebras() {
        for g in [Group::cyclic(2), Group::symmetric3()] {
            let direct = group_algebra(&g).unwrap();
            let adapted = hopf_as_mha(&group_hopf_data(&g)).unwrap();
            let w = g.labels();
            let pairs = product_keys(&w, 2);
            let singles = product_keys(&w, 1);
            let (x, y) = (direct.algebra(), adapted.algebra());
            assert!(x.mul_map().agrees_on(y.mul_map(), &pairs).unwrap());
            assert!(direct.t1().agrees_on(adapted.t1(), &pairs).unwrap());
            assert!(direct.t2().agrees_on(adapted.t2(), &pairs).unwrap());
            assert!(direct.antipode_map().agrees_on(adapted.antipode_map(), &singles).unwrap());
            for l in &w {
                assert_eq!(direct.counit(&d(g.index(l))).unwrap(), adapted.counit(&d(g.index(l))).unwrap());
            }
        }
    }

    #[test]
    fn sweedler_is_a_regular_mha() {
        let h = hopf_as_mha(&sweedler_hopf_data()).unwrap();
        assert!(h.is_regular());
        let r = h.verify(&SuiteConfig::default());
        assert!(r.all_passed(), "{}", r.render());
    }

    #[test]
    fn named_groups() {
        for (name, order) in [("trivial", 1), ("Z2", 2), ("Z5", 5), ("V4", 4), ("S3", 6), ("D4", 8)] {
            assert_eq!(Group::named(name).unwrap().order(), order, "{name}");
        }
        assert!(Group::named("nope").is_err());
        assert!(!Group::symmetric3().is_abelian() && Group::klein().is_abelian());
    }

    #[test]
    fn bad_table_is_rejected() {
        let names = vec!["e".to_string(), "a".to_string()];
        assert!(Group::from_table("bad", names, vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn classical_double_unit() {
        let g = Group::symmetric3();
        let o = ClassicalDouble::new(&g);
        let one = o.unit();
        for p in o.basis() {
            let x = Tensor::basis(ClassicalDouble::label(p.0, p.1));
            let mut lhs = Tensor::zero(1);
            for (k, c) in one.terms() {
                let (a, b) = k[0].split_pair();
                lhs.add_scaled(c, &o.product_vector((g.index(a), g.index(b)), p));
            }
            assert_eq!(lhs, x);
        }
    }

    proptest! {
        #[test]
        fn group_axioms_on_d4(a in 0usize..8, b in 0usize..8, c in 0usize..8) {
            let g = Group::dihedral4();
            prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            prop_assert_eq!(g.mul(g.identity(), a), a);
        }
    }
}
