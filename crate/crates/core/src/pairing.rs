//! Pairings `⟨·,·⟩: A⊗B → k` of regular multiplier Hopf algebras.
//!
//! Conventions: `⟨aa',b⟩ = ⟨a⊗a',Δ(b)⟩`, `⟨a,bb'⟩ = ⟨Δ(a),b⊗b'⟩`, and the
//! four actions
//!
//! ```text
//! a▷b = (id⊗⟨a,·⟩)Δ(b)    b◁a = (⟨a,·⟩⊗id)Δ(b)
//! b▷a = (id⊗⟨·,b⟩)Δ(a)    a◁b = (⟨·,b⟩⊗id)Δ(a)
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::algebra::{describe_window, Algebra};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::mha::{star_legs, Cover, MhaHandle, Side, SuiteConfig};
use crate::report::{check, Check, Report};
use crate::sample;
use crate::scalar::Scalar;
use crate::tensor::{apply_on_legs, key, mixed_keys, Functional, Key, Label, LinMap, Tensor, Vector};

pub type Form = Arc<dyn Fn(&Label, &Label) -> Scalar + Send + Sync>;

/// Preimages of a basis label under one action, as `(x, y, c)` with
/// `Σ c·(x op y) = label` and `x`, `y` in the order they are written.
pub type Section = Arc<dyn Fn(&Label) -> Result<Vec<(Label, Label, Scalar)>> + Send + Sync>;

type SupportFn = Arc<dyn Fn(&Label) -> Vec<Label> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarMode {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Unverified,
    PrepairingVerified,
    PairingVerified,
}

/// Operands are passed in written order: `a▷b`, `b◁a`, `b▷a`, `a◁b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    AOnBLeft,
    AOnBRight,
    BOnALeft,
    BOnARight,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::AOnBLeft => "a▷b",
            Action::AOnBRight => "b◁a",
            Action::BOnALeft => "b▷a",
            Action::BOnARight => "a◁b",
        })
    }
}

impl Action {
    pub const ALL: [Action; 4] = [Action::AOnBLeft, Action::AOnBRight, Action::BOnALeft, Action::BOnARight];

    /// Whether the result lies in `A`.
    pub fn lands_in_a(self) -> bool {
        matches!(self, Action::BOnALeft | Action::BOnARight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RMap {
    R,
    RInv,
    RTilde,
    RTildeInv,
    ROpOp,
    ROpOpInv,
}

impl RMap {
    pub const ALL: [RMap; 6] = [RMap::R, RMap::RInv, RMap::RTilde, RMap::RTildeInv, RMap::ROpOp, RMap::ROpOpInv];

    pub fn is_inverse(self) -> bool {
        matches!(self, RMap::RInv | RMap::RTildeInv | RMap::ROpOpInv)
    }

    pub fn inverse(self) -> RMap {
        match self {
            RMap::R => RMap::RInv,
            RMap::RInv => RMap::R,
            RMap::RTilde => RMap::RTildeInv,
            RMap::RTildeInv => RMap::RTilde,
            RMap::ROpOp => RMap::ROpOpInv,
            RMap::ROpOpInv => RMap::ROpOp,
        }
    }

    /// `R̃` and its inverse act on `B⊗A`.
    pub fn on_b_first(self) -> bool {
        matches!(self, RMap::RTilde | RMap::RTildeInv)
    }

    fn index(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        match self {
            RMap::R => "R",
            RMap::RInv => "R⁻¹",
            RMap::RTilde => "R̃",
            RMap::RTildeInv => "R̃⁻¹",
            RMap::ROpOp => "R_opop",
            RMap::ROpOpInv => "R_opop⁻¹",
        }
    }

    /// Which leg of `Δ_A` and of `Δ_B` get paired, and whether `S⁻¹` hits
    /// the paired `A` leg:
    /// `R = a₁⟨a₂,b₁⟩⊗b₂`, `R̃ = b₁⟨a₁,b₂⟩⊗a₂`, `R_opop = a₂⟨a₁,b₂⟩⊗b₁`.
    fn contraction(self) -> (usize, usize, bool) {
        match self {
            RMap::R => (1, 0, false),
            RMap::RInv => (1, 0, true),
            RMap::RTilde | RMap::ROpOp => (0, 1, false),
            RMap::RTildeInv | RMap::ROpOpInv => (0, 1, true),
        }
    }
}

impl fmt::Display for RMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Surjectivity witnesses for the four actions.
#[derive(Clone)]
pub struct Sections {
    /// `b▷a` onto `A`.
    pub b_on_a_left: Section,
    /// `a◁b` onto `A`.
    pub b_on_a_right: Section,
    /// `a▷b` onto `B`.
    pub a_on_b_left: Section,
    /// `b◁a` onto `B`.
    pub a_on_b_right: Section,
}

impl Sections {
    pub fn get(&self, which: Action) -> &Section {
        match which {
            Action::AOnBLeft => &self.a_on_b_left,
            Action::AOnBRight => &self.a_on_b_right,
            Action::BOnALeft => &self.b_on_a_left,
            Action::BOnARight => &self.b_on_a_right,
        }
    }
}

struct Core {
    name: String,
    a: MhaHandle,
    b: MhaHandle,
    form: Form,
    star: StarMode,
    // for a label of B: the labels of A it pairs with, and vice versa
    support_in_a: Option<SupportFn>,
    support_in_b: Option<SupportFn>,
}

#[derive(Clone)]
pub struct PairingHandle {
    core: Arc<Core>,
    status: Status,
    supplied: Option<Sections>,
    solved: Arc<OnceLock<std::result::Result<Sections, String>>>,
    maps: Arc<[LinMap; 6]>,
}

impl fmt::Debug for PairingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairingHandle({}, {:?})", self.core.name, self.status)
    }
}

fn basis(l: &Label) -> Vector {
    Tensor::basis(l.clone())
}

impl Core {
    fn at(&self, x: &Label, y: &Label) -> Scalar {
        (self.form)(x, y)
    }

    fn eval(&self, a: &Vector, b: &Vector) -> Scalar {
        let mut s = Scalar::zero();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let v = self.at(&ka[0], &kb[0]);
                if !v.is_zero() {
                    s += &(&(ca * cb) * &v);
                }
            }
        }
        s
    }

    /// `⟨t, u⟩` for `t ∈ A⊗…⊗A`, `u ∈ B⊗…⊗B` of equal degree, leg by leg.
    fn eval_legs(&self, t: &Tensor, u: &Tensor) -> Scalar {
        let mut s = Scalar::zero();
        for (kt, ct) in t.terms() {
            for (ku, cu) in u.terms() {
                let mut v = ct * cu;
                for (x, y) in kt.iter().zip(ku.iter()) {
                    if v.is_zero() {
                        break;
                    }
                    v = &v * &self.at(x, y);
                }
                s += &v;
            }
        }
        s
    }

    /// `⟨a,·⟩` on `B`.
    fn omega_a(&self, a: &Vector) -> Functional {
        let support: Option<Vec<Label>> = match self.b.algebra().basis().labels() {
            Some(labels) => Some(
                labels
                    .iter()
                    .filter(|l| !self.eval(a, &basis(l)).is_zero())
                    .cloned()
                    .collect(),
            ),
            None => self.support_in_b.as_ref().map(|f| {
                let s: BTreeSet<Label> = a.support_labels().iter().flat_map(|l| f(l)).collect();
                s.into_iter().collect()
            }),
        };
        let (form, a) = (self.form.clone(), a.clone());
        let f = Functional::new(format!("⟨{a},·⟩"), move |l| {
            let mut s = Scalar::zero();
            for (k, c) in a.terms() {
                s += &(c * &form(&k[0], l));
            }
            s
        });
        match support {
            Some(s) => f.with_support(s),
            None => f,
        }
    }

    /// `⟨·,b⟩` on `A`.
    fn omega_b(&self, b: &Vector) -> Functional {
        let support: Option<Vec<Label>> = match self.a.algebra().basis().labels() {
            Some(labels) => Some(
                labels
                    .iter()
                    .filter(|l| !self.eval(&basis(l), b).is_zero())
                    .cloned()
                    .collect(),
            ),
            None => self.support_in_a.as_ref().map(|f| {
                let s: BTreeSet<Label> = b.support_labels().iter().flat_map(|l| f(l)).collect();
                s.into_iter().collect()
            }),
        };
        let (form, b) = (self.form.clone(), b.clone());
        let f = Functional::new(format!("⟨·,{b}⟩"), move |l| {
            let mut s = Scalar::zero();
            for (k, c) in b.terms() {
                s += &(c * &form(l, &k[0]));
            }
            s
        });
        match support {
            Some(s) => f.with_support(s),
            None => f,
        }
    }

    /// `⟨S⁻¹(·),b⟩` on `A`.
    fn omega_b_twisted(&self, b: &Vector) -> Result<Functional> {
        let s_inv = self.a.antipode_inv_map()?.clone();
        let base = self.omega_b(b);
        let support: Option<Vec<Label>> = match self.a.algebra().basis().labels() {
            Some(labels) => {
                let mut out = Vec::new();
                for l in labels {
                    if !base.eval(&s_inv.apply(&basis(l))?)?.is_zero() {
                        out.push(l.clone());
                    }
                }
                Some(out)
            }
            // ⟨S⁻¹(l),b⟩ ≠ 0 needs l in S(supp ⟨·,b⟩)
            None => match base.support() {
                Some(supp) => {
                    let mut s = BTreeSet::new();
                    for k in supp {
                        s.extend(self.a.antipode(&basis(k), 1)?.support_labels());
                    }
                    Some(s.into_iter().collect())
                }
                None => None,
            },
        };
        let inner = base.clone();
        let map = LinMap::new(format!("⟨S⁻¹(·),{b}⟩"), 1, 0, move |k| {
            Ok(Tensor::scalar(inner.eval(&s_inv.eval_key(k)?)?))
        });
        let f = Functional::from_map(map)?;
        Ok(match support {
            Some(s) => f.with_support(s),
            None => f,
        })
    }

    fn action(&self, which: Action, x: &Vector, y: &Vector) -> Result<Vector> {
        match which {
            Action::AOnBLeft => self.b.slice_element(&self.omega_a(x), Side::Right, y),
            Action::AOnBRight => self.b.slice_element(&self.omega_a(y), Side::Left, x),
            Action::BOnALeft => self.a.slice_element(&self.omega_b(x), Side::Right, y),
            Action::BOnARight => self.a.slice_element(&self.omega_b(y), Side::Left, x),
        }
    }

    /// `R`-type map on a basis key by contracting one leg of `Δ_A(a)` with
    /// one leg of `Δ_B(b)`. The coproduct of whichever side is unital is
    /// expanded; the other is sliced.
    fn direct(&self, which: RMap, k: &[Label]) -> Result<Tensor> {
        let (a, b) = if which.on_b_first() {
            (basis(&k[1]), basis(&k[0]))
        } else {
            (basis(&k[0]), basis(&k[1]))
        };
        let (pa, pb, twisted) = which.contraction();
        let side = |leg: usize| if leg == 1 { Side::Right } else { Side::Left };
        let mut out = Tensor::zero(2);
        if let Some(u) = self.b.algebra().unit() {
            let db = self.b.t1().apply(&b.tensor(u))?;
            for (kb, c) in db.terms() {
                let paired = basis(&kb[pb]);
                let f = if twisted { self.omega_b_twisted(&paired)? } else { self.omega_b(&paired) };
                let a_part = self.a.slice_element(&f, side(pa), &a)?;
                out.add_scaled(c, &a_part.tensor(&basis(&kb[1 - pb])));
            }
        } else if let Some(u) = self.a.algebra().unit() {
            let da = self.a.t1().apply(&a.tensor(u))?;
            for (ka, c) in da.terms() {
                let mut paired = basis(&ka[pa]);
                if twisted {
                    paired = self.a.antipode(&paired, -1)?;
                }
                let b_part = self.b.slice_element(&self.omega_a(&paired), side(pb), &b)?;
                out.add_scaled(c, &basis(&ka[1 - pa]).tensor(&b_part));
            }
        } else {
            return Err(Error::InsufficientCover(format!(
                "{which} on {}: neither algebra is unital; use the section formulas",
                self.name
            )));
        }
        Ok(if which.on_b_first() { out.swap() } else { out })
    }
}

impl PairingHandle {
    /// A pre-pairing candidate; nothing is verified yet.
    pub fn new<F>(name: impl Into<String>, a: &MhaHandle, b: &MhaHandle, form: F, star: StarMode) -> Result<PairingHandle>
    where
        F: Fn(&Label, &Label) -> Scalar + Send + Sync + 'static,
    {
        let name = name.into();
        for h in [a, b] {
            if !h.is_regular() {
                return Err(Error::NotRegular(h.name().to_string()));
            }
            if star == StarMode::On && !h.algebra().has_star() {
                return Err(Error::NoStar(h.algebra().name().to_string()));
            }
        }
        let core = Core {
            name,
            a: a.clone(),
            b: b.clone(),
            form: Arc::new(form),
            star,
            support_in_a: None,
            support_in_b: None,
        };
        Ok(PairingHandle::from_core(core, Status::Unverified, None))
    }

    fn from_core(core: Core, status: Status, supplied: Option<Sections>) -> PairingHandle {
        let core = Arc::new(core);
        let maps = RMap::ALL.map(|which| {
            let c = core.clone();
            LinMap::memoized(which.name(), 2, 2, move |k| c.direct(which, k))
        });
        PairingHandle {
            core,
            status,
            supplied,
            solved: Arc::new(OnceLock::new()),
            maps: Arc::new(maps),
        }
    }

    fn rebuild(&self, f: impl FnOnce(&mut Core)) -> PairingHandle {
        let c = &self.core;
        let mut core = Core {
            name: c.name.clone(),
            a: c.a.clone(),
            b: c.b.clone(),
            form: c.form.clone(),
            star: c.star,
            support_in_a: c.support_in_a.clone(),
            support_in_b: c.support_in_b.clone(),
        };
        f(&mut core);
        PairingHandle::from_core(core, self.status, self.supplied.clone())
    }

    /// Declares which labels each label pairs with nontrivially:
    /// `in_a(b) ⊇ {a : ⟨a,b⟩ ≠ 0}`, `in_b(a) ⊇ {b : ⟨a,b⟩ ≠ 0}`. Needed to
    /// slice over infinite non-unital bases.
    pub fn with_supports<F, G>(&self, in_a: F, in_b: G) -> PairingHandle
    where
        F: Fn(&Label) -> Vec<Label> + Send + Sync + 'static,
        G: Fn(&Label) -> Vec<Label> + Send + Sync + 'static,
    {
        self.rebuild(|c| {
            c.support_in_a = Some(Arc::new(in_a));
            c.support_in_b = Some(Arc::new(in_b));
        })
    }

    /// Declares surjectivity witnesses for the actions.
    pub fn with_sections(mut self, sections: Sections) -> Result<PairingHandle> {
        self.supplied = Some(sections);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.core.name
    }

    pub fn a(&self) -> &MhaHandle {
        &self.core.a
    }

    pub fn b(&self) -> &MhaHandle {
        &self.core.b
    }

    pub fn star_mode(&self) -> StarMode {
        self.core.star
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_finite(&self) -> bool {
        self.core.a.is_finite() && self.core.b.is_finite()
    }

    pub fn form_at(&self, a: &Label, b: &Label) -> Scalar {
        self.core.at(a, b)
    }

    /// Bilinear extension of the form.
    pub fn eval(&self, a: &Vector, b: &Vector) -> Result<Scalar> {
        check_basis(self.core.a.algebra(), a)?;
        check_basis(self.core.b.algebra(), b)?;
        Ok(self.core.eval(a, b))
    }

    /// `⟨t,u⟩` leg by leg, for tensors over `A` and over `B`.
    pub fn eval_legs(&self, t: &Tensor, u: &Tensor) -> Result<Scalar> {
        if t.degree() != u.degree() {
            return Err(Error::ArityMismatch {
                expected: t.degree(),
                got: u.degree(),
            });
        }
        Ok(self.core.eval_legs(t, u))
    }

    /// `⟨a,·⟩` as a functional on `B`.
    pub fn omega_a(&self, a: &Vector) -> Functional {
        self.core.omega_a(a)
    }

    /// `⟨·,b⟩` as a functional on `A`.
    pub fn omega_b(&self, b: &Vector) -> Functional {
        self.core.omega_b(b)
    }

    pub fn action(&self, which: Action, x: &Vector, y: &Vector) -> Result<Vector> {
        let (ax, ay) = match which {
            Action::AOnBLeft | Action::BOnARight => (self.core.a.algebra(), self.core.b.algebra()),
            Action::AOnBRight | Action::BOnALeft => (self.core.b.algebra(), self.core.a.algebra()),
        };
        check_basis(ax, x)?;
        check_basis(ay, y)?;
        self.core.action(which, x, y)
    }

    fn action_labels(&self, which: Action, x: &Label, y: &Label) -> Result<Vector> {
        self.core.action(which, &basis(x), &basis(y))
    }

    /// The memoized map (direct evaluation).
    pub fn r_linmap(&self, which: RMap) -> Result<&LinMap> {
        if which.is_inverse() && self.status < Status::PairingVerified {
            return Err(Error::NotPairingVerified(format!("{which} on {}", self.core.name)));
        }
        Ok(&self.maps[which.index()])
    }

    fn r_unchecked(&self, which: RMap) -> &LinMap {
        &self.maps[which.index()]
    }

    /// `R`, `R̃`, `R^op_op` and inverses on a degree-2 tensor over `A⊗B`
    /// (`B⊗A` for `R̃`).
    pub fn r_map(&self, which: RMap, x: &Tensor) -> Result<Tensor> {
        self.r_linmap(which)?.apply(x)
    }

    /// The same maps through the action formulas: express one factor
    /// through a section of a surjective action, then
    /// `R(b▷a⊗b') = (b'₁b)▷a⊗b'₂`, `R⁻¹(b▷a⊗b') = S⁻¹(S(b)b'₁)▷a⊗b'₂`,
    /// `R(a⊗b◁a') = a₁⊗b◁(a'a₂)`, `R⁻¹(a⊗b◁a') = a₁⊗b◁S⁻¹(a₂S(a'))`,
    /// `R_opop(a◁b⊗b') = a◁(bb'₂)⊗b'₁`,
    /// `R_opop⁻¹(a◁b⊗b') = a◁S⁻¹(b'₂S(b))⊗b'₁`,
    /// `R_opop(a⊗a'▷b) = a₂⊗(a₁a')▷b`,
    /// `R_opop⁻¹(a⊗a'▷b) = a₂⊗S⁻¹(S(a')a₁)▷b`.
    /// `variant` 0 resolves the `A` factor, 1 the `B` factor.
    pub fn r_map_sections(&self, which: RMap, variant: usize, x: &Tensor) -> Result<Tensor> {
        if which.is_inverse() && self.status < Status::PairingVerified {
            return Err(Error::NotPairingVerified(format!("{which} on {}", self.core.name)));
        }
        self.sectioned(which, variant, x)
    }

    fn sectioned(&self, which: RMap, variant: usize, x: &Tensor) -> Result<Tensor> {
        let mut out = Tensor::zero(2);
        for (k, c) in x.terms() {
            out.add_scaled(c, &self.sectioned_key(which, variant, k)?);
        }
        Ok(out)
    }

    fn sectioned_key(&self, which: RMap, variant: usize, k: &[Label]) -> Result<Tensor> {
        let (a, b) = (&self.core.a, &self.core.b);
        let secs = self.sections()?;
        let (l, m) = (&k[0], &k[1]);
        let mut out = Tensor::zero(2);
        match (which, variant) {
            (RMap::R | RMap::RInv, 0) => {
                for (x, y, c) in (secs.b_on_a_left)(l)? {
                    let d = if which == RMap::R {
                        b.delta_covered(&basis(m), [None, None], [Some(&basis(&x)), None])?
                    } else {
                        let sx = b.antipode(&basis(&x), 1)?;
                        b.delta_covered(&basis(m), [Some(&sx), None], [None, None])?
                    };
                    for (kd, cd) in d.terms() {
                        let mut u = basis(&kd[0]);
                        if which == RMap::RInv {
                            u = b.antipode(&u, -1)?;
                        }
                        let left = self.core.action(Action::BOnALeft, &u, &basis(&y))?;
                        out.add_scaled(&(&c * cd), &left.tensor(&basis(&kd[1])));
                    }
                }
            }
            (RMap::R | RMap::RInv, 1) => {
                for (x, y, c) in (secs.a_on_b_right)(m)? {
                    let d = if which == RMap::R {
                        a.delta_covered(&basis(l), [None, Some(&basis(&y))], [None, None])?
                    } else {
                        let sy = a.antipode(&basis(&y), 1)?;
                        a.delta_covered(&basis(l), [None, None], [None, Some(&sy)])?
                    };
                    for (kd, cd) in d.terms() {
                        let mut v = basis(&kd[1]);
                        if which == RMap::RInv {
                            v = a.antipode(&v, -1)?;
                        }
                        let right = self.core.action(Action::AOnBRight, &basis(&x), &v)?;
                        out.add_scaled(&(&c * cd), &basis(&kd[0]).tensor(&right));
                    }
                }
            }
            (RMap::ROpOp | RMap::ROpOpInv, 0) => {
                for (x, y, c) in (secs.b_on_a_right)(l)? {
                    let d = if which == RMap::ROpOp {
                        b.delta_covered(&basis(m), [None, Some(&basis(&y))], [None, None])?
                    } else {
                        let sy = b.antipode(&basis(&y), 1)?;
                        b.delta_covered(&basis(m), [None, None], [None, Some(&sy)])?
                    };
                    for (kd, cd) in d.terms() {
                        let mut v = basis(&kd[1]);
                        if which == RMap::ROpOpInv {
                            v = b.antipode(&v, -1)?;
                        }
                        let left = self.core.action(Action::BOnARight, &basis(&x), &v)?;
                        out.add_scaled(&(&c * cd), &left.tensor(&basis(&kd[0])));
                    }
                }
            }
            (RMap::ROpOp | RMap::ROpOpInv, 1) => {
                for (x, y, c) in (secs.a_on_b_left)(m)? {
                    let d = if which == RMap::ROpOp {
                        a.delta_covered(&basis(l), [None, None], [Some(&basis(&x)), None])?
                    } else {
                        let sx = a.antipode(&basis(&x), 1)?;
                        a.delta_covered(&basis(l), [Some(&sx), None], [None, None])?
                    };
                    for (kd, cd) in d.terms() {
                        let mut u = basis(&kd[0]);
                        if which == RMap::ROpOpInv {
                            u = a.antipode(&u, -1)?;
                        }
                        let right = self.core.action(Action::AOnBLeft, &u, &basis(&y))?;
                        out.add_scaled(&(&c * cd), &basis(&kd[1]).tensor(&right));
                    }
                }
            }
            _ => {
                return Err(Error::Unavailable(format!("no section formula for {which} (variant {variant})")));
            }
        }
        Ok(out)
    }

    /// Supplied sections, or on finite bases sections solved exactly.
    pub fn sections(&self) -> Result<Sections> {
        if let Some(s) = &self.supplied {
            return Ok(s.clone());
        }
        if !self.is_finite() {
            return Err(Error::Unavailable(format!(
                "{}: lazy pairings need supplied action sections",
                self.core.name
            )));
        }
        self.solved
            .get_or_init(|| self.solve_sections())
            .clone()
            .map_err(Error::NotPairingVerified)
    }

    fn solve_sections(&self) -> std::result::Result<Sections, String> {
        let mut out: Vec<Section> = Vec::new();
        for which in [Action::BOnALeft, Action::BOnARight, Action::AOnBLeft, Action::AOnBRight] {
            let (xs, ys) = self.operand_labels(which, None);
            let mut e = Echelon::new();
            let mut cols: Vec<(Label, Label)> = Vec::new();
            for x in &xs {
                for y in &ys {
                    let v = self.action_labels(which, x, y).map_err(|e| e.to_string())?;
                    e.insert(&v);
                    cols.push((x.clone(), y.clone()));
                }
            }
            let target = if which.lands_in_a() { self.core.a.window(0) } else { self.core.b.window(0) };
            let mut table = std::collections::BTreeMap::new();
            for l in target {
                let sol = e
                    .solve(&basis(&l))
                    .ok_or_else(|| format!("{which} does not reach {l}"))?;
                let combo: Vec<(Label, Label, Scalar)> = sol
                    .into_iter()
                    .map(|(j, c)| (cols[j].0.clone(), cols[j].1.clone(), c))
                    .collect();
                table.insert(l, combo);
            }
            let table = Arc::new(table);
            out.push(Arc::new(move |l: &Label| {
                table
                    .get(l)
                    .cloned()
                    .ok_or_else(|| Error::BasisMismatch(format!("{l} is not a basis label")))
            }));
        }
        let mut it = out.into_iter();
        Ok(Sections {
            b_on_a_left: it.next().expect("section"),
            b_on_a_right: it.next().expect("section"),
            a_on_b_left: it.next().expect("section"),
            a_on_b_right: it.next().expect("section"),
        })
    }

    /// Operand label sets of an action in written order, over the whole
    /// basis or the radius-`n` window.
    fn operand_labels(&self, which: Action, n: Option<usize>) -> (Vec<Label>, Vec<Label>) {
        let n = n.unwrap_or(0);
        let (wa, wb) = (self.core.a.window(n), self.core.b.window(n));
        match which {
            Action::AOnBLeft | Action::BOnARight => (wa, wb),
            Action::AOnBRight | Action::BOnALeft => (wb, wa),
        }
    }

    /// The pairing of `A^op_op` with `B^op_op`: same form, opposite
    /// products and coproducts.
    pub fn op_op_pairing(&self) -> Result<PairingHandle> {
        let (a, b) = (self.core.a.op_op()?, self.core.b.op_op()?);
        let c = &self.core;
        let core = Core {
            name: format!("({})^op_op", c.name),
            a,
            b,
            form: c.form.clone(),
            star: c.star,
            support_in_a: c.support_in_a.clone(),
            support_in_b: c.support_in_b.clone(),
        };
        // b▷'a = a◁b and so on: every section swaps its operands
        let flip = |s: &Section| -> Section {
            let s = s.clone();
            Arc::new(move |l: &Label| Ok(s(l)?.into_iter().map(|(x, y, c)| (y, x, c)).collect()))
        };
        let supplied = self.supplied.as_ref().map(|s| Sections {
            b_on_a_left: flip(&s.b_on_a_right),
            b_on_a_right: flip(&s.b_on_a_left),
            a_on_b_left: flip(&s.a_on_b_right),
            a_on_b_right: flip(&s.a_on_b_left),
        });
        Ok(PairingHandle::from_core(core, self.status, supplied))
    }

    /// First structural difference from `other` on the window: form,
    /// products, canonical maps and antipodes.
    pub fn difference(&self, other: &PairingHandle, n: usize) -> Result<Option<String>> {
        let (wa, wb) = (self.core.a.window(n), self.core.b.window(n));
        for x in &wa {
            for y in &wb {
                if self.form_at(x, y) != other.form_at(x, y) {
                    return Ok(Some(format!("form at ({x},{y})")));
                }
            }
        }
        for (h, g, w) in [(&self.core.a, &other.core.a, &wa), (&self.core.b, &other.core.b, &wb)] {
            let pairs = mixed_keys(&[w, w]);
            let singles: Vec<Key> = w.iter().map(|l| key([l.clone()])).collect();
            if let Some((k, _, _)) = h.algebra().mul_map().first_difference(g.algebra().mul_map(), &pairs)? {
                return Ok(Some(format!("product of {} at {k:?}", h.name())));
            }
            for (m1, m2, what) in [(h.t1(), g.t1(), "T1"), (h.t2(), g.t2(), "T2")] {
                if let Some((k, _, _)) = m1.first_difference(m2, &pairs)? {
                    return Ok(Some(format!("{what} of {} at {k:?}", h.name())));
                }
            }
            if let Some((k, _, _)) = h.antipode_map().first_difference(g.antipode_map(), &singles)? {
                return Ok(Some(format!("antipode of {} at {k:?}", h.name())));
            }
        }
        Ok(None)
    }

    /// Rank of the form on the windows, against both window sizes.
    pub fn form_rank(&self, n: usize) -> (usize, usize, usize) {
        let (wa, wb) = (self.core.a.window(n), self.core.b.window(n));
        let rows: Vec<Tensor> = wa
            .iter()
            .map(|x| Tensor::from_terms(1, wb.iter().map(|y| (key([y.clone()]), self.form_at(x, y)))))
            .collect();
        (crate::linalg::rank(&rows), wa.len(), wb.len())
    }

    /// Full rank both ways on the windows.
    pub fn is_nondegenerate(&self, n: usize) -> bool {
        let (r, na, nb) = self.form_rank(n);
        r == na && r == nb
    }

    /// Runs the pre-pairing and pairing checks and marks the handle as a
    /// verified pairing, or returns the first failure.
    pub fn certify(&self, cfg: &SuiteConfig) -> Result<PairingHandle> {
        self.verify_prepairing(cfg).into_result()?;
        let mut h = self.clone();
        h.status = Status::PrepairingVerified;
        h.verify_pairing(cfg).into_result()?;
        h.status = Status::PairingVerified;
        Ok(h)
    }

    /// Marks the handle as a verified pairing without checking.
    pub fn assume_pairing(&self) -> PairingHandle {
        let mut h = self.clone();
        h.status = Status::PairingVerified;
        h
    }

    fn windows(&self, cfg: &SuiteConfig) -> (Vec<Label>, Vec<Label>, String) {
        let (wa, wb) = (self.core.a.window(cfg.window), self.core.b.window(cfg.window));
        let desc = format!(
            "A {} / B {}",
            describe_window(&wa, self.core.a.is_finite()),
            describe_window(&wb, self.core.b.is_finite())
        );
        (wa, wb, desc)
    }

    /// Pre-pairing axioms, module laws and (when non-degenerate) bimodule
    /// compatibility.
    pub fn verify_prepairing(&self, cfg: &SuiteConfig) -> Report {
        let mut r = Report::new(format!("pre-pairing: {}", self.core.name));
        let (wa, wb, desc) = self.windows(cfg);
        let mut rng = sample::rng(cfg.seed);
        let c = &self.core;

        // slices land in the algebra: the slice multiplier is the element
        for (name, in_a) in [("slices of Δ_B lie in B", false), ("slices of Δ_A lie in A", true)] {
            let probes = if in_a { wa.clone() } else { wb.clone() };
            let (cases, exhaustive) = sample::mixed(
                &mut rng,
                &[&wa, &wb, &probes],
                cfg.triple_limit,
                cfg.samples,
            );
            r.push(
                check(name, &desc, |cs| {
                    for t in &cases {
                        let (x, y, p) = (&t[0], &t[1], basis(&t[2]));
                        for side in [Side::Left, Side::Right] {
                            let (h, omega, target) = if in_a {
                                (&c.a, c.omega_b(&basis(y)), basis(x))
                            } else {
                                (&c.b, c.omega_a(&basis(x)), basis(y))
                            };
                            let m = h.slice(&omega, side, &target);
                            let e = h.slice_element(&omega, side, &target)?;
                            let alg = h.algebra();
                            let (l1, r1) = (m.apply_left(&p)?, alg.mul_unchecked(&e, &p)?);
                            cs.expect_eq(&l1, &r1, || format!("{side} slice of Δ({target}) by {} times {p}", omega.name()))?;
                            let (l2, r2) = (m.apply_right(&p)?, alg.mul_unchecked(&p, &e)?);
                            cs.expect_eq(&l2, &r2, || format!("{p} times {side} slice of Δ({target}) by {}", omega.name()))?;
                        }
                    }
                    Ok(())
                })
                .with_note(sample::describe_tuples(cases.len(), exhaustive, wa.len() * wb.len() * probes.len())),
            );
        }

        // ⟨a,a'▷b⟩ = ⟨a',b◁a⟩ = ⟨aa',b⟩
        let (cases, ex) = sample::mixed(&mut rng, &[&wa, &wa, &wb], cfg.triple_limit, cfg.samples);
        r.push(
            check("slices multiply on A: ⟨a,a'▷b⟩ = ⟨a',b◁a⟩ = ⟨aa',b⟩", &desc, |cs| {
                for t in &cases {
                    let (a, a2, b) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                    let l = c.eval(&a, &c.action(Action::AOnBLeft, &a2, &b)?);
                    let m = c.eval(&a2, &c.action(Action::AOnBRight, &b, &a)?);
                    let rr = c.eval(&c.a.algebra().mul_unchecked(&a, &a2)?, &b);
                    cs.expect(l == m && m == rr, || {
                        format!("(a,a',b) = ({},{},{}): {l}, {m}, {rr}", t[0], t[1], t[2])
                    })?;
                }
                Ok(())
            })
            .with_note(sample::describe_tuples(cases.len(), ex, sample::product_size(&[&wa, &wa, &wb]))),
        );
        // ⟨b'▷a,b⟩ = ⟨a◁b,b'⟩ = ⟨a,bb'⟩
        let (cases, ex) = sample::mixed(&mut rng, &[&wb, &wb, &wa], cfg.triple_limit, cfg.samples);
        r.push(
            check("slices multiply on B: ⟨b'▷a,b⟩ = ⟨a◁b,b'⟩ = ⟨a,bb'⟩", &desc, |cs| {
                for t in &cases {
                    let (b, b2, a) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                    let l = c.eval(&c.action(Action::BOnALeft, &b2, &a)?, &b);
                    let m = c.eval(&c.action(Action::BOnARight, &a, &b)?, &b2);
                    let rr = c.eval(&a, &c.b.algebra().mul_unchecked(&b, &b2)?);
                    cs.expect(l == m && m == rr, || {
                        format!("(b,b',a) = ({},{},{}): {l}, {m}, {rr}", t[0], t[1], t[2])
                    })?;
                }
                Ok(())
            })
            .with_note(sample::describe_tuples(cases.len(), ex, sample::product_size(&[&wb, &wb, &wa]))),
        );

        // module laws
        let (ta, exa) = sample::mixed(&mut rng, &[&wa, &wa, &wb], cfg.triple_limit, cfg.samples);
        r.push(check("A acts on B from both sides", &desc, |cs| {
            let m = c.a.algebra();
            for t in &ta {
                let (a, a2, b) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                let aa = m.mul_unchecked(&a, &a2)?;
                let l = c.action(Action::AOnBLeft, &aa, &b)?;
                let rr = c.action(Action::AOnBLeft, &a, &c.action(Action::AOnBLeft, &a2, &b)?)?;
                cs.expect_eq(&l, &rr, || format!("(aa')▷b at ({},{},{})", t[0], t[1], t[2]))?;
                let l = c.action(Action::AOnBRight, &b, &aa)?;
                let rr = c.action(Action::AOnBRight, &c.action(Action::AOnBRight, &b, &a)?, &a2)?;
                cs.expect_eq(&l, &rr, || format!("b◁(aa') at ({},{},{})", t[0], t[1], t[2]))?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(ta.len(), exa, sample::product_size(&[&wa, &wa, &wb]))));
        let (tb, exb) = sample::mixed(&mut rng, &[&wb, &wb, &wa], cfg.triple_limit, cfg.samples);
        r.push(check("B acts on A from both sides", &desc, |cs| {
            let m = c.b.algebra();
            for t in &tb {
                let (b, b2, a) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                let bb = m.mul_unchecked(&b, &b2)?;
                let l = c.action(Action::BOnALeft, &bb, &a)?;
                let rr = c.action(Action::BOnALeft, &b, &c.action(Action::BOnALeft, &b2, &a)?)?;
                cs.expect_eq(&l, &rr, || format!("(bb')▷a at ({},{},{})", t[0], t[1], t[2]))?;
                let l = c.action(Action::BOnARight, &a, &bb)?;
                let rr = c.action(Action::BOnARight, &c.action(Action::BOnARight, &a, &b)?, &b2)?;
                cs.expect_eq(&l, &rr, || format!("a◁(bb') at ({},{},{})", t[0], t[1], t[2]))?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(tb.len(), exb, sample::product_size(&[&wb, &wb, &wa]))));

        let (rank, na, nb) = self.form_rank(cfg.window);
        let nondeg = rank == na && rank == nb;
        r.push(check("form is non-degenerate on the window", &desc, |cs| {
            cs.expect(nondeg, || format!("rank {rank} with {na}×{nb} labels"))
        }));
        if nondeg {
            let (tb, exb) = sample::mixed(&mut rng, &[&wb, &wa, &wb], cfg.triple_limit, cfg.samples);
            r.push(check("actions commute: (b▷a)◁b' = b▷(a◁b')", &desc, |cs| {
                for t in &tb {
                    let (b, a, b2) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                    let l = c.action(Action::BOnARight, &c.action(Action::BOnALeft, &b, &a)?, &b2)?;
                    let rr = c.action(Action::BOnALeft, &b, &c.action(Action::BOnARight, &a, &b2)?)?;
                    cs.expect_eq(&l, &rr, || format!("at ({},{},{})", t[0], t[1], t[2]))?;
                }
                Ok(())
            })
            .with_note(sample::describe_tuples(tb.len(), exb, sample::product_size(&[&wb, &wa, &wb]))));
            let (ta, exa) = sample::mixed(&mut rng, &[&wa, &wb, &wa], cfg.triple_limit, cfg.samples);
            r.push(check("actions commute: (a▷b)◁a' = a▷(b◁a')", &desc, |cs| {
                for t in &ta {
                    let (a, b, a2) = (basis(&t[0]), basis(&t[1]), basis(&t[2]));
                    let l = c.action(Action::AOnBRight, &c.action(Action::AOnBLeft, &a, &b)?, &a2)?;
                    let rr = c.action(Action::AOnBLeft, &a, &c.action(Action::AOnBRight, &b, &a2)?)?;
                    cs.expect_eq(&l, &rr, || format!("at ({},{},{})", t[0], t[1], t[2]))?;
                }
                Ok(())
            })
            .with_note(sample::describe_tuples(ta.len(), exa, sample::product_size(&[&wa, &wb, &wa]))));
        } else {
            r.push(Check::skipped("actions commute", "form is degenerate on the window"));
        }
        r
    }

    /// Conditions making a pre-pairing a pairing. On finite bases all six
    /// equivalent conditions are computed independently and required to
    /// agree; on lazy bases the supplied sections and inverse formulas are
    /// checked on the window.
    pub fn verify_pairing(&self, cfg: &SuiteConfig) -> Report {
        let mut r = Report::new(format!("pairing: {}", self.core.name));
        let (wa, wb, desc) = self.windows(cfg);
        if self.is_finite() {
            let conditions = [
                ("R(A⊗B) = A⊗B", Cond::Bijective(RMap::R)),
                ("b▷a onto A", Cond::Onto(Action::BOnALeft)),
                ("b◁a onto B", Cond::Onto(Action::AOnBRight)),
                ("R̃(B⊗A) = B⊗A", Cond::Bijective(RMap::RTilde)),
                ("a▷b onto B", Cond::Onto(Action::AOnBLeft)),
                ("a◁b onto A", Cond::Onto(Action::BOnARight)),
            ];
            let mut outcomes = Vec::new();
            for (name, cond) in conditions {
                let c = check(name, &desc, |cs| self.condition(cond, cs));
                outcomes.push(c.status);
                r.push(c);
            }
            let agree = outcomes.windows(2).all(|w| w[0] == w[1]);
            r.push(check("the six conditions agree", &desc, |cs| {
                cs.expect(agree, || format!("outcomes {outcomes:?}"))
            }));
        } else {
            for which in Action::ALL {
                r.push(check(&format!("{which} section on the window"), &desc, |cs| {
                    let secs = self.sections()?;
                    let targets = if which.lands_in_a() { &wa } else { &wb };
                    for l in targets {
                        let mut sum = Tensor::zero(1);
                        for (x, y, c) in secs.get(which)(l)? {
                            sum.add_scaled(&c, &self.action_labels(which, &x, &y)?);
                        }
                        cs.expect_eq(&sum, &basis(l), || format!("section of {l}"))?;
                    }
                    Ok(())
                }));
            }
            r.note("surjectivity on an infinite basis is verified on the window only");
        }
        for which in [RMap::R, RMap::RTilde, RMap::ROpOp] {
            let inv = which.inverse();
            let keys = if which.on_b_first() { mixed_keys(&[&wb, &wa]) } else { mixed_keys(&[&wa, &wb]) };
            let (f, g) = (self.r_unchecked(which), self.r_unchecked(inv));
            r.push(check(&format!("{inv} inverts {which}"), &desc, |cs| {
                for k in &keys {
                    let x = Tensor::basis_key(k.clone());
                    let y = f.apply(&x)?;
                    cs.expect_eq(&g.apply(&y)?, &x, || format!("{inv}∘{which} at {k:?}"))?;
                    let z = g.apply(&x)?;
                    cs.expect_eq(&f.apply(&z)?, &x, || format!("{which}∘{inv} at {k:?}"))?;
                }
                Ok(())
            }));
        }
        if self.core.star == StarMode::On {
            let (first, second) = self.star_checks(&wa, &wb, &desc);
            let held = match (first.passed(), second.passed()) {
                (true, true) => "both star conditions held",
                (true, false) => "only ⟨a*,b⟩ = conj⟨a,S(b)*⟩ held",
                (false, true) => "only ⟨a,b*⟩ = conj⟨S(a)*,b⟩ held",
                (false, false) => "neither star condition held",
            };
            r.push(first);
            r.push(second);
            r.note(held);
        }
        r
    }

    fn condition(&self, cond: Cond, cs: &mut crate::report::Cases) -> Result<()> {
        let (la, lb) = (self.core.a.window(0), self.core.b.window(0));
        let mut e = Echelon::new();
        let want = match cond {
            Cond::Bijective(which) => {
                let keys = if which.on_b_first() { mixed_keys(&[&lb, &la]) } else { mixed_keys(&[&la, &lb]) };
                let f = self.r_unchecked(which);
                for k in &keys {
                    e.insert(&f.eval_key(k)?);
                }
                keys.len()
            }
            Cond::Onto(which) => {
                let (xs, ys) = self.operand_labels(which, None);
                for x in &xs {
                    for y in &ys {
                        e.insert(&self.action_labels(which, x, y)?);
                    }
                }
                if which.lands_in_a() { la.len() } else { lb.len() }
            }
        };
        cs.expect(e.rank() == want, || format!("rank {} of {want}", e.rank()))
    }

    fn star_checks(&self, wa: &[Label], wb: &[Label], desc: &str) -> (Check, Check) {
        let c = &self.core;
        let (aa, ba) = (c.a.algebra(), c.b.algebra());
        let first = check("star: ⟨a*,b⟩ = conj⟨a,S(b)*⟩", desc, |cs| {
            for x in wa {
                for y in wb {
                    let l = c.eval(&aa.star(&basis(x))?, &basis(y));
                    let rr = c.eval(&basis(x), &ba.star(&c.b.antipode(&basis(y), 1)?)?).conj();
                    cs.expect_eq(&l, &rr, || format!("(a,b) = ({x},{y})"))?;
                }
            }
            Ok(())
        });
        let second = check("star: ⟨a,b*⟩ = conj⟨S(a)*,b⟩", desc, |cs| {
            for x in wa {
                for y in wb {
                    let l = c.eval(&basis(x), &ba.star(&basis(y))?);
                    let rr = c.eval(&aa.star(&c.a.antipode(&basis(x), 1)?)?, &basis(y)).conj();
                    cs.expect_eq(&l, &rr, || format!("(a,b) = ({x},{y})"))?;
                }
            }
            Ok(())
        });
        (first, second)
    }

    /// Derived identities of pairings: adjointness of the actions, their
    /// compatibility with coproducts, antipodes and stars, and the
    /// relations among the `R` maps.
    pub fn verify_properties(&self, cfg: &SuiteConfig) -> Report {
        let mut r = Report::new(format!("pairing properties: {}", self.core.name));
        let (wa, wb, desc) = self.windows(cfg);
        let mut rng = sample::rng(cfg.seed.wrapping_add(1));
        let c = &self.core;
        let (ma, mb) = (c.a.algebra(), c.b.algebra());

        let (t, ex) = sample::mixed(&mut rng, &[&wa, &wa, &wb, &wb], cfg.triple_limit, cfg.samples);
        let total = sample::product_size(&[&wa, &wa, &wb, &wb]);
        r.push(check("actions are adjoint to products", &desc, |cs| {
            for q in &t {
                let (a, a2, b, b2) = (basis(&q[0]), basis(&q[1]), basis(&q[2]), basis(&q[3]));
                let l = c.eval(&c.action(Action::BOnALeft, &b, &a)?, &b2);
                cs.expect_eq(&l, &c.eval(&a, &mb.mul_unchecked(&b2, &b)?), || format!("⟨b▷a,b'⟩ at {q:?}"))?;
                let l = c.eval(&c.action(Action::BOnARight, &a, &b)?, &b2);
                cs.expect_eq(&l, &c.eval(&a, &mb.mul_unchecked(&b, &b2)?), || format!("⟨a◁b,b'⟩ at {q:?}"))?;
                let l = c.eval(&a, &c.action(Action::AOnBLeft, &a2, &b)?);
                cs.expect_eq(&l, &c.eval(&ma.mul_unchecked(&a, &a2)?, &b), || format!("⟨a,a'▷b⟩ at {q:?}"))?;
                let l = c.eval(&a, &c.action(Action::AOnBRight, &b, &a2)?);
                cs.expect_eq(&l, &c.eval(&ma.mul_unchecked(&a2, &a)?, &b), || format!("⟨a,b◁a'⟩ at {q:?}"))?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(t.len(), ex, total)));

        r.push(check("⟨T2(a⊗a'),b⊗b'⟩ = ⟨a⊗a',T1(b⊗b')⟩", &desc, |cs| {
            for q in &t {
                let x = Tensor::basis_key(key([q[0].clone(), q[1].clone()]));
                let y = Tensor::basis_key(key([q[2].clone(), q[3].clone()]));
                let l = c.eval_legs(&c.a.t2().apply(&x)?, &y);
                let rr = c.eval_legs(&x, &c.b.t1().apply(&y)?);
                cs.expect_eq(&l, &rr, || format!("at {q:?}"))?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(t.len(), ex, total)));

        let (t, ex) = sample::mixed(&mut rng, &[&wa, &wb, &wa, &wb], cfg.triple_limit, cfg.samples / 2);
        let total = sample::product_size(&[&wa, &wb, &wa, &wb]);
        r.push(check("coproducts of actions", &desc, |cs| {
            for q in &t {
                self.coproduct_of_actions(q, cs)?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(t.len(), ex, total)));

        r.push(check("⟨S(a),b⟩ = ⟨a,S(b)⟩", &desc, |cs| {
            for x in &wa {
                for y in &wb {
                    let l = c.eval(&c.a.antipode(&basis(x), 1)?, &basis(y));
                    let rr = c.eval(&basis(x), &c.b.antipode(&basis(y), 1)?);
                    cs.expect_eq(&l, &rr, || format!("(a,b) = ({x},{y})"))?;
                }
            }
            Ok(())
        }));

        r.push(check("antipodes reverse actions", &desc, |cs| {
            for x in &wa {
                for y in &wb {
                    let (a, b) = (basis(x), basis(y));
                    for p in [1, -1] {
                        let l = c.a.antipode(&c.action(Action::BOnALeft, &b, &a)?, p)?;
                        let rr = c.action(Action::BOnARight, &c.a.antipode(&a, p)?, &c.b.antipode(&b, -p)?)?;
                        cs.expect_eq(&l, &rr, || format!("S^{p}(b▷a) at ({x},{y})"))?;
                        let l = c.b.antipode(&c.action(Action::AOnBLeft, &a, &b)?, p)?;
                        let rr = c.action(Action::AOnBRight, &c.b.antipode(&b, p)?, &c.a.antipode(&a, -p)?)?;
                        cs.expect_eq(&l, &rr, || format!("S^{p}(a▷b) at ({x},{y})"))?;
                    }
                }
            }
            Ok(())
        }));

        r.push(check("actions are non-degenerate", &desc, |cs| {
            for which in Action::ALL {
                let (xs, ys) = self.operand_labels(which, Some(cfg.window));
                // fix the acted-on operand, look for an acting one
                let acted_is_y = matches!(which, Action::AOnBLeft | Action::BOnALeft);
                let (acted, acting) = if acted_is_y { (&ys, &xs) } else { (&xs, &ys) };
                for t in acted {
                    let mut found = false;
                    for s in acting {
                        let v = if acted_is_y {
                            self.action_labels(which, s, t)?
                        } else {
                            self.action_labels(which, t, s)?
                        };
                        if !v.is_zero() {
                            found = true;
                            break;
                        }
                    }
                    cs.expect(found, || format!("{which}: {t} is killed by the whole window"))?;
                }
            }
            Ok(())
        }));

        if c.star == StarMode::On {
            r.push(check("stars of actions", &desc, |cs| {
                for x in &wa {
                    for y in &wb {
                        let (a, b) = (basis(x), basis(y));
                        let (sa, sb) = (ma.star(&a)?, mb.star(&b)?);
                        let sab = ma.star(&c.a.antipode(&a, 1)?)?;
                        let sbb = mb.star(&c.b.antipode(&b, 1)?)?;
                        let l = ma.star(&c.action(Action::BOnARight, &a, &b)?)?;
                        cs.expect_eq(&l, &c.action(Action::BOnARight, &sa, &sbb)?, || format!("(a◁b)* at ({x},{y})"))?;
                        let l = ma.star(&c.action(Action::BOnALeft, &b, &a)?)?;
                        cs.expect_eq(&l, &c.action(Action::BOnALeft, &sbb, &sa)?, || format!("(b▷a)* at ({x},{y})"))?;
                        let l = mb.star(&c.action(Action::AOnBRight, &b, &a)?)?;
                        cs.expect_eq(&l, &c.action(Action::AOnBRight, &sb, &sab)?, || format!("(b◁a)* at ({x},{y})"))?;
                        let l = mb.star(&c.action(Action::AOnBLeft, &a, &b)?)?;
                        cs.expect_eq(&l, &c.action(Action::AOnBLeft, &sab, &sb)?, || format!("(a▷b)* at ({x},{y})"))?;
                    }
                }
                Ok(())
            }));
        } else {
            r.push(Check::skipped("stars of actions", "star mode off"));
        }

        let pairs = mixed_keys(&[&wa, &wb]);
        let (pairs, ex) = if pairs.len() <= cfg.triple_limit {
            (pairs, true)
        } else {
            let (t, _) = sample::mixed(&mut rng, &[&wa, &wb], 0, cfg.samples);
            (t.into_iter().map(key).collect(), false)
        };
        let npairs = wa.len() * wb.len();
        let section_maps = [RMap::R, RMap::RInv, RMap::ROpOp, RMap::ROpOpInv];
        r.push(check("action formulas for R and R_opop", &desc, |cs| {
            for which in section_maps {
                for variant in [0, 1] {
                    for k in &pairs {
                        let x = Tensor::basis_key(k.clone());
                        let direct = self.r_unchecked(which).apply(&x)?;
                        let fast = self.sectioned(which, variant, &x)?;
                        cs.expect_eq(&fast, &direct, || format!("{which} (formula {variant}) at {k:?}"))?;
                    }
                }
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(pairs.len(), ex, npairs)));

        r.push(check("R̃ is R_opop conjugated by the flip", &desc, |cs| {
            for k in &pairs {
                let x = Tensor::basis_key(k.clone());
                let l = self.r_unchecked(RMap::ROpOp).apply(&x)?;
                let rr = self.r_unchecked(RMap::RTilde).apply(&x.swap())?.swap();
                cs.expect_eq(&l, &rr, || format!("at {k:?}"))?;
            }
            Ok(())
        }));

        r.push(check("R_opop∘(S^±⊗S^∓) = (S^±⊗S^∓)∘R and R∘R_opop = R_opop∘R", &desc, |cs| {
            let (rr, ro) = (self.r_unchecked(RMap::R), self.r_unchecked(RMap::ROpOp));
            for k in &pairs {
                let x = Tensor::basis_key(k.clone());
                for p in [1, -1] {
                    let sa = if p == 1 { c.a.antipode_map().clone() } else { c.a.antipode_inv_map()?.clone() };
                    let sb = if p == 1 { c.b.antipode_inv_map()?.clone() } else { c.b.antipode_map().clone() };
                    let ss = |t: &Tensor| -> Result<Tensor> {
                        apply_on_legs(&sb, &[1], &apply_on_legs(&sa, &[0], t)?)
                    };
                    cs.expect_eq(&ro.apply(&ss(&x)?)?, &ss(&rr.apply(&x)?)?, || format!("sign {p} at {k:?}"))?;
                }
                cs.expect_eq(&rr.apply(&ro.apply(&x)?)?, &ro.apply(&rr.apply(&x)?)?, || format!("commutator at {k:?}"))?;
            }
            Ok(())
        }));

        if c.star == StarMode::On {
            r.push(check("R^±∘(*⊗*) = (*⊗*)∘R^∓", &desc, |cs| {
                let algs = [ma, mb];
                for k in &pairs {
                    let x = Tensor::basis_key(k.clone());
                    let sx = star_legs(&algs, &x)?;
                    for which in [RMap::R, RMap::RInv, RMap::ROpOp, RMap::ROpOpInv] {
                        let l = self.r_unchecked(which).apply(&sx)?;
                        let rr = star_legs(&algs, &self.r_unchecked(which.inverse()).apply(&x)?)?;
                        cs.expect_eq(&l, &rr, || format!("{which} at {k:?}"))?;
                    }
                }
                Ok(())
            }));
        } else {
            r.push(Check::skipped("R^±∘(*⊗*) = (*⊗*)∘R^∓", "star mode off"));
        }

        let (t, ex) = sample::mixed(&mut rng, &[&wb, &wa, &wb], cfg.triple_limit, cfg.samples);
        r.push(check("R intertwines b▷a⊗b' with τT_op1τ", &desc, |cs| {
            let top1 = c.b.t_op1()?;
            for q in &t {
                let (b, a, b2) = (basis(&q[0]), basis(&q[1]), basis(&q[2]));
                let lhs = self.r_unchecked(RMap::R).apply(&c.action(Action::BOnALeft, &b, &a)?.tensor(&b2))?;
                // τT_op1τ(b⊗b') = b'₁b⊗b'₂
                let mid = top1.apply(&b2.tensor(&b))?.swap();
                let mut rhs = Tensor::zero(2);
                for (k, cf) in mid.terms() {
                    let left = c.action(Action::BOnALeft, &basis(&k[0]), &a)?;
                    rhs.add_scaled(cf, &left.tensor(&basis(&k[1])));
                }
                cs.expect_eq(&lhs, &rhs, || format!("(b,a,b') = ({},{},{})", q[0], q[1], q[2]))?;
            }
            Ok(())
        })
        .with_note(sample::describe_tuples(t.len(), ex, sample::product_size(&[&wb, &wa, &wb]))));

        match (ma.unit(), mb.unit()) {
            (Some(ua), Some(ub)) => {
                r.push(check("unital pairing: ⟨a,1⟩ = ε(a), ⟨1,b⟩ = ε(b)", &desc, |cs| {
                    for x in &wa {
                        let l = c.eval(&basis(x), ub);
                        cs.expect_eq(&l, &c.a.counit(&basis(x))?, || format!("⟨{x},1⟩"))?;
                    }
                    for y in &wb {
                        let l = c.eval(ua, &basis(y));
                        cs.expect_eq(&l, &c.b.counit(&basis(y))?, || format!("⟨1,{y}⟩"))?;
                    }
                    Ok(())
                }));
            }
            _ => r.push(Check::skipped("unital pairing: ⟨a,1⟩ = ε(a), ⟨1,b⟩ = ε(b)", "an algebra has no unit")),
        }
        r
    }

    /// `Δ(a▷b)`, `Δ(b◁a)`, `Δ(b▷a)`, `Δ(a◁b)` against the coproduct of the
    /// acted-on element, all covered on the right by basis elements.
    fn coproduct_of_actions(&self, q: &[Label], cs: &mut crate::report::Cases) -> Result<()> {
        let c = &self.core;
        let (a, b, a2, b2) = (basis(&q[0]), basis(&q[1]), basis(&q[2]), basis(&q[3]));
        // on B, covered by (b, b'); on A, covered by (a, a')
        for (h, acting_fn, target, x, y, which, omega_leg) in [
            (&c.b, c.omega_a(&a), &b, &b, &b2, Action::AOnBLeft, 2usize),
            (&c.b, c.omega_a(&a), &b, &b, &b2, Action::AOnBRight, 0),
            (&c.a, c.omega_b(&b), &a, &a, &a2, Action::BOnALeft, 2),
            (&c.a, c.omega_b(&b), &a, &a, &a2, Action::BOnARight, 0),
        ] {
            let acted = match which {
                Action::AOnBLeft => c.action(which, &a, target)?,
                Action::AOnBRight => c.action(which, target, &a)?,
                Action::BOnALeft => c.action(which, &b, target)?,
                Action::BOnARight => c.action(which, target, &b)?,
            };
            let lhs = h.delta_covered(&acted, [None, None], [Some(x), Some(y)])?;
            let supp: BTreeSet<Label> = acting_fn.support().map(|s| s.iter().cloned().collect()).unwrap_or_default();
            let e = h.algebra().local_unit(&supp).ok_or_else(|| {
                Error::InsufficientCover(format!("no local unit for {}", acting_fn.name()))
            })?;
            let covers = if omega_leg == 2 {
                vec![
                    Cover::new(0, Side::Right, x.clone()),
                    Cover::new(1, Side::Right, y.clone()),
                    Cover::new(2, Side::Right, e),
                ]
            } else {
                vec![
                    Cover::new(0, Side::Right, e),
                    Cover::new(1, Side::Right, x.clone()),
                    Cover::new(2, Side::Right, y.clone()),
                ]
            };
            let d2 = h.delta_n_covered(target, &covers, 2)?;
            let rhs = apply_on_legs(acting_fn.map(), &[omega_leg], &d2)?;
            cs.expect_eq(&lhs, &rhs, || format!("Δ({which}) at {q:?}"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Cond {
    Bijective(RMap),
    Onto(Action),
}

fn check_basis(alg: &Algebra, v: &Vector) -> Result<()> {
    if v.degree() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: v.degree(),
        });
    }
    for (k, _) in v.terms() {
        if !alg.basis().contains(&k[0]) {
            return Err(Error::BasisMismatch(format!("{} is not a basis label of {}", k[0], alg.name())));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{finite_group_pair, function_algebra, group_algebra, sweedler_pair, Group};
    use crate::mha::indicator;
    use num_traits::One;
    use proptest::prelude::*;

    fn v(i: usize) -> Vector {
        Tensor::basis(Label::Int(i as i64))
    }

    fn t(i: usize, j: usize) -> Tensor {
        Tensor::basis_key(key([Label::Int(i as i64), Label::Int(j as i64)]))
    }

    fn cfg() -> SuiteConfig {
        SuiteConfig::default()
    }

    fn passed(r: &Report, name: &str) -> bool {
        r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).passed()
    }

    #[test]
    fn evaluation_pairing() {
        let p = finite_group_pair(&Group::symmetric3()).unwrap();
        for g in 0..6 {
            for h in 0..6 {
                assert_eq!(p.eval(&v(g), &v(h)).unwrap(), indicator(g == h));
            }
            assert!(p.eval(&Tensor::zero(1), &v(g)).unwrap().is_zero());
        }
    }

    #[test]
    fn unit_pairs_to_counit() {
        let p = sweedler_pair(Scalar::i()).unwrap();
        let one = p.b().algebra().unit().unwrap().clone();
        for a in p.a().window(0) {
            let a = Tensor::basis(a);
            assert_eq!(p.eval(&a, &one).unwrap(), p.a().counit(&a).unwrap());
        }
    }

    #[test]
    fn actions_on_s3() {
        let g = Group::symmetric3();
        let p = finite_group_pair(&g).unwrap();
        for x in 0..6 {
            for h in 0..6 {
                let acted = p.action(Action::BOnALeft, &v(h), &v(x)).unwrap();
                assert_eq!(acted, v(g.mul(x, g.inv(h))), "h ▷ δ_g with h={h}, g={x}");
                let on_b = p.action(Action::AOnBLeft, &v(x), &v(h)).unwrap();
                let want = if x == h { v(h) } else { Tensor::zero(1) };
                assert_eq!(on_b, want);
            }
            assert!(p.action(Action::AOnBLeft, &v(x), &Tensor::zero(1)).unwrap().is_zero());
        }
    }

    #[test]
    fn canonical_prepairing_passes() {
        let p = finite_group_pair(&Group::symmetric3()).unwrap();
        assert!(p.verify_prepairing(&cfg()).all_passed());
    }

    #[test]
    fn flipped_entry_breaks_slice_multiplicativity() {
        let g = Group::symmetric3();
        let (a, b) = (function_algebra(&g).unwrap(), group_algebra(&g).unwrap());
        let p = PairingHandle::new(
            "flipped",
            &a,
            &b,
            |x, y| {
                if x.as_int() == Some(1) && y.as_int() == Some(2) {
                    Scalar::one()
                } else {
                    indicator(x == y)
                }
            },
            StarMode::Off,
        )
        .unwrap();
        let r = p.verify_prepairing(&cfg());
        let bad: Vec<&Check> = r.failures().filter(|c| c.name.starts_with("slices multiply")).collect();
        assert!(!bad.is_empty(), "{}", r.render());
        assert!(bad.iter().all(|c| c.witness.is_some()));
    }

    #[test]
    fn hopf_adapter_slices_land() {
        let p = sweedler_pair(Scalar::i()).unwrap();
        let r = p.verify_prepairing(&cfg());
        assert!(passed(&r, "slices of Δ_A lie in A"));
        assert!(passed(&r, "slices of Δ_B lie in B"));
    }

    #[test]
    fn r_maps_on_z2() {
        let p = finite_group_pair(&Group::cyclic(2)).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let x = t(a, b);
            let direct = p.r_map(RMap::R, &x).unwrap();
            for variant in 0..2 {
                assert_eq!(p.r_map_sections(RMap::R, variant, &x).unwrap(), direct);
            }
            assert_eq!(p.r_map(RMap::R, &p.r_map(RMap::RInv, &x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn r_commutes_with_r_opop_on_s3() {
        let p = finite_group_pair(&Group::symmetric3()).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let x = t(a, b);
                let one = p.r_map(RMap::ROpOp, &p.r_map(RMap::R, &x).unwrap()).unwrap();
                let two = p.r_map(RMap::R, &p.r_map(RMap::ROpOp, &x).unwrap()).unwrap();
                assert_eq!(one, two);
            }
        }
    }

    #[test]
    fn six_conditions_on_groups() {
        for g in [Group::trivial(), Group::cyclic(4), Group::klein(), Group::dihedral4()] {
            let r = finite_group_pair(&g).unwrap().verify_pairing(&cfg());
            assert!(r.all_passed(), "{}", r.render());
            assert!(passed(&r, "star: ⟨a*,b⟩ = conj⟨a,S(b)*⟩"));
        }
        let g = Group::cyclic(3);
        let zero = PairingHandle::new(
            "zero",
            &function_algebra(&g).unwrap(),
            &group_algebra(&g).unwrap(),
            |_, _| Scalar::zero(),
            StarMode::Off,
        )
        .unwrap();
        let r = zero.verify_pairing(&cfg());
        for name in ["R(A⊗B) = A⊗B", "b▷a onto A", "b◁a onto B", "R̃(B⊗A) = B⊗A", "a▷b onto B", "a◁b onto A"] {
            assert!(!passed(&r, name), "{name}");
        }
        assert!(passed(&r, "the six conditions agree"));
    }

    #[test]
    fn op_op_pairings() {
        let z2 = finite_group_pair(&Group::cyclic(2)).unwrap();
        assert_eq!(z2.op_op_pairing().unwrap().difference(&z2, 0).unwrap(), None);
        let s3 = finite_group_pair(&Group::symmetric3()).unwrap();
        let op = s3.op_op_pairing().unwrap();
        assert_eq!(op.op_op_pairing().unwrap().difference(&s3, 0).unwrap(), None);
        assert!(op.difference(&s3, 0).unwrap().is_some());
        assert!(op.verify_pairing(&cfg()).all_passed());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn r_inverse_round_trip(seed in any::<u64>()) {
            let p = finite_group_pair(&Group::symmetric3()).unwrap();
            let w = p.a().window(0);
            let mut rng = sample::rng(seed);
            let mut x = Tensor::zero(2);
            for _ in 0..3 {
                x.add_term(key([sample::label(&mut rng, &w), sample::label(&mut rng, &w)]), sample::small_scalar(&mut rng));
            }
            for which in [RMap::R, RMap::ROpOp] {
                let y = p.r_map(which, &x).unwrap();
                prop_assert_eq!(p.r_map(which.inverse(), &y).unwrap(), x.clone());
            }
        }

        #[test]
        fn form_is_bilinear(seed in any::<u64>()) {
            let p = finite_group_pair(&Group::symmetric3()).unwrap();
            let w = p.a().window(0);
            let mut rng = sample::rng(seed);
            let (a1, a2, b) = (sample::vector(&mut rng, &w, 3), sample::vector(&mut rng, &w, 3), sample::vector(&mut rng, &w, 3));
            let c = sample::small_scalar(&mut rng);
            let mut sum = a1.clone();
            sum.add_scaled(&c, &a2);
            let lhs = p.eval(&sum, &b).unwrap();
            let rhs = p.eval(&a1, &b).unwrap() + &c * &p.eval(&a2, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
