//! Exact sparse Gaussian elimination over [`Scalar`].
//!
//! Vectors are sparse [`Tensor`]s of any fixed degree; columns are tagged by
//! their insertion index so that solutions and kernel elements come back as
//! combinations of the original columns.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::tensor::{Key, Tensor};

#[derive(Clone, Debug)]
struct Row {
    pivot: Key,
    vec: Tensor,
    combo: BTreeMap<usize, Scalar>,
}

/// Incremental row echelon form of a set of column vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    by_pivot: HashMap<Key, usize>,
    inserted: usize,
}

/// Result of inserting a column into an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The column was independent of the previous ones.
    Independent,
    /// The column was dependent; the combination of columns (including the
    /// new one) that vanishes.
    Dependent(BTreeMap<usize, Scalar>),
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns inserted so far.
    pub fn columns(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the current rows, returning the remainder and the
    /// combination `c` with `v = remainder + Σ c_j col_j`.
    fn reduce(&self, v: &Tensor) -> (Tensor, BTreeMap<usize, Scalar>) {
        let mut rem = v.clone();
        let mut used: BTreeMap<usize, Scalar> = BTreeMap::new();
        // rows only contain pivots of later rows, so one pass in insertion
        // order clears every pivot
        for row in &self.rows {
            let c = rem.coeff(&row.pivot);
            if c.is_zero() {
                continue;
            }
            rem.add_scaled(&-c.clone(), &row.vec);
            for (j, cj) in &row.combo {
                let e = used.entry(*j).or_default();
                *e += &(&c * cj);
            }
        }
        used.retain(|_, c| !c.is_zero());
        (rem, used)
    }

    /// Inserts the next column.
    pub fn insert(&mut self, v: &Tensor) -> Insert {
        let tag = self.inserted;
        self.inserted += 1;
        let (rem, used) = self.reduce(v);
        if rem.is_zero() {
            // v - Σ used_j col_j = 0
            let mut dep: BTreeMap<usize, Scalar> = used.into_iter().map(|(j, c)| (j, -c)).collect();
            dep.insert(tag, Scalar::one());
            return Insert::Dependent(dep);
        }
        let (pivot, lead) = rem
            .terms()
            .next()
            .map(|(k, c)| (k.clone(), c.clone()))
            .expect("nonzero remainder");
        let inv = lead.inv().expect("nonzero pivot");
        let vec = rem.scale(&inv);
        // vec = (col_tag - Σ used_j col_j) / lead
        let mut combo: BTreeMap<usize, Scalar> = used.into_iter().map(|(j, c)| (j, -(&c * &inv))).collect();
        combo.insert(tag, inv);
        self.by_pivot.insert(pivot.clone(), self.rows.len());
        self.rows.push(Row { pivot, vec, combo });
        Insert::Independent
    }

    /// Coefficients `c` with `Σ c_j col_j = target`, if the target is in the
    /// span.
    pub fn solve(&self, target: &Tensor) -> Option<BTreeMap<usize, Scalar>> {
        let (rem, used) = self.reduce(target);
        rem.is_zero().then_some(used)
    }

    pub fn contains(&self, target: &Tensor) -> bool {
        self.reduce(target).0.is_zero()
    }
}

/// Rank of a list of vectors.
pub fn rank<'a, I: IntoIterator<Item = &'a Tensor>>(vectors: I) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// First nontrivial linear dependency among `vectors`, as coefficients.
pub fn dependency<'a, I: IntoIterator<Item = &'a Tensor>>(vectors: I) -> Option<BTreeMap<usize, Scalar>> {
    let mut e = Echelon::new();
    for v in vectors {
        if let Insert::Dependent(c) = e.insert(v) {
            return Some(c);
        }
    }
    None
}

/// Solves `Σ c_j columns[j] = target`.
pub fn solve(columns: &[Tensor], target: &Tensor) -> Option<BTreeMap<usize, Scalar>> {
    let mut e = Echelon::new();
    for c in columns {
        e.insert(c);
    }
    e.solve(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{key, Label};
    use proptest::prelude::*;

    fn v(cs: &[i64]) -> Tensor {
        Tensor::from_terms(
            1,
            cs.iter()
                .enumerate()
                .map(|(i, &c)| (key([Label::Int(i as i64)]), Scalar::from_int(c))),
        )
    }

    #[test]
    fn rank_of_dependent_set() {
        let vs = [v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])];
        assert_eq!(rank(&vs), 2);
        let dep = dependency(&vs).unwrap();
        assert_eq!(dep.get(&1), Some(&Scalar::one()));
        assert_eq!(dep.get(&0), Some(&Scalar::from_int(-2)));
    }

    #[test]
    fn solve_recovers_combination() {
        let cols = [v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 0])];
        let target = v(&[2, 3, 1]);
        let c = solve(&cols, &target).unwrap();
        let mut back = Tensor::zero(1);
        for (j, cj) in &c {
            back.add_scaled(cj, &cols[*j]);
        }
        assert_eq!(back, target);
        assert!(solve(&cols[..1], &v(&[0, 1, 0])).is_none());
    }

    #[test]
    fn rational_pivots_stay_exact() {
        let cols = [v(&[3, 1]), v(&[1, 3])];
        let c = solve(&cols, &v(&[1, 0])).unwrap();
        assert_eq!(c[&0], Scalar::from_ratio(3, 8));
        assert_eq!(c[&1], Scalar::from_ratio(-1, 8));
    }

    proptest! {
        #[test]
        fn solutions_reconstruct_targets(
            cols in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 1..6),
            mix in proptest::collection::vec(-3i64..4, 6),
        ) {
            let cols: Vec<Tensor> = cols.iter().map(|c| v(c)).collect();
            let mut target = Tensor::zero(1);
            for (c, m) in cols.iter().zip(&mix) {
                target.add_scaled(&Scalar::from_int(*m), c);
            }
            let sol = solve(&cols, &target).expect("target lies in the span");
            let mut back = Tensor::zero(1);
            for (j, cj) in &sol {
                back.add_scaled(cj, &cols[*j]);
            }
            prop_assert_eq!(back, target);
            if let Some(dep) = dependency(&cols) {
                let mut zero = Tensor::zero(1);
                for (j, cj) in &dep {
                    zero.add_scaled(cj, &cols[*j]);
                }
                prop_assert!(zero.is_zero());
            }
        }
    }
}
