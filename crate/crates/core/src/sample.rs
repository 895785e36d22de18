//! Seeded random inputs for spot checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::tensor::{key, Functional, Label, Tensor, Vector};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar(rng: &mut SampleRng) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3i64..=3);
    }
    Scalar::from_int(c)
}

/// Random nonzero vector with 1 to `max_terms` terms from `labels`.
pub fn vector(rng: &mut SampleRng, labels: &[Label], max_terms: usize) -> Vector {
    loop {
        let n = rng.gen_range(1..=max_terms.max(1));
        let v = Tensor::from_terms(
            1,
            (0..n).map(|_| {
                let l = labels.choose(rng).expect("nonempty labels").clone();
                (key([l]), small_scalar(rng))
            }),
        );
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random finitely supported functional on `labels`.
pub fn functional(rng: &mut SampleRng, labels: &[Label], max_terms: usize) -> Functional {
    let v = vector(rng, labels, max_terms);
    Functional::from_coeffs(
        "ω",
        v.terms().map(|(k, c)| (k[0].clone(), c.clone())).collect(),
    )
}

pub fn label(rng: &mut SampleRng, labels: &[Label]) -> Label {
    labels.choose(rng).expect("nonempty labels").clone()
}

/// Every `k`-tuple of `labels` when there are at most `limit`, else
/// `samples` random ones. The flag reports whether the sweep is exhaustive.
pub fn tuples(
    rng: &mut SampleRng,
    labels: &[Label],
    k: usize,
    limit: usize,
    samples: usize,
) -> (Vec<Vec<Label>>, bool) {
    let total = labels.len().checked_pow(k as u32).unwrap_or(usize::MAX);
    if total <= limit {
        let keys = crate::tensor::product_keys(labels, k);
        return (keys.into_iter().map(|k| k.to_vec()).collect(), true);
    }
    let out = (0..samples)
        .map(|_| (0..k).map(|_| label(rng, labels)).collect())
        .collect();
    (out, false)
}

pub fn describe_tuples(n: usize, exhaustive: bool, of: usize) -> String {
    if exhaustive {
        format!("all {n}")
    } else {
        format!("{n} sampled of {of}")
    }
}

/// Every tuple of the cartesian product of `factors` when there are at most
/// `limit`, else `samples` random ones.
pub fn mixed(
    rng: &mut SampleRng,
    factors: &[&[Label]],
    limit: usize,
    samples: usize,
) -> (Vec<Vec<Label>>, bool) {
    if product_size(factors) <= limit {
        let keys = crate::tensor::mixed_keys(factors);
        return (keys.into_iter().map(|k| k.to_vec()).collect(), true);
    }
    let out = (0..samples)
        .map(|_| factors.iter().map(|f| label(rng, f)).collect())
        .collect();
    (out, false)
}

/// Size of a cartesian product, saturating.
pub fn product_size(factors: &[&[Label]]) -> usize {
    factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.len()))
        .unwrap_or(usize::MAX)
}
