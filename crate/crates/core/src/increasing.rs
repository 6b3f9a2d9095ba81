//! Very simple increasing tree families: recursive trees, d-ary increasing
//! trees and generalised plane-oriented recursive trees (gports).
//!
//! Vertex `j + 1` attaches to an existing vertex `v` with probability
//! proportional to `1 + α·deg(v)`. Children are ordered by slot for d-ary
//! trees, by a uniformly chosen insertion gap for gports and by label for
//! recursive trees (whose shapes are only meaningful up to child order).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tree::{LabeledTree, Tree};
use crate::SmallRatio;

/// Largest size accepted by [`enumerate_increasing`].
pub const ENUMERATION_BOUND: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IncError {
    #[error("invalid increasing family: {0}")]
    InvalidFamily(String),
    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("fringe size k = {k} must be below n = {n}")]
    KNotBelowN { n: usize, k: usize },
    #[error("toll expectations given for sizes up to {given}, need {needed}")]
    MissingToll { given: usize, needed: usize },
    #[error("size must be positive")]
    EmptySize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncFamily {
    /// `α = 0`
    Recursive,
    /// `α = -1/d`; `d = 2` gives binary search trees.
    Dary(u32),
    /// `α = 1/r`
    Gport(SmallRatio),
}

impl IncFamily {
    pub fn bst() -> Self {
        IncFamily::Dary(2)
    }

    pub fn port() -> Self {
        IncFamily::Gport(Ratio::from_integer(1))
    }

    pub fn gport(r: SmallRatio) -> Result<Self, IncError> {
        if r <= Ratio::from_integer(0) {
            return Err(IncError::InvalidFamily(format!("gport parameter must be positive, got {r}")));
        }
        Ok(IncFamily::Gport(r))
    }

    pub fn alpha_ratio(&self) -> SmallRatio {
        match self {
            IncFamily::Recursive => Ratio::from_integer(0),
            IncFamily::Dary(d) => Ratio::new(-1, *d as i64),
            IncFamily::Gport(r) => r.recip(),
        }
    }

    pub fn alpha<T: Scalar>(&self) -> T {
        T::from_ratio(self.alpha_ratio())
    }

    /// Arity bound of the slotted shapes this family produces.
    pub fn slot_arity(&self) -> Option<u32> {
        match self {
            IncFamily::Dary(d) => Some(*d),
            _ => None,
        }
    }

    /// Total number (total weight, for gports) of trees with `n` vertices.
    pub fn count_trees(&self, n: usize) -> BigRational {
        let mut acc = BigRational::one();
        for k in 1..n as i64 {
            let factor = match self {
                IncFamily::Recursive => Ratio::from_integer(k),
                IncFamily::Dary(d) => Ratio::from_integer(1 + k * (*d as i64 - 1)),
                IncFamily::Gport(r) => (r + 1) * k - 1,
            };
            acc *= BigRational::new(BigInt::from(*factor.numer()), BigInt::from(*factor.denom()));
        }
        acc
    }
}

impl fmt::Display for IncFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncFamily::Recursive => f.write_str("recursive"),
            IncFamily::Dary(2) => f.write_str("bst"),
            IncFamily::Dary(d) => write!(f, "inc-dary:{d}"),
            IncFamily::Gport(r) => write!(f, "gport:{r}"),
        }
    }
}

fn parse_small_ratio(s: &str) -> Result<SmallRatio, IncError> {
    let r = crate::gw::parse_rational(s).map_err(IncError::InvalidFamily)?;
    let (n, d) = (num_traits::ToPrimitive::to_i64(r.numer()), num_traits::ToPrimitive::to_i64(r.denom()));
    match (n, d) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(IncError::InvalidFamily(format!("parameter {s:?} out of range"))),
    }
}

impl FromStr for IncFamily {
    type Err = IncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once(':') {
            None => match s {
                "recursive" => Ok(IncFamily::Recursive),
                "bst" => Ok(IncFamily::bst()),
                "port" => Ok(IncFamily::port()),
                _ => Err(IncError::InvalidFamily(format!("unknown family {s:?}"))),
            },
            Some(("inc-dary", d)) => match d.trim().parse::<u32>() {
                Ok(d) if d >= 2 => Ok(IncFamily::Dary(d)),
                _ => Err(IncError::InvalidFamily(format!("arity must be an integer ≥ 2, got {d:?}"))),
            },
            Some(("gport", r)) => IncFamily::gport(parse_small_ratio(r)?),
            _ => Err(IncError::InvalidFamily(format!("unknown family {s:?}"))),
        }
    }
}

pub fn count_increasing_trees(n: usize, f: IncFamily) -> BigRational {
    f.count_trees(n)
}

/// Binary indexed tree over integer weights.
#[derive(Debug, Clone)]
struct Fenwick {
    tree: Vec<u64>,
    total: u64,
}

impl Fenwick {
    fn with_capacity(n: usize) -> Self {
        Fenwick { tree: vec![0; n + 1], total: 0 }
    }

    fn add(&mut self, i: usize, delta: u64) {
        self.total += delta;
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose prefix sum exceeds `x` (`x < total`).
    fn find(&self, mut x: u64) -> usize {
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= x {
                x -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Runs the growth process and returns the labelled tree.
pub fn sample_increasing_tree<R: Rng + ?Sized>(n: usize, f: IncFamily, rng: &mut R) -> Result<LabeledTree, IncError> {
    if n == 0 {
        return Err(IncError::EmptySize);
    }
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut slot_lists: Option<Vec<Vec<u32>>> = None;
    match f {
        IncFamily::Recursive => {
            for j in 1..n {
                let p = rng.random_range(0..j);
                lists[p].push(j as u32);
            }
        }
        IncFamily::Dary(d) => {
            let mut slots: Vec<Vec<u32>> = vec![Vec::new(); n];
            // every free (vertex, slot) pair is equally likely
            let mut free: Vec<(u32, u32)> = (0..d).map(|s| (0, s)).collect();
            for j in 1..n as u32 {
                let i = rng.random_range(0..free.len());
                let (p, s) = free.swap_remove(i);
                lists[p as usize].push(j);
                slots[p as usize].push(s);
                free.extend((0..d).map(|s| (j, s)));
            }
            for v in 0..n {
                let mut pairs: Vec<(u32, u32)> = slots[v].iter().copied().zip(lists[v].iter().copied()).collect();
                pairs.sort_unstable();
                slots[v] = pairs.iter().map(|p| p.0).collect();
                lists[v] = pairs.iter().map(|p| p.1).collect();
            }
            slot_lists = Some(slots);
        }
        IncFamily::Gport(r) => {
            // weight 1 + deg/r, scaled by numer(r) to p + q·deg
            let (p, q) = (*r.numer() as u64, *r.denom() as u64);
            let mut fw = Fenwick::with_capacity(n);
            fw.add(0, p);
            for j in 1..n {
                let x = rng.random_range(0..fw.total);
                let v = fw.find(x);
                let gap = rng.random_range(0..=lists[v].len());
                lists[v].insert(gap, j as u32);
                fw.add(v, q);
                fw.add(j, p);
            }
        }
    }
    let arity = f.slot_arity();
    let slot_arg = slot_lists.as_deref().map(|s| (s, arity.unwrap()));
    let (shape, new_id) = Tree::from_child_lists(0, &lists, slot_arg).expect("growth produces a tree");
    let mut labels = vec![0u32; n];
    for (v, &id) in new_id.iter().enumerate() {
        labels[id as usize] = v as u32 + 1;
    }
    Ok(LabeledTree::new(shape, labels).expect("growth labels increase"))
}

/// `n! / Π_v |t(v)|`.
pub fn increasing_labellings_count(t: &Tree) -> BigUint {
    let n = t.len() as u64;
    let mut num = BigUint::one();
    for k in 2..=n {
        num *= BigUint::from(k);
    }
    let mut den = BigUint::one();
    for s in t.fringe_sizes() {
        den *= BigUint::from(s);
    }
    num / den
}

/// `E Z_{n,k} = ((1+α)n - α) / (((1+α)k + 1)((1+α)k - α))` for `k < n`.
pub fn expected_fringe_count<T: Scalar>(n: usize, k: usize, f: IncFamily) -> Result<T, IncError> {
    if k == 0 || k >= n {
        return Err(IncError::KNotBelowN { n, k });
    }
    Ok(fringe_weight::<T>(n, k, f))
}

fn fringe_weight<T: Scalar>(n: usize, k: usize, f: IncFamily) -> T {
    let a = f.alpha::<T>();
    let one = T::one();
    let b = one.clone() + a.clone();
    let nn = T::from_u64(n as u64);
    let kk = T::from_u64(k as u64);
    (b.clone() * nn - a.clone()) / ((b.clone() * kk.clone() + one) * (b * kk - a))
}

/// `E F(T_n)` for the additive functional with toll expectations
/// `tolls[k-1] = E f(T_k)`.
pub fn mean_additive_functional<T: Scalar>(n: usize, f: IncFamily, tolls: &[T]) -> Result<T, IncError> {
    if n == 0 {
        return Err(IncError::EmptySize);
    }
    if tolls.len() < n {
        return Err(IncError::MissingToll { given: tolls.len(), needed: n });
    }
    let mut acc = tolls[n - 1].clone();
    for k in 1..n {
        acc = acc + fringe_weight::<T>(n, k, f) * tolls[k - 1].clone();
    }
    Ok(acc)
}

/// Every tree of the family with `n ≤ 8` vertices and its exact probability.
pub fn enumerate_increasing<T: Scalar>(n: usize, f: IncFamily) -> Result<Vec<(LabeledTree, T)>, IncError> {
    if n == 0 {
        return Err(IncError::EmptySize);
    }
    if n > ENUMERATION_BOUND {
        return Err(IncError::BoundExceeded { n, bound: ENUMERATION_BOUND });
    }
    let alpha = f.alpha::<T>();
    let mut out = Vec::new();
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut slots: Vec<Vec<u32>> = vec![Vec::new(); n];
    grow(1, n, f, &alpha, T::one(), &mut lists, &mut slots, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn grow<T: Scalar>(
    j: usize,
    n: usize,
    f: IncFamily,
    alpha: &T,
    prob: T,
    lists: &mut Vec<Vec<u32>>,
    slots: &mut Vec<Vec<u32>>,
    out: &mut Vec<(LabeledTree, T)>,
) {
    if j == n {
        let arity = f.slot_arity();
        let slot_arg = arity.map(|d| (slots.as_slice(), d));
        let (shape, new_id) = Tree::from_child_lists(0, &lists[..n], slot_arg).expect("valid tree");
        let mut labels = vec![0u32; n];
        for (v, &id) in new_id.iter().enumerate() {
            labels[id as usize] = v as u32 + 1;
        }
        out.push((LabeledTree::new(shape, labels).expect("increasing"), prob));
        return;
    }
    // total weight Σ_v (1 + α deg v) = j + α(j - 1)
    let total = T::from_u64(j as u64) + alpha.clone() * T::from_u64(j as u64 - 1);
    for v in 0..j {
        let deg = lists[v].len();
        match f {
            IncFamily::Recursive => {
                lists[v].push(j as u32);
                grow(j + 1, n, f, alpha, prob.clone() / total.clone(), lists, slots, out);
                lists[v].pop();
            }
            IncFamily::Dary(d) => {
                // each free slot carries weight 1/d
                let each = prob.clone() / (total.clone() * T::from_u64(d as u64));
                for s in 0..d {
                    if slots[v].contains(&s) {
                        continue;
                    }
                    let at = slots[v].partition_point(|&x| x < s);
                    slots[v].insert(at, s);
                    lists[v].insert(at, j as u32);
                    grow(j + 1, n, f, alpha, each.clone(), lists, slots, out);
                    slots[v].remove(at);
                    lists[v].remove(at);
                }
            }
            IncFamily::Gport(_) => {
                let w = T::one() + alpha.clone() * T::from_u64(deg as u64);
                let each = prob.clone() * w / (total.clone() * T::from_u64(deg as u64 + 1));
                for gap in 0..=deg {
                    lists[v].insert(gap, j as u32);
                    grow(j + 1, n, f, alpha, each.clone(), lists, slots, out);
                    lists[v].remove(gap);
                }
            }
        }
    }
}

/// Exact `E Z_{n,k}` over the enumeration, for `k = 1..=n`.
pub fn enumerated_fringe_means<T: Scalar>(n: usize, f: IncFamily) -> Result<Vec<T>, IncError> {
    let trees = enumerate_increasing::<T>(n, f)?;
    let mut means = vec![T::zero(); n];
    for (t, p) in &trees {
        for s in t.shape.fringe_sizes() {
            means[s as usize - 1] = means[s as usize - 1].clone() + p.clone();
        }
    }
    Ok(means)
}

/// Exact rational `1 + α` used by constants that scale with it.
pub fn one_plus_alpha(f: IncFamily) -> BigRational {
    let a = f.alpha_ratio() + 1;
    BigRational::new(BigInt::from(*a.numer()), BigInt::from(*a.denom()))
}
