//! Simply generated families and conditioned Galton–Watson trees.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::scalar::{ln_big_ratio, Scalar};
use crate::tree::{lukasiewicz_parents, Tree, TreeError};

/// Largest size accepted by [`enumerate_family`] unless a bound is given.
pub const DEFAULT_ENUMERATION_BOUND: usize = 9;

/// Offspring probabilities below this are dropped (and the rest renormalized).
pub const PROBABILITY_CUTOFF: f64 = 1e-18;

#[derive(Debug, Error)]
pub enum GwError {
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),
    #[error("no critical point: {0}")]
    NoCriticalPoint(String),
    #[error("no tree of size {n} exists in this family: {reason}")]
    ImpossibleSize { n: usize, reason: String },
    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Weights `φ_k` of a simply generated family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSequence {
    /// `Φ(x) = 1/(1-x)`
    Plane,
    /// `Φ(x) = (1+x)^d`; vertices carry slots `0..d`.
    Dary(u32),
    /// `Φ(x) = 1 + x + x²`
    Motzkin,
    /// `Φ(x) = e^x`
    Labelled,
    /// Finitely many weights `φ_0, φ_1, ...`.
    Custom(Vec<BigRational>),
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn factorial_big(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

impl WeightSequence {
    pub fn binary() -> Self {
        WeightSequence::Dary(2)
    }

    pub fn custom(mut weights: Vec<BigRational>) -> Result<Self, GwError> {
        while weights.len() > 1 && weights.last().is_some_and(Zero::is_zero) {
            weights.pop();
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(GwError::InvalidWeights("weights must be non-negative".into()));
        }
        if weights.first().is_none_or(|w| !w.is_positive()) {
            return Err(GwError::InvalidWeights("φ_0 must be positive".into()));
        }
        if !weights.iter().skip(2).any(Signed::is_positive) {
            return Err(GwError::InvalidWeights("some φ_k with k ≥ 2 must be positive".into()));
        }
        Ok(WeightSequence::Custom(weights))
    }

    /// The 0/1 sequence of an allowed degree set (which must be finite).
    pub fn indicator(degrees: &[usize]) -> Result<Self, GwError> {
        let max = degrees.iter().copied().max().unwrap_or(0);
        let mut w = vec![BigRational::zero(); max + 1];
        for &k in degrees {
            w[k] = BigRational::one();
        }
        WeightSequence::custom(w)
    }

    pub fn phi_exact(&self, k: usize) -> BigRational {
        match self {
            WeightSequence::Plane => BigRational::one(),
            WeightSequence::Dary(d) => BigRational::from_integer(binomial_big(*d as u64, k as u64).into()),
            WeightSequence::Motzkin => {
                if k <= 2 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            WeightSequence::Labelled => BigRational::new(BigInt::one(), factorial_big(k as u64).into()),
            WeightSequence::Custom(w) => w.get(k).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    pub fn phi<T: Scalar>(&self, k: usize) -> T {
        T::from_big_ratio(&self.phi_exact(k))
    }

    /// Largest degree with positive weight, if finite.
    pub fn max_degree(&self) -> Option<usize> {
        match self {
            WeightSequence::Plane | WeightSequence::Labelled => None,
            WeightSequence::Dary(d) => Some(*d as usize),
            WeightSequence::Motzkin => Some(2),
            WeightSequence::Custom(w) => Some(w.len() - 1),
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            WeightSequence::Plane => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Arity bound of the slotted trees this family produces.
    pub fn slot_arity(&self) -> Option<u32> {
        match self {
            WeightSequence::Dary(d) => Some(*d),
            _ => None,
        }
    }

    /// `gcd{k ≥ 1 : φ_k > 0}`; trees exist only for sizes `≡ 1` modulo it.
    pub fn period(&self) -> u64 {
        match self {
            WeightSequence::Custom(w) => w
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, x)| x.is_positive())
                .fold(0u64, |g, (k, _)| g.gcd(&(k as u64))),
            _ => 1,
        }
    }

    /// `(Φ(x), Φ'(x), Φ''(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        match self {
            WeightSequence::Plane => {
                let r = 1.0 / (1.0 - x);
                (r, r * r, 2.0 * r * r * r)
            }
            WeightSequence::Dary(d) => {
                let d = *d as f64;
                let b = 1.0 + x;
                (b.powf(d), d * b.powf(d - 1.0), d * (d - 1.0) * b.powf(d - 2.0))
            }
            WeightSequence::Motzkin => (1.0 + x + x * x, 1.0 + 2.0 * x, 2.0),
            WeightSequence::Labelled => {
                let e = x.exp();
                (e, e, e)
            }
            WeightSequence::Custom(w) => {
                let (mut f, mut f1, mut f2) = (0.0, 0.0, 0.0);
                for c in w.iter().rev() {
                    let c = ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
                    f2 = f2 * x + 2.0 * f1;
                    f1 = f1 * x + f;
                    f = f * x + c;
                }
                (f, f1, f2)
            }
        }
    }

    /// Exact `y_n`, the total weight of plane trees with `n` vertices.
    pub fn exact_yn(&self, n: usize) -> BigRational {
        assert!(n >= 1);
        let nu = n as u64;
        match self {
            // Catalan(n-1)
            WeightSequence::Plane => BigRational::new(
                BigInt::from(binomial_big(2 * nu - 2, nu - 1)),
                BigInt::from(nu),
            ),
            WeightSequence::Dary(d) => BigRational::new(
                BigInt::from(binomial_big(*d as u64 * nu, nu - 1)),
                BigInt::from(nu),
            ),
            WeightSequence::Motzkin => {
                // [x^{n-1}] (1+x+x²)^n / n
                let mut acc = BigUint::zero();
                let mut j = 0u64;
                while 2 * j < nu {
                    acc += binomial_big(nu, j) * binomial_big(nu - j, nu - 1 - 2 * j);
                    j += 1;
                }
                BigRational::new(acc.into(), BigInt::from(nu))
            }
            WeightSequence::Labelled => BigRational::new(
                BigInt::from(nu).pow(nu as u32 - 1),
                BigInt::from(factorial_big(nu)),
            ),
            WeightSequence::Custom(w) => {
                // Lagrange inversion: [x^{n-1}] Φ(x)^n / n
                let m = n - 1;
                let trunc = |a: &[BigRational], b: &[BigRational]| {
                    let mut out = vec![BigRational::zero(); m + 1];
                    for (i, x) in a.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in b.iter().enumerate().take(m + 1 - i) {
                            if !y.is_zero() {
                                out[i + j] += x * y;
                            }
                        }
                    }
                    out
                };
                let mut base: Vec<BigRational> = w.iter().take(m + 1).cloned().collect();
                let mut result = vec![BigRational::one()];
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        result = trunc(&result, &base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = trunc(&base, &base);
                    }
                }
                result.get(m).cloned().unwrap_or_else(BigRational::zero) / big(nu)
            }
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSequence::Plane => f.write_str("plane"),
            WeightSequence::Dary(d) => write!(f, "dary:{d}"),
            WeightSequence::Motzkin => f.write_str("motzkin"),
            WeightSequence::Labelled => f.write_str("labelled"),
            WeightSequence::Custom(w) => {
                f.write_str("custom:")?;
                for (i, x) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `3`, `-2`, `1/2` or a plain decimal such as `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let b: BigInt = b.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if b.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("not a number: {s:?}"));
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| format!("not a number: {s:?}"))?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

impl FromStr for WeightSequence {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("plane", None) => Ok(WeightSequence::Plane),
            ("binary", None) => Ok(WeightSequence::Dary(2)),
            ("motzkin", None) => Ok(WeightSequence::Motzkin),
            ("labelled" | "labeled" | "cayley", None) => Ok(WeightSequence::Labelled),
            ("dary", Some(d)) => match d.trim().parse::<u32>() {
                Ok(d) if d >= 2 => Ok(WeightSequence::Dary(d)),
                _ => Err(GwError::InvalidWeights(format!("arity must be an integer ≥ 2, got {d:?}"))),
            },
            ("custom", Some(list)) => {
                let w = list
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(GwError::InvalidWeights)?;
                WeightSequence::custom(w)
            }
            _ => Err(GwError::InvalidWeights(format!("unknown family {s:?}"))),
        }
    }
}

/// Finds `τ` with `τΦ'(τ) = Φ(τ)`.
pub fn solve_tau(w: &WeightSequence) -> Result<f64, GwError> {
    let g = |t: f64| {
        let (f, f1, _) = w.eval(t);
        t * f1 - f
    };
    let r = w.radius();
    let mut hi;
    if r.is_finite() {
        let mut k = 1;
        loop {
            hi = r * (1.0 - 0.5f64.powi(k));
            if g(hi) > 0.0 {
                break;
            }
            k += 1;
            if k > 60 {
                return Err(GwError::NoCriticalPoint(format!(
                    "tΦ'(t) - Φ(t) stays negative on (0, {r}) for {w}"
                )));
            }
        }
    } else {
        hi = 1.0;
        let mut k = 0;
        while g(hi) <= 0.0 {
            hi *= 2.0;
            k += 1;
            if k > 200 || !g(hi).is_finite() {
                return Err(GwError::NoCriticalPoint(format!(
                    "tΦ'(t) - Φ(t) has no sign change on (0, {hi}) for {w}"
                )));
            }
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    // g'(t) = tΦ''(t)
    for _ in 0..3 {
        let (f, f1, f2) = w.eval(t);
        let step = (t * f1 - f) / (t * f2);
        if !step.is_finite() || !(lo..=hi).contains(&(t - step)) {
            break;
        }
        t -= step;
    }
    let (f, _, _) = w.eval(t);
    if g(t).abs() > 1e-12 * f {
        return Err(GwError::NoCriticalPoint(format!("root polishing failed at t = {t} for {w}")));
    }
    Ok(t)
}

/// Law of the critical offspring variable `ξ` of a weight sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringDistribution {
    probs: Vec<f64>,
    tau: f64,
    sigma2: f64,
    // Φ, Φ', Φ'' at τ
    at_tau: (f64, f64, f64),
    period: u64,
}

impl OffspringDistribution {
    pub fn new(w: &WeightSequence) -> Result<Self, GwError> {
        let tau = solve_tau(w)?;
        let at_tau = w.eval(tau);
        let (f, _, f2) = at_tau;
        let mut probs = Vec::new();
        let mut k = 0usize;
        let mut tk = 1.0f64;
        loop {
            if w.max_degree().is_some_and(|m| k > m) {
                break;
            }
            let p = w.phi::<f64>(k) * tk / f;
            if w.max_degree().is_none() && k > 2 && p < PROBABILITY_CUTOFF {
                break;
            }
            probs.push(p);
            k += 1;
            tk *= tau;
        }
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        Ok(OffspringDistribution {
            probs,
            tau,
            sigma2: tau * tau * f2 / f,
            at_tau,
            period: w.period(),
        })
    }

    pub fn p(&self, m: usize) -> f64 {
        self.probs.get(m).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `σ² = τ²Φ''(τ)/Φ(τ)`.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(m, p)| m as f64 * p).sum()
    }

    /// `Σ m² p_m - 1`, computed from the (truncated) probabilities.
    pub fn variance_from_probs(&self) -> f64 {
        self.probs.iter().enumerate().map(|(m, p)| (m * m) as f64 * p).sum::<f64>() - 1.0
    }

    /// `(Φ(τ), Φ'(τ), Φ''(τ))`.
    pub fn phi_at_tau(&self) -> (f64, f64, f64) {
        self.at_tau
    }

    /// Exponential growth rate `Φ'(τ)` of `y_n`.
    pub fn growth(&self) -> f64 {
        self.at_tau.1
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// `sqrt(2/(πσ²))`.
    pub fn kappa(&self) -> f64 {
        (2.0 / (std::f64::consts::PI * self.sigma2)).sqrt()
    }

    /// `2τ⁻¹ sqrt(Φ(τ)/(2πΦ''(τ)))`, algebraically equal to [`Self::kappa`].
    pub fn kappa_from_phi(&self) -> f64 {
        let (f, _, f2) = self.at_tau;
        2.0 / self.tau * (f / (2.0 * std::f64::consts::PI * f2)).sqrt()
    }
}

pub fn offspring_distribution(w: &WeightSequence) -> Result<OffspringDistribution, GwError> {
    OffspringDistribution::new(w)
}

pub fn offspring_variance(o: &OffspringDistribution) -> f64 {
    o.sigma2()
}

/// Index at which the unique valid rotation of a degree sequence starts.
pub fn cycle_lemma_rotation(degrees: &[u32]) -> Result<usize, GwError> {
    let n = degrees.len();
    if n == 0 {
        return Err(TreeError::Empty.into());
    }
    let total: u64 = degrees.iter().map(|&d| d as u64).sum();
    if total != n as u64 - 1 {
        return Err(TreeError::InvalidDegrees(format!("degrees sum to {total}, expected {}", n - 1)).into());
    }
    let mut prefix = 0i64;
    let mut min = i64::MAX;
    let mut arg = 0;
    for (i, &d) in degrees.iter().enumerate() {
        prefix += d as i64 - 1;
        if prefix < min {
            min = prefix;
            arg = i;
        }
    }
    Ok((arg + 1) % n)
}

/// The plane tree whose preorder degree sequence is the valid rotation of `degrees`.
pub fn degrees_to_tree(degrees: &[u32]) -> Result<Tree, GwError> {
    let start = cycle_lemma_rotation(degrees)?;
    let rotated: Vec<u32> = degrees[start..].iter().chain(&degrees[..start]).copied().collect();
    Ok(Tree::from_preorder_degrees(&rotated)?)
}

/// Exact sampler for a Galton–Watson tree conditioned on its size.
///
/// Degree counts are drawn from the multinomial law of `n` i.i.d. offspring
/// variables and rejected until they sum to `n - 1`; a uniform arrangement of
/// the accepted multiset is then rotated into a Łukasiewicz path.
#[derive(Debug, Clone)]
pub struct GwSampler {
    probs: Vec<f64>,
    // p_m / Σ_{j ≥ m} p_j, for sequential binomial splitting
    split: Vec<f64>,
    arity: Option<u32>,
    period: u64,
}

impl GwSampler {
    pub fn new(w: &WeightSequence) -> Result<Self, GwError> {
        Ok(Self::from_offspring(&OffspringDistribution::new(w)?, w.slot_arity()))
    }

    pub fn from_offspring(o: &OffspringDistribution, arity: Option<u32>) -> Self {
        let probs = o.probs().to_vec();
        let mut split = vec![0.0; probs.len()];
        let mut rest = 0.0;
        for m in (0..probs.len()).rev() {
            rest += probs[m];
            split[m] = if rest > 0.0 { (probs[m] / rest).clamp(0.0, 1.0) } else { 0.0 };
        }
        GwSampler {
            probs,
            split,
            arity,
            period: o.period(),
        }
    }

    /// Whether some tree with `n` vertices has positive probability.
    pub fn check_size(&self, n: usize) -> Result<(), GwError> {
        if n == 0 {
            return Err(GwError::ImpossibleSize { n, reason: "size must be positive".into() });
        }
        let target = n as u64 - 1;
        if !target.is_multiple_of(self.period) {
            return Err(GwError::ImpossibleSize {
                n,
                reason: format!("sizes must be ≡ 1 mod {}", self.period),
            });
        }
        let support: Vec<usize> = (1..self.probs.len()).filter(|&m| self.probs[m] > 0.0).collect();
        let max = support.iter().copied().max().unwrap_or(0);
        // beyond max² every multiple of the period is representable
        let limit = target.min((max * max) as u64) as usize;
        if target as usize > limit {
            return Ok(());
        }
        let mut reach = vec![false; limit + 1];
        reach[0] = true;
        for s in 1..=limit {
            reach[s] = support.iter().any(|&m| m <= s && reach[s - m]);
        }
        if reach[target as usize] {
            Ok(())
        } else {
            Err(GwError::ImpossibleSize {
                n,
                reason: format!("{target} is not a sum of allowed out-degrees"),
            })
        }
    }

    fn degree_counts<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Vec<u64> {
        let mut counts = vec![0u64; self.probs.len()];
        let mut left = n;
        for (m, &q) in self.split.iter().enumerate() {
            if left == 0 {
                break;
            }
            let c = if m + 1 == self.split.len() || q >= 1.0 {
                left
            } else if q <= 0.0 {
                0
            } else {
                Binomial::new(left, q).expect("valid binomial").sample(rng)
            };
            counts[m] = c;
            left -= c;
        }
        counts
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Tree, GwError> {
        self.check_size(n)?;
        let target = n as u64 - 1;
        let counts = loop {
            let counts = self.degree_counts(n as u64, rng);
            let sum: u64 = counts.iter().enumerate().map(|(m, &c)| m as u64 * c).sum();
            if sum == target {
                break counts;
            }
        };
        let mut degrees: Vec<u32> = Vec::with_capacity(n);
        for (m, &c) in counts.iter().enumerate() {
            degrees.extend(std::iter::repeat_n(m as u32, c as usize));
        }
        degrees.shuffle(rng);
        let start = cycle_lemma_rotation(&degrees)?;
        degrees.rotate_left(start);
        let parent = lukasiewicz_parents(&degrees)?;
        let slots = self.arity.map(|d| (assign_slots(&degrees, &parent, d, rng), d));
        Ok(Tree::from_preorder_parents(parent, slots)?)
    }
}

/// Gives each vertex of out-degree `m` a uniform `m`-subset of `0..d` as the
/// slots of its children; returns the slot of every vertex in its parent.
fn assign_slots<R: Rng + ?Sized>(degrees: &[u32], parent: &[u32], d: u32, rng: &mut R) -> Vec<u32> {
    let n = degrees.len();
    let mut start = vec![0usize; n + 1];
    for v in 0..n {
        start[v + 1] = start[v] + degrees[v] as usize;
    }
    let mut pool = vec![0u32; start[n]];
    for v in 0..n {
        let m = degrees[v] as usize;
        if m == 0 {
            continue;
        }
        let mut s: Vec<u32> = rand::seq::index::sample(rng, d as usize, m).into_iter().map(|i| i as u32).collect();
        s.sort_unstable();
        pool[start[v]..start[v + 1]].copy_from_slice(&s);
    }
    let mut next = start.clone();
    let mut slot = vec![0u32; n];
    for v in 1..n {
        let p = parent[v] as usize;
        slot[v] = pool[next[p]];
        next[p] += 1;
    }
    slot
}

pub fn sample_gw_tree<R: Rng + ?Sized>(n: usize, w: &WeightSequence, rng: &mut R) -> Result<Tree, GwError> {
    GwSampler::new(w)?.sample(n, rng)
}

/// All plane trees with `n` vertices and positive weight `w(t) = Π φ_deg(v)`.
pub fn enumerate_family<T: Scalar>(n: usize, w: &WeightSequence) -> Result<Vec<(Tree, T)>, GwError> {
    enumerate_family_bounded(n, w, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_family_bounded<T: Scalar>(
    n: usize,
    w: &WeightSequence,
    bound: usize,
) -> Result<Vec<(Tree, T)>, GwError> {
    if n > bound {
        return Err(GwError::BoundExceeded { n, bound });
    }
    if n == 0 {
        return Err(TreeError::Empty.into());
    }
    let maxd = w.max_degree().unwrap_or(n - 1).min(n - 1);
    let phis: Vec<T> = (0..=maxd).map(|k| w.phi::<T>(k)).collect();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    // (open slots remaining, position)
    fn rec<T: Scalar>(n: usize, open: usize, seq: &mut Vec<u32>, phis: &[T], out: &mut Vec<(Tree, T)>) {
        let pos = seq.len();
        if pos == n {
            if open == 0 {
                let weight = seq.iter().fold(T::one(), |acc, &d| acc * phis[d as usize].clone());
                out.push((Tree::from_preorder_degrees(seq).expect("valid sequence"), weight));
            }
            return;
        }
        if open == 0 {
            return;
        }
        let left = n - pos - 1;
        for (d, phi) in phis.iter().enumerate() {
            // after this vertex, open - 1 + d slots must be filled by `left` vertices
            if open - 1 + d > left || phi.is_zero() {
                continue;
            }
            seq.push(d as u32);
            rec(n, open - 1 + d, seq, phis, out);
            seq.pop();
        }
    }
    rec(n, 1, &mut seq, &phis, &mut out);
    Ok(out)
}

/// All slotted versions of a plane tree with arity bound `d`.
pub fn slot_expansions(t: &Tree, d: u32) -> Vec<Tree> {
    let n = t.len();
    let parent: Vec<u32> = (0..n as u32).map(|v| t.parent(v).unwrap_or(0)).collect();
    let mut per_vertex: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let m = t.degree(v) as usize;
        per_vertex.push(subsets(d, m));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let mut slot = vec![0u32; n];
        for v in 0..n as u32 {
            let s = &per_vertex[v as usize][choice[v as usize]];
            for (i, &c) in t.children(v).iter().enumerate() {
                slot[c as usize] = s[i];
            }
        }
        out.push(Tree::from_preorder_parents(parent.clone(), Some((slot, d))).expect("valid slots"));
        let mut v = 0;
        while v < n {
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
        if v == n {
            return out;
        }
    }
}

fn subsets(d: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(d: u32, m: usize, from: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for s in from..d {
            cur.push(s);
            rec(d, m, s + 1, cur, out);
            cur.pop();
        }
    }
    rec(d, m, 0, &mut cur, &mut out);
    out
}

/// `ln` of `p · sqrt(Φ(τ)/(2πΦ''(τ))) · Φ'(τ)ⁿ / n^{3/2}`, with `p` the
/// period; `-∞` for sizes the period rules out.
pub fn yn_asymptotic_ln(n: usize, w: &WeightSequence) -> Result<f64, GwError> {
    let o = OffspringDistribution::new(w)?;
    let p = o.period();
    if !(n as u64 - 1).is_multiple_of(p) {
        return Ok(f64::NEG_INFINITY);
    }
    let (f, f1, f2) = o.phi_at_tau();
    let n = n as f64;
    Ok((p as f64).ln() + 0.5 * (f / (2.0 * std::f64::consts::PI * f2)).ln() + n * f1.ln() - 1.5 * n.ln())
}

/// The asymptotic approximation of `y_n` (may overflow to infinity; see
/// [`yn_asymptotic_ln`]).
pub fn yn_asymptotic(n: usize, w: &WeightSequence) -> Result<f64, GwError> {
    Ok(yn_asymptotic_ln(n, w)?.exp())
}

/// `exact y_n / asymptotic y_n`, evaluated in logs.
pub fn yn_ratio(n: usize, w: &WeightSequence) -> Result<f64, GwError> {
    let exact = w.exact_yn(n);
    Ok((ln_big_ratio(&exact) - yn_asymptotic_ln(n, w)?).exp())
}
