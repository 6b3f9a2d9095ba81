//! Exact counting series of tree classes and their exponential growth rates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::gw::{OffspringDistribution, WeightSequence};
use crate::scalar::ln_biguint;

use super::{ConstantError, ConstantResult};

/// Allowed out-degrees: all of ℕ or a finite set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DegreeSet {
    All,
    Finite(Vec<usize>),
}

impl DegreeSet {
    pub fn finite(degrees: &[usize]) -> Result<Self, ConstantError> {
        let mut d = degrees.to_vec();
        d.sort_unstable();
        d.dedup();
        if d.first() != Some(&0) || !d.iter().any(|&m| m >= 2) {
            return Err(ConstantError::InvalidInput(format!(
                "degree set {d:?} must contain 0 and some degree ≥ 2"
            )));
        }
        Ok(DegreeSet::Finite(d))
    }

    pub fn contains(&self, m: usize) -> bool {
        match self {
            DegreeSet::All => true,
            DegreeSet::Finite(d) => d.binary_search(&m).is_ok(),
        }
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSet::All => f.write_str("all"),
            DegreeSet::Finite(d) => {
                let s: Vec<String> = d.iter().map(|m| m.to_string()).collect();
                write!(f, "{{{}}}", s.join(","))
            }
        }
    }
}

impl FromStr for DegreeSet {
    type Err = ConstantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s == "all" || s == "N" {
            return Ok(DegreeSet::All);
        }
        let d = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ConstantError::InvalidInput(format!("bad degree set {s:?}: {e}")))?;
        DegreeSet::finite(&d)
    }
}

/// Which trees a [`CountSeries`] counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountClass {
    /// Unordered full binary trees, by number of leaves.
    WeddEth,
    /// Unordered rooted trees, by vertices.
    Polya,
    /// Plane trees with out-degrees in the set, by vertices.
    PlaneDegrees(DegreeSet),
    /// Unordered trees with out-degrees in the set, by vertices.
    UnorderedDegrees(DegreeSet),
}

/// Exact counts `u_1, ..., u_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    pub class: CountClass,
    counts: Vec<BigUint>,
}

impl CountSeries {
    pub fn new(class: CountClass, len: usize) -> Self {
        let counts = match &class {
            CountClass::WeddEth => wedderburn_etherington(len),
            CountClass::Polya | CountClass::UnorderedDegrees(DegreeSet::All) => polya(len),
            CountClass::UnorderedDegrees(DegreeSet::Finite(d)) => unordered_with_degrees(d, len),
            CountClass::PlaneDegrees(DegreeSet::All) => plane_with_degrees(&[], true, len),
            CountClass::PlaneDegrees(DegreeSet::Finite(d)) => plane_with_degrees(d, false, len),
        };
        CountSeries { class, counts }
    }

    /// `u_k` for `1 ≤ k ≤ len`.
    pub fn get(&self, k: usize) -> &BigUint {
        &self.counts[k - 1]
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `b` from the coefficient ratio of the last two nonzero terms, with the
    /// `k^{-3/2}` factor divided out.
    pub fn ratio_estimate(&self) -> f64 {
        let nz: Vec<usize> = (0..self.counts.len()).filter(|&i| !self.counts[i].is_zero()).collect();
        let (i, j) = (nz[nz.len() - 2], nz[nz.len() - 1]);
        let (ki, kj) = ((i + 1) as f64, (j + 1) as f64);
        let ln_ratio = ln_biguint(&self.counts[j]) - ln_biguint(&self.counts[i]) + 1.5 * (kj / ki).ln();
        (ln_ratio / (kj - ki)).exp()
    }
}

fn wedderburn_etherington(len: usize) -> Vec<BigUint> {
    let mut w: Vec<BigUint> = vec![BigUint::zero(); len + 1];
    if len >= 1 {
        w[1] = BigUint::one();
    }
    for n in 2..=len {
        let mut acc = BigUint::zero();
        for i in 1..n {
            acc += &w[i] * &w[n - i];
        }
        if n % 2 == 0 {
            acc += &w[n / 2];
        }
        w[n] = acc >> 1;
    }
    w.remove(0);
    w
}

fn polya(len: usize) -> Vec<BigUint> {
    // a_{n+1} = (1/n) Σ_{k=1}^{n} (Σ_{d|k} d a_d) a_{n-k+1}
    let mut a: Vec<BigUint> = vec![BigUint::zero(); len + 1];
    let mut s: Vec<BigUint> = vec![BigUint::zero(); len + 1];
    if len >= 1 {
        a[1] = BigUint::one();
    }
    for n in 1..len {
        let mut sn = BigUint::zero();
        for (d, ad) in a.iter().enumerate().take(n + 1).skip(1) {
            if n % d == 0 {
                sn += ad * BigUint::from(d);
            }
        }
        s[n] = sn;
        let mut acc = BigUint::zero();
        for k in 1..=n {
            acc += &s[k] * &a[n - k + 1];
        }
        let (q, r) = acc.div_rem(&BigUint::from(n));
        debug_assert!(r.is_zero());
        a[n + 1] = q;
    }
    a.remove(0);
    a
}

/// `T = x Σ_{m∈M} Z_m(T)` where `Z_m` is the cycle index of the symmetric
/// group, via `m Z_m = Σ_k T(x^k) Z_{m-k}`.
fn unordered_with_degrees(degrees: &[usize], len: usize) -> Vec<BigUint> {
    let maxm = *degrees.iter().max().unwrap();
    let mut t: Vec<BigUint> = vec![BigUint::zero(); len + 1];
    // z[m][j] = [x^j] Z_m(T)
    let mut z: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); len]; maxm + 1];
    if len > 0 {
        z[0][0] = BigUint::one();
    }
    for j in 0..len {
        // t[1..=j] are known; fill [x^j] Z_m for m ≥ 1
        for m in 1..=maxm {
            let mut acc = BigUint::zero();
            for k in 1..=m {
                let mut i = k;
                while i <= j {
                    let ti = &t[i / k];
                    if !ti.is_zero() {
                        let zz = &z[m - k][j - i];
                        if !zz.is_zero() {
                            acc += ti * zz;
                        }
                    }
                    i += k;
                }
            }
            let (q, r) = acc.div_rem(&BigUint::from(m));
            debug_assert!(r.is_zero());
            z[m][j] = q;
        }
        let mut tn = BigUint::zero();
        for &m in degrees {
            tn += &z[m][j];
        }
        t[j + 1] = tn;
    }
    t.remove(0);
    t
}

/// `T = x Ψ(T)` with `Ψ = Σ_{m∈M} x^m` (or `1/(1-x)` for all degrees).
fn plane_with_degrees(degrees: &[usize], all: bool, len: usize) -> Vec<BigUint> {
    if all {
        // Catalan numbers C_{k-1}
        let mut c = vec![BigUint::one()];
        for k in 1..len {
            let next = &c[k - 1] * BigUint::from(2 * (2 * k - 1)) / BigUint::from(k + 1);
            c.push(next);
        }
        c.truncate(len);
        return c;
    }
    let maxm = *degrees.iter().max().unwrap();
    let mut t: Vec<BigUint> = vec![BigUint::zero(); len + 1];
    // pw[m][j] = [x^j] T^m
    let mut pw: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); len]; maxm + 1];
    if len > 0 {
        pw[0][0] = BigUint::one();
    }
    for j in 0..len {
        for m in 1..=maxm {
            let mut acc = BigUint::zero();
            for i in 1..=j {
                if !t[i].is_zero() && !pw[m - 1][j - i].is_zero() {
                    acc += &t[i] * &pw[m - 1][j - i];
                }
            }
            pw[m][j] = acc;
        }
        let mut tn = BigUint::zero();
        for &m in degrees {
            tn += &pw[m][j];
        }
        t[j + 1] = tn;
    }
    t.remove(0);
    t
}

/// `Ψ'(υ)` where `υΨ'(υ) = Ψ(υ)` for the 0/1 weights of `M`: the growth rate
/// of plane trees whose out-degrees lie in `M`.
pub fn restricted_plane_growth(m: &DegreeSet) -> Result<f64, ConstantError> {
    let w = match m {
        DegreeSet::All => WeightSequence::Plane,
        DegreeSet::Finite(d) => WeightSequence::indicator(d)?,
    };
    Ok(OffspringDistribution::new(&w)?.growth())
}

/// Minimum series length accepted by [`unordered_growth`].
pub const MIN_SERIES_LEN: usize = 50;

struct Truncated {
    ln_t: Vec<f64>,
}

impl Truncated {
    fn new(s: &CountSeries) -> Self {
        let ln_t = s
            .counts()
            .iter()
            .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { ln_biguint(c) })
            .collect();
        Truncated { ln_t }
    }

    /// `Σ_{n ≤ K} t_n z^n`.
    fn eval(&self, z: f64) -> f64 {
        let lz = z.ln();
        let mut acc = 0.0;
        for (i, &l) in self.ln_t.iter().enumerate().rev() {
            if l.is_finite() {
                acc += (l + (i + 1) as f64 * lz).exp();
            }
        }
        acc
    }

    /// Bound on `Σ_{n > K} t_n z^n` assuming coefficients grow by at most
    /// `rate` per step beyond `K`.
    fn tail(&self, z: f64, rate: f64) -> f64 {
        let k = self.ln_t.len();
        let last = self.ln_t[k - 1].max(self.ln_t[k - 2]);
        let q = rate * z;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        (last + k as f64 * z.ln()).exp() * q / (1.0 - q)
    }
}

/// `Z_m(p_1, p_2, ...)` for `m = 0..=maxm`.
fn cycle_indices(p: &[f64], maxm: usize) -> Vec<f64> {
    let mut z = vec![0.0; maxm + 1];
    z[0] = 1.0;
    for m in 1..=maxm {
        let mut acc = 0.0;
        for k in 1..=m {
            acc += p[k] * z[m - k];
        }
        z[m] = acc / m as f64;
    }
    z
}

/// `b_M = 1/ρ` for unordered trees with out-degrees in `M`, from the
/// singularity of `y = F(x, y)` at `∂F/∂y = 1`, with `T(x^k)` (`k ≥ 2`)
/// evaluated from the exact series of length `len`.
pub fn unordered_growth(m: &DegreeSet, len: usize) -> Result<ConstantResult, ConstantError> {
    if len < MIN_SERIES_LEN {
        return Err(ConstantError::InvalidInput(format!(
            "series length {len} is below the minimum {MIN_SERIES_LEN}"
        )));
    }
    let class = match m {
        DegreeSet::All => CountClass::Polya,
        _ => CountClass::UnorderedDegrees(m.clone()),
    };
    let series = CountSeries::new(class, len);
    let tr = Truncated::new(&series);
    let est = 1.0 / series.ratio_estimate();
    let rate = 1.1 / est;

    // h(x) = F(x, y*(x)) - y*(x), with F_y(x, y*) = 1; returns (h, y*, max p_k tail)
    let h = |x: f64| -> (f64, f64, f64) {
        match m {
            DegreeSet::All => {
                let mut s = 0.0;
                let mut tail = 0.0f64;
                let mut k = 2;
                loop {
                    let z = x.powi(k);
                    let v = tr.eval(z);
                    tail = tail.max(tr.tail(z, rate));
                    s += v / k as f64;
                    if v < 1e-18 * s || k > 200 {
                        break;
                    }
                    k += 1;
                }
                (x * (1.0 + s).exp() - 1.0, 1.0, tail)
            }
            DegreeSet::Finite(d) => {
                let maxm = *d.last().unwrap();
                let mut p = vec![0.0; maxm + 1];
                let mut tail = 0.0f64;
                for (k, pk) in p.iter_mut().enumerate().skip(2) {
                    let z = x.powi(k as i32);
                    *pk = tr.eval(z);
                    tail = tail.max(tr.tail(z, rate));
                }
                let fy = |y: f64| {
                    let mut q = p.clone();
                    q[1] = y;
                    let z = cycle_indices(&q, maxm);
                    x * d.iter().filter(|&&j| j >= 1).map(|&j| z[j - 1]).sum::<f64>()
                };
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                while fy(hi) < 1.0 {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if fy(mid) < 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let y = 0.5 * (lo + hi);
                let mut q = p.clone();
                q[1] = y;
                let z = cycle_indices(&q, maxm);
                let f = x * d.iter().map(|&j| z[j]).sum::<f64>();
                (f - y, y, tail)
            }
        }
    };

    // bracket the sign change around the ratio estimate
    let upper_cap = est.sqrt() * 0.999;
    let (mut lo, mut hi) = (0.8 * est, (1.2 * est).min(upper_cap));
    let mut tries = 0;
    while h(lo).0 >= 0.0 || h(hi).0 <= 0.0 {
        lo *= 0.9;
        hi = (hi * 1.05).min(upper_cap);
        tries += 1;
        if tries > 60 {
            return Err(ConstantError::NoConvergence(format!("no sign change of the singularity condition for {m}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let (_, _, tail) = h(rho);
    let dx = 1e-7 * rho;
    let slope = ((h(rho + dx).0 - h(rho - dx).0) / (2.0 * dx)).abs();
    // sensitivity of F to each p_k is O(F) = O(y); 10x margin
    let (_, y, _) = h(rho);
    let rho_err = (hi - lo) + 10.0 * (1.0 + y) * tail / slope + 1e-13 * rho;
    let b = 1.0 / rho;
    Ok(ConstantResult::new(
        &format!("b:{m}"),
        b,
        rho_err / (rho * rho),
        &format!("singularity of the functional equation, exact series of length {len}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64_digits().first().copied().unwrap_or(0)).collect()
    }

    #[test]
    fn known_count_prefixes() {
        let s = CountSeries::new(CountClass::UnorderedDegrees(DegreeSet::finite(&[0, 1, 2]).unwrap()), 9);
        assert_eq!(small(s.counts()), vec![1, 1, 2, 3, 6, 11, 23, 46, 98]);
        let p = CountSeries::new(CountClass::Polya, 10);
        assert_eq!(small(p.counts()), vec![1, 1, 2, 4, 9, 20, 48, 115, 286, 719]);
        let w = CountSeries::new(CountClass::WeddEth, 10);
        assert_eq!(small(w.counts()), vec![1, 1, 1, 2, 3, 6, 11, 23, 46, 98]);
        let a = CountSeries::new(CountClass::UnorderedDegrees(DegreeSet::All), 10);
        assert_eq!(a.counts(), p.counts());
        let via_cycle = CountSeries::new(
            CountClass::UnorderedDegrees(DegreeSet::finite(&(0..=12).collect::<Vec<_>>()).unwrap()),
            12,
        );
        assert_eq!(via_cycle.counts(), CountSeries::new(CountClass::Polya, 12).counts());
        let m = CountSeries::new(CountClass::PlaneDegrees(DegreeSet::finite(&[0, 1, 2]).unwrap()), 6);
        assert_eq!(small(m.counts()), vec![1, 1, 2, 4, 9, 21]);
        let c = CountSeries::new(CountClass::PlaneDegrees(DegreeSet::All), 6);
        assert_eq!(small(c.counts()), vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn restricted_growth_values() {
        assert!((restricted_plane_growth(&DegreeSet::finite(&[0, 1, 2]).unwrap()).unwrap() - 3.0).abs() < 1e-12);
        assert!((restricted_plane_growth(&DegreeSet::All).unwrap() - 4.0).abs() < 1e-12);
        assert!((restricted_plane_growth(&DegreeSet::finite(&[0, 2]).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        assert!(DegreeSet::finite(&[1, 2]).is_err());
    }

    #[test]
    fn growth_constants() {
        let we = unordered_growth(&DegreeSet::finite(&[0, 1, 2]).unwrap(), 100).unwrap();
        assert!((we.value - 2.4832535363).abs() < 1e-8, "{we:?}");
        let fb = unordered_growth(&DegreeSet::finite(&[0, 2]).unwrap(), 101).unwrap();
        assert!((fb.value - 2.4832535363f64.sqrt()).abs() < 1e-8, "{fb:?}");
        let p = unordered_growth(&DegreeSet::All, 100).unwrap();
        assert!((p.value - 2.9557652857).abs() < 1e-8, "{p:?}");
        assert!(unordered_growth(&DegreeSet::All, 10).is_err());
    }

    #[test]
    fn degree_set_parsing() {
        assert_eq!("all".parse::<DegreeSet>().unwrap(), DegreeSet::All);
        assert_eq!("{0,2,1}".parse::<DegreeSet>().unwrap(), DegreeSet::Finite(vec![0, 1, 2]));
        assert!("0,x".parse::<DegreeSet>().is_err());
    }
}
