//! The lower constant for distinct unordered fringe subtrees of random
//! recursive trees, as a series over unordered shapes `S`:
//!
//! `Σ_k ln k/(k(k+1)) + Σ_S Σ_{ℓ≥2} a_ℓ c_S^ℓ / (ℓ! (ℓ|S| + 1))`
//!
//! where `c_S = p_S/|S|`, `p_S` is the probability that a random recursive
//! tree of size `|S|` has shape `S`, and `a_ℓ = Σ_{m=2}^{ℓ} (-1)^{ℓ-m}
//! C(ℓ-1, m-1) ln m` is the `(ℓ-1)`-th forward difference of `ln(1+j)` at 0.

use crate::numeric::{ln_factorial, KahanSum};

use super::series::{series_sum, simpson, TailRule, DEFAULT_CUTOFF};
use super::{ConstantError, ConstantResult};

pub const MIN_SHAPE_SIZE: usize = 8;
pub const MAX_SHAPE_SIZE: usize = 20;

/// Largest `ℓ` used in the inner series.
const MAX_ELL: usize = 60;

/// `a_ℓ` from its alternating binomial sum (loses digits for large `ℓ`).
pub fn inner_coefficient_direct(l: usize) -> f64 {
    let mut acc = 0.0;
    for m in 2..=l {
        let sign = if (l - m).is_multiple_of(2) { 1.0 } else { -1.0 };
        let ln_binom = ln_factorial(l as u64 - 1) - ln_factorial(m as u64 - 1) - ln_factorial((l - m) as u64);
        acc += sign * ln_binom.exp() * (m as f64).ln();
    }
    acc
}

/// `a_ℓ = (-1)^ℓ ∫_0^∞ e^{-t} (1 - e^{-t})^{ℓ-1} / t dt`, stable for all `ℓ ≥ 2`.
pub fn inner_coefficient(l: usize) -> f64 {
    assert!(l >= 2);
    let n = (l - 1) as i32;
    let f = |t: f64| {
        if t == 0.0 {
            return if n == 1 { 1.0 } else { 0.0 };
        }
        let e = (-t).exp();
        // 1 - e^{-t} without cancellation near 0
        e * (-(-t).exp_m1()).powi(n) / t
    };
    let v = simpson(0.0, 80.0, 160_000, &f);
    if l.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Shape probabilities of all unordered trees up to a given size.
#[derive(Debug, Clone)]
pub struct ShapeTable {
    /// `c_S` of every shape, grouped by size in increasing order.
    pub weights: Vec<f64>,
    /// Shapes of size `s` occupy `start[s-1]..start[s]`.
    pub start: Vec<usize>,
}

impl ShapeTable {
    /// Builds `c_S` for `|S| ≤ max_size` from `p_S = Π_B c_B^{m_B}/m_B!`
    /// over the distinct root branches `B` with multiplicities `m_B`.
    pub fn new(max_size: usize) -> Self {
        let mut weights = vec![1.0];
        let mut sizes = vec![1usize];
        let mut start = vec![0, 1];
        for s in 2..=max_size {
            let mut out = Vec::new();
            let last = weights.len();
            forests(s - 1, last, 1.0, &weights, &sizes, &mut out);
            for p in out {
                weights.push(p / s as f64);
                sizes.push(s);
            }
            start.push(weights.len());
        }
        ShapeTable { weights, start }
    }

    pub fn count(&self, s: usize) -> usize {
        self.start[s] - self.start[s - 1]
    }

    pub fn of_size(&self, s: usize) -> &[f64] {
        &self.weights[self.start[s - 1]..self.start[s]]
    }
}

/// Emits the weight `Π c_B^m/m!` of every multiset of shapes with indices
/// below `bound` and total size `remaining`.
fn forests(remaining: usize, bound: usize, weight: f64, w: &[f64], sizes: &[usize], out: &mut Vec<f64>) {
    if remaining == 0 {
        out.push(weight);
        return;
    }
    for b in (0..bound).rev() {
        let sb = sizes[b];
        if sb > remaining {
            continue;
        }
        let mut acc = weight;
        let mut m = 1;
        while m * sb <= remaining {
            acc *= w[b] / m as f64;
            forests(remaining - m * sb, b, acc, w, sizes, out);
            m += 1;
        }
    }
}

/// Per-size contributions `D_s = Σ_{|S|=s} Σ_ℓ a_ℓ c_S^ℓ/(ℓ!(ℓs+1))`.
pub fn shape_contributions(table: &ShapeTable, max_size: usize) -> Vec<f64> {
    let a: Vec<f64> = (0..=MAX_ELL).map(|l| if l >= 2 { inner_coefficient(l) } else { 0.0 }).collect();
    let inv_fact: Vec<f64> = (0..=MAX_ELL).map(|l| (-ln_factorial(l as u64)).exp()).collect();
    (1..=max_size)
        .map(|s| {
            let mut acc = KahanSum::new();
            for &c in table.of_size(s) {
                let mut cl = c;
                for l in 2..=MAX_ELL {
                    cl *= c;
                    let t = a[l] * cl * inv_fact[l] / ((l * s + 1) as f64);
                    acc.add(t);
                    if cl * inv_fact[l] < 1e-24 {
                        break;
                    }
                }
            }
            acc.value()
        })
        .collect()
}

/// The series truncated to shapes with at most `max_size` vertices, plus a
/// geometric extrapolation of the remaining sizes that also sets the error.
pub fn c17_series(max_size: usize) -> Result<ConstantResult, ConstantError> {
    if !(MIN_SHAPE_SIZE..=MAX_SHAPE_SIZE).contains(&max_size) {
        return Err(ConstantError::InvalidInput(format!(
            "maximal shape size must lie in {MIN_SHAPE_SIZE}..={MAX_SHAPE_SIZE}, got {max_size}"
        )));
    }
    let base = series_sum(
        "log-series",
        2,
        DEFAULT_CUTOFF,
        &|k| k.ln() / (k * (k + 1.0)),
        TailRule::Integral,
    )?;
    let table = ShapeTable::new(max_size);
    let d = shape_contributions(&table, max_size);
    let mut acc = KahanSum::new();
    for &x in &d {
        acc.add(x);
    }
    let ratios: Vec<f64> = (max_size - 2..max_size).map(|i| d[i] / d[i - 1]).collect();
    let r = ratios.iter().product::<f64>().powf(1.0 / ratios.len() as f64);
    if !(r > 0.0 && r < 1.0) {
        return Err(ConstantError::NoConvergence(format!(
            "per-size contributions do not decay geometrically (ratio {r})"
        )));
    }
    let tail = d[max_size - 1] * r / (1.0 - r);
    let value = base.value + acc.value() + tail;
    Ok(ConstantResult::new(
        "c17",
        value,
        base.error + tail.abs() + 1e-13,
        &format!("shape series up to size {max_size}, geometric size extrapolation (ratio {r:.4})"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_forms_agree() {
        for l in 2..13 {
            let a = inner_coefficient(l);
            let b = inner_coefficient_direct(l);
            assert!((a - b).abs() < 1e-10, "ℓ={l}: {a} vs {b}");
        }
        assert!((inner_coefficient(2) - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn shape_table_counts_and_normalisation() {
        let t = ShapeTable::new(12);
        let counts: Vec<usize> = (1..=12).map(|s| t.count(s)).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766]);
        for s in 1..=12 {
            let total: f64 = t.of_size(s).iter().sum::<f64>() * s as f64;
            assert!((total - 1.0).abs() < 1e-12, "size {s}: {total}");
        }
    }

    #[test]
    fn single_vertex_contribution() {
        let t = ShapeTable::new(1);
        let d = shape_contributions(&t, 1);
        let direct: f64 = (2..40)
            .map(|l| inner_coefficient(l) / ((-ln_factorial(l as u64)).exp().recip() * (l + 1) as f64))
            .sum();
        assert!((d[0] - direct).abs() < 1e-14);
    }
}
