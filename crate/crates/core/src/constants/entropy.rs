//! Entropy-type constants: `μ` of offspring laws and the unordered
//! binary-search-tree constant built from shape power sums.

use std::collections::HashMap;

use crate::gw::OffspringDistribution;
use crate::numeric::{ln_factorial, KahanSum};

use super::series::{series_sum, TailRule};
use super::{ConstantError, ConstantResult};

/// `μ = Σ_m p_m ln p_m`.
pub fn mu_plane_entropy(o: &OffspringDistribution) -> ConstantResult {
    let probs = o.probs();
    let mut acc = KahanSum::new();
    for &p in probs {
        if p > 0.0 {
            acc.add(p * p.ln());
        }
    }
    let k = probs.len();
    // the law was truncated where p_m fell below the cutoff; bound what was dropped
    let tail = if k >= 2 && probs[k - 1] > 0.0 && probs[k - 1] < 1e-15 {
        let last = probs[k - 1];
        let q = (last / probs[k - 2]).min(0.999);
        let mass = last * q / (1.0 - q);
        mass * (last.ln().abs() + q.ln().abs() / (1.0 - q)) + mass * acc.value().abs()
    } else {
        0.0
    };
    ConstantResult::new("mu", acc.value(), tail + 1e-15 * acc.value().abs(), "Σ p ln p over the offspring law")
}

/// `μ` of the Poisson(1) law, `-e⁻¹ Σ_{k≥0} (1 + ln k!)/k!`.
pub fn mu_labelled() -> Result<ConstantResult, ConstantError> {
    let term = |k: f64| {
        let k = k as u64;
        -(1.0 + ln_factorial(k)) * (-1.0 - ln_factorial(k)).exp()
    };
    let mut r = series_sum("mu_labelled", 0, 40, &term, TailRule::Geometric)?;
    r.method = "factorially convergent series, geometric tail".into();
    Ok(r)
}

/// Power sums `M_j(L) = Σ_S p_L(S)^j` over unordered shapes `S` of a random
/// binary search tree with `L` vertices, for `j` a power of two.
#[derive(Debug, Default)]
pub struct BstShapePowerSums {
    memo: HashMap<(u32, usize), f64>,
}

impl BstShapePowerSums {
    pub fn new() -> Self {
        Self::default()
    }

    /// `M_j(l)`.
    pub fn get(&mut self, j: u32, l: usize) -> f64 {
        if l <= 1 {
            return 1.0;
        }
        if let Some(&v) = self.memo.get(&(j, l)) {
            return v;
        }
        let jf = j as f64;
        let lf = l as f64;
        // root with a single branch (left or right subtree empty)
        let mut total = (2.0 / lf).powf(jf) * self.get(j, l - 1);
        let mut s = 0.0;
        for a in 1..l - 1 {
            let b = l - 1 - a;
            if a < b {
                s += 2f64.powf(jf) * self.get(j, a) * self.get(j, b);
            } else if a == b {
                let mj = self.get(j, a);
                let m2j = self.get(2 * j, a);
                s += 2f64.powf(jf) * (mj * mj - m2j) / 2.0 + m2j;
            }
        }
        total += s / lf.powf(jf);
        self.memo.insert((j, l), total);
        total
    }
}

/// Number of shape sizes summed for the unordered binary-search-tree constant.
pub const BST_SHAPE_SIZES: usize = 200;

/// `c5 - (4/3) ln 2 + 4 ln 2 Σ_{L≥1} Q(L)/((2L+1)(2L+2)(2L+3))` with
/// `Q(L) = M_2(L)`, the collision probability of unordered shapes.
pub fn bst_unordered_lower(c5: &ConstantResult) -> ConstantResult {
    let mut ps = BstShapePowerSums::new();
    let mut acc = KahanSum::new();
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for l in 1..=BST_SHAPE_SIZES {
        let q = ps.get(2, l);
        monotone &= q <= prev * (1.0 + 1e-12);
        prev = q;
        let lf = l as f64;
        acc.add(q / ((2.0 * lf + 1.0) * (2.0 * lf + 2.0) * (2.0 * lf + 3.0)));
    }
    let n = BST_SHAPE_SIZES as f64;
    // Q is non-increasing, so the tail is at most Q(N) Σ_{L>N} 1/(8L³)
    let tail = if monotone { prev / (16.0 * n * n) } else { 1.0 / (16.0 * n * n) };
    let ln2 = std::f64::consts::LN_2;
    let value = c5.value - 4.0 / 3.0 * ln2 + 4.0 * ln2 * (acc.value() + 0.5 * tail);
    ConstantResult::new(
        "c3",
        value,
        c5.error + 4.0 * ln2 * 0.5 * tail + 1e-14,
        &format!("shape collision power sums up to size {BST_SHAPE_SIZES}"),
    )
    .with_inputs(&["c5"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::WeightSequence;

    #[test]
    fn mu_values() {
        let b = OffspringDistribution::new(&WeightSequence::binary()).unwrap();
        let mu = mu_plane_entropy(&b);
        assert!((mu.value + 1.5 * std::f64::consts::LN_2).abs() < 1e-15);
        let p = OffspringDistribution::new(&WeightSequence::Plane).unwrap();
        let mu = mu_plane_entropy(&p);
        assert!((mu.value + 2.0 * std::f64::consts::LN_2).abs() <= mu.error + 1e-14);
        let l = OffspringDistribution::new(&WeightSequence::Labelled).unwrap();
        let a = mu_plane_entropy(&l);
        let b = mu_labelled().unwrap();
        assert!((a.value - b.value).abs() < 1e-13);
        assert!((b.value + 1.3048422423).abs() < 1e-9);
    }

    #[test]
    fn power_sums_small() {
        let mut ps = BstShapePowerSums::new();
        for l in 1..10 {
            assert!((ps.get(1, l) - 1.0).abs() < 1e-13);
        }
        // size 3: path (prob 2/3) and cherry (prob 1/3)
        assert!((ps.get(2, 3) - (4.0 / 9.0 + 1.0 / 9.0)).abs() < 1e-15);
    }
}
