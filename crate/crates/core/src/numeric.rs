//! Compensated summation and log-factorials.

use std::sync::OnceLock;

use num_traits::Float;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<F> {
    sum: F,
    comp: F,
}

impl<F: Float> KahanSum<F> {
    pub fn new() -> Self {
        KahanSum {
            sum: F::zero(),
            comp: F::zero(),
        }
    }

    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &KahanSum<F>) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

impl<F: Float> FromIterator<F> for KahanSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

const TABLE: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE);
        let mut acc = KahanSum::new();
        t.push(0.0);
        for k in 1..TABLE {
            acc.add((k as f64).ln());
            t.push(acc.value());
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE {
        return ln_factorial_table()[n as usize];
    }
    // Stirling series; the first omitted term is below 1e-20 here
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive() {
        let mut k = KahanSum::new();
        let mut naive = 0.0f64;
        k.add(1.0);
        naive += 1.0;
        for _ in 0..1_000_000 {
            k.add(1e-16);
            naive += 1e-16;
        }
        assert!((k.value() - (1.0 + 1e-10)).abs() < 1e-15);
        assert_eq!(naive, 1.0);
    }

    #[test]
    fn kahan_f32() {
        let s: KahanSum<f32> = (0..10_000).map(|_| 0.1f32).collect();
        assert!((s.value() - 1000.0).abs() < 1e-3);
    }

    #[test]
    fn ln_factorial_matches_table_and_stirling() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        // continuity across the table boundary
        let direct: f64 = (1..=5000u64).map(|k| (k as f64).ln()).collect::<KahanSum<f64>>().value();
        assert!((ln_factorial(5000) - direct).abs() < 1e-9);
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-13);
    }
}
