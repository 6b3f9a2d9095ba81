//! Compensated series summation with explicit tail bounds.

use crate::numeric::KahanSum;

use super::{ConstantError, ConstantResult};

/// Default number of explicitly summed terms for slowly decaying series.
pub const DEFAULT_CUTOFF: u64 = 10_000_000;

/// How the part of a series beyond the cutoff is bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    /// Positive, decreasing terms: `∫_{N+1}^∞ f ≤ tail ≤ ∫_N^∞ f`.
    Integral,
    /// Terms whose ratio is below the last observed ratio `q < 1`:
    /// `|tail| ≤ |f(N)| q/(1-q)`.
    Geometric,
    /// Caller-supplied bracket `[lo, hi]` for the tail.
    Bracket(f64, f64),
}

/// `∫_a^∞ f` for an integrable, eventually decaying `f`, via `x = a·e^s`
/// and composite Simpson on `s ∈ [0, 80]`.
pub fn integral_to_infinity(a: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    assert!(a > 0.0);
    let steps = 40_000usize;
    let h = 80.0 / steps as f64;
    let g = |s: f64| {
        let x = a * s.exp();
        f(x) * x
    };
    let mut acc = KahanSum::new();
    for i in 0..=steps {
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * g(i as f64 * h));
    }
    acc.value() * h / 3.0
}

/// `∫_a^b f` by composite Simpson with `steps` (even) intervals.
pub fn simpson(a: f64, b: f64, steps: usize, f: &dyn Fn(f64) -> f64) -> f64 {
    let steps = steps + steps % 2;
    let h = (b - a) / steps as f64;
    let mut acc = KahanSum::new();
    for i in 0..=steps {
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * f(a + i as f64 * h));
    }
    acc.value() * h / 3.0
}

/// `Σ_{k=start}^∞ term(k)`: compensated summation up to `cutoff` inclusive,
/// then the tail per `rule`. The reported error covers the tail bracket and
/// accumulated rounding.
pub fn series_sum(
    id: &str,
    start: u64,
    cutoff: u64,
    term: &dyn Fn(f64) -> f64,
    rule: TailRule,
) -> Result<ConstantResult, ConstantError> {
    if cutoff < start {
        return Ok(ConstantResult::new(id, 0.0, 0.0, "empty series"));
    }
    let mut acc = KahanSum::new();
    let mut abs = 0.0f64;
    for k in start..=cutoff {
        let t = term(k as f64);
        abs += t.abs();
        acc.add(t);
    }
    let n = cutoff as f64;
    let (lo, hi, method) = match rule {
        TailRule::Integral => {
            let (a, b, c) = (term(n), term(n + 1.0), term(n + 2.0));
            if !(a >= b && b >= c && c > 0.0) {
                return Err(ConstantError::TailNotApplicable(format!(
                    "{id}: terms are not positive and decreasing at the cutoff {cutoff}"
                )));
            }
            let upper = integral_to_infinity(n, term);
            let lower = integral_to_infinity(n + 1.0, term);
            (lower, upper, format!("compensated sum to {cutoff} + integral tail"))
        }
        TailRule::Geometric => {
            let (a, b) = (term(n - 1.0), term(n));
            let q = (b / a).abs();
            if !q.is_finite() || q >= 1.0 {
                return Err(ConstantError::TailNotApplicable(format!(
                    "{id}: term ratio {q} at the cutoff is not below 1"
                )));
            }
            let bound = b.abs() * q / (1.0 - q);
            (-bound, bound, format!("compensated sum to {cutoff} + geometric tail"))
        }
        TailRule::Bracket(lo, hi) => (lo, hi, format!("compensated sum to {cutoff} + bracketed tail")),
    };
    let rounding = 4.0 * f64::EPSILON * abs + 1e-14 * (hi.abs() + lo.abs());
    let value = acc.value() + 0.5 * (lo + hi);
    Ok(ConstantResult::new(id, value, 0.5 * (hi - lo) + rounding, &method))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_known_sums() {
        let r = series_sum("zero", 5, 4, &|_| 1.0, TailRule::Integral).unwrap();
        assert_eq!((r.value, r.error), (0.0, 0.0));
        // Σ 1/k² = π²/6
        let r = series_sum("basel", 1, 100_000, &|k| 1.0 / (k * k), TailRule::Integral).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.value - exact).abs() <= r.error);
        assert!(r.error < 1e-9);
        // Σ 1/k! from 0 = e
        let fact = |k: f64| 1.0 / (1..=k as u64).map(|i| i as f64).product::<f64>();
        let r = series_sum("e", 0, 25, &fact, TailRule::Geometric).unwrap();
        assert!((r.value - std::f64::consts::E).abs() <= r.error + 1e-15);
    }

    #[test]
    fn tail_rule_rejects_growing_terms() {
        assert!(series_sum("bad", 1, 10, &|k| k, TailRule::Integral).is_err());
        assert!(series_sum("bad", 1, 10, &|k| k, TailRule::Geometric).is_err());
    }

    #[test]
    fn integrals() {
        let v = integral_to_infinity(2.0, &|x| 1.0 / (x * x));
        assert!((v - 0.5).abs() < 1e-12);
        let v = integral_to_infinity(10.0, &|x| x.ln() / (x * x));
        assert!((v - (10f64.ln() + 1.0) / 10.0).abs() < 1e-12);
        assert!((simpson(0.0, 1.0, 100, &|x| x * x) - 1.0 / 3.0).abs() < 1e-14);
    }
}
