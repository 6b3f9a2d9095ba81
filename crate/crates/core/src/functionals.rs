//! Toll functions, additive functionals and recursive-tree shape probabilities.
//!
//! An additive functional is `F(t) = Σ_v f(t(v))`. Every toll here depends on
//! a fringe subtree only through its size, its root degree and the
//! multiplicities of isomorphic root branches, so [`Toll::additive`] runs in
//! one bottom-up pass.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

use crate::canonical::{automorphism_size_exact, branch_multiplicities, class_ids, IsoNotion};
use crate::gw::OffspringDistribution;
use crate::increasing::IncFamily;
use crate::numeric::{ln_factorial, KahanSum};
use crate::tree::Tree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TollError {
    #[error("root degree {degree} exceeds the arity bound {arity}")]
    DegreeExceedsArity { degree: u32, arity: u32 },
}

/// `Σ_v ln P(ξ = deg v)`, or `-∞` when some degree has probability zero.
pub fn nu_log(t: &Tree, o: &OffspringDistribution) -> f64 {
    let mut acc = KahanSum::new();
    for v in 0..t.len() as u32 {
        let p = o.p(t.degree(v) as usize);
        if p == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc.add(p.ln());
    }
    acc.value()
}

/// `ln P(ξ = ρ(t))`, and `0` when that probability vanishes.
pub fn toll_plane(t: &Tree, o: &OffspringDistribution) -> f64 {
    Toll::PlaneEntropy(o.clone()).eval(t).expect("plane toll is total")
}

/// `ln(P(ξ = ρ)·ρ!) - ln(Π m_i!)`, and `0` when `P(ξ = ρ)` vanishes.
pub fn toll_unordered(t: &Tree, o: &OffspringDistribution) -> f64 {
    Toll::UnorderedAut(o.clone()).eval(t).expect("unordered toll is total")
}

/// `ln|t| + ln(Π m_i!)` minus `ln d^{(ρ falling)}` (d-ary), `ln r^{(ρ rising)}`
/// (gports) or nothing (recursive trees).
pub fn toll_inc_noniso(t: &Tree, f: IncFamily) -> Result<f64, TollError> {
    Toll::IncNonIso(f).eval(t)
}

/// `Σ_v ln|t(v)|`.
pub fn shape_functional(t: &Tree) -> f64 {
    t.fringe_sizes().iter().map(|&s| (s as f64).ln()).collect::<KahanSum<f64>>().value()
}

/// Probability that a random recursive tree of size `|S|` has unordered shape
/// `S`: `|S| / (Π_v |S(v)| · |Aut(S)|)`.
pub fn recursive_shape_probability(s: &Tree) -> BigRational {
    let mut den = automorphism_size_exact(s);
    for k in s.fringe_sizes() {
        den *= BigUint::from(k);
    }
    BigRational::new(BigInt::from(s.len()), BigInt::from(den))
}

/// `c_S = p_S / |S|`.
pub fn recursive_shape_weight(s: &Tree) -> BigRational {
    recursive_shape_probability(s) / BigRational::from_integer(BigInt::from(s.len()))
}

/// What a toll function sees of a fringe subtree.
#[derive(Debug, Clone, Copy)]
pub struct Local<'a> {
    pub size: u64,
    pub degree: u32,
    /// Multiplicities of isomorphic (unordered) root branches.
    pub multiplicities: &'a [u64],
}

#[derive(Debug, Clone, PartialEq)]
pub enum Toll {
    /// `ln P(ξ = ρ)`; its functional is `ln ν(t)`.
    PlaneEntropy(OffspringDistribution),
    /// `ln(P(ξ = ρ)ρ!/Π m_i!)`; its functional is `ln(ν(t)Π deg!/|Aut t|)`.
    UnorderedAut(OffspringDistribution),
    IncNonIso(IncFamily),
    /// `ln|t|`; its functional is the shape functional.
    LogSize,
    Constant(f64),
    /// `ρ(t)`; its functional is `|t| - 1`.
    RootDegree,
}

fn ln_mult_factorials(m: &[u64]) -> f64 {
    m.iter().map(|&k| ln_factorial(k)).sum()
}

impl Toll {
    pub fn eval_local(&self, l: Local<'_>) -> Result<f64, TollError> {
        Ok(match self {
            Toll::PlaneEntropy(o) => {
                let p = o.p(l.degree as usize);
                if p > 0.0 {
                    p.ln()
                } else {
                    0.0
                }
            }
            Toll::UnorderedAut(o) => {
                let p = o.p(l.degree as usize);
                if p > 0.0 {
                    p.ln() + ln_factorial(l.degree as u64) - ln_mult_factorials(l.multiplicities)
                } else {
                    0.0
                }
            }
            Toll::IncNonIso(f) => {
                let rho = l.degree as i64;
                let family_term = match f {
                    IncFamily::Recursive => 0.0,
                    IncFamily::Dary(d) => {
                        if l.degree > *d {
                            return Err(TollError::DegreeExceedsArity { degree: l.degree, arity: *d });
                        }
                        (0..rho).map(|i| ((*d as i64 - i) as f64).ln()).sum()
                    }
                    IncFamily::Gport(r) => {
                        let r = *r.numer() as f64 / *r.denom() as f64;
                        (0..rho).map(|i| (r + i as f64).ln()).sum()
                    }
                };
                (l.size as f64).ln() + ln_mult_factorials(l.multiplicities) - family_term
            }
            Toll::LogSize => (l.size as f64).ln(),
            Toll::Constant(c) => *c,
            Toll::RootDegree => l.degree as f64,
        })
    }

    fn needs_classes(&self) -> bool {
        matches!(self, Toll::UnorderedAut(_) | Toll::IncNonIso(_))
    }

    /// `f(t)`.
    pub fn eval(&self, t: &Tree) -> Result<f64, TollError> {
        let mults = if self.needs_classes() {
            let (ids, _) = class_ids(t, IsoNotion::Unordered);
            branch_multiplicities(t, &ids, 0, &mut Vec::new())
        } else {
            Vec::new()
        };
        self.eval_local(Local {
            size: t.len() as u64,
            degree: t.degree(0),
            multiplicities: &mults,
        })
    }

    /// `F(t) = Σ_v f(t(v))` in one pass.
    pub fn additive(&self, t: &Tree) -> Result<f64, TollError> {
        let sizes = t.fringe_sizes();
        let ids = if self.needs_classes() {
            Some(class_ids(t, IsoNotion::Unordered).0)
        } else {
            None
        };
        let mut buf = Vec::new();
        let mut acc = KahanSum::new();
        for v in 0..t.len() as u32 {
            let mults = match &ids {
                Some(ids) => branch_multiplicities(t, ids, v, &mut buf),
                None => Vec::new(),
            };
            acc.add(self.eval_local(Local {
                size: sizes[v as usize],
                degree: t.degree(v),
                multiplicities: &mults,
            })?);
        }
        Ok(acc.value())
    }

    /// `F(t)` by extracting every fringe subtree and evaluating [`Toll::eval`]
    /// on it. Quadratic; an oracle for [`Toll::additive`].
    pub fn additive_naive(&self, t: &Tree) -> Result<f64, TollError> {
        let mut acc = KahanSum::new();
        for v in 0..t.len() as u32 {
            acc.add(self.eval(&t.fringe_subtree(v))?);
        }
        Ok(acc.value())
    }
}

/// `ln` of `n! / Π_v|t(v)|` computed from the shape functional.
pub fn ln_increasing_labellings(t: &Tree) -> f64 {
    ln_factorial(t.len() as u64) - shape_functional(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::WeightSequence;
    use crate::tree::TreeKind;

    fn plane(s: &str) -> Tree {
        Tree::parse(s, TreeKind::Plane).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn nu_values() {
        let p = OffspringDistribution::new(&WeightSequence::Plane).unwrap();
        let b = OffspringDistribution::new(&WeightSequence::binary()).unwrap();
        let m = OffspringDistribution::new(&WeightSequence::Motzkin).unwrap();
        assert!((nu_log(&Tree::singleton(), &p) - 0.5f64.ln()).abs() < 1e-15);
        assert!((nu_log(&Tree::star(3), &b) - (1.0f64 / 64.0).ln()).abs() < 1e-14);
        assert_eq!(nu_log(&Tree::star(4), &m), f64::NEG_INFINITY);
        assert!((toll_plane(&Tree::singleton(), &b) - 0.25f64.ln()).abs() < 1e-15);
        assert_eq!(toll_plane(&Tree::star(4), &m), 0.0);
    }

    #[test]
    fn unordered_toll_small() {
        let fb = OffspringDistribution::new(&"custom:1,0,1".parse().unwrap()).unwrap();
        let t = Tree::star(3);
        let f = Toll::UnorderedAut(fb.clone()).additive(&t).unwrap();
        assert!((f - 0.125f64.ln()).abs() < 1e-14);
        assert!((toll_unordered(&Tree::singleton(), &fb) - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn noniso_toll_small() {
        assert_eq!(toll_inc_noniso(&Tree::singleton(), IncFamily::Recursive).unwrap(), 0.0);
        let v = toll_inc_noniso(&Tree::star(3), IncFamily::Recursive).unwrap();
        assert!((v - (3f64.ln() + 2f64.ln())).abs() < 1e-15);
        assert!(toll_inc_noniso(&Tree::path(2), IncFamily::bst()).unwrap().abs() < 1e-15);
        assert!(toll_inc_noniso(&Tree::star(4), IncFamily::bst()).is_err());
    }

    #[test]
    fn shape_functional_values() {
        assert!((shape_functional(&Tree::path(3)) - 6f64.ln()).abs() < 1e-15);
        assert!((shape_functional(&Tree::star(3)) - 3f64.ln()).abs() < 1e-15);
        assert!((shape_functional(&Tree::complete_binary(3)) - 63f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn shape_probabilities() {
        assert_eq!(recursive_shape_probability(&Tree::singleton()), q(1, 1));
        assert_eq!(recursive_shape_probability(&Tree::path(3)), q(1, 2));
        assert_eq!(recursive_shape_probability(&Tree::star(3)), q(1, 2));
        assert_eq!(recursive_shape_weight(&Tree::star(3)), q(1, 6));
        assert_eq!(recursive_shape_probability(&plane("(()(()))")), q(1, 2));
    }

    #[test]
    fn additive_matches_naive() {
        let o = OffspringDistribution::new(&WeightSequence::Plane).unwrap();
        let t = plane("((()())(()())()((())))");
        for toll in [
            Toll::PlaneEntropy(o.clone()),
            Toll::UnorderedAut(o.clone()),
            Toll::IncNonIso(IncFamily::Recursive),
            Toll::IncNonIso(IncFamily::port()),
            Toll::LogSize,
            Toll::Constant(1.5),
            Toll::RootDegree,
        ] {
            let a = toll.additive(&t).unwrap();
            let b = toll.additive_naive(&t).unwrap();
            assert!((a - b).abs() < 1e-12, "{toll:?}");
        }
    }
}
