//! Asymptotic constants: growth rates, entropies, `κ` and the bounds
//! `C₁ ≥ C₂` of every supported (family, notion) setting, plus the named
//! constants `c1` ... `c18`.
//!
//! Distinct fringe subtree counts behave like `κ√C · n/√ln n` for simply
//! generated families and `κC · n/ln n` for increasing families, with `C`
//! between `C₂` and `C₁`.

pub mod c17;
pub mod entropy;
pub mod growth;
pub mod series;

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::canonical::IsoNotion;
use crate::family::Family;
use crate::gw::{GwError, OffspringDistribution, WeightSequence};
use crate::increasing::IncFamily;

pub use c17::c17_series;
pub use entropy::{bst_unordered_lower, mu_labelled, mu_plane_entropy};
pub use growth::{restricted_plane_growth, unordered_growth, CountClass, CountSeries, DegreeSet};
pub use series::{series_sum, TailRule, DEFAULT_CUTOFF};

#[derive(Debug, Error)]
pub enum ConstantError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("tail bound not applicable: {0}")]
    TailNotApplicable(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unknown constant {0:?}")]
    Unknown(String),
    #[error("no constants are available for {family} under the {notion} notion")]
    UnsupportedSetting { family: String, notion: IsoNotion },
    #[error(transparent)]
    Family(#[from] GwError),
}

/// A computed constant with an absolute error bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantResult {
    pub id: String,
    pub value: f64,
    pub error: f64,
    pub method: String,
    /// External input constants the value depends on.
    pub inputs: Vec<String>,
    /// Independently published value, when one exists.
    pub reference: Option<f64>,
}

impl ConstantResult {
    pub fn new(id: &str, value: f64, error: f64, method: &str) -> Self {
        ConstantResult {
            id: id.to_string(),
            value,
            error,
            method: method.to_string(),
            inputs: Vec::new(),
            reference: None,
        }
    }

    pub fn exact(id: &str, value: f64, method: &str) -> Self {
        Self::new(id, value, 4.0 * f64::EPSILON * value.abs(), method)
    }

    pub fn with_inputs(mut self, inputs: &[&str]) -> Self {
        for i in inputs {
            if !self.inputs.iter().any(|x| x == i) {
                self.inputs.push(i.to_string());
            }
        }
        self
    }

    fn renamed(mut self, id: &str) -> Self {
        self.id = id.to_string();
        self
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.value - self.error, self.value + self.error)
    }

    /// Whether `x`, known to `±slack`, is compatible with this result.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (self.value - x).abs() <= self.error + slack
    }
}

impl fmt::Display for ConstantResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:.12} ± {:.1e} ({})", self.id, self.value, self.error, self.method)
    }
}

/// A constant taken from outside this crate rather than computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputConstant {
    pub name: &'static str,
    pub value: f64,
    /// Half the unit in the last published digit.
    pub rounding: f64,
    pub provenance: &'static str,
}

/// Variance-type constant of the central limit theorem for `ln|Aut|` of
/// uniformly random full binary trees.
pub const GAMMA: InputConstant = InputConstant {
    name: "gamma",
    value: 0.2710416936,
    rounding: 5e-11,
    provenance: "published limiting constant of the central limit theorem for log |Aut(T)| of random full binary trees; consumed as an input",
};

/// Analogous constant for random labelled (Cayley) trees.
pub const GAMMA_PRIME: InputConstant = InputConstant {
    name: "gamma_prime",
    value: 0.0522901096,
    rounding: 5e-11,
    provenance: "published limiting constant of the central limit theorem for log |Aut(T)| of random labelled trees; consumed as an input",
};

/// Published 10-digit values, each known to `±5e-11`.
#[allow(clippy::approx_constant)]
pub const REFERENCE_VALUES: &[(&str, f64)] = &[
    ("c1", 1.0591261434),
    ("c2", 1.0761505454),
    ("c3", 1.5470025923),
    ("c4", 1.8191392203),
    ("c5", 2.4071298335),
    ("c6", 2.7725887222),
    ("c7", 1.1505709891),
    ("c8", 1.1827073223),
    ("c9", 0.9114210724),
    ("c10", 0.9394372787),
    ("c11", 0.8184794989),
    ("c12", 0.8306271816),
    ("c13", 0.5854804841),
    ("c14", 0.6931471806),
    ("c15", 1.9450317130),
    ("c16", 2.1972245773),
    ("c17", 0.9136401430),
    ("c18", 1.0837575972),
    ("b_we", 2.4832535363),
    ("b_polya", 2.9557652857),
    ("mu_labelled", -1.3048422423),
    ("gamma", 0.2710416936),
    ("gamma_prime", 0.0522901096),
];

pub const REFERENCE_ROUNDING: f64 = 5e-11;

pub fn reference_value(id: &str) -> Option<f64> {
    REFERENCE_VALUES.iter().find(|(k, _)| *k == id).map(|&(_, v)| v)
}

/// Ids of the named constants, in display order.
pub const NAMED_IDS: &[&str] = &[
    "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12", "c13", "c14", "c15", "c16", "c17",
    "c18", "b_we", "b_polya", "mu_labelled", "gamma", "gamma_prime",
];

/// Numerical knobs of the registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegistryConfig {
    /// Terms summed explicitly in slowly converging series.
    pub cutoff: u64,
    /// Length of exact counting series for growth constants.
    pub series_len: usize,
    /// Largest shape size in the recursive-tree shape series.
    pub shape_size: usize,
}

impl Default for RegistryConfig {
    fn default() -> Self {
        RegistryConfig {
            cutoff: DEFAULT_CUTOFF,
            series_len: 400,
            shape_size: 16,
        }
    }
}

/// Computes constants on demand and caches them.
#[derive(Debug)]
pub struct Registry {
    config: RegistryConfig,
    cache: Mutex<HashMap<String, ConstantResult>>,
}

fn sqrt_with_error(x: &ConstantResult, scale: f64, id: &str) -> ConstantResult {
    let v = scale * x.value.sqrt();
    let e = scale * x.error / (2.0 * x.value.sqrt());
    let mut r = ConstantResult::new(id, v, e + 4.0 * f64::EPSILON * v, &x.method);
    r.inputs = x.inputs.clone();
    r
}

fn ln_with_error(x: &ConstantResult, scale: f64, id: &str) -> ConstantResult {
    let v = scale * x.value.ln();
    let mut r = ConstantResult::new(id, v, scale.abs() * x.error / x.value + 4.0 * f64::EPSILON * v.abs(), &x.method);
    r.inputs = x.inputs.clone();
    r
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new(RegistryConfig::default())
    }
}

impl Registry {
    pub fn new(config: RegistryConfig) -> Self {
        Registry {
            config,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> RegistryConfig {
        self.config
    }

    /// The constant with the given id; see [`NAMED_IDS`] and the
    /// parametrised ids `kappa:<family>`, `thm9:<family>`, `c_lower:<d>`,
    /// `c_upper:<d>`, `mu:<family>`, `C1:<family>/<notion>` and
    /// `C2:<family>/<notion>`.
    pub fn get(&self, id: &str) -> Result<ConstantResult, ConstantError> {
        if let Some(r) = self.cache.lock().unwrap().get(id) {
            return Ok(r.clone());
        }
        let mut r = self.compute(id)?;
        r.id = id.to_string();
        if r.reference.is_none() {
            r.reference = reference_value(id);
        }
        self.cache.lock().unwrap().insert(id.to_string(), r.clone());
        Ok(r)
    }

    fn series(&self, id: &str, start: u64, term: &dyn Fn(f64) -> f64) -> Result<ConstantResult, ConstantError> {
        series_sum(id, start, self.config.cutoff, term, TailRule::Integral)
    }

    fn compute(&self, id: &str) -> Result<ConstantResult, ConstantError> {
        let two_over_sqrt_pi = 2.0 / PI.sqrt();
        let sqrt_2_over_pi = (2.0 / PI).sqrt();
        if let Some((head, arg)) = id.split_once(':') {
            return self.compute_parametrised(head, arg);
        }
        Ok(match id {
            "gamma" | "gamma_prime" => {
                let c = if id == "gamma" { GAMMA } else { GAMMA_PRIME };
                let mut r = ConstantResult::new(id, c.value, c.rounding, c.provenance);
                r.inputs.push(c.name.to_string());
                r
            }
            "b_we" => unordered_growth(&DegreeSet::finite(&[0, 1, 2])?, self.config.series_len)?,
            "b_polya" => unordered_growth(&DegreeSet::All, self.config.series_len)?,
            "mu_labelled" => mu_labelled()?,
            "c1" => {
                let v = two_over_sqrt_pi * ((1.0 + GAMMA.value) * LN_2).sqrt();
                let e = v / (2.0 * (1.0 + GAMMA.value)) * GAMMA.rounding;
                ConstantResult::new(id, v, e + 1e-15, "closed form in gamma, leaf-count parametrisation")
                    .with_inputs(&["gamma"])
            }
            "c2" => {
                let b = self.get("b_we")?;
                let lb = ln_with_error(&b, 1.0, "ln_b");
                sqrt_with_error(&lb, two_over_sqrt_pi, id)
            }
            "c3" => bst_unordered_lower(&self.get("c5")?),
            "c4" => ln_with_error(&self.get("b_we")?, 2.0, id),
            "c5" => self.series(id, 2, &|k| 4.0 * k.ln() / ((k + 1.0) * (k + 2.0)))?,
            "c6" => ConstantResult::exact(id, 4.0 * LN_2, "closed form"),
            "c7" => {
                let mu = mu_plane_entropy(&OffspringDistribution::new(&WeightSequence::binary())?);
                let neg = ConstantResult::new("-mu", -mu.value, mu.error, &mu.method);
                sqrt_with_error(&neg, two_over_sqrt_pi, id)
            }
            "c8" => ConstantResult::exact(id, two_over_sqrt_pi * 3f64.ln().sqrt(), "closed form"),
            "c9" => {
                let mu = self.get("mu_labelled")?;
                let neg = ConstantResult::new("-mu", -mu.value, mu.error, &mu.method);
                sqrt_with_error(&neg, sqrt_2_over_pi, id)
            }
            "c10" => ConstantResult::exact(id, sqrt_2_over_pi * 4f64.ln().sqrt(), "closed form"),
            "c11" => {
                let v = sqrt_2_over_pi * (1.0 + GAMMA_PRIME.value).sqrt();
                let e = v / (2.0 * (1.0 + GAMMA_PRIME.value)) * GAMMA_PRIME.rounding;
                ConstantResult::new(id, v, e + 1e-15, "closed form in gamma_prime").with_inputs(&["gamma_prime"])
            }
            "c12" => {
                let lb = ln_with_error(&self.get("b_polya")?, 1.0, "ln_b");
                sqrt_with_error(&lb, sqrt_2_over_pi, id)
            }
            "c13" => {
                let s = self.series(id, 2, &|k| k.ln() / ((2.0 * k + 1.0) * (2.0 * k - 1.0)))?;
                ConstantResult::new(id, LN_2 / 2.0 + s.value, s.error, &s.method)
            }
            "c14" => ConstantResult::exact(id, LN_2, "closed form"),
            "c15" => self.series(id, 2, &|k| 4.0 * (k.ln() - 2.0 * LN_2 / k) / ((k + 1.0) * (k + 2.0)))?,
            "c16" => ConstantResult::exact(id, 2.0 * 3f64.ln(), "closed form"),
            "c17" => c17_series(self.config.shape_size)?,
            "c18" => ln_with_error(&self.get("b_polya")?, 1.0, id),
            _ => return Err(ConstantError::Unknown(id.to_string())),
        })
    }

    fn compute_parametrised(&self, head: &str, arg: &str) -> Result<ConstantResult, ConstantError> {
        let parse_d = |s: &str| match s.trim().parse::<u32>() {
            Ok(d) if d >= 2 => Ok(d),
            _ => Err(ConstantError::InvalidInput(format!("arity must be an integer ≥ 2, got {s:?}"))),
        };
        let family = |s: &str| {
            s.parse::<Family>()
                .map_err(|e| ConstantError::InvalidInput(e.to_string()))
        };
        match head {
            "kappa" => Ok(ConstantResult::exact("kappa", kappa(&family(arg)?)?, "closed form")),
            "thm9" => match family(arg)? {
                Family::Simple(w) => {
                    let o = OffspringDistribution::new(&w)?;
                    let (f, f1, f2) = o.phi_at_tau();
                    let v = 2.0 / o.tau() * (f * f1.ln() / (2.0 * PI * f2)).sqrt();
                    Ok(ConstantResult::new("thm9", v, 1e-13 * v, "closed form at the critical point"))
                }
                Family::Increasing(_) => Err(ConstantError::InvalidInput(format!(
                    "{arg} is not a simply generated family"
                ))),
            },
            "mu" => match family(arg)? {
                Family::Simple(w) => Ok(mu_plane_entropy(&OffspringDistribution::new(&w)?)),
                Family::Increasing(_) => Err(ConstantError::InvalidInput(format!(
                    "{arg} is not a simply generated family"
                ))),
            },
            "c_lower" => {
                let d = parse_d(arg)? as f64;
                let s = self.series("c_lower", 2, &|k| {
                    d * d * k.ln() / (((d - 1.0) * k + d) * ((d - 1.0) * k + 1.0))
                })?;
                let head = d / (d - 1.0) * (d - 1.0).ln();
                Ok(ConstantResult::new("c_lower", head + s.value, s.error, &s.method))
            }
            "c_upper" => {
                let d = parse_d(arg)? as f64;
                let v = d / (d - 1.0) * (d * d.ln() - (d - 1.0) * (d - 1.0).ln());
                Ok(ConstantResult::exact("c_upper", v, "closed form"))
            }
            "C1" | "C2" => {
                let (f, notion) = arg
                    .rsplit_once('/')
                    .ok_or_else(|| ConstantError::InvalidInput(format!("expected <family>/<notion>, got {arg:?}")))?;
                let notion: IsoNotion = notion.parse().map_err(ConstantError::InvalidInput)?;
                let s = self.setting(&family(f)?, notion)?;
                Ok(if head == "C1" { s.upper } else { s.lower })
            }
            _ => Err(ConstantError::Unknown(format!("{head}:{arg}"))),
        }
    }

    /// `κ`, `C₁` and `C₂` for counting fringe subtrees of `family` under `notion`.
    pub fn setting(&self, family: &Family, notion: IsoNotion) -> Result<Setting, ConstantError> {
        let unsupported = || ConstantError::UnsupportedSetting {
            family: family.to_string(),
            notion,
        };
        let k = kappa(family)?;
        let notion = match (family.slot_arity(), notion) {
            (None, IsoNotion::AsFamily) if !matches!(family, Family::Simple(WeightSequence::Labelled)) => {
                IsoNotion::Plane
            }
            _ => notion,
        };
        let exact = |v: f64| ConstantResult::exact("C", v, "closed form");
        let (upper, lower) = match family {
            Family::Simple(w) => {
                let o = OffspringDistribution::new(w)?;
                match notion {
                    IsoNotion::AsFamily => {
                        if !integer_weights(w) {
                            return Err(unsupported());
                        }
                        let c = exact(o.growth().ln());
                        (c.clone(), c)
                    }
                    IsoNotion::Plane => {
                        let support = match w.max_degree() {
                            None => DegreeSet::All,
                            Some(m) => DegreeSet::finite(
                                &(0..=m).filter(|&j| o.p(j) > 0.0).collect::<Vec<_>>(),
                            )?,
                        };
                        let mu = mu_plane_entropy(&o);
                        (
                            exact(restricted_plane_growth(&support)?.ln()),
                            ConstantResult::new("C", -mu.value, mu.error, &mu.method),
                        )
                    }
                    IsoNotion::Unordered => {
                        let full_binary = WeightSequence::custom(vec![1.into(), 0.into(), 1.into()].into_iter().map(num_rational::BigRational::from_integer).collect())?;
                        if *w == full_binary {
                            let b = self.get("b_we")?;
                            let mut c1 = ln_with_error(&b, 0.5, "C");
                            c1.method = "half the log of the unordered binary growth constant (per vertex)".into();
                            let v = (1.0 + GAMMA.value) * LN_2 / 2.0;
                            let c2 = ConstantResult::new("C", v, LN_2 / 2.0 * GAMMA.rounding, "closed form in gamma")
                                .with_inputs(&["gamma"]);
                            (c1, c2)
                        } else if *w == WeightSequence::Labelled {
                            let c1 = ln_with_error(&self.get("b_polya")?, 1.0, "C");
                            let c2 = ConstantResult::new("C", 1.0 + GAMMA_PRIME.value, GAMMA_PRIME.rounding, "closed form in gamma_prime")
                                .with_inputs(&["gamma_prime"]);
                            (c1, c2)
                        } else {
                            return Err(unsupported());
                        }
                    }
                }
            }
            Family::Increasing(f) => {
                let scale = 1.0 / k;
                let scaled = |r: ConstantResult| ConstantResult::new("C", r.value * scale, r.error * scale, &r.method).with_inputs(&r.inputs.iter().map(String::as_str).collect::<Vec<_>>());
                match (f, notion) {
                    (IncFamily::Dary(d), IsoNotion::AsFamily) => (
                        scaled(self.get(&format!("c_upper:{d}"))?),
                        scaled(self.get(&format!("c_lower:{d}"))?),
                    ),
                    (IncFamily::Dary(2), IsoNotion::Plane) => (scaled(self.get("c16")?), scaled(self.get("c15")?)),
                    (IncFamily::Dary(2), IsoNotion::Unordered) => (scaled(self.get("c4")?), scaled(self.get("c3")?)),
                    (IncFamily::Gport(r), IsoNotion::Plane) if *r == num_rational::Ratio::from_integer(1) => {
                        (scaled(self.get("c14")?), scaled(self.get("c13")?))
                    }
                    (IncFamily::Recursive, IsoNotion::Unordered) => {
                        (scaled(self.get("c18")?), scaled(self.get("c17")?))
                    }
                    _ => return Err(unsupported()),
                }
            }
        };
        Ok(Setting {
            family: family.clone(),
            notion,
            kappa: k,
            upper: upper.renamed("C1"),
            lower: lower.renamed("C2"),
        })
    }
}

fn integer_weights(w: &WeightSequence) -> bool {
    match w {
        WeightSequence::Labelled => false,
        WeightSequence::Custom(v) => v.iter().all(|x| x.is_integer()),
        _ => true,
    }
}

/// `sqrt(2/(πσ²))` for simply generated families, `1/(1+α)` for increasing ones.
pub fn kappa(family: &Family) -> Result<f64, ConstantError> {
    Ok(match family {
        Family::Simple(w) => OffspringDistribution::new(w)?.kappa(),
        Family::Increasing(f) => {
            let a = f.alpha_ratio() + 1;
            *a.denom() as f64 / *a.numer() as f64
        }
    })
}

/// How the distinct count is normalised before comparing with the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    /// `count · √(ln n) / n` against `[κ√C₂, κ√C₁]`.
    SqrtLog,
    /// `count · ln n / n` against `[κC₂, κC₁]`.
    Log,
}

/// Constants governing one (family, notion) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub family: Family,
    pub notion: IsoNotion,
    pub kappa: f64,
    pub upper: ConstantResult,
    pub lower: ConstantResult,
}

impl Setting {
    pub fn scaling(&self) -> Scaling {
        if self.family.is_increasing() {
            Scaling::Log
        } else {
            Scaling::SqrtLog
        }
    }

    /// `(low, high)` limits of the normalised count.
    pub fn band(&self) -> (f64, f64) {
        match self.scaling() {
            Scaling::SqrtLog => (self.kappa * self.lower.value.sqrt(), self.kappa * self.upper.value.sqrt()),
            Scaling::Log => (self.kappa * self.lower.value, self.kappa * self.upper.value),
        }
    }

    pub fn normalise(&self, count: f64, n: f64) -> f64 {
        match self.scaling() {
            Scaling::SqrtLog => count * n.ln().sqrt() / n,
            Scaling::Log => count * n.ln() / n,
        }
    }
}

/// Process-wide registry with the default configuration.
pub fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(Registry::default)
}

/// Shorthand for `registry().get(id)`.
pub fn theorem_constant(id: &str) -> Result<ConstantResult, ConstantError> {
    registry().get(id)
}
