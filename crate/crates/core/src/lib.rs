//! Random trees, fringe subtree census and the constants that govern it.
//!
//! The crate samples trees from simply generated families (via conditioned
//! Galton–Watson processes) and from the very simple increasing families
//! (recursive trees, d-ary increasing trees, gports), counts distinct fringe
//! subtrees under three isomorphism notions by hash-consing the tree into its
//! minimal DAG, and evaluates the asymptotic constants bounding those counts.
//!
//! Formula-level code is generic over [`Scalar`], so the same routine serves
//! exact rational oracles ([`Exact`]) and floating point runs ([`Real`]).

pub mod canonical;
pub mod constants;
pub mod experiments;
pub mod family;
pub mod functionals;
pub mod gw;
pub mod increasing;
pub mod numeric;
pub mod rng;
pub mod scalar;
pub mod tree;

pub use canonical::{CanonicalCode, IsoNotion, MinimalDag};
pub use constants::ConstantResult;
pub use family::Family;
pub use gw::{OffspringDistribution, WeightSequence};
pub use increasing::IncFamily;
pub use scalar::Scalar;
pub use tree::{LabeledTree, Tree, TreeError};

/// Floating point scalar used by samplers, tolls and constants.
pub type Real = f64;
/// Single-precision scalar, accepted wherever formulas are generic.
pub type Real32 = f32;
/// Exact rational scalar used by enumeration oracles.
pub type Exact = num_rational::BigRational;
/// Small exact rational, e.g. the attachment parameter of an increasing family.
pub type SmallRatio = num_rational::Ratio<i64>;
