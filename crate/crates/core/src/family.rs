//! Family descriptors shared by the samplers, the census and the CLI.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::gw::{GwError, GwSampler, WeightSequence};
use crate::increasing::{sample_increasing_tree, IncError, IncFamily};
use crate::tree::Tree;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family descriptor {0:?}; expected plane, binary, dary:<d>, motzkin, labelled, custom:<w0,w1,...>, recursive, bst, inc-dary:<d>, gport:<r>")]
    Unknown(String),
    #[error(transparent)]
    Simple(#[from] GwError),
    #[error(transparent)]
    Increasing(#[from] IncError),
}

/// Either a simply generated family or a very simple increasing family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Simple(WeightSequence),
    Increasing(IncFamily),
}

impl Family {
    pub fn is_increasing(&self) -> bool {
        matches!(self, Family::Increasing(_))
    }

    pub fn slot_arity(&self) -> Option<u32> {
        match self {
            Family::Simple(w) => w.slot_arity(),
            Family::Increasing(f) => f.slot_arity(),
        }
    }

    pub fn sampler(&self) -> Result<FamilySampler, FamilyError> {
        Ok(match self {
            Family::Simple(w) => FamilySampler::Simple(GwSampler::new(w)?),
            Family::Increasing(f) => FamilySampler::Increasing(*f),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Simple(w) => w.fmt(f),
            Family::Increasing(i) => i.fmt(f),
        }
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let head = s.split(':').next().unwrap_or("");
        match head {
            "recursive" | "bst" | "port" | "inc-dary" | "gport" => Ok(Family::Increasing(s.parse()?)),
            "plane" | "binary" | "dary" | "motzkin" | "labelled" | "labeled" | "cayley" | "custom" => {
                Ok(Family::Simple(s.parse()?))
            }
            _ => Err(FamilyError::Unknown(s.to_string())),
        }
    }
}

/// Prepared sampler producing tree shapes of a family.
#[derive(Debug, Clone)]
pub enum FamilySampler {
    Simple(GwSampler),
    Increasing(IncFamily),
}

impl FamilySampler {
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Tree, FamilyError> {
        Ok(match self {
            FamilySampler::Simple(s) => s.sample(n, rng)?,
            FamilySampler::Increasing(f) => sample_increasing_tree(n, *f, rng)?.shape,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for d in ["plane", "dary:3", "motzkin", "labelled", "custom:1,0,1", "recursive", "bst", "inc-dary:3", "gport:1", "gport:1/2"] {
            let f: Family = d.parse().unwrap();
            assert_eq!(f.to_string(), d);
        }
        assert_eq!("binary".parse::<Family>().unwrap(), Family::Simple(WeightSequence::Dary(2)));
        assert!("tree".parse::<Family>().is_err());
        assert!("dary:x".parse::<Family>().is_err());
    }
}
