//! Run-wide settings threaded through every engine call.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::CharacterRule;
use crate::qscalar::Ring;

/// Deliberate faults used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// ribbon signs in explicit ribbon sums and characters are negated
    SignFlip,
    /// ribbon signs in explicit ribbon sums and characters are all +1
    DropSign,
    /// the framing factor q^{kappa(mu1)/2} is left out of the vertex
    DropFraming,
    /// primed vertex operators use s_{lambda/mu} instead of the transpose
    NoTranspose,
    /// Murnaghan-Nakayama signs are taken from the ribbon width
    MnOffByOne,
    /// the framing ratio w3/w2 uses tau + 1 in place of tau
    PerturbTau,
    /// p+_k is built with (-1)^k instead of (-1)^{k+1}
    WrongPPlus,
}

impl Mutation {
    pub const ALL: [Mutation; 7] = [
        Mutation::SignFlip,
        Mutation::DropSign,
        Mutation::DropFraming,
        Mutation::NoTranspose,
        Mutation::MnOffByOne,
        Mutation::PerturbTau,
        Mutation::WrongPPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::SignFlip => "sign-flip",
            Mutation::DropSign => "drop-sign",
            Mutation::DropFraming => "drop-framing",
            Mutation::NoTranspose => "no-transpose",
            Mutation::MnOffByOne => "mn-off-by-one",
            Mutation::PerturbTau => "perturb-tau",
            Mutation::WrongPPlus => "wrong-pplus",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mutation {s:?}")))
    }
}

/// Engine context: the coefficient ring, comparison width and an optional
/// fault to inject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub ring: Ring,
    /// smallest accepted comparison window, lattice units
    pub min_width: i64,
    /// hard cap on intermediate Fock-state weights
    pub fock_cutoff: u32,
    pub mutation: Option<Mutation>,
}

impl Ctx {
    pub fn new(ring: Ring) -> Self {
        Ctx {
            ring,
            min_width: 20,
            fock_cutoff: 12,
            mutation: None,
        }
    }

    pub fn with_lattice(self, lattice: u32) -> Self {
        Ctx {
            ring: Ring { lattice, ..self.ring },
            ..self
        }
    }

    pub fn with_window(self, window: u32) -> Self {
        Ctx {
            ring: self.ring.with_window(window),
            ..self
        }
    }

    pub fn with_mutation(self, m: Option<Mutation>) -> Self {
        Ctx { mutation: m, ..self }
    }

    pub fn is(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    /// Sign attached to a ribbon inside explicit ribbon sums.
    pub fn ribbon_sign(&self, sign: i32) -> i64 {
        match self.mutation {
            Some(Mutation::SignFlip) => -(sign as i64),
            Some(Mutation::DropSign) => 1,
            _ => sign as i64,
        }
    }

    pub fn character_rule(&self) -> CharacterRule {
        match self.mutation {
            Some(Mutation::SignFlip) => CharacterRule::FlipSign,
            Some(Mutation::DropSign) => CharacterRule::DropSign,
            Some(Mutation::MnOffByOne) => CharacterRule::OffByOne,
            _ => CharacterRule::Standard,
        }
    }
}
