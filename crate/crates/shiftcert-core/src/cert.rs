//! Certificates: the verdict objects returned by every decision procedure.

use crate::rat::{fmt_rat, Rat};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => write!(f, "CERTIFIED"),
            Verdict::Refuted => write!(f, "REFUTED"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Verdict plus the exact evidence that backs it.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Rank information for certified PSD-style verdicts.
    pub rank: Option<usize>,
    /// Exact rational witness vector for refutations.
    pub witness: Option<Vec<Rat>>,
    /// Value of the witness quadratic form (strictly negative).
    pub witness_value: Option<Rat>,
    /// Where the failure happened (block name, index n, ...).
    pub location: Option<String>,
    /// Why the method could not decide.
    pub reason: Option<String>,
    /// Human-readable trace of what was checked.
    pub transcript: Vec<String>,
}

impl Certificate {
    pub fn certified() -> Self {
        Certificate {
            verdict: Verdict::Certified,
            rank: None,
            witness: None,
            witness_value: None,
            location: None,
            reason: None,
            transcript: Vec::new(),
        }
    }

    pub fn refuted(location: String) -> Self {
        Certificate {
            verdict: Verdict::Refuted,
            rank: None,
            witness: None,
            witness_value: None,
            location: Some(location),
            reason: None,
            transcript: Vec::new(),
        }
    }

    pub fn inconclusive(reason: String) -> Self {
        Certificate {
            verdict: Verdict::Inconclusive,
            rank: None,
            witness: None,
            witness_value: None,
            location: None,
            reason: Some(reason),
            transcript: Vec::new(),
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_witness(mut self, witness: Vec<Rat>, value: Rat) -> Self {
        self.witness = Some(witness);
        self.witness_value = Some(value);
        self
    }

    pub fn note(&mut self, s: String) {
        self.transcript.push(s);
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

pub fn fmt_witness(w: &[Rat]) -> String {
    let mut s = String::from("(");
    for (i, x) in w.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt_rat(x));
    }
    s.push(')');
    s
}
