//! Three-valued answers with attached evidence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exponents::{GapVerdict, Region};
use crate::extended::{ext, ext_opt, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

/// Citation used for operator verdicts whose precondition failed.
pub const INCLUSION_NOT_ESTABLISHED: &str = "inclusion not established";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    pub certificate: Option<Certificate>,
    pub citation: String,
    /// Why an `Unknown` could not be resolved (which comparison failed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn yes(certificate: Certificate, citation: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Yes,
            certificate: Some(certificate),
            citation: citation.into(),
            reason: None,
        }
    }

    pub fn no(certificate: Certificate, citation: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::No,
            certificate: Some(certificate),
            citation: citation.into(),
            reason: None,
        }
    }

    pub fn unknown(certificate: Option<Certificate>, citation: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Unknown,
            certificate,
            citation: citation.into(),
            reason: Some(reason.into()),
        }
    }

    pub fn not_applicable() -> Self {
        Verdict::unknown(
            None,
            INCLUSION_NOT_ESTABLISHED,
            "the inclusion itself is not certified",
        )
    }

    pub fn with_citation(mut self, citation: impl Into<String>) -> Self {
        self.citation = citation.into();
        self
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }

    /// One-line rendering: `VERDICT — CITATION — summary`.
    pub fn summary_line(&self) -> String {
        let detail = match (&self.certificate, &self.reason) {
            (_, Some(r)) if self.answer == Answer::Unknown => r.clone(),
            (Some(c), _) => c.statement.clone(),
            (None, Some(r)) => r.clone(),
            (None, None) => String::new(),
        };
        format!("{} — {} — {}", self.answer, self.citation, detail)
    }
}

/// Serializable form of an eventually periodic index family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub onset: u64,
}

impl Family {
    pub fn region(&self) -> Region {
        Region::residues(self.modulus, &self.residues).with_onset(self.onset)
    }
}

impl From<&Region> for Family {
    fn from(r: &Region) -> Self {
        Family {
            modulus: r.modulus,
            residues: (0..r.modulus).filter(|&i| r.mask[i as usize]).collect(),
            onset: r.onset,
        }
    }
}

/// How the terms of a divergent series are bounded below on a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TermBound {
    /// Every term is at least `value`.
    Constant { value: f64 },
    /// `e_n <= max_exponent`, so `alpha^{e_n} >= alpha^max_exponent`.
    BoundedExponent { max_exponent: f64 },
    /// `e_n <= coefficient * a_n`: block `j` contributes `(j alpha^C)^j`-many.
    BlockGrowth { coefficient: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub alpha: f64,
    #[serde(with = "ext")]
    pub partial_sum: f64,
    pub exceeds_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `term(n) <= ratio^n` for `n >= onset`.
    GeometricComparison {
        alpha: f64,
        ratio: f64,
        onset: u64,
        #[serde(with = "ext_opt")]
        sum_bound: Option<f64>,
    },
    /// `term(n) <= constant * n^(-power)` for `n >= onset`.
    PSeriesComparison {
        alpha: f64,
        constant: f64,
        power: f64,
        onset: u64,
        #[serde(with = "ext_opt")]
        sum_bound: Option<f64>,
    },
    /// `e_n >= coeff * a_n^power` with `power > 1` for `n >= onset`; block
    /// `j` then contributes at most `j^j alpha^(coeff j^power)`.
    BlockComparison {
        alpha: f64,
        coeff: f64,
        power: f64,
        onset: u64,
        #[serde(with = "ext_opt")]
        sum_bound: Option<f64>,
    },
    /// Every term with `n >= onset` vanishes.
    FiniteSupport {
        onset: u64,
        #[serde(with = "ext_opt")]
        sum_bound: Option<f64>,
    },
    /// Terms bounded below on an infinite family; `alpha: None` means the
    /// bound holds for every `alpha` in `(0, 1)`.
    DivergenceByTerms {
        alpha: Option<f64>,
        family: Family,
        bound: TermBound,
    },
    /// Uncertified partial sums.
    Numeric {
        horizon: u64,
        threshold: f64,
        probes: Vec<Probe>,
    },
    /// Certified enclosure of a profile quantity.
    Profile { quantity: String, interval: Interval },
    /// Outcome of the `liminf |p_n - q_n|` comparison.
    Gap { gap: GapVerdict },
    /// `q_n <= p_n - delta` on an infinite family.
    ReverseGap { family: Family, delta: f64 },
    /// The unit vectors are normalized in every such space.
    CanonicalBasis,
    /// Several facts combined.
    Composite { parts: Vec<Certificate> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub evidence: Evidence,
    pub statement: String,
}

impl Certificate {
    pub fn new(evidence: Evidence, statement: impl Into<String>) -> Self {
        Certificate {
            evidence,
            statement: statement.into(),
        }
    }
}
