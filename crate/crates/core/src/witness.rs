//! Explicit subsequences behind the classification, and a norm-ratio probe.
//!
//! Nothing here is a certificate: witnesses are found by scanning and the
//! probe reports raw numbers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::inclusion_holds;
use crate::exponents::{liminf_abs_gap, profile, ExponentSequence, GapVerdict, IndexSet, Tri};
use crate::extended::ext_vec;
use crate::series::SeriesOptions;
use crate::vectors::{luxemburg_norm, NormError, SparseVector};

/// Indices scanned per witness term before giving up.
pub const SCAN_HORIZON: u64 = 10_000_000;

pub const GAP_ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("no index for term {k} in {from}..{to}")]
    HorizonExhausted { k: u64, from: u64, to: u64 },
}

/// `|p_n - q_n| <= 1/k` (matches block starts exactly) or `< 1/k`.
/// Both compare with a relative margin of [`GAP_ROUNDING`], so that a gap
/// of exactly `1/k` computed with rounding error lands on the intended side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapBound {
    #[default]
    Inclusive,
    Strict,
}

impl GapBound {
    fn admits(self, gap: f64, k: u64) -> bool {
        let bound = 1.0 / k as f64;
        match self {
            GapBound::Inclusive => gap <= bound * (1.0 + GAP_ROUNDING),
            GapBound::Strict => gap < bound * (1.0 - GAP_ROUNDING),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Equality,
    Linf,
}

/// Numeric record attached to a witness: a partial sum and the bound the
/// argument predicts for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub description: String,
    pub partial_sum: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSubsequence {
    pub kind: WitnessKind,
    pub indices: Vec<u64>,
    /// Gaps `|p - q|` (equality) or exponents `p` (linf) at the indices.
    #[serde(with = "ext_vec")]
    pub values: Vec<f64>,
    pub checks: WitnessChecks,
}

/// Lazy scan for the `k`-th witness index, `k = 1, 2, ...`.
pub struct WitnessStream<F> {
    admits: F,
    k: u64,
    next_from: u64,
    horizon: u64,
    done: bool,
}

impl<F: FnMut(u64, u64) -> Option<f64>> Iterator for WitnessStream<F> {
    type Item = Result<(u64, f64), WitnessError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let from = self.next_from;
        let to = from.saturating_add(self.horizon);
        for n in from..to {
            if let Some(v) = (self.admits)(n, self.k) {
                self.k += 1;
                self.next_from = n + 1;
                return Some(Ok((n, v)));
            }
        }
        self.done = true;
        Some(Err(WitnessError::HorizonExhausted { k: self.k, from, to }))
    }
}

fn stream<F: FnMut(u64, u64) -> Option<f64>>(admits: F, horizon: u64) -> WitnessStream<F> {
    WitnessStream {
        admits,
        k: 1,
        next_from: 1,
        horizon,
        done: false,
    }
}

/// Indices `n_1 < n_2 < ...` with `|p_{n_k} - q_{n_k}|` within `1/k`.
pub fn gap_stream<'a>(
    p: &'a ExponentSequence,
    q: &'a ExponentSequence,
    bound: GapBound,
    horizon: u64,
) -> WitnessStream<impl FnMut(u64, u64) -> Option<f64> + 'a> {
    stream(
        move |n, k| {
            let gap = crate::exponents::abs_diff(p.eval(n), q.eval(n));
            bound.admits(gap, k).then_some(gap)
        },
        horizon,
    )
}

/// Indices `n_1 < n_2 < ...` with `p_{n_k} >= k`.
pub fn growth_stream(
    p: &ExponentSequence,
    horizon: u64,
) -> WitnessStream<impl FnMut(u64, u64) -> Option<f64> + '_> {
    stream(
        move |n, k| {
            let v = p.eval(n);
            (v >= k as f64).then_some(v)
        },
        horizon,
    )
}

fn half_power(e: f64) -> f64 {
    if e == f64::INFINITY {
        0.0
    } else {
        0.5f64.powf(e)
    }
}

/// First `count` indices with the shrinking-gap property.
pub fn equality_witness(
    p: &ExponentSequence,
    q: &ExponentSequence,
    count: usize,
    bound: GapBound,
) -> Result<WitnessSubsequence, WitnessError> {
    match liminf_abs_gap(p, q) {
        GapVerdict::Zero { .. } => {}
        other => {
            return Err(WitnessError::PreconditionUnmet(format!(
                "liminf |p_n - q_n| is not certified to vanish ({})",
                serde_json::to_string(&other).unwrap_or_default()
            )))
        }
    }
    let (indices, values) = collect(gap_stream(p, q, bound, SCAN_HORIZON), count)?;
    let e = ExponentSequence::nakano_exponent(p.clone(), q.clone());
    let partial_sum: f64 = indices.iter().map(|&n| half_power(e.eval(n))).sum();
    Ok(WitnessSubsequence {
        kind: WitnessKind::Equality,
        indices,
        values,
        checks: WitnessChecks {
            description: "sum over the witness of (1/2)^(p q / |p - q|)".into(),
            partial_sum,
            bound: 1.0,
            holds: partial_sum <= 1.0,
        },
    })
}

/// First `count` indices with `p_{n_k} >= k`.
pub fn linf_witness(p: &ExponentSequence, count: usize) -> Result<WitnessSubsequence, WitnessError> {
    let pr = profile(p);
    if pr.bounded_above != Tri::No {
        return Err(WitnessError::PreconditionUnmet(format!(
            "p is not certified to be unbounded (bounded above: {:?})",
            pr.bounded_above
        )));
    }
    let (indices, values) = collect(growth_stream(p, SCAN_HORIZON), count)?;
    let partial_sum: f64 = values.iter().map(|&v| half_power(v)).sum();
    Ok(WitnessSubsequence {
        kind: WitnessKind::Linf,
        indices,
        values,
        checks: WitnessChecks {
            description: "modular of the all-ones vector on the witness at scale 1/2".into(),
            partial_sum,
            bound: 1.0,
            holds: partial_sum <= 1.0,
        },
    })
}

fn collect(
    s: impl Iterator<Item = Result<(u64, f64), WitnessError>>,
    count: usize,
) -> Result<(Vec<u64>, Vec<f64>), WitnessError> {
    let pairs: Vec<(u64, f64)> = s.take(count).collect::<Result<_, _>>()?;
    Ok(pairs.into_iter().unzip())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("lengths must be positive and strictly ascending")]
    Lengths,
    #[error("index set has fewer than {0} members")]
    ShortSet(usize),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("norm bisection for N = {0} hit the iteration cap")]
    NotConverged(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub length: usize,
    pub norm_p: f64,
    pub norm_q: f64,
    pub ratio: f64,
    /// `0 < ratio <= N`, the quotient of the sandwich bounds.
    pub within_sandwich: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioProfile {
    pub index_set: IndexSet,
    pub rows: Vec<RatioRow>,
}

/// `‖x_N‖_q / ‖x_N‖_p` for flat vectors `x_N` on the first `N` members of `set`.
pub fn ratio_decay_profile(
    p: &ExponentSequence,
    q: &ExponentSequence,
    set: &IndexSet,
    lengths: &[usize],
    rel_tol: f64,
) -> Result<RatioProfile, ProbeError> {
    if lengths.is_empty() || lengths[0] == 0 || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ProbeError::Lengths);
    }
    let v = inclusion_holds(p, q, &SeriesOptions::default());
    if !v.is_yes() {
        return Err(ProbeError::PreconditionUnmet(format!(
            "inclusion is {} ({})",
            v.answer,
            v.reason.unwrap_or(v.citation)
        )));
    }
    let longest = *lengths.last().unwrap();
    let members: Vec<u64> = set.members().take(longest).collect();
    if members.len() < longest {
        return Err(ProbeError::ShortSet(longest));
    }
    let mut rows = Vec::with_capacity(lengths.len());
    for &n in lengths {
        let x = SparseVector::flat(members[..n].iter().copied(), 1.0).expect("indices are positive and distinct");
        let np = luxemburg_norm(p, &x, rel_tol)?;
        let nq = luxemburg_norm(q, &x, rel_tol)?;
        if !(np.converged && nq.converged) {
            return Err(ProbeError::NotConverged(n));
        }
        let ratio = nq.value / np.value;
        rows.push(RatioRow {
            length: n,
            norm_p: np.value,
            norm_q: nq.value,
            ratio,
            within_sandwich: ratio > 0.0 && ratio <= n as f64 * (1.0 + 1e-12),
        });
    }
    Ok(RatioProfile {
        index_set: set.clone(),
        rows,
    })
}

impl fmt::Display for RatioProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10}  {:>16}  {:>16}  {:>10}", "N", "norm_p", "norm_q", "ratio")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>10}  {:>16.10}  {:>16.10}  {:>10.6}",
                r.length, r.norm_p, r.norm_q, r.ratio
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::blocks::block_start;

    type E = ExponentSequence;

    fn cst(c: f64) -> E {
        E::constant(c).unwrap()
    }

    fn example3_q() -> E {
        E::shift(2.0, E::recip(E::blocks())).unwrap()
    }

    #[test]
    fn example3_gaps_at_block_starts() {
        let w = equality_witness(&cst(2.0), &example3_q(), 5, GapBound::Inclusive).unwrap();
        let starts: Vec<u64> = (1..=5).map(|j| block_start(j).unwrap()).collect();
        assert_eq!(w.indices, starts);
        for (k, g) in w.values.iter().enumerate() {
            assert!((g - 1.0 / (k + 1) as f64).abs() < 1e-15);
        }
        assert!(w.checks.holds);
    }

    #[test]
    fn strict_bound_skips_the_boundary() {
        // |p_n - q_n| = 1/n < 1/k iff n > k
        let w = equality_witness(&E::drift(1.0, 1.0, 1.0).unwrap(), &cst(1.0), 5, GapBound::Strict).unwrap();
        assert_eq!(w.indices, [2, 3, 4, 5, 6]);
        let w = equality_witness(&E::drift(1.0, 1.0, 1.0).unwrap(), &cst(1.0), 5, GapBound::Inclusive).unwrap();
        assert_eq!(w.indices, [1, 2, 3, 4, 5]);
    }

    #[test]
    fn identical_exponents() {
        let w = equality_witness(&cst(2.0), &cst(2.0), 4, GapBound::Strict).unwrap();
        assert_eq!(w.indices, [1, 2, 3, 4]);
        assert_eq!(w.checks.partial_sum, 0.0);
    }

    #[test]
    fn positive_gap_has_no_witness() {
        assert!(matches!(
            equality_witness(&cst(2.0), &cst(3.0), 3, GapBound::Inclusive),
            Err(WitnessError::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn linf_witnesses() {
        let w = linf_witness(&E::blocks(), 5).unwrap();
        assert_eq!(w.indices, [1, 2, 6, 33, 289]);
        assert!(w.checks.holds);
        assert_eq!(linf_witness(&E::linear(1.0, 0.0).unwrap(), 3).unwrap().indices, [1, 2, 3]);
        assert!(matches!(linf_witness(&cst(2.0), 3), Err(WitnessError::PreconditionUnmet(_))));
    }

    #[test]
    fn scan_horizon_is_enforced() {
        let p = E::blocks();
        let got: Vec<_> = growth_stream(&p, 100).take(5).collect();
        assert_eq!(got.len(), 5);
        assert!(matches!(got[4], Err(WitnessError::HorizonExhausted { k: 5, .. })));
    }

    #[test]
    fn longer_prefixes_extend_shorter_ones() {
        let a = linf_witness(&E::blocks(), 3).unwrap();
        let b = linf_witness(&E::blocks(), 6).unwrap();
        assert_eq!(a.indices[..], b.indices[..3]);
    }

    #[test]
    fn ratio_closed_forms() {
        let r = ratio_decay_profile(&cst(2.0), &cst(4.0), &IndexSet::All, &[16], 1e-12).unwrap();
        assert!((r.rows[0].ratio - 0.5).abs() < 1e-9);
        let r = ratio_decay_profile(&cst(2.0), &cst(2.0), &IndexSet::All, &[4, 16], 1e-12).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio == 1.0));
        assert!(r.to_string().lines().count() == 3);
        assert!(ratio_decay_profile(&cst(2.0), &cst(2.0), &IndexSet::All, &[16, 4], 1e-12).is_err());
        assert!(matches!(
            ratio_decay_profile(&cst(4.0), &cst(2.0), &IndexSet::All, &[4], 1e-12),
            Err(ProbeError::PreconditionUnmet(_))
        ));
    }
}
