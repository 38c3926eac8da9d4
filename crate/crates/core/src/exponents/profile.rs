use serde::{Deserialize, Serialize};

use super::asymptotics::{classes, ClassProfile};
use super::ExponentSequence;
use crate::extended::{ext, fmt_ext, Interval};

/// Tolerance for the onset past which the tail stays within the limits.
pub const PROFILE_TOLERANCE: f64 = 1e-9;

/// Horizon of the (uncertified) sampled estimate attached to inconclusive profiles.
pub const SAMPLE_HORIZON: u64 = 100_000;

/// Largest onset hint tried is `2^MAX_REFINEMENT`.
pub(crate) const MAX_REFINEMENT: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Min/max of `eval(n)` over `1..=horizon`. Not a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    #[serde(with = "ext")]
    pub min: f64,
    #[serde(with = "ext")]
    pub max: f64,
    #[serde(with = "ext")]
    pub last: f64,
    pub horizon: u64,
}

impl SampledEstimate {
    pub fn sample(seq: &ExponentSequence, horizon: u64) -> Self {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for n in 1..=horizon {
            let v = seq.eval(n);
            min = min.min(v);
            max = max.max(v);
        }
        SampledEstimate {
            min,
            max,
            last: seq.eval(horizon),
            horizon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub liminf: Interval,
    pub limsup: Interval,
    pub bounded_above: Tri,
    /// Past this index every value lies within `PROFILE_TOLERANCE` of
    /// `[liminf.lo, limsup.hi]`; `None` if no representable onset was found.
    pub onset: Option<u64>,
    pub exact: bool,
    pub estimate: Option<SampledEstimate>,
}

impl AsymptoticProfile {
    pub fn liminf_value(&self) -> Option<f64> {
        self.liminf.is_point().then_some(self.liminf.lo)
    }

    pub fn limsup_value(&self) -> Option<f64> {
        self.limsup.is_point().then_some(self.limsup.lo)
    }

    /// `limsup < inf` as a three-valued fact.
    pub fn limsup_finite(&self) -> Tri {
        if self.limsup.hi < f64::INFINITY {
            Tri::Yes
        } else if self.limsup.lo == f64::INFINITY {
            Tri::No
        } else {
            Tri::Unknown
        }
    }
}

fn extremes(cs: &[ClassProfile]) -> (Interval, Interval) {
    let mut liminf = Interval::point(f64::INFINITY);
    let mut limsup = Interval::point(f64::NEG_INFINITY);
    for c in cs {
        let l = c.asym.limit;
        liminf = Interval::new(liminf.lo.min(l.lo), liminf.hi.min(l.hi));
        limsup = Interval::new(limsup.lo.max(l.lo), limsup.hi.max(l.hi));
    }
    (liminf, limsup)
}

fn within(cs: &[ClassProfile], liminf: &Interval, limsup: &Interval) -> bool {
    cs.iter().all(|c| {
        c.asym.tail.lo >= liminf.lo - PROFILE_TOLERANCE && c.asym.tail.hi <= limsup.hi + PROFILE_TOLERANCE
    })
}

/// Certified liminf / limsup of an exponent sequence.
pub fn profile(seq: &ExponentSequence) -> AsymptoticProfile {
    let mut found = None;
    let mut last = Vec::new();
    for k in 0..=MAX_REFINEMENT {
        let cs = classes(seq, 1u64 << k);
        let (liminf, limsup) = extremes(&cs);
        if within(&cs, &liminf, &limsup) {
            found = Some(cs.iter().map(ClassProfile::onset).max().unwrap_or(1));
            last = cs;
            break;
        }
        last = cs;
    }
    let (liminf, limsup) = extremes(&last);
    let all_finite = last.iter().all(|c| c.asym.finite);
    let bounded_above = if limsup.lo == f64::INFINITY {
        Tri::No
    } else if limsup.hi < f64::INFINITY && all_finite {
        Tri::Yes
    } else {
        Tri::Unknown
    };
    let exact = found.is_some() && last.iter().all(|c| c.asym.limit.is_point());
    let estimate = (!exact || bounded_above == Tri::Unknown)
        .then(|| SampledEstimate::sample(seq, SAMPLE_HORIZON));
    AsymptoticProfile {
        liminf,
        limsup,
        bounded_above,
        onset: found,
        exact,
        estimate,
    }
}

/// Outcome of comparing `liminf |p_n - q_n|` with zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GapVerdict {
    /// `|p_n - q_n| >= epsilon` for every `n >= onset`.
    Positive {
        #[serde(with = "ext")]
        epsilon: f64,
        onset: u64,
    },
    /// `|p_n - q_n| -> 0` along an infinite index class.
    Zero { class: String },
    Unknown { reason: String },
}

/// Decide whether `liminf |p_n - q_n| > 0`.
pub fn liminf_abs_gap(p: &ExponentSequence, q: &ExponentSequence) -> GapVerdict {
    let gap = ExponentSequence::abs_diff(p.clone(), q.clone());
    let mut reason = String::new();
    for k in 0..=MAX_REFINEMENT {
        let cs = classes(&gap, 1u64 << k);
        if let Some(c) = cs.iter().find(|c| c.asym.limit.hi == 0.0) {
            return GapVerdict::Zero {
                class: c.region.describe(),
            };
        }
        match cs.iter().find(|c| !(c.asym.limit.lo > 0.0)) {
            Some(c) => {
                reason = format!(
                    "limit points of |p_n - q_n| on {} only known to lie in [{}, {}]",
                    c.region.describe(),
                    fmt_ext(c.asym.limit.lo),
                    fmt_ext(c.asym.limit.hi)
                );
            }
            None if cs.iter().all(|c| c.asym.tail.lo > 0.0) => {
                let epsilon = cs.iter().map(|c| c.asym.tail.lo).fold(f64::INFINITY, f64::min);
                let onset = cs.iter().map(ClassProfile::onset).max().unwrap_or(1);
                return GapVerdict::Positive { epsilon, onset };
            }
            None => {
                reason = "limits of |p_n - q_n| are positive but no representable onset separates the tail from 0"
                    .into();
            }
        }
    }
    GapVerdict::Unknown { reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::IndexSet;

    type E = ExponentSequence;

    fn cst(c: f64) -> E {
        E::constant(c).unwrap()
    }

    fn drift(l: f64, c: f64, b: f64) -> E {
        E::drift(l, c, b).unwrap()
    }

    fn example3_q() -> E {
        E::shift(2.0, E::recip(E::blocks())).unwrap()
    }

    #[test]
    fn drift_profile() {
        let pr = profile(&drift(1.0, 1.0, 1.0));
        assert_eq!(pr.liminf, Interval::point(1.0));
        assert_eq!(pr.limsup, Interval::point(1.0));
        assert_eq!(pr.bounded_above, Tri::Yes);
        assert!(pr.exact);
        // 1/n < 1e-9 needs n around 1e9.
        let onset = pr.onset.unwrap();
        assert!((1_000_000_000..=4_000_000_000).contains(&onset), "{onset}");
    }

    #[test]
    fn unbounded_profiles() {
        for s in [E::blocks(), E::linear(1.0, 0.0).unwrap(), E::infinity()] {
            let pr = profile(&s);
            assert_eq!(pr.liminf, Interval::point(f64::INFINITY));
            assert_eq!(pr.limsup, Interval::point(f64::INFINITY));
            assert_eq!(pr.bounded_above, Tri::No);
        }
    }

    #[test]
    fn merged_gap_profile() {
        let s = E::abs_diff(cst(2.0), E::merge(IndexSet::Evens, cst(2.0), cst(3.0)).unwrap());
        let pr = profile(&s);
        assert_eq!(pr.liminf, Interval::point(0.0));
        assert_eq!(pr.limsup, Interval::point(1.0));
        assert!(pr.exact);
        // brute-force cross-check by case split
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for n in 1..=1000 {
            lo = lo.min(s.eval(n));
            hi = hi.max(s.eval(n));
        }
        assert_eq!((lo, hi), (0.0, 1.0));
    }

    #[test]
    fn exact_profiles_contain_sampled_tail() {
        let seqs = [
            cst(2.5),
            drift(2.0, -0.5, 2.0),
            drift(1.5, 3.0, 1.0),
            E::merge(IndexSet::Odds, drift(1.0, 1.0, 2.0), cst(4.0)).unwrap(),
        ];
        for s in &seqs {
            let pr = profile(s);
            assert!(pr.exact, "{s:?}");
            let onset = pr.onset.unwrap();
            for n in onset..onset + 10_000 {
                let v = s.eval(n);
                assert!(v >= pr.liminf.lo - PROFILE_TOLERANCE && v <= pr.limsup.hi + PROFILE_TOLERANCE);
            }
        }
    }

    #[test]
    fn slow_limits_stay_inexact() {
        // 1/a_n < 1e-9 needs a_n beyond every u64 index.
        let pr = profile(&example3_q());
        assert_eq!(pr.liminf, Interval::point(2.0));
        assert_eq!(pr.limsup, Interval::point(2.0));
        assert_eq!(pr.onset, None);
        assert!(!pr.exact);
        assert_eq!(pr.bounded_above, Tri::Yes);
    }

    #[test]
    fn gap_between_constants() {
        assert_eq!(
            liminf_abs_gap(&cst(2.0), &cst(3.0)),
            GapVerdict::Positive {
                epsilon: 1.0,
                onset: 1
            }
        );
    }

    #[test]
    fn gap_vanishes_for_block_perturbation() {
        assert!(matches!(liminf_abs_gap(&cst(2.0), &example3_q()), GapVerdict::Zero { .. }));
    }

    #[test]
    fn gap_between_drift_and_linear() {
        match liminf_abs_gap(&drift(1.0, 1.0, 1.0), &E::linear(1.0, 0.0).unwrap()) {
            GapVerdict::Positive { epsilon, onset } => {
                assert_eq!(onset, 2);
                assert!(epsilon >= 0.5 - 1e-9);
                for n in onset..10_000 {
                    let g = (drift(1.0, 1.0, 1.0).eval(n) - n as f64).abs();
                    assert!(g >= epsilon - 1e-9);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gaps_between_unbounded_sequences() {
        // n dominates a_n; n and n + 1 differ by exactly 1.
        let v = liminf_abs_gap(&E::linear(1.0, 0.0).unwrap(), &E::blocks());
        assert!(matches!(v, GapVerdict::Positive { .. }), "{v:?}");
        let v = liminf_abs_gap(&E::linear(1.0, 0.0).unwrap(), &E::linear(1.0, 1.0).unwrap());
        assert!(matches!(v, GapVerdict::Positive { epsilon, .. } if epsilon <= 1.0 && epsilon > 0.99), "{v:?}");
    }
}
