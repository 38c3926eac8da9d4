//! Exponent sequences `n -> p_n` in `[1, inf]`, described by a small closed
//! family of descriptors so that their asymptotics can be certified.

mod asymptotics;
pub mod blocks;
mod index_set;
mod profile;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extended::{ext, ext_pairs, recip_ext};

pub use asymptotics::{classes, dev_band, Asym, ClassProfile, Dev, Scale};
pub use index_set::{IndexSet, Region, MAX_MODULUS};
pub use profile::{
    liminf_abs_gap, profile, AsymptoticProfile, GapVerdict, SampledEstimate, Tri,
    PROFILE_TOLERANCE, SAMPLE_HORIZON,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExponentError {
    #[error("{descriptor}: {message}")]
    InvalidParameter {
        descriptor: &'static str,
        message: String,
    },
    #[error("prefix override index {0} appears more than once")]
    DuplicateOverride(u64),
    #[error("indices start at 1, found 0")]
    ZeroIndex,
}

fn invalid(descriptor: &'static str, message: impl Into<String>) -> ExponentError {
    ExponentError::InvalidParameter {
        descriptor,
        message: message.into(),
    }
}

/// Symbolic exponent sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentSequence {
    /// `p_n = value`, possibly `inf`.
    Const {
        #[serde(with = "ext")]
        value: f64,
    },
    /// `p_n = max(1, limit + coeff * n^(-power))`.
    RationalDrift { limit: f64, coeff: f64, power: f64 },
    /// `p_n = max(1, slope * n + intercept)`.
    Linear { slope: f64, intercept: f64 },
    /// `j` repeated `j^j` times.
    BlockRepeat,
    /// Finitely many overridden values on top of `tail`.
    Prefix {
        #[serde(with = "ext_pairs")]
        overrides: Vec<(u64, f64)>,
        tail: Box<ExponentSequence>,
    },
    /// `on_set` on the indices of `set`, `off_set` elsewhere.
    Merge {
        set: IndexSet,
        on_set: Box<ExponentSequence>,
        off_set: Box<ExponentSequence>,
    },
    /// `|p_n - q_n|`, with `|inf - inf| = 0`.
    AbsDiff {
        p: Box<ExponentSequence>,
        q: Box<ExponentSequence>,
    },
    /// `r_n` with `1/r_n = max(0, 1/q_n - 1/p_n)`.
    RnOf {
        p: Box<ExponentSequence>,
        q: Box<ExponentSequence>,
    },
    /// `p_n q_n / |p_n - q_n|`, `inf` where the two agree.
    NakanoExponent {
        p: Box<ExponentSequence>,
        q: Box<ExponentSequence>,
    },
    /// `1 / inner_n`.
    Recip { inner: Box<ExponentSequence> },
    /// `offset + inner_n`.
    Shift {
        offset: f64,
        inner: Box<ExponentSequence>,
    },
}

use ExponentSequence as E;

impl ExponentSequence {
    pub fn constant(value: f64) -> Result<Self, ExponentError> {
        let s = E::Const { value };
        s.validate()?;
        Ok(s)
    }

    pub fn infinity() -> Self {
        E::Const {
            value: f64::INFINITY,
        }
    }

    pub fn drift(limit: f64, coeff: f64, power: f64) -> Result<Self, ExponentError> {
        let s = E::RationalDrift {
            limit,
            coeff,
            power,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn linear(slope: f64, intercept: f64) -> Result<Self, ExponentError> {
        let s = E::Linear { slope, intercept };
        s.validate()?;
        Ok(s)
    }

    pub fn blocks() -> Self {
        E::BlockRepeat
    }

    pub fn prefix(overrides: Vec<(u64, f64)>, tail: ExponentSequence) -> Result<Self, ExponentError> {
        let mut overrides = overrides;
        overrides.sort_by_key(|&(i, _)| i);
        let s = E::Prefix {
            overrides,
            tail: Box::new(tail),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn merge(set: IndexSet, on_set: ExponentSequence, off_set: ExponentSequence) -> Result<Self, ExponentError> {
        let s = E::Merge {
            set,
            on_set: Box::new(on_set),
            off_set: Box::new(off_set),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn abs_diff(p: ExponentSequence, q: ExponentSequence) -> Self {
        E::AbsDiff {
            p: Box::new(p),
            q: Box::new(q),
        }
    }

    pub fn rn_of(p: ExponentSequence, q: ExponentSequence) -> Self {
        E::RnOf {
            p: Box::new(p),
            q: Box::new(q),
        }
    }

    pub fn nakano_exponent(p: ExponentSequence, q: ExponentSequence) -> Self {
        E::NakanoExponent {
            p: Box::new(p),
            q: Box::new(q),
        }
    }

    pub fn recip(inner: ExponentSequence) -> Self {
        E::Recip {
            inner: Box::new(inner),
        }
    }

    pub fn shift(offset: f64, inner: ExponentSequence) -> Result<Self, ExponentError> {
        let s = E::Shift {
            offset,
            inner: Box::new(inner),
        };
        s.validate()?;
        Ok(s)
    }

    /// True for the derived combinators, whose values may leave `[1, inf]`.
    pub fn is_derived(&self) -> bool {
        matches!(
            self,
            E::AbsDiff { .. } | E::RnOf { .. } | E::NakanoExponent { .. } | E::Recip { .. } | E::Shift { .. }
        )
    }

    /// Check parameter ranges recursively.
    pub fn validate(&self) -> Result<(), ExponentError> {
        match self {
            E::Const { value } => {
                if !(*value >= 1.0) {
                    return Err(invalid("const", format!("value {value} is below 1")));
                }
            }
            E::RationalDrift {
                limit,
                coeff,
                power,
            } => {
                if !(limit.is_finite() && *limit >= 1.0) {
                    return Err(invalid("drift", format!("limit {limit} must be finite and at least 1")));
                }
                if !coeff.is_finite() {
                    return Err(invalid("drift", "coefficient must be finite"));
                }
                if !(power.is_finite() && *power > 0.0) {
                    return Err(invalid("drift", format!("power {power} must be positive")));
                }
            }
            E::Linear { slope, intercept } => {
                if !(slope.is_finite() && *slope > 0.0) {
                    return Err(invalid("linear", format!("slope {slope} must be positive")));
                }
                if !intercept.is_finite() {
                    return Err(invalid("linear", "intercept must be finite"));
                }
            }
            E::BlockRepeat => {}
            E::Prefix { overrides, tail } => {
                for w in overrides.windows(2) {
                    if w[0].0 == w[1].0 {
                        return Err(ExponentError::DuplicateOverride(w[0].0));
                    }
                    if w[0].0 > w[1].0 {
                        return Err(invalid("prefix", "overrides must be sorted by index"));
                    }
                }
                for &(i, v) in overrides {
                    if i == 0 {
                        return Err(ExponentError::ZeroIndex);
                    }
                    if !(v >= 1.0) {
                        return Err(invalid("prefix", format!("override value {v} at index {i} is below 1")));
                    }
                }
                tail.validate()?;
            }
            E::Merge {
                set,
                on_set,
                off_set,
            } => {
                set.validate().map_err(|m| invalid("merge", m))?;
                on_set.validate()?;
                off_set.validate()?;
            }
            E::AbsDiff { p, q } | E::RnOf { p, q } | E::NakanoExponent { p, q } => {
                p.validate()?;
                q.validate()?;
            }
            E::Recip { inner } => inner.validate()?,
            E::Shift { offset, inner } => {
                if !(offset.is_finite() && *offset >= 0.0) {
                    return Err(invalid("shift", format!("offset {offset} must be finite and nonnegative")));
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    /// `p_n`. Total on `n >= 1`; `n = 0` is treated as `n = 1`.
    pub fn eval(&self, n: u64) -> f64 {
        let n = n.max(1);
        match self {
            E::Const { value } => *value,
            E::RationalDrift {
                limit,
                coeff,
                power,
            } => (limit + coeff * (n as f64).powf(-power)).max(1.0),
            E::Linear { slope, intercept } => (slope * n as f64 + intercept).max(1.0),
            E::BlockRepeat => blocks::block_of(n) as f64,
            E::Prefix { overrides, tail } => match overrides.binary_search_by_key(&n, |&(i, _)| i) {
                Ok(pos) => overrides[pos].1,
                Err(_) => tail.eval(n),
            },
            E::Merge {
                set,
                on_set,
                off_set,
            } => {
                if set.contains(n) {
                    on_set.eval(n)
                } else {
                    off_set.eval(n)
                }
            }
            E::AbsDiff { p, q } => abs_diff(p.eval(n), q.eval(n)),
            E::RnOf { p, q } => rn_value(p.eval(n), q.eval(n)),
            E::NakanoExponent { p, q } => nakano_value(p.eval(n), q.eval(n)),
            E::Recip { inner } => recip_ext(inner.eval(n)),
            E::Shift { offset, inner } => offset + inner.eval(n),
        }
    }

    /// Parse the JSON descriptor form and validate it.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let s: ExponentSequence = serde_json::from_str(text).map_err(|e| e.to_string())?;
        s.validate().map_err(|e| e.to_string())?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization is infallible")
    }
}

pub(crate) fn abs_diff(p: f64, q: f64) -> f64 {
    if p == q {
        0.0
    } else {
        (p - q).abs()
    }
}

pub(crate) fn rn_value(p: f64, q: f64) -> f64 {
    if q >= p {
        f64::INFINITY
    } else {
        // q < p, so 1/q - 1/p > 0.
        recip_ext(recip_ext(q) - recip_ext(p))
    }
}

pub(crate) fn nakano_value(p: f64, q: f64) -> f64 {
    if p == q {
        f64::INFINITY
    } else if p.is_infinite() {
        q
    } else if q.is_infinite() {
        p
    } else {
        p * q / (p - q).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drift(l: f64, c: f64, b: f64) -> ExponentSequence {
        ExponentSequence::drift(l, c, b).unwrap()
    }

    fn cst(c: f64) -> ExponentSequence {
        ExponentSequence::constant(c).unwrap()
    }

    #[test]
    fn block_sequence_head() {
        let a = ExponentSequence::blocks();
        assert_eq!(a.eval(1), 1.0);
        assert_eq!(a.eval(2), 2.0);
        assert_eq!(a.eval(5), 2.0);
        assert_eq!(a.eval(6), 3.0);
    }

    #[test]
    fn drift_value() {
        assert!((drift(1.0, 1.0, 1.0).eval(10) - 1.1).abs() < 1e-15);
    }

    #[test]
    fn drift_clamps_at_one() {
        let s = drift(1.0, -3.0, 1.0);
        assert_eq!(s.eval(1), 1.0);
        assert_eq!(s.eval(100), 1.0);
    }

    #[test]
    fn nakano_exponent_of_drift_against_one() {
        // (1 + 1/n) * 1 / (1/n) = n + 1
        let e = ExponentSequence::nakano_exponent(drift(1.0, 1.0, 1.0), cst(1.0));
        for n in 1..=1000u64 {
            let v = e.eval(n);
            assert!((v - (n as f64 + 1.0)).abs() <= 1e-9 * n as f64, "n = {n}: {v}");
        }
    }

    #[test]
    fn rn_is_infinite_when_target_exponent_is_larger() {
        let r = ExponentSequence::rn_of(cst(1.0), cst(2.0));
        assert_eq!(r.eval(5), f64::INFINITY);
        let r = ExponentSequence::rn_of(cst(2.0), cst(1.0));
        assert_eq!(r.eval(5), 2.0);
    }

    #[test]
    fn infinite_conventions() {
        let inf = ExponentSequence::infinity();
        assert_eq!(ExponentSequence::abs_diff(inf.clone(), inf.clone()).eval(3), 0.0);
        assert_eq!(ExponentSequence::nakano_exponent(inf.clone(), inf.clone()).eval(3), f64::INFINITY);
        assert_eq!(ExponentSequence::nakano_exponent(cst(3.0), inf.clone()).eval(3), 3.0);
        assert_eq!(ExponentSequence::rn_of(inf.clone(), cst(3.0)).eval(3), 3.0);
        assert_eq!(ExponentSequence::recip(inf).eval(1), 0.0);
    }

    #[test]
    fn prefix_overrides_and_transparency() {
        let tail = drift(2.0, 1.0, 1.0);
        let s = ExponentSequence::prefix(vec![(3, 7.0), (1, 1.0)], tail.clone()).unwrap();
        assert_eq!(s.eval(1), 1.0);
        assert_eq!(s.eval(3), 7.0);
        for n in [2u64, 4, 5, 100] {
            assert_eq!(s.eval(n), tail.eval(n));
        }
    }

    #[test]
    fn merge_partition() {
        let s = ExponentSequence::merge(IndexSet::Evens, cst(2.0), cst(3.0)).unwrap();
        assert_eq!(s.eval(4), 2.0);
        assert_eq!(s.eval(5), 3.0);
    }

    #[test]
    fn validation_errors() {
        assert!(ExponentSequence::constant(0.5).is_err());
        assert!(ExponentSequence::drift(0.9, 1.0, 1.0).is_err());
        assert!(ExponentSequence::drift(1.0, 1.0, 0.0).is_err());
        assert!(ExponentSequence::linear(0.0, 1.0).is_err());
        assert_eq!(
            ExponentSequence::prefix(vec![(2, 1.0), (2, 3.0)], cst(2.0)),
            Err(ExponentError::DuplicateOverride(2))
        );
        assert_eq!(
            ExponentSequence::prefix(vec![(0, 1.0)], cst(2.0)),
            Err(ExponentError::ZeroIndex)
        );
        assert!(ExponentSequence::merge(IndexSet::stride(0, 1), cst(2.0), cst(2.0)).is_err());
    }

    #[test]
    fn json_round_trip_keeps_infinity() {
        let s = ExponentSequence::prefix(
            vec![(2, f64::INFINITY)],
            ExponentSequence::merge(IndexSet::Odds, ExponentSequence::infinity(), drift(1.5, -0.5, 2.0)).unwrap(),
        )
        .unwrap();
        let json = s.to_json();
        assert!(json.contains(r#""kind":"prefix""#));
        assert_eq!(ExponentSequence::from_json(&json).unwrap(), s);
    }
}
