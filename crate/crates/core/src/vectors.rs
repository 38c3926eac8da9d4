//! Finite-support vectors, the modular `Σ |x_i|^{p_i}` and the Luxemburg norm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::ExponentSequence;
use crate::scalar::Scalar;

/// Default iteration cap of the bisection.
pub const MAX_ITER: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("indices start at 1, found 0")]
    ZeroIndex,
    #[error("entry at index {0} is not finite")]
    NonFinite(u64),
    #[error("index {0} appears more than once")]
    Duplicate(u64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("relative tolerance {rel_tol} must lie in [{min}, 1e-2]")]
    Tolerance { rel_tol: f64, min: f64 },
    #[error("iteration cap must be positive")]
    NoIterations,
}

/// Finitely supported sequence; entries sorted by index, zeros dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVector<T>", bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SparseVector<T> {
    entries: Vec<(u64, T)>,
}

#[derive(Deserialize)]
struct RawVector<T> {
    entries: Vec<(u64, T)>,
}

impl<T: Scalar> TryFrom<RawVector<T>> for SparseVector<T> {
    type Error = VectorError;

    fn try_from(raw: RawVector<T>) -> Result<Self, VectorError> {
        SparseVector::new(raw.entries)
    }
}

impl<T: Scalar> SparseVector<T> {
    pub fn new(entries: impl IntoIterator<Item = (u64, T)>) -> Result<Self, VectorError> {
        let mut entries: Vec<(u64, T)> = entries.into_iter().collect();
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(VectorError::Duplicate(w[0].0));
            }
        }
        for &(i, v) in &entries {
            if i == 0 {
                return Err(VectorError::ZeroIndex);
            }
            if !v.is_finite() {
                return Err(VectorError::NonFinite(i));
            }
        }
        entries.retain(|e| !e.1.is_zero());
        Ok(SparseVector { entries })
    }

    pub fn zero() -> Self {
        SparseVector { entries: Vec::new() }
    }

    /// Unit vector `e_k`.
    pub fn unit(k: u64) -> Result<Self, VectorError> {
        Self::new([(k, T::one())])
    }

    /// `x_i = values[i - 1]`.
    pub fn from_dense(values: &[T]) -> Result<Self, VectorError> {
        Self::new(values.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)))
    }

    /// Constant `value` on every index of `indices`.
    pub fn flat(indices: impl IntoIterator<Item = u64>, value: T) -> Result<Self, VectorError> {
        Self::new(indices.into_iter().map(|i| (i, value)))
    }

    pub fn entries(&self) -> &[(u64, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: u64) -> T {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map_or(T::zero(), |k| self.entries[k].1)
    }

    pub fn scale(&self, c: T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, v * c)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        SparseVector {
            entries: self.entries.iter().map(|&(i, v)| (i, v.abs())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(&&(i, x)), Some(&&(j, y))) if i == j => {
                    a.next();
                    b.next();
                    (i, x + y)
                }
                (Some(&&(i, x)), Some(&&(j, _))) if i < j => {
                    a.next();
                    (i, x)
                }
                (_, Some(&&(j, y))) => {
                    b.next();
                    (j, y)
                }
                (Some(&&(i, x)), None) => {
                    a.next();
                    (i, x)
                }
                (None, None) => break,
            };
            if !next.1.is_zero() {
                out.push(next);
            }
        }
        SparseVector { entries: out }
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, e| m.max(e.1.abs()))
    }

    pub fn l1(&self) -> T {
        self.entries.iter().fold(T::zero(), |s, e| s + e.1.abs())
    }
}

/// `t^p` for `t >= 0`, with `0^p = 0` and `t^inf` in `{0, inf}`.
fn power<T: Scalar>(t: T, p: T) -> T {
    if t.is_zero() {
        T::zero()
    } else if p.is_infinite() {
        if t <= T::one() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        (p * t.ln()).exp()
    }
}

fn exponents<T: Scalar>(p: &ExponentSequence, x: &SparseVector<T>) -> Vec<(T, T)> {
    x.entries
        .iter()
        .map(|&(i, v)| (v.abs(), T::from_f64_lossy(p.eval(i))))
        .collect()
}

/// `ρ(x) = Σ |x_i|^{p_i}`.
pub fn modular<T: Scalar>(p: &ExponentSequence, x: &SparseVector<T>) -> T {
    modular_at_scale(p, x, T::one())
}

/// `ρ(x / r)`.
pub fn modular_at_scale<T: Scalar>(p: &ExponentSequence, x: &SparseVector<T>, r: T) -> T {
    exponents(p, x)
        .into_iter()
        .fold(T::zero(), |s, (a, e)| s + power(a / r, e))
}

/// `ρ(x) <= 1`, allowing for rounding in the summation.
pub fn in_unit_ball<T: Scalar>(p: &ExponentSequence, x: &SparseVector<T>) -> bool {
    let slack = T::from_f64_lossy(4.0 * (x.len().max(1) as f64)) * T::epsilon();
    modular(p, x) <= T::one() + slack
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult<T> {
    pub value: T,
    /// Final bracket; `value` is its upper end.
    pub bracket: (T, T),
    /// `|φ(value) - 1|` for the finite-exponent part `φ`; when the
    /// `inf`-exponent part is binding, `φ(value)` itself.
    pub residual: T,
    /// The norm equals `max |x_i|` over indices with `p_i = inf`.
    pub binding: bool,
    pub iterations: u32,
    pub converged: bool,
}

impl<T: Scalar> NormResult<T> {
    fn exact(value: T, residual: T, binding: bool) -> Self {
        NormResult {
            value,
            bracket: (value, value),
            residual,
            binding,
            iterations: 0,
            converged: true,
        }
    }
}

/// Luxemburg norm `inf { r > 0 : ρ(x / r) <= 1 }` with the default cap.
pub fn luxemburg_norm<T: Scalar>(p: &ExponentSequence, x: &SparseVector<T>, rel_tol: T) -> Result<NormResult<T>, NormError> {
    luxemburg_norm_capped(p, x, rel_tol, MAX_ITER)
}

pub fn luxemburg_norm_capped<T: Scalar>(
    p: &ExponentSequence,
    x: &SparseVector<T>,
    rel_tol: T,
    max_iter: u32,
) -> Result<NormResult<T>, NormError> {
    let min = T::min_rel_tol();
    let cap = T::from_f64_lossy(1e-2);
    if !(rel_tol >= min && rel_tol <= cap) {
        return Err(NormError::Tolerance {
            rel_tol: rel_tol.to_f64_lossy(),
            min: min.to_f64_lossy(),
        });
    }
    if max_iter == 0 {
        return Err(NormError::NoIterations);
    }
    if x.is_empty() {
        return Ok(NormResult::exact(T::zero(), T::zero(), false));
    }
    let terms = exponents(p, x);
    let (inf_part, finite): (Vec<_>, Vec<_>) = terms.into_iter().partition(|t| t.1.is_infinite());
    let phi = |r: T| finite.iter().fold(T::zero(), |s, &(a, e)| s + power(a / r, e));
    let floor = inf_part.iter().fold(T::zero(), |m, t| m.max(t.0));
    if !inf_part.is_empty() {
        let at_floor = phi(floor);
        if at_floor <= T::one() {
            return Ok(NormResult::exact(floor, at_floor, true));
        }
    }
    // p_i >= 1 gives φ(max|x_i|) >= 1 >= φ(Σ|x_i|)
    let mut lo = x.max_abs().max(floor);
    let mut hi = x.l1();
    if phi(lo) <= T::one() {
        let r = (phi(lo) - T::one()).abs();
        return Ok(NormResult::exact(lo, r, false));
    }
    let two = T::one() + T::one();
    let mut iterations = 0;
    let mut converged = hi - lo <= rel_tol * hi;
    while !converged && iterations < max_iter {
        let mid = lo + (hi - lo) / two;
        iterations += 1;
        if mid <= lo || mid >= hi {
            // bracket at floating-point resolution
            converged = true;
            break;
        }
        if phi(mid) <= T::one() {
            hi = mid;
        } else {
            lo = mid;
        }
        converged = hi - lo <= rel_tol * hi;
    }
    Ok(NormResult {
        value: hi,
        bracket: (lo, hi),
        residual: (phi(hi) - T::one()).abs(),
        binding: false,
        iterations,
        converged,
    })
}
