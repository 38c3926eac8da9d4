//! Certified convergence decisions for series `Σ α^{e_n}` and friends.
//!
//! Decisions come from the class summaries of [`crate::exponents::classes`]:
//! a class whose exponents stay bounded (or grow no faster than `C a_n`)
//! forces divergence for every `α < 1`; if every class either is identically
//! `inf` or grows like a positive power of `n`, a geometric or p-series
//! comparison is produced. Everything else is `Unknown` with numeric probes.

use thiserror::Error;

use crate::exponents::blocks::{block_end, block_of, block_start};
use crate::exponents::{classes, Asym, ClassProfile, Dev, ExponentError, ExponentSequence, Region};
use crate::verdict::{Certificate, Evidence, Family, Probe, TermBound, Verdict};

pub const PROBE_HORIZON: u64 = 1_000_000;
pub const PROBE_THRESHOLD: f64 = 1e3;
pub const PROBE_ALPHAS: [f64; 3] = [0.5, 0.1, 0.01];

/// Anchor for every series verdict.
pub const CITATION: &str = "Prop 1.2";

/// Terms summed exactly before the comparison tail takes over.
const HEAD_EXTENSION: u64 = 1000;
/// Heads longer than this are not summed; the bound is then omitted.
const MAX_HEAD: u64 = 1_000_000;
const MAX_REFINEMENT: u32 = 62;
/// Relative slack in divergence horizons, so that floating-point partial
/// sums also clear the threshold.
const HORIZON_MARGIN: f64 = 1.0 + 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub probe_horizon: u64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            probe_horizon: PROBE_HORIZON,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("base {0} must lie in (0, 1)")]
    Base(f64),
    #[error("constant term {0} must be finite and nonnegative")]
    NegativeTerm(f64),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
}

/// A nonnegative series term.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesTerm {
    /// `base^{e_n}`, with `base^inf = 0`.
    Power { base: f64, exponent: ExponentSequence },
    Constant { value: f64 },
}

impl SeriesTerm {
    pub fn power(base: f64, exponent: ExponentSequence) -> Result<Self, SeriesError> {
        if !(base > 0.0 && base < 1.0) {
            return Err(SeriesError::Base(base));
        }
        exponent.validate()?;
        Ok(SeriesTerm::Power { base, exponent })
    }

    pub fn constant(value: f64) -> Result<Self, SeriesError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(SeriesError::NegativeTerm(value));
        }
        Ok(SeriesTerm::Constant { value })
    }

    pub fn term(&self, n: u64) -> f64 {
        match self {
            SeriesTerm::Power { base, exponent } => power_term(*base, exponent.eval(n)),
            SeriesTerm::Constant { value } => *value,
        }
    }
}

fn power_term(alpha: f64, e: f64) -> f64 {
    if e == f64::INFINITY {
        0.0
    } else {
        alpha.powf(e)
    }
}

/// What a class summary says about `α^{e_n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `e_n = inf` on the class.
    Vanishing,
    /// `e_n <= max` on the class.
    Bounded(f64),
    /// `e_n >= coeff * n^pow`, `pow > 0`.
    Power { coeff: f64, pow: f64 },
    /// `e_n <= coeff * a_n`.
    Block { coeff: f64 },
    /// `e_n >= coeff * a_n^pow`, `pow > 1`.
    BlockPower { coeff: f64, pow: f64 },
    Opaque,
}

fn shape(a: &Asym) -> Shape {
    if a.is_infinite() {
        return Shape::Vanishing;
    }
    if a.finite && a.tail.hi < f64::INFINITY {
        return Shape::Bounded(a.tail.hi);
    }
    match &a.dev {
        Dev::Term { sign, theta, scale } if *sign > 0.0 && scale.is_growing() && theta.lo > 0.0 => {
            // a_n <= n, so a negative block power costs at most that power of n
            let pow = scale.n_pow + scale.a_pow.min(0.0);
            if pow > 0.0 {
                Shape::Power {
                    coeff: theta.lo,
                    pow,
                }
            } else if scale.n_pow == 0.0 && scale.a_pow <= 1.0 && theta.hi < f64::INFINITY && a.finite {
                Shape::Block { coeff: theta.hi }
            } else if scale.n_pow == 0.0 && scale.a_pow > 1.0 {
                Shape::BlockPower {
                    coeff: theta.lo,
                    pow: scale.a_pow,
                }
            } else {
                Shape::Opaque
            }
        }
        _ => Shape::Opaque,
    }
}

fn class_family(c: &ClassProfile) -> Family {
    Family::from(&c.region.clone().with_onset(c.onset()))
}

fn divergence(c: &ClassProfile, alpha: Option<f64>, bound: TermBound) -> Certificate {
    let family = class_family(c);
    let statement = match &bound {
        TermBound::Constant { value } => format!("every term is {value}"),
        TermBound::BoundedExponent { max_exponent } => format!(
            "e_n <= {max_exponent} on {}, so infinitely many terms are >= alpha^{max_exponent}",
            c.region.clone().with_onset(c.onset()).describe()
        ),
        TermBound::BlockGrowth { coefficient } => format!(
            "e_n <= {coefficient} a_n on {}, so block j contributes about j^j alpha^({coefficient} j), unbounded in j",
            c.region.clone().with_onset(c.onset()).describe()
        ),
    };
    Certificate::new(
        Evidence::DivergenceByTerms {
            alpha,
            family,
            bound,
        },
        statement,
    )
}

/// Pad applied to floating-point head sums.
fn padded_sum(s: f64, terms: u64) -> f64 {
    s * (1.0 + 4.0 * f64::EPSILON * (terms.max(1) as f64)) + f64::MIN_POSITIVE
}

fn head_sum(term: &dyn Fn(u64) -> f64, below: u64) -> Option<f64> {
    (below <= MAX_HEAD + 1).then(|| padded_sum((1..below).map(term).sum(), below))
}

/// Smallest `n >= from` past which `λ n^γ >= 2 ln n` holds for good.
fn pseries_onset(lambda: f64, gamma: f64, from: u64) -> Option<u64> {
    let f = |n: u64| lambda * (n as f64).powf(gamma) - 2.0 * (n as f64).ln() - 1e-9;
    // f is increasing once n^γ > 2 / (λ γ)
    let turn = (2.0 / (lambda * gamma)).powf(1.0 / gamma).ceil();
    if !(turn < 1e18) {
        return None;
    }
    let lo = from.max(turn as u64).max(2);
    if f(lo) >= 0.0 {
        return Some(lo);
    }
    let mut hi = lo;
    while f(hi) < 0.0 {
        hi = hi.checked_mul(2)?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Comparison certificate for `Σ α^{e_n}` given that every class past
/// `onset` is either vanishing or grows at least like `coeff n^pow`.
fn convergence(alpha: f64, onset: u64, powers: &[(f64, f64)], term: &dyn Fn(u64) -> f64) -> Option<Certificate> {
    if powers.is_empty() {
        let sum_bound = head_sum(term, onset);
        return Some(Certificate::new(
            Evidence::FiniteSupport { onset, sum_bound },
            format!("every term with n >= {onset} vanishes (exponent inf)"),
        ));
    }
    let coeff = powers.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let pow = powers.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    if pow >= 1.0 {
        // α^{e_n} <= α^{coeff n} = ratio^n
        let ratio = alpha.powf(coeff);
        if !(ratio < 1.0) {
            return None;
        }
        let cut = onset.saturating_add(HEAD_EXTENSION);
        let sum_bound = head_sum(term, cut).map(|h| h + padded_sum(ratio.powf(cut as f64) / (1.0 - ratio), 1));
        let statement = format!(
            "for n >= {onset}, term(n) <= {ratio}^n (e_n >= {coeff} n){}",
            sum_bound.map_or(String::new(), |b| format!("; sum <= {b}"))
        );
        return Some(Certificate::new(
            Evidence::GeometricComparison {
                alpha,
                ratio,
                onset,
                sum_bound,
            },
            statement,
        ));
    }
    // α^{e_n} <= exp(-λ n^pow) <= n^-2
    let lambda = coeff * (1.0 / alpha).ln();
    let start = pseries_onset(lambda, pow, onset)?;
    let sum_bound = head_sum(term, start).map(|h| h + padded_sum(1.0 / (start - 1) as f64, 1));
    let statement = format!(
        "for n >= {start}, term(n) <= n^-2 (e_n >= {coeff} n^{pow}){}",
        sum_bound.map_or(String::new(), |b| format!("; sum <= {b}"))
    );
    Some(Certificate::new(
        Evidence::PSeriesComparison {
            alpha,
            constant: 1.0,
            power: 2.0,
            onset: start,
            sum_bound,
        },
        statement,
    ))
}

/// Least block index past which `j^j alpha^(coeff j^pow) <= j^-2` for good.
fn block_cut(lambda: f64, pow: f64, from: u64) -> Option<u64> {
    const LAST: u64 = 10_000_000;
    // f(j) = λ j^pow - (j + 2) ln j; f'' > 0 once j^(pow-1) >= 1 / (λ pow (pow - 1))
    let f = |j: f64| lambda * j.powf(pow) - (j + 2.0) * j.ln();
    let df = |j: f64| lambda * pow * j.powf(pow - 1.0) - j.ln() - 1.0 - 2.0 / j;
    let convex = (1.0 / (lambda * pow * (pow - 1.0))).powf(1.0 / (pow - 1.0)).ceil();
    if !(convex < LAST as f64) {
        return None;
    }
    let start = from.max(convex as u64).max(2);
    (start..=LAST).find(|&j| {
        let x = j as f64;
        f(x) >= 1e-9 * x * x.ln() && df(x) >= 0.0
    })
}

/// Comparison certificate when every growing class satisfies
/// `e_n >= coeff a_n^pow`, `pow > 1`, past `onset`.
fn block_convergence(alpha: f64, onset: u64, coeff: f64, pow: f64, term: &dyn Fn(u64) -> f64) -> Option<Certificate> {
    let lambda = coeff * (1.0 / alpha).ln();
    if !(lambda > 0.0) {
        return None;
    }
    let first = block_of(onset);
    let cut = block_cut(lambda, pow, first)?;
    // blocks first..cut by their size, the rest by j^-2
    let blocks: f64 = (first..cut)
        .map(|j| {
            let x = j as f64;
            (x * x.ln() - lambda * x.powf(pow)).exp()
        })
        .sum();
    let sum_bound = head_sum(term, onset).map(|h| h + padded_sum(blocks, cut - first) + padded_sum(1.0 / (cut - 1) as f64, 1));
    let statement = format!(
        "for n >= {onset}, e_n >= {coeff} a_n^{pow}, so block j contributes at most j^j alpha^({coeff} j^{pow}), below j^-2 from block {cut}{}",
        sum_bound.map_or(String::new(), |b| format!("; sum <= {b}"))
    );
    Some(Certificate::new(
        Evidence::BlockComparison {
            alpha,
            coeff,
            power: pow,
            onset,
            sum_bound,
        },
        statement,
    ))
}

enum Outcome {
    Yes(Certificate),
    No(Certificate),
    Unknown(String),
}

/// Decide `Σ α^{e_n}` for each `α` in `alphas` (the first that certifies
/// wins). Divergence certificates hold for every `α < 1`.
fn decide_exponent(e: &ExponentSequence, alphas: &[f64], fixed: Option<f64>) -> Outcome {
    let mut reason = String::from("no class summary available");
    for k in 0..=MAX_REFINEMENT {
        let cs = classes(e, 1u64 << k);
        let shapes: Vec<Shape> = cs.iter().map(|c| shape(&c.asym)).collect();
        for (c, s) in cs.iter().zip(&shapes) {
            match *s {
                Shape::Bounded(m) => return Outcome::No(divergence(c, fixed, TermBound::BoundedExponent { max_exponent: m })),
                Shape::Block { coeff } => {
                    return Outcome::No(divergence(c, fixed, TermBound::BlockGrowth { coefficient: coeff }))
                }
                _ => {}
            }
        }
        let opaque = cs.iter().zip(&shapes).find(|(_, s)| **s == Shape::Opaque);
        if let Some((c, _)) = opaque {
            reason = format!(
                "growth of e_n on {} is not certified (values in [{}, {}])",
                c.region.describe(),
                c.asym.tail.lo,
                c.asym.tail.hi
            );
            continue;
        }
        let onset = cs.iter().map(ClassProfile::onset).max().unwrap_or(1);
        let powers: Vec<(f64, f64)> = shapes
            .iter()
            .filter_map(|s| match *s {
                Shape::Power { coeff, pow } => Some((coeff, pow)),
                _ => None,
            })
            .collect();
        let block_powers: Vec<(f64, f64)> = shapes
            .iter()
            .filter_map(|s| match *s {
                Shape::BlockPower { coeff, pow } => Some((coeff, pow)),
                _ => None,
            })
            .collect();
        for &alpha in alphas {
            let term = |n: u64| power_term(alpha, e.eval(n));
            let cert = match (powers.is_empty(), block_powers.is_empty()) {
                (_, true) => convergence(alpha, onset, &powers, &term),
                (true, false) => {
                    let coeff = block_powers.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
                    let pow = block_powers.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
                    block_convergence(alpha, onset, coeff, pow, &term)
                }
                (false, false) => None,
            };
            if let Some(cert) = cert {
                return Outcome::Yes(cert);
            }
        }
        reason = "e_n grows, but no representable comparison onset was found".into();
    }
    Outcome::Unknown(reason)
}

fn probe(e: &ExponentSequence, alphas: &[f64], horizon: u64) -> Certificate {
    let mut sums = vec![0.0; alphas.len()];
    for n in 1..=horizon {
        let v = e.eval(n);
        if v == f64::INFINITY {
            continue;
        }
        for (s, &a) in sums.iter_mut().zip(alphas) {
            *s += a.powf(v);
        }
    }
    let probes: Vec<Probe> = alphas
        .iter()
        .zip(&sums)
        .map(|(&alpha, &partial_sum)| Probe {
            alpha,
            partial_sum,
            exceeds_threshold: partial_sum > PROBE_THRESHOLD,
        })
        .collect();
    let statement = probes
        .iter()
        .map(|p| format!("alpha = {}: partial sum {} after {horizon} terms", p.alpha, p.partial_sum))
        .collect::<Vec<_>>()
        .join("; ");
    Certificate::new(
        Evidence::Numeric {
            horizon,
            threshold: PROBE_THRESHOLD,
            probes,
        },
        format!("uncertified: {statement}"),
    )
}

/// Does `Σ term(n)` converge?
pub fn decide_convergence(term: &SeriesTerm) -> Verdict {
    decide_convergence_with(term, &SeriesOptions::default())
}

pub fn decide_convergence_with(term: &SeriesTerm, opts: &SeriesOptions) -> Verdict {
    match term {
        SeriesTerm::Constant { value } if *value == 0.0 => Verdict::yes(
            Certificate::new(
                Evidence::FiniteSupport {
                    onset: 1,
                    sum_bound: Some(0.0),
                },
                "every term is 0",
            ),
            CITATION,
        ),
        SeriesTerm::Constant { value } => {
            let c = ClassProfile {
                region: Region::all(),
                asym: Asym::constant(*value, 1),
            };
            Verdict::no(divergence(&c, None, TermBound::Constant { value: *value }), CITATION)
        }
        SeriesTerm::Power { base, exponent } => match decide_exponent(exponent, &[*base], Some(*base)) {
            Outcome::Yes(c) => Verdict::yes(c, CITATION),
            Outcome::No(c) => Verdict::no(c, CITATION),
            Outcome::Unknown(reason) => {
                Verdict::unknown(Some(probe(exponent, &[*base], opts.probe_horizon)), CITATION, reason)
            }
        },
    }
}

/// Is `Σ_{e_n < inf} α^{e_n}` finite for some `α` in `(0, 1)`?
pub fn exists_alpha(e: &ExponentSequence) -> Verdict {
    exists_alpha_with(e, &SeriesOptions::default())
}

pub fn exists_alpha_with(e: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    match decide_exponent(e, &PROBE_ALPHAS, None) {
        Outcome::Yes(c) => Verdict::yes(c, CITATION),
        Outcome::No(c) => Verdict::no(c, CITATION),
        Outcome::Unknown(reason) => Verdict::unknown(Some(probe(e, &PROBE_ALPHAS, opts.probe_horizon)), CITATION, reason),
    }
}

/// Is the all-ones sequence in `ℓ_{r_n}`, `1/r_n = max(0, 1/q_n - 1/p_n)`?
pub fn one_in_lrn(p: &ExponentSequence, q: &ExponentSequence) -> Verdict {
    one_in_lrn_with(p, q, &SeriesOptions::default())
}

pub fn one_in_lrn_with(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    exists_alpha_with(&ExponentSequence::rn_of(p.clone(), q.clone()), opts).with_citation("Thm 1.3")
}

impl Evidence {
    /// For a divergence certificate: an index `H` with
    /// `Σ_{n <= H} alpha^{e_n} > threshold`, when one fits in `u64`.
    pub fn divergence_horizon(&self, alpha: f64, threshold: f64) -> Option<u64> {
        let Evidence::DivergenceByTerms { family, bound, .. } = self else {
            return None;
        };
        let region = family.region();
        let per_term = |v: f64| -> Option<u64> {
            if !(v > 0.0) {
                return None;
            }
            let needed = (threshold * HORIZON_MARGIN / v).floor() + 1.0;
            if !(needed < 1e30) {
                return None;
            }
            horizon_for_count(&region, needed as u128)
        };
        match *bound {
            TermBound::Constant { value } => per_term(value),
            TermBound::BoundedExponent { max_exponent } => per_term(alpha.powf(max_exponent)),
            TermBound::BlockGrowth { coefficient } => {
                let mut acc = 0.0;
                let mut j = block_of(region.onset);
                loop {
                    let start = block_start(j)?.max(region.onset);
                    let end = block_end(j)?;
                    acc += region.count_lower(start, end) as f64 * alpha.powf(coefficient * j as f64);
                    if acc > threshold * HORIZON_MARGIN {
                        return Some(end);
                    }
                    j += 1;
                }
            }
        }
    }
}

/// Smallest `H` for which `region.count_lower(onset, H) >= needed`.
fn horizon_for_count(region: &Region, needed: u128) -> Option<u64> {
    let per_period = region.mask.iter().filter(|&&b| b).count() as u128;
    if per_period == 0 {
        return None;
    }
    let periods = needed.div_ceil(per_period);
    let span = periods.checked_mul(region.modulus as u128)?;
    u64::try_from(region.onset as u128 - 1 + span).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Answer;

    type E = ExponentSequence;

    fn partial_sums(alpha: f64, e: &E, horizon: u64) -> f64 {
        (1..=horizon).map(|n| power_term(alpha, e.eval(n))).sum()
    }

    #[test]
    fn linear_exponent_is_geometric() {
        let e = E::linear(1.0, 1.0).unwrap();
        let v = exists_alpha(&e);
        assert_eq!(v.answer, Answer::Yes);
        let Some(Certificate {
            evidence: Evidence::GeometricComparison {
                alpha,
                ratio,
                onset,
                sum_bound,
            },
            ..
        }) = v.certificate
        else {
            panic!("{v:?}")
        };
        assert_eq!(alpha, 0.5);
        // closed form Σ_{n <= N} 2^{-(n+1)} = (1 - 2^-N) / 2
        let s = partial_sums(alpha, &e, 10_000);
        assert!((s - 0.5).abs() <= 1e-12, "{s}");
        assert!(s <= sum_bound.unwrap());
        assert!(sum_bound.unwrap() < 0.5 + 1e-9);
        for n in onset..onset + 1000 {
            assert!(power_term(alpha, e.eval(n)) <= ratio.powf(n as f64) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn blocks_diverge_with_horizon() {
        let v = exists_alpha(&E::blocks());
        assert_eq!(v.answer, Answer::No);
        let ev = v.certificate.unwrap().evidence;
        assert!(matches!(ev, Evidence::DivergenceByTerms { bound: TermBound::BlockGrowth { .. }, .. }));
        for alpha in [0.9, 0.5] {
            let h = ev.divergence_horizon(alpha, PROBE_THRESHOLD).unwrap();
            assert!(partial_sums(alpha, &E::blocks(), h) > PROBE_THRESHOLD, "{alpha}");
        }
        // (j / 10)^j first exceeds the threshold in block 16, past u64.
        assert_eq!(ev.divergence_horizon(0.1, PROBE_THRESHOLD), None);
    }

    #[test]
    fn bounded_exponents_diverge() {
        let v = exists_alpha(&E::constant(3.0).unwrap());
        assert_eq!(v.answer, Answer::No);
        let ev = v.certificate.unwrap().evidence;
        for alpha in [0.9, 0.5, 0.1] {
            let h = ev.divergence_horizon(alpha, PROBE_THRESHOLD).unwrap();
            let s = partial_sums(alpha, &E::constant(3.0).unwrap(), h);
            assert!(s > PROBE_THRESHOLD, "{alpha}: {s}");
            // about 1000 / 0.001 terms needed at alpha = 0.1
            if alpha == 0.1 {
                assert!((1_000_000..=1_000_002).contains(&h), "{h}");
            }
        }
    }

    #[test]
    fn all_infinite_is_finite_support() {
        let v = exists_alpha(&E::infinity());
        assert_eq!(v.answer, Answer::Yes);
        assert!(matches!(v.certificate.unwrap().evidence, Evidence::FiniteSupport { onset: 1, .. }));
    }

    #[test]
    fn r_sequence_examples() {
        let c = |x| E::constant(x).unwrap();
        assert_eq!(one_in_lrn(&c(1.0), &c(2.0)).answer, Answer::Yes);
        assert_eq!(one_in_lrn(&c(2.0), &c(1.0)).answer, Answer::No);
        let p = E::drift(1.0, 1.0, 1.0).unwrap();
        let r = E::rn_of(p.clone(), c(1.0));
        for n in 1..=1000u64 {
            let want = n as f64 + 1.0;
            assert!((r.eval(n) - want).abs() <= 1e-9 * want, "{n}");
        }
        let v = one_in_lrn(&p, &c(1.0));
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.citation, "Thm 1.3");
    }

    #[test]
    fn convergence_examples() {
        let geo = SeriesTerm::power(0.5, E::linear(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(decide_convergence(&geo).answer, Answer::Yes);
        let blk = SeriesTerm::power(0.5, E::blocks()).unwrap();
        let v = decide_convergence(&blk);
        assert_eq!(v.answer, Answer::No);
        // block k contributes k^k 2^-k >= 1 once k >= 2
        let h = v.certificate.unwrap().evidence.divergence_horizon(0.5, 10.0).unwrap();
        assert!((1..=h).map(|n| blk.term(n)).sum::<f64>() > 10.0);
        assert_eq!(decide_convergence(&SeriesTerm::constant(0.25).unwrap()).answer, Answer::No);
        assert_eq!(decide_convergence(&SeriesTerm::constant(0.0).unwrap()).answer, Answer::Yes);
        assert!(SeriesTerm::constant(-1.0).is_err());
        assert!(SeriesTerm::power(1.5, E::blocks()).is_err());
    }

    #[test]
    fn sublinear_growth_uses_p_series() {
        // e_n = 2 + 1/sqrt(n) ... Nakano exponent grows like sqrt(n)
        let p = E::drift(2.0, 1.0, 0.5).unwrap();
        let e = E::nakano_exponent(p, E::constant(2.0).unwrap());
        let v = exists_alpha(&e);
        assert_eq!(v.answer, Answer::Yes, "{v:?}");
        let Evidence::PSeriesComparison { alpha, onset, sum_bound, .. } = v.certificate.unwrap().evidence else {
            panic!()
        };
        for n in onset..onset + 1000 {
            assert!(power_term(alpha, e.eval(n)) <= (n as f64).powi(-2) * (1.0 + 1e-12));
        }
        if let Some(b) = sum_bound {
            assert!(partial_sums(alpha, &e, 100_000) <= b);
        }
    }

    #[test]
    fn nakano_exponent_is_symmetric() {
        let seqs = [
            E::constant(2.0).unwrap(),
            E::drift(1.0, 1.0, 1.0).unwrap(),
            E::blocks(),
            E::linear(1.0, 0.0).unwrap(),
            E::shift(2.0, E::recip(E::blocks())).unwrap(),
            E::infinity(),
        ];
        let opts = SeriesOptions { probe_horizon: 1000 };
        for p in &seqs {
            for q in &seqs {
                let a = exists_alpha_with(&E::nakano_exponent(p.clone(), q.clone()), &opts);
                let b = exists_alpha_with(&E::nakano_exponent(q.clone(), p.clone()), &opts);
                assert_eq!(a.answer, b.answer, "{p:?} {q:?}");
            }
        }
    }

    #[test]
    fn unknown_carries_probe() {
        // a_n passes 16 only beyond 2^64, so no class summary is certified
        let e = E::nakano_exponent(E::constant(16.0).unwrap(), E::blocks());
        let v = exists_alpha_with(&e, &SeriesOptions { probe_horizon: 10_000 });
        assert_eq!(v.answer, Answer::Unknown);
        assert!(v.reason.is_some());
        let Evidence::Numeric { probes, horizon, .. } = v.certificate.unwrap().evidence else {
            panic!()
        };
        assert_eq!(horizon, 10_000);
        assert_eq!(probes.len(), 3);
        assert!(probes.iter().all(|p| !p.exceeds_threshold));
    }

    #[test]
    fn linear_shifts_cancel() {
        // n (n + 1) grows quadratically
        let e = E::nakano_exponent(E::linear(1.0, 0.0).unwrap(), E::linear(1.0, 1.0).unwrap());
        let v = exists_alpha(&e);
        assert!(v.is_yes(), "{v:?}");
        let Evidence::GeometricComparison { alpha, sum_bound, .. } = v.certificate.unwrap().evidence else {
            panic!()
        };
        assert!(partial_sums(alpha, &e, 10_000) <= sum_bound.unwrap());
    }

    #[test]
    fn squared_block_growth_converges() {
        // p = 1 + a_n, q = a_n: p q / |p - q| = a_n (a_n + 1)
        let e = E::nakano_exponent(E::shift(1.0, E::blocks()).unwrap(), E::blocks());
        let v = exists_alpha(&e);
        assert_eq!(v.answer, Answer::Yes, "{v:?}");
        let Some(Certificate {
            evidence: Evidence::BlockComparison { alpha, sum_bound, power, .. },
            ..
        }) = v.certificate
        else {
            panic!("{v:?}")
        };
        assert_eq!(power, 2.0);
        let bound = sum_bound.unwrap();
        let s = partial_sums(alpha, &e, 1_000_000);
        assert!(s <= bound && bound.is_finite(), "{s} vs {bound}");
    }
}
