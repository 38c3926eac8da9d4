//! Certified tail analysis of descriptor sequences.
//!
//! A descriptor is split into finitely many eventually-periodic index classes
//! (one per combination of `Merge` branches). On each class the sequence is a
//! pointwise combination of convergent leaves, and is summarised by an
//! [`Asym`]: an enclosure of its limit points, an enclosure of its values past
//! an onset, and, when available, a two-sided rate `s_n - L = ±θ_n g(n)` with
//! `θ_n` in a positive interval and `g(n) = n^γ a_n^δ` (`a_n` the block
//! sequence).
//!
//! Every combinator is evaluated in terms of reciprocals, so the finite and
//! infinite exponent cases share one code path.

use std::cmp::Ordering;

use super::blocks::{block_of, block_start, ln_block_start_lower};
use super::index_set::Region;
use super::ExponentSequence as E;
use crate::extended::Interval;

/// Relative outward padding applied after each operation.
const PAD: f64 = 1e-12;

/// The comparison scale `g(n) = n^n_pow * a_n^a_pow`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub n_pow: f64,
    pub a_pow: f64,
}

impl Scale {
    pub const ONE: Scale = Scale {
        n_pow: 0.0,
        a_pow: 0.0,
    };

    pub fn n(pow: f64) -> Scale {
        Scale {
            n_pow: pow,
            a_pow: 0.0,
        }
    }

    pub fn blocks(pow: f64) -> Scale {
        Scale {
            n_pow: 0.0,
            a_pow: pow,
        }
    }

    /// Growth order; `a_n` grows more slowly than every positive power of `n`.
    pub fn order(&self, other: &Scale) -> Ordering {
        self.n_pow
            .partial_cmp(&other.n_pow)
            .unwrap()
            .then(self.a_pow.partial_cmp(&other.a_pow).unwrap())
    }

    pub fn is_growing(&self) -> bool {
        self.order(&Scale::ONE) == Ordering::Greater
    }

    pub fn is_decaying(&self) -> bool {
        self.order(&Scale::ONE) == Ordering::Less
    }

    pub fn inv(&self) -> Scale {
        Scale {
            n_pow: -self.n_pow,
            a_pow: -self.a_pow,
        }
    }

    pub fn eval(&self, n: u64) -> f64 {
        let mut v = 1.0;
        if self.n_pow != 0.0 {
            v *= (n as f64).powf(self.n_pow);
        }
        if self.a_pow != 0.0 {
            v *= (block_of(n) as f64).powf(self.a_pow);
        }
        v
    }

    /// `inf_{n >= onset} g(n)` when `g` is nondecreasing.
    fn min_from(&self, onset: u64) -> Option<f64> {
        (self.n_pow >= 0.0 && self.a_pow >= 0.0).then(|| self.eval(onset))
    }

    /// `sup_{n >= onset} g(n)` for a decaying scale.
    fn sup_from(&self, onset: u64) -> Option<f64> {
        if self.n_pow <= 0.0 && self.a_pow <= 0.0 {
            return Some(self.eval(onset));
        }
        if self.n_pow < 0.0 && self.a_pow > 0.0 {
            return sup_mixed(self.n_pow, self.a_pow, onset);
        }
        None
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.n_pow != 0.0 {
            parts.push(format!("n^{}", self.n_pow));
        }
        if self.a_pow != 0.0 {
            parts.push(format!("a_n^{}", self.a_pow));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// `sup_{n >= onset} n^γ a_n^δ` for `γ < 0 < δ`. Within a block `a_n` is
/// constant, so the supremum is attained at a block start (or at `onset`).
fn sup_mixed(gamma: f64, delta: f64, onset: u64) -> Option<f64> {
    const LAST_BLOCK: u64 = 400;
    let first = block_of(onset);
    let mut best = f64::NEG_INFINITY;
    for k in first..=LAST_BLOCK {
        let ln_start = if k == first {
            (onset as f64).ln()
        } else {
            match block_start(k) {
                Some(s) => (s as f64).ln(),
                None => ln_block_start_lower(k),
            }
        };
        best = best.max(gamma * ln_start + delta * (k as f64).ln());
    }
    // Past LAST_BLOCK the log-bound (k-1) ln(k-1) γ + δ ln k must be decreasing.
    let k = LAST_BLOCK as f64;
    let slope = gamma * ((k - 1.0).ln() + 1.0) + delta / k;
    (slope < 0.0).then(|| best.exp())
}

/// Rate information for a class sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Dev {
    /// The values equal the limit exactly past the onset (including all `inf`).
    Exact,
    /// Finite limit `L`, decaying `g`: `s_n - L = sign θ_n g(n)`.
    /// Infinite limit, growing `g`: `s_n = sign θ_n g(n)`.
    Term {
        sign: f64,
        theta: Interval,
        scale: Scale,
    },
    Unknown,
}

/// Tail summary of a `Merge`-free sequence on one index class.
#[derive(Debug, Clone, PartialEq)]
pub struct Asym {
    /// Encloses every limit point.
    pub limit: Interval,
    /// Encloses every value `s_n` with `n >= onset`.
    pub tail: Interval,
    pub onset: u64,
    /// All values past the onset are finite.
    pub finite: bool,
    pub dev: Dev,
}

impl Asym {
    pub fn constant(c: f64, onset: u64) -> Asym {
        Asym {
            limit: Interval::point(c),
            tail: Interval::point(c),
            onset,
            finite: c.is_finite(),
            dev: Dev::Exact,
        }
    }

    pub fn infinite(onset: u64) -> Asym {
        Asym::constant(f64::INFINITY, onset)
    }

    /// Every value past the onset is `inf`.
    pub fn is_infinite(&self) -> bool {
        self.tail.lo == f64::INFINITY
    }

    pub fn is_exact_zero(&self) -> bool {
        self.tail == Interval::point(0.0)
            || (self.dev == Dev::Exact && self.limit == Interval::point(0.0))
    }

    fn unknown(onset: u64, limit: Interval, tail: Interval, finite: bool) -> Asym {
        Asym {
            limit,
            tail,
            onset,
            finite,
            dev: Dev::Unknown,
        }
    }

    fn finite_limit(&self) -> Option<f64> {
        (self.limit.is_point() && self.limit.lo.is_finite()).then_some(self.limit.lo)
    }

    /// Use the rate to sharpen the limit and tail enclosures.
    fn tighten(mut self) -> Asym {
        if let Dev::Term { sign, theta, scale } = &self.dev {
            if scale.is_growing() {
                self.limit = Interval::point(sign * f64::INFINITY);
                if let Some(g) = scale.min_from(self.onset) {
                    let bound = theta.lo * g;
                    let band = if *sign > 0.0 {
                        Interval::new(bound, f64::INFINITY)
                    } else {
                        Interval::new(f64::NEG_INFINITY, -bound)
                    };
                    if let Some(t) = self.tail.intersect(&band.widen(PAD)) {
                        self.tail = t;
                    }
                }
            } else if let Some(l) = self.finite_limit() {
                if let Some(g) = scale.sup_from(self.onset) {
                    let reach = theta.hi * g;
                    let band = if *sign > 0.0 {
                        Interval::new(l, l + reach)
                    } else {
                        Interval::new(l - reach, l)
                    };
                    if let Some(t) = self.tail.intersect(&band.widen(PAD)) {
                        self.tail = t;
                    }
                }
            }
        }
        self
    }

    fn padded(mut self) -> Asym {
        self.tail = self.tail.widen(PAD);
        self
    }

    pub fn neg(&self) -> Asym {
        Asym {
            limit: self.limit.neg(),
            tail: self.tail.neg(),
            onset: self.onset,
            finite: self.finite,
            dev: match &self.dev {
                Dev::Term { sign, theta, scale } => Dev::Term {
                    sign: -sign,
                    theta: *theta,
                    scale: *scale,
                },
                other => other.clone(),
            },
        }
    }

    /// Sum of two finite-valued class sequences.
    pub fn add(&self, other: &Asym) -> Asym {
        let onset = self.onset.max(other.onset);
        let limit = self.limit.add(&other.limit);
        let tail = self.tail.add(&other.tail);
        if !(self.finite && other.finite) {
            return Asym::unknown(onset, limit, tail, false);
        }
        let dev = add_dev(self, other, onset);
        if dev == Dev::Exact && limit.is_point() {
            return Asym::constant(limit.lo, onset);
        }
        Asym {
            limit,
            tail,
            onset,
            finite: true,
            dev,
        }
        .tighten()
        .padded()
    }

    pub fn abs(&self) -> Asym {
        if self.is_infinite() || self.tail.lo >= 0.0 {
            return self.clone();
        }
        if self.tail.hi <= 0.0 {
            return self.neg();
        }
        if self.limit == Interval::point(0.0) {
            let dev = match &self.dev {
                Dev::Term { theta, scale, .. } => Dev::Term {
                    sign: 1.0,
                    theta: *theta,
                    scale: *scale,
                },
                Dev::Exact => Dev::Exact,
                Dev::Unknown => Dev::Unknown,
            };
            return Asym {
                limit: self.limit,
                tail: self.tail.abs(),
                onset: self.onset,
                finite: self.finite,
                dev,
            }
            .tighten();
        }
        Asym::unknown(self.onset, self.limit.abs(), self.tail.abs(), self.finite)
    }

    /// `max(0, s_n)`.
    pub fn pos(&self) -> Asym {
        if self.tail.lo >= 0.0 {
            return self.clone();
        }
        if self.tail.hi <= 0.0 {
            return Asym::constant(0.0, self.onset);
        }
        if self.limit == Interval::point(0.0) {
            match &self.dev {
                Dev::Term { sign, .. } if *sign > 0.0 => return self.clone(),
                Dev::Term { .. } | Dev::Exact => return Asym::constant(0.0, self.onset),
                Dev::Unknown => {}
            }
        }
        Asym::unknown(self.onset, self.limit.pos(), self.tail.pos(), self.finite)
    }

    /// `1 / s_n` for nonnegative `s_n`, with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> Asym {
        let onset = self.onset;
        if self.is_infinite() {
            return Asym::constant(0.0, onset);
        }
        if self.is_exact_zero() {
            return Asym::infinite(onset);
        }
        let base = self.tail.pos();
        let tail = base.recip_nonneg();
        let limit = self.limit.pos().recip_nonneg();
        let mut finite = base.lo > 0.0;
        let dev = match &self.dev {
            Dev::Exact => match self.finite_limit() {
                Some(l) if l > 0.0 => return Asym::constant(1.0 / l, onset),
                _ => Dev::Unknown,
            },
            Dev::Term { sign, theta, scale } if scale.is_growing() && *sign > 0.0 => Dev::Term {
                sign: 1.0,
                theta: theta.recip_nonneg(),
                scale: scale.inv(),
            },
            Dev::Term { sign, theta, scale } if scale.is_decaying() => match self.finite_limit() {
                Some(l) if l > 0.0 && base.lo > 0.0 && base.hi.is_finite() => Dev::Term {
                    sign: -sign,
                    theta: Interval::new(theta.lo / (l * base.hi), theta.hi / (l * base.lo)),
                    scale: *scale,
                },
                Some(l) if l == 0.0 && *sign > 0.0 => {
                    finite = true;
                    Dev::Term {
                        sign: 1.0,
                        theta: theta.recip_nonneg(),
                        scale: scale.inv(),
                    }
                }
                _ => Dev::Unknown,
            },
            _ => Dev::Unknown,
        };
        Asym {
            limit,
            tail,
            onset,
            finite,
            dev,
        }
        .tighten()
        .padded()
    }

    /// Hull of two class summaries, used when exact class splitting is abandoned.
    pub fn join(&self, other: &Asym) -> Asym {
        let dev = if self.dev == other.dev && self.limit == other.limit {
            self.dev.clone()
        } else {
            Dev::Unknown
        };
        Asym {
            limit: self.limit.hull(&other.limit),
            tail: self.tail.hull(&other.tail),
            onset: self.onset.max(other.onset),
            finite: self.finite && other.finite,
            dev: if self.dev == Dev::Exact && self.limit != other.limit {
                Dev::Unknown
            } else {
                dev
            },
        }
    }
}

fn add_dev(a: &Asym, b: &Asym, onset: u64) -> Dev {
    let term = |d: &Dev| match d {
        Dev::Term { sign, theta, scale } => Some((*sign, *theta, *scale)),
        _ => None,
    };
    match (a.finite_limit(), b.finite_limit()) {
        (Some(_), Some(_)) => match (&a.dev, &b.dev) {
            (Dev::Exact, Dev::Exact) => Dev::Exact,
            (Dev::Exact, t) | (t, Dev::Exact) => t.clone(),
            (Dev::Term { .. }, Dev::Term { .. }) => {
                combine(term(&a.dev).unwrap(), term(&b.dev).unwrap(), onset)
            }
            _ => Dev::Unknown,
        },
        _ => {
            let growing = |x: &Asym| term(&x.dev).filter(|t| t.2.is_growing());
            let bounded = |x: &Asym| {
                let t = x.tail;
                (t.lo.is_finite() && t.hi.is_finite()).then(|| t.lo.abs().max(t.hi.abs()))
            };
            match (growing(a), growing(b)) {
                (Some(ta), Some(tb)) => combine(ta, tb, onset),
                (Some(t), None) => bounded(b).map_or(Dev::Unknown, |bb| absorb(t, bb, onset)),
                (None, Some(t)) => bounded(a).map_or(Dev::Unknown, |bb| absorb(t, bb, onset)),
                (None, None) => Dev::Unknown,
            }
        }
    }
}

/// `sign θ g + r` with `|r| <= bound` and `g` growing.
fn absorb((sign, theta, scale): (f64, Interval, Scale), bound: f64, onset: u64) -> Dev {
    let Some(g) = scale.min_from(onset) else {
        return Dev::Unknown;
    };
    let slack = bound / g;
    let lo = theta.lo - slack;
    if lo > 0.0 {
        Dev::Term {
            sign,
            theta: Interval::new(lo, theta.hi + slack),
            scale,
        }
    } else {
        Dev::Unknown
    }
}

/// Sum of two rate terms.
fn combine(t1: (f64, Interval, Scale), t2: (f64, Interval, Scale), onset: u64) -> Dev {
    let signed = |(s, th, _): (f64, Interval, Scale)| if s > 0.0 { th } else { th.neg() };
    let (coeff, scale) = match t1.2.order(&t2.2) {
        Ordering::Equal => (signed(t1).add(&signed(t2)), t1.2),
        ord => {
            let (dom, minor) = if ord == Ordering::Greater { (t1, t2) } else { (t2, t1) };
            let ratio = Scale {
                n_pow: minor.2.n_pow - dom.2.n_pow,
                a_pow: minor.2.a_pow - dom.2.a_pow,
            };
            let Some(r) = ratio.sup_from(onset) else {
                return Dev::Unknown;
            };
            let e = minor.1.hi * r;
            (signed(dom).add(&Interval::new(-e, e)), dom.2)
        }
    };
    if coeff.lo > 0.0 {
        Dev::Term {
            sign: 1.0,
            theta: coeff,
            scale,
        }
    } else if coeff.hi < 0.0 {
        Dev::Term {
            sign: -1.0,
            theta: coeff.neg(),
            scale,
        }
    } else {
        Dev::Unknown
    }
}

fn ceil_index(x: f64) -> u64 {
    if !(x > 1.0) {
        1
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

/// Analysis of a leaf descriptor with onset at least `hint`.
fn leaf(seq: &E, hint: u64) -> Asym {
    match *seq {
        E::Const { value } => Asym::constant(value, hint),
        E::RationalDrift {
            limit,
            coeff,
            power,
        } => {
            if coeff == 0.0 || (coeff < 0.0 && limit == 1.0) {
                return Asym::constant(limit, hint);
            }
            let onset = if coeff < 0.0 {
                hint.max(ceil_index((-coeff / (limit - 1.0)).powf(1.0 / power)))
            } else {
                hint
            };
            let edge = seq.eval(onset);
            let tail = if coeff > 0.0 {
                Interval::new(limit, edge)
            } else {
                Interval::new(edge, limit)
            };
            Asym {
                limit: Interval::point(limit),
                tail,
                onset,
                finite: true,
                dev: Dev::Term {
                    sign: coeff.signum(),
                    theta: Interval::point(coeff.abs()),
                    scale: Scale::n(-power),
                },
            }
            .padded()
        }
        E::Linear { slope, intercept } => {
            let onset = hint.max(ceil_index((1.0 - intercept) / slope));
            let edge = intercept / onset as f64;
            let theta = if intercept >= 0.0 {
                Interval::new(slope, slope + edge)
            } else {
                Interval::new(slope + edge, slope)
            };
            Asym {
                limit: Interval::point(f64::INFINITY),
                tail: Interval::new(slope * onset as f64 + intercept, f64::INFINITY),
                onset,
                finite: true,
                dev: Dev::Term {
                    sign: 1.0,
                    theta,
                    scale: Scale::n(1.0),
                },
            }
            .padded()
        }
        E::BlockRepeat => Asym {
            limit: Interval::point(f64::INFINITY),
            tail: Interval::new(block_of(hint) as f64, f64::INFINITY),
            onset: hint,
            finite: true,
            dev: Dev::Term {
                sign: 1.0,
                theta: Interval::point(1.0),
                scale: Scale::blocks(1.0),
            },
        },
        _ => unreachable!("not a leaf descriptor"),
    }
}

fn abs_diff(p: &Asym, q: &Asym) -> Asym {
    let onset = p.onset.max(q.onset);
    match (p.is_infinite(), q.is_infinite()) {
        (true, true) => Asym::constant(0.0, onset),
        (true, false) if q.finite => Asym::infinite(onset),
        (false, true) if p.finite => Asym::infinite(onset),
        _ if p.finite && q.finite => p.add(&q.neg()).abs(),
        _ => Asym::unknown(
            onset,
            Interval::new(0.0, f64::INFINITY),
            Interval::new(0.0, f64::INFINITY),
            false,
        ),
    }
}

fn nakano(p: &Asym, q: &Asym) -> Asym {
    p.recip().add(&q.recip().neg()).abs().recip()
}

fn rn(p: &Asym, q: &Asym) -> Asym {
    q.recip().add(&p.recip().neg()).pos().recip()
}

/// The combinators applied to two identical descriptors.
fn identical(seq: &E, hint: u64) -> Asym {
    match seq {
        E::AbsDiff { .. } => Asym::constant(0.0, hint),
        _ => Asym::infinite(hint),
    }
}

/// Shift offsets down to the first non-shift, non-prefix descriptor, and the
/// index past which every peeled prefix is inactive. A linear intercept
/// counts as a shift once neither form is clamped at 1: `a n + b` and
/// `b + (a n)` round identically.
fn peel(seq: &E) -> (Vec<f64>, E, u64) {
    let (mut shifts, mut s, mut past) = (Vec::new(), seq, 1);
    loop {
        match s {
            E::Shift { offset, inner } => {
                // 0 + t evaluates to t exactly
                if *offset != 0.0 {
                    shifts.push(*offset);
                }
                s = inner;
            }
            E::Prefix { overrides, tail } => {
                past = past.max(overrides.last().map_or(1, |&(i, _)| i + 1));
                s = tail;
            }
            &E::Linear { slope, intercept } if intercept != 0.0 => {
                shifts.push(intercept);
                let unclamped = ceil_index((1.0 - intercept) / slope).max(ceil_index(1.0 / slope));
                let core = E::Linear { slope, intercept: 0.0 };
                return (shifts, core, past.max(unclamped));
            }
            _ => return (shifts, s.clone(), past),
        }
    }
}

/// `p_n = o1 + t_n` and `q_n = o2 + t_n` for `n >= past`; `o1 == o2`
/// (both `0`) when the two shift chains agree.
fn shared_core(p: &E, q: &E) -> Option<(E, u64, f64, f64)> {
    let (sp, cp, pp) = peel(p);
    let (sq, cq, pq) = peel(q);
    if cp != cq {
        return None;
    }
    let past = pp.max(pq);
    if sp == sq {
        return Some((cp, past, 0.0, 0.0));
    }
    let (o1, o2): (f64, f64) = (sp.iter().sum(), sq.iter().sum());
    // equal sums from different chains agree only up to rounding
    (o1 != o2).then_some((cp, past, o1, o2))
}

fn mul_nonneg(a: &Interval, b: &Interval) -> Interval {
    Interval::new(a.lo * b.lo, a.hi * b.hi)
}

/// The combinators applied to `o1 + t` and `o2 + t`.
fn offsets(seq: &E, t: &Asym, o1: f64, o2: f64, hint: u64) -> Asym {
    if o1 == o2 {
        return identical(seq, hint.max(t.onset));
    }
    let onset = t.onset;
    if t.is_infinite() {
        return identical(seq, onset);
    }
    let generic = || binary(seq, &shift(o1, t), &shift(o2, t));
    if !t.finite {
        return generic();
    }
    let d = (o1 - o2).abs();
    match seq {
        E::AbsDiff { .. } => return Asym::constant(d, onset),
        E::RnOf { .. } if o1 < o2 => return Asym::infinite(onset),
        _ => {}
    }
    // p q / |p - q| = (t + o1)(t + o2) / d, both factors positive
    let low = o1.min(o2);
    if !(t.tail.lo + low > 0.0) {
        return generic();
    }
    let quad = |x: &Interval| {
        mul_nonneg(
            &x.add(&Interval::point(o1)),
            &x.add(&Interval::point(o2)),
        )
        .scale(1.0 / d)
    };
    let tail = quad(&t.tail);
    let (limit, dev) = match &t.dev {
        Dev::Exact => (quad(&t.limit), Dev::Exact),
        Dev::Term { sign, theta, scale } if *sign > 0.0 && scale.is_growing() => {
            let square = Scale {
                n_pow: 2.0 * scale.n_pow,
                a_pow: 2.0 * scale.a_pow,
            };
            // (θ g)^2 / d plus (o1 + o2) θ g / d + o1 o2 / d, relative to g^2
            let dev = scale
                .min_from(onset)
                .filter(|&g| g > 0.0)
                .map(|g| {
                    let slack = ((o1 + o2).abs() * theta.hi / g + (o1 * o2).abs() / (g * g)) / d;
                    let lo = theta.lo * theta.lo / d - slack;
                    if lo > 0.0 {
                        Dev::Term {
                            sign: 1.0,
                            theta: Interval::new(lo, theta.hi * theta.hi / d + slack),
                            scale: square,
                        }
                    } else {
                        Dev::Unknown
                    }
                })
                .unwrap_or(Dev::Unknown);
            (Interval::point(f64::INFINITY), dev)
        }
        _ if t.limit.lo + low > 0.0 => (quad(&t.limit), Dev::Unknown),
        _ => return generic(),
    };
    Asym {
        limit,
        tail,
        onset,
        finite: true,
        dev,
    }
    .tighten()
    .padded()
}

fn binary(seq: &E, p: &Asym, q: &Asym) -> Asym {
    match seq {
        E::AbsDiff { .. } => abs_diff(p, q),
        E::RnOf { .. } => rn(p, q),
        E::NakanoExponent { .. } => nakano(p, q),
        _ => unreachable!(),
    }
}

fn shift(offset: f64, s: &Asym) -> Asym {
    if s.is_infinite() {
        return s.clone();
    }
    s.add(&Asym::constant(offset, s.onset))
}

/// One eventually-periodic index class and the sequence's summary on it.
/// The summary is valid for members `n >= max(region.onset, asym.onset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassProfile {
    pub region: Region,
    pub asym: Asym,
}

impl ClassProfile {
    pub fn onset(&self) -> u64 {
        self.region.onset.max(self.asym.onset)
    }
}

struct Overflow;

fn split(seq: &E, hint: u64) -> Result<Vec<ClassProfile>, Overflow> {
    let single = |asym| {
        Ok(vec![ClassProfile {
            region: Region::all(),
            asym,
        }])
    };
    match seq {
        E::Const { .. } | E::RationalDrift { .. } | E::Linear { .. } | E::BlockRepeat => {
            single(leaf(seq, hint))
        }
        E::Prefix { overrides, tail } => {
            let past = overrides.last().map_or(1, |&(i, _)| i + 1);
            Ok(split(tail, hint)?
                .into_iter()
                .map(|c| ClassProfile {
                    region: c.region.with_onset(past),
                    asym: c.asym,
                })
                .collect())
        }
        E::Merge {
            set,
            on_set,
            off_set,
        } => {
            let on_region = set.region();
            let off_region = on_region.complement();
            let mut out = Vec::new();
            for (branch, region) in [(on_set, &on_region), (off_set, &off_region)] {
                if !region.is_infinite() {
                    continue;
                }
                for c in split(branch, hint)? {
                    let r = c.region.intersect(region).ok_or(Overflow)?;
                    if r.is_infinite() {
                        out.push(ClassProfile {
                            region: r,
                            asym: c.asym,
                        });
                    }
                }
            }
            Ok(out)
        }
        E::AbsDiff { p, q } | E::RnOf { p, q } | E::NakanoExponent { p, q } if shared_core(p, q).is_some() => {
            let (core, past, o1, o2) = shared_core(p, q).unwrap();
            let hint = hint.max(past);
            Ok(split(&core, hint)?
                .into_iter()
                .map(|c| ClassProfile {
                    asym: offsets(seq, &c.asym, o1, o2, hint),
                    region: c.region.with_onset(past),
                })
                .collect())
        }
        E::AbsDiff { p, q } | E::RnOf { p, q } | E::NakanoExponent { p, q } => {
            let ps = split(p, hint)?;
            let qs = split(q, hint)?;
            let mut out = Vec::new();
            for a in &ps {
                for b in &qs {
                    let r = a.region.intersect(&b.region).ok_or(Overflow)?;
                    if r.is_infinite() {
                        let asym = binary(seq, &a.asym, &b.asym);
                        out.push(ClassProfile { region: r, asym });
                    }
                }
            }
            Ok(out)
        }
        E::Recip { inner } => Ok(split(inner, hint)?
            .into_iter()
            .map(|c| ClassProfile {
                asym: c.asym.recip(),
                region: c.region,
            })
            .collect()),
        E::Shift { offset, inner } => Ok(split(inner, hint)?
            .into_iter()
            .map(|c| ClassProfile {
                asym: shift(*offset, &c.asym),
                region: c.region,
            })
            .collect()),
    }
}

/// Whole-sequence summary with `Merge` replaced by the hull of its branches.
fn hull(seq: &E, hint: u64) -> Asym {
    match seq {
        E::Const { .. } | E::RationalDrift { .. } | E::Linear { .. } | E::BlockRepeat => leaf(seq, hint),
        E::Prefix { overrides, tail } => {
            let past = overrides.last().map_or(1, |&(i, _)| i + 1);
            hull(tail, hint.max(past))
        }
        E::Merge {
            set,
            on_set,
            off_set,
        } => {
            let region = set.region();
            let hint = hint.max(region.onset);
            if region.is_everything() {
                hull(on_set, hint)
            } else if !region.is_infinite() {
                hull(off_set, hint)
            } else {
                hull(on_set, hint).join(&hull(off_set, hint))
            }
        }
        E::AbsDiff { p, q } | E::RnOf { p, q } | E::NakanoExponent { p, q } if shared_core(p, q).is_some() => {
            let (core, past, o1, o2) = shared_core(p, q).unwrap();
            let hint = hint.max(past);
            offsets(seq, &hull(&core, hint), o1, o2, hint)
        }
        E::AbsDiff { p, q } | E::RnOf { p, q } | E::NakanoExponent { p, q } => {
            binary(seq, &hull(p, hint), &hull(q, hint))
        }
        E::Recip { inner } => hull(inner, hint).recip(),
        E::Shift { offset, inner } => shift(*offset, &hull(inner, hint)),
    }
}

/// Split `seq` into index classes and summarise each, with every onset at
/// least `hint`. The classes partition all sufficiently large indices.
pub fn classes(seq: &E, hint: u64) -> Vec<ClassProfile> {
    let hint = hint.max(1);
    match split(seq, hint) {
        Ok(cs) => cs,
        Err(Overflow) => vec![ClassProfile {
            region: Region::all(),
            asym: hull(seq, hint),
        }],
    }
}

/// Values a class summary allows at index `n` (for soundness checks).
pub fn dev_band(asym: &Asym, n: u64) -> Option<Interval> {
    let Dev::Term { sign, theta, scale } = &asym.dev else {
        return None;
    };
    let g = scale.eval(n);
    let band = Interval::new(theta.lo * g, theta.hi * g);
    let band = if *sign > 0.0 { band } else { band.neg() };
    if scale.is_growing() {
        Some(band)
    } else {
        asym.finite_limit().map(|l| band.add(&Interval::point(l)))
    }
}
