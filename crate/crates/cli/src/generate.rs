//! Seeded random descriptors for fuzzing the parser and the classifier.

use nakano::{ExponentSequence, IndexSet};
use rand::seq::SliceRandom;
use rand::Rng;

type E = ExponentSequence;

const NICE: [f64; 9] = [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 0.5, 0.25, 10.0];

fn nice<R: Rng>(rng: &mut R) -> f64 {
    *NICE.choose(rng).unwrap()
}

fn at_least_one<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.1) {
        f64::INFINITY
    } else {
        1.0 + nice(rng) * f64::from(rng.gen_range(0..3u8))
    }
}

fn set<R: Rng>(rng: &mut R, depth: u32) -> IndexSet {
    match rng.gen_range(0..if depth > 0 { 6 } else { 5 }) {
        0 => IndexSet::All,
        1 => IndexSet::Evens,
        2 => IndexSet::Odds,
        3 => IndexSet::stride(rng.gen_range(1..=5), rng.gen_range(1..=4)),
        4 => IndexSet::list((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=40)).collect()),
        _ => set(rng, depth - 1).complement(),
    }
}

fn leaf<R: Rng>(rng: &mut R) -> E {
    match rng.gen_range(0..5) {
        0 => E::constant(at_least_one(rng)).unwrap(),
        1 => {
            let coeff = nice(rng) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
            E::drift(1.0 + nice(rng), coeff, nice(rng)).unwrap()
        }
        2 => E::linear(nice(rng), nice(rng) - 1.0).unwrap(),
        3 => E::blocks(),
        _ => E::infinity(),
    }
}

/// A descriptor whose values all lie in `[1, inf]`.
pub fn exponent<R: Rng>(rng: &mut R, depth: u32) -> E {
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 | 1 => leaf(rng),
        2 => E::merge(set(rng, 1), exponent(rng, depth - 1), exponent(rng, depth - 1)).unwrap(),
        3 => {
            let overrides = (0..rng.gen_range(1..=3))
                .map(|_| (rng.gen_range(1..=20), at_least_one(rng)))
                .collect::<std::collections::BTreeMap<_, _>>()
                .into_iter()
                .collect();
            E::prefix(overrides, exponent(rng, depth - 1)).unwrap()
        }
        4 => E::shift(1.0 + nice(rng), E::recip(exponent(rng, depth - 1))).unwrap(),
        _ => E::shift(nice(rng) - 0.25 * f64::from(rng.gen_range(0..3u8)), exponent(rng, depth - 1))
            .unwrap_or_else(|_| leaf(rng)),
    }
}

/// Any well-formed descriptor, including derived forms whose values may
/// leave `[1, inf]`.
pub fn expression<R: Rng>(rng: &mut R, depth: u32) -> E {
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| expression(rng, depth - 1);
    match rng.gen_range(0..8) {
        0 => leaf(rng),
        1 => exponent(rng, depth),
        2 => E::abs_diff(sub(rng), sub(rng)),
        3 => E::rn_of(sub(rng), sub(rng)),
        4 => E::nakano_exponent(sub(rng), sub(rng)),
        5 => E::recip(sub(rng)),
        6 => E::shift(nice(rng), sub(rng)).unwrap(),
        _ => E::merge(set(rng, 2), sub(rng), sub(rng)).unwrap(),
    }
}
