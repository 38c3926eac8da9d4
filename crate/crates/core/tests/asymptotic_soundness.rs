use nakano::exponents::{classes, dev_band, profile, ExponentSequence, IndexSet};
use proptest::prelude::*;

type E = ExponentSequence;

fn base() -> impl Strategy<Value = E> {
    prop_oneof![
        (1.0f64..6.0).prop_map(|c| E::constant(c).unwrap()),
        Just(E::infinity()),
        (1.0f64..4.0, -2.0f64..2.0, 0.25f64..3.0).prop_map(|(l, c, b)| E::drift(l, c, b).unwrap()),
        (0.1f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| E::linear(a, b).unwrap()),
        Just(E::blocks()),
    ]
}

fn set() -> impl Strategy<Value = IndexSet> {
    prop_oneof![
        Just(IndexSet::Evens),
        Just(IndexSet::Odds),
        (1u64..5, 1u64..5).prop_map(|(k, s)| IndexSet::stride(k, s)),
        prop::collection::vec(1u64..30, 1..4).prop_map(IndexSet::list),
    ]
}

fn expr() -> impl Strategy<Value = E> {
    base().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (set(), inner.clone(), inner.clone()).prop_map(|(s, a, b)| E::merge(s, a, b).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::abs_diff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::rn_of(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| E::nakano_exponent(a, b)),
            inner.clone().prop_map(E::recip),
            (0.0f64..3.0, inner).prop_map(|(c, a)| E::shift(c, a).unwrap()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn class_summaries_enclose_sampled_values(e in expr(), k in 0u32..12) {
        for c in classes(&e, 1 << k) {
            let start = c.onset();
            if start > 1 << 40 {
                continue;
            }
            for n in (start..start + 2000).filter(|&n| c.region.contains(n)) {
                let v = e.eval(n);
                prop_assert!(c.asym.tail.widen(1e-9).contains(v), "{e:?}: {v} at {n} outside {:?}", c.asym.tail);
                if let Some(band) = dev_band(&c.asym, n) {
                    prop_assert!(band.widen(1e-9).contains(v), "{e:?}: {v} at {n} outside band {band:?}");
                }
            }
        }
    }

    #[test]
    fn profile_encloses_tail(e in expr()) {
        let pr = profile(&e);
        if let Some(onset) = pr.onset.filter(|&o| o < 1 << 40) {
            for n in onset..onset + 2000 {
                let v = e.eval(n);
                prop_assert!(v >= pr.liminf.lo - 1e-6 && v <= pr.limsup.hi + 1e-6, "{e:?}: {v} at {n}");
            }
        }
    }

    #[test]
    fn shared_cores_are_sound(
        t in expr(),
        (c1, c2) in (0.0f64..4.0, 0.0f64..4.0),
        pre in prop::collection::vec((1u64..30, 1.0f64..9.0), 0..3),
        op in 0usize..3,
        k in 0u32..10,
    ) {
        let pre: std::collections::BTreeMap<_, _> = pre.into_iter().collect();
        let p = E::shift(c1, t.clone()).unwrap();
        let q = E::prefix(pre.into_iter().collect(), E::shift(c2, t).unwrap()).unwrap();
        let e = match op {
            0 => E::abs_diff(p, q),
            1 => E::rn_of(p, q),
            _ => E::nakano_exponent(p, q),
        };
        for c in classes(&e, 1 << k) {
            let start = c.onset();
            if start > 1 << 40 {
                continue;
            }
            for n in (start..start + 2000).filter(|&n| c.region.contains(n)) {
                let v = e.eval(n);
                prop_assert!(c.asym.tail.widen(1e-9).contains(v), "{e:?}: {v} at {n} outside {:?}", c.asym.tail);
                if let Some(band) = dev_band(&c.asym, n) {
                    prop_assert!(band.widen(1e-9).contains(v), "{e:?}: {v} at {n} outside band {band:?}");
                }
            }
        }
    }
}
