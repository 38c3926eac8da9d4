//! Extended reals in `[-inf, inf]`, closed intervals over them, and the JSON
//! encoding used throughout the crate (`"inf"` / `"-inf"` for the infinities).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Closed interval `[lo, hi]` of extended reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "ext")]
    pub lo: f64,
    #[serde(with = "ext")]
    pub hi: f64,
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        f64::NEG_INFINITY
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

impl Interval {
    pub const EVERYTHING: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    /// `max(0, x)` applied pointwise.
    pub fn pos(&self) -> Interval {
        Interval::new(self.lo.max(0.0), self.hi.max(0.0))
    }

    /// Reciprocal of a nonnegative interval with `1/0 = inf` and `1/inf = 0`.
    pub fn recip_nonneg(&self) -> Interval {
        debug_assert!(self.lo >= 0.0);
        Interval::new(recip_ext(self.hi), recip_ext(self.lo))
    }

    /// Multiply by a finite positive constant.
    pub fn scale(&self, c: f64) -> Interval {
        debug_assert!(c > 0.0 && c.is_finite());
        Interval::new(self.lo * c, self.hi * c)
    }

    /// Outward padding by a relative amount, absorbing floating-point rounding.
    pub fn widen(&self, rel: f64) -> Interval {
        let pad = |x: f64| if x.is_finite() { x.abs() * rel } else { 0.0 };
        Interval::new(self.lo - pad(self.lo), self.hi + pad(self.hi))
    }
}

/// `1/x` on `[0, inf]` with `1/0 = inf`, `1/inf = 0`.
pub fn recip_ext(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Display an extended real the way the DSL and reports spell it.
pub fn fmt_ext(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRepr {
    Num(f64),
    Text(String),
}

/// serde adapter: finite values as JSON numbers, infinities as strings.
pub mod ext {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else {
            s.serialize_str(&fmt_ext(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(ExtRepr::deserialize(d)?)
    }
}

fn from_repr<E: serde::de::Error>(r: ExtRepr) -> Result<f64, E> {
    match r {
        ExtRepr::Num(x) => Ok(x),
        ExtRepr::Text(t) => match t.as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(E::custom(format!(
                "expected a number or \"inf\", found {other:?}"
            ))),
        },
    }
}

/// serde adapter for `Option<f64>` with the same infinity encoding.
pub mod ext_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => ext::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<ExtRepr>::deserialize(d)?
            .map(from_repr)
            .transpose()
    }
}

/// serde adapter for `Vec<f64>` with the same infinity encoding.
pub mod ext_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "ext")] f64);

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|&x| Wrap(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// serde adapter for `(index, extended value)` pairs.
pub mod ext_pairs {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Pair(u64, #[serde(with = "ext")] f64);

    pub fn serialize<S: Serializer>(xs: &[(u64, f64)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|&(i, v)| Pair(i, v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(u64, f64)>, D::Error> {
        Ok(Vec::<Pair>::deserialize(d)?
            .into_iter()
            .map(|Pair(i, v)| (i, v))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_sums_widen_instead_of_nan() {
        let a = Interval::new(1.0, f64::INFINITY);
        let d = a.sub(&a);
        assert_eq!(d, Interval::EVERYTHING);
    }

    #[test]
    fn abs_straddling_zero() {
        assert_eq!(Interval::new(-1.0, 0.5).abs(), Interval::new(0.0, 1.0));
        assert_eq!(Interval::new(-3.0, -2.0).abs(), Interval::new(2.0, 3.0));
    }

    #[test]
    fn recip_conventions() {
        let r = Interval::new(0.0, f64::INFINITY).recip_nonneg();
        assert_eq!(r, Interval::new(0.0, f64::INFINITY));
        assert_eq!(Interval::new(2.0, 4.0).recip_nonneg(), Interval::new(0.25, 0.5));
    }

    #[test]
    fn json_encodes_infinity_as_text() {
        let i = Interval::new(1.0, f64::INFINITY);
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"lo":1.0,"hi":"inf"}"#);
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, i);
    }
}
