//! Classification of a Nakano sequence space and of the inclusion
//! `ℓ_{p_n} ↪ ℓ_{q_n}`, with a citation on every verdict.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::{classes, liminf_abs_gap, profile, AsymptoticProfile, ExponentSequence, GapVerdict, Tri};
use crate::extended::fmt_ext;
use crate::series::{exists_alpha_with, one_in_lrn_with, SeriesOptions};
use crate::verdict::{Answer, Certificate, Evidence, Verdict, INCLUSION_NOT_ESTABLISHED};
use crate::witness::{equality_witness, linf_witness, GapBound, WitnessError, WitnessSubsequence};

/// Citations allowed on Yes/No verdicts of an [`InclusionReport`].
pub const ANCHORS: [&str; 8] = [
    "Prop 1.2",
    "Prop 1.4",
    "Thm 1.3",
    "Thm 2.1",
    "Thm 2.2",
    "Thm 2.3",
    "Prop 2.5",
    "§2-remark",
];

/// Citation of the separability / reflexivity criteria (read as iff).
pub const SPACE_ANCHOR: &str = "§1-remark";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("internal inconsistency: {0}")]
pub struct InternalInconsistency(pub String);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub series: SeriesOptions,
    /// Length of attached witness prefixes.
    pub witness_count: usize,
    pub gap_bound: GapBound,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            series: SeriesOptions::default(),
            witness_count: 5,
            gap_bound: GapBound::default(),
        }
    }
}

fn profile_cert(quantity: &str, pr: &AsymptoticProfile, upper: bool) -> Certificate {
    let interval = if upper { pr.limsup } else { pr.liminf };
    Certificate::new(
        Evidence::Profile {
            quantity: quantity.into(),
            interval,
        },
        format!("{quantity} in [{}, {}]", fmt_ext(interval.lo), fmt_ext(interval.hi)),
    )
}

fn composite(parts: Vec<Certificate>) -> Certificate {
    let statement = parts.iter().map(|c| c.statement.as_str()).collect::<Vec<_>>().join("; ");
    Certificate::new(Evidence::Composite { parts }, statement)
}

/// `liminf p > 1` as a three-valued fact (`p >= 1`, so `liminf <= 1` means `= 1`).
fn liminf_above_one(pr: &AsymptoticProfile) -> Tri {
    if pr.liminf.lo > 1.0 {
        Tri::Yes
    } else if pr.liminf.hi <= 1.0 {
        Tri::No
    } else {
        Tri::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceProfile {
    pub separable: Verdict,
    pub reflexive: Verdict,
    pub contains_linf_copy: Verdict,
    pub linf_witness: Option<WitnessSubsequence>,
}

pub fn space_profile(p: &ExponentSequence) -> SpaceProfile {
    space_profile_from(p, &profile(p), 5)
}

fn space_profile_from(p: &ExponentSequence, pr: &AsymptoticProfile, witness_count: usize) -> SpaceProfile {
    let sup = || profile_cert("limsup p", pr, true);
    let separable = match pr.limsup_finite() {
        Tri::Yes => Verdict::yes(sup(), SPACE_ANCHOR),
        Tri::No => Verdict::no(sup(), "Prop 1.4"),
        Tri::Unknown => Verdict::unknown(Some(sup()), SPACE_ANCHOR, "cannot tell whether limsup p is finite"),
    };
    let reflexive = match (separable.answer, liminf_above_one(pr)) {
        (Answer::No, _) => Verdict::no(sup(), "Prop 1.4"),
        (Answer::Yes, Tri::Yes) => Verdict::yes(
            composite(vec![sup(), profile_cert("liminf p", pr, false)]),
            SPACE_ANCHOR,
        ),
        (Answer::Yes, Tri::No) => Verdict::no(profile_cert("liminf p", pr, false), SPACE_ANCHOR),
        (Answer::Yes, Tri::Unknown) => Verdict::unknown(
            Some(profile_cert("liminf p", pr, false)),
            SPACE_ANCHOR,
            "cannot tell whether liminf p exceeds 1",
        ),
        (Answer::Unknown, _) => Verdict::unknown(Some(sup()), SPACE_ANCHOR, "cannot tell whether limsup p is finite"),
    };
    let (contains_linf_copy, linf) = match pr.bounded_above {
        Tri::No => (
            Verdict::yes(sup(), "Prop 1.4"),
            linf_witness(p, witness_count).ok(),
        ),
        Tri::Yes => (Verdict::no(sup(), SPACE_ANCHOR), None),
        Tri::Unknown => (
            Verdict::unknown(Some(sup()), "Prop 1.4", "cannot tell whether p is bounded"),
            None,
        ),
    };
    SpaceProfile {
        separable,
        reflexive,
        contains_linf_copy,
        linf_witness: linf,
    }
}

/// `ℓ_{p_n} = ℓ_{q_n}`, via `Σ α^{p_n q_n / |p_n - q_n|} < ∞`.
pub fn spaces_equal(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    exists_alpha_with(&ExponentSequence::nakano_exponent(p.clone(), q.clone()), opts).with_citation("Prop 1.2")
}

/// `ℓ_{p_n} ⊂ ℓ_{q_n}`.
pub fn inclusion_holds(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    inclusion_from(p, q, opts, None)
}

fn inclusion_from(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions, equal: Option<&Verdict>) -> Verdict {
    let v = one_in_lrn_with(p, q, opts);
    match v.answer {
        Answer::Yes => v,
        Answer::No => {
            // The divergence family has r_n < inf, i.e. q_n < p_n there, and
            // r_n is the Nakano exponent: the spaces differ on that family
            // while the reverse inclusion holds, so this one cannot.
            let cert = v.certificate.expect("No verdicts carry a certificate");
            let mut parts = Vec::new();
            if let Evidence::DivergenceByTerms {
                family,
                bound: crate::verdict::TermBound::BoundedExponent { max_exponent },
                ..
            } = &cert.evidence
            {
                parts.push(Certificate::new(
                    Evidence::ReverseGap {
                        family: family.clone(),
                        delta: 1.0 / max_exponent,
                    },
                    format!("q_n <= p_n - {} on the family", 1.0 / max_exponent),
                ));
            }
            parts.push(Certificate::new(
                cert.evidence,
                format!(
                    "{}; there q_n < p_n and the restricted spaces differ, so ℓ_p ⊄ ℓ_q",
                    cert.statement
                ),
            ));
            Verdict::no(composite(parts), "Prop 1.2")
        }
        Answer::Unknown => {
            let eq = match equal {
                Some(e) => e.clone(),
                None => spaces_equal(p, q, opts),
            };
            if eq.is_yes() {
                Verdict::yes(eq.certificate.expect("Yes verdicts carry a certificate"), "Prop 1.2")
            } else {
                Verdict {
                    reason: Some(format!(
                        "membership of 1 in ℓ_r undecided: {}",
                        v.reason.clone().unwrap_or_default()
                    )),
                    ..v
                }
            }
        }
    }
}

fn gap_cert(gap: &GapVerdict) -> Certificate {
    let statement = match gap {
        GapVerdict::Positive { epsilon, onset } => format!("|p_n - q_n| >= {epsilon} for n >= {onset}"),
        GapVerdict::Zero { class } => format!("|p_n - q_n| -> 0 on {class}"),
        GapVerdict::Unknown { reason } => reason.clone(),
    };
    Certificate::new(Evidence::Gap { gap: gap.clone() }, statement)
}

struct Singularity {
    verdict: Verdict,
    gap: Option<GapVerdict>,
}

fn singularity(p: &ExponentSequence, q: &ExponentSequence, pr_p: &AsymptoticProfile, pr_q: &AsymptoticProfile, equal: &Verdict) -> Singularity {
    let sup_p = || profile_cert("limsup p", pr_p, true);
    let mut gap = None;
    let verdict = match pr_p.limsup_finite() {
        Tri::No => Verdict::no(sup_p(), "Thm 2.3"),
        Tri::Unknown => Verdict::unknown(Some(sup_p()), "Thm 2.3", "cannot tell whether limsup p is finite"),
        Tri::Yes => {
            let g = liminf_abs_gap(p, q);
            let branch = match pr_q.limsup_finite() {
                Tri::Yes => Some("Thm 2.1"),
                Tri::No => Some("Thm 2.2"),
                Tri::Unknown => None,
            };
            let cert = composite(vec![sup_p(), profile_cert("limsup q", pr_q, true), gap_cert(&g)]);
            let v = match (&g, branch) {
                (GapVerdict::Positive { .. }, Some(c)) => Verdict::yes(cert, c),
                (GapVerdict::Zero { .. }, Some(c)) => Verdict::no(cert, c),
                (GapVerdict::Unknown { reason }, Some(c)) => {
                    Verdict::unknown(Some(cert), c, format!("liminf |p_n - q_n| undecided: {reason}"))
                }
                (_, None) => Verdict::unknown(
                    Some(cert),
                    "Thm 2.1",
                    "cannot tell whether limsup q is finite (Thm 2.1 or Thm 2.2)",
                ),
            };
            gap = Some(g);
            v
        }
    };
    let verdict = if verdict.answer == Answer::Unknown && equal.is_yes() {
        Verdict::no(
            equal.certificate.clone().expect("Yes verdicts carry a certificate"),
            "Prop 1.2",
        )
    } else {
        verdict
    };
    Singularity { verdict, gap }
}

/// Strict singularity of the inclusion (Unknown unless the inclusion holds).
pub fn strictly_singular(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    let equal = spaces_equal(p, q, opts);
    if !inclusion_from(p, q, opts, Some(&equal)).is_yes() {
        return Verdict::not_applicable();
    }
    singularity(p, q, &profile(p), &profile(q), &equal).verdict
}

fn weak_compactness(pr_q: &AsymptoticProfile) -> Verdict {
    let cert = composite(vec![
        profile_cert("liminf q", pr_q, false),
        profile_cert("limsup q", pr_q, true),
    ]);
    match (liminf_above_one(pr_q), pr_q.limsup_finite()) {
        (Tri::Yes, Tri::Yes) => Verdict::yes(cert, "Prop 2.5"),
        (Tri::No, _) | (_, Tri::No) => Verdict::no(cert, "Prop 2.5"),
        _ => Verdict::unknown(Some(cert), "Prop 2.5", "cannot compare liminf q with 1 or decide limsup q < inf"),
    }
}

pub fn weakly_compact(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> Verdict {
    if !inclusion_holds(p, q, opts).is_yes() {
        return Verdict::not_applicable();
    }
    weak_compactness(&profile(q))
}

fn canonical_basis() -> Verdict {
    Verdict::no(
        Certificate::new(
            Evidence::CanonicalBasis,
            "the canonical unit sequence (e_n) is normalized in every space and has no norm-convergent subsequence",
        ),
        "§2-remark",
    )
}

/// `(compact, L-weakly compact, M-weakly compact)`.
pub fn compactness_suite(p: &ExponentSequence, q: &ExponentSequence, opts: &SeriesOptions) -> (Verdict, Verdict, Verdict) {
    if !inclusion_holds(p, q, opts).is_yes() {
        return (Verdict::not_applicable(), Verdict::not_applicable(), Verdict::not_applicable());
    }
    (canonical_basis(), canonical_basis(), canonical_basis())
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witnesses {
    pub equality: Option<WitnessSubsequence>,
    pub linf: Option<WitnessSubsequence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub inclusion_holds: Verdict,
    pub spaces_equal: Verdict,
    pub strictly_singular: Verdict,
    pub weakly_compact: Verdict,
    pub compact: Verdict,
    pub l_weakly_compact: Verdict,
    pub m_weakly_compact: Verdict,
    pub witnesses: Witnesses,
}

impl InclusionReport {
    /// `(label, verdict)` in display order.
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 7] {
        [
            ("Inclusion", &self.inclusion_holds),
            ("Equal", &self.spaces_equal),
            ("SS", &self.strictly_singular),
            ("Weakly compact", &self.weakly_compact),
            ("Compact", &self.compact),
            ("L-weakly compact", &self.l_weakly_compact),
            ("M-weakly compact", &self.m_weakly_compact),
        ]
    }

    fn operator_verdicts(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("SS", &self.strictly_singular),
            ("Weakly compact", &self.weakly_compact),
            ("Compact", &self.compact),
            ("L-weakly compact", &self.l_weakly_compact),
            ("M-weakly compact", &self.m_weakly_compact),
        ]
    }
}

pub fn full_report(p: &ExponentSequence, q: &ExponentSequence) -> Result<InclusionReport, InternalInconsistency> {
    full_report_with(p, q, &ReportOptions::default())
}

pub fn full_report_with(p: &ExponentSequence, q: &ExponentSequence, opts: &ReportOptions) -> Result<InclusionReport, InternalInconsistency> {
    let equal = spaces_equal(p, q, &opts.series);
    let inclusion = inclusion_from(p, q, &opts.series, Some(&equal));
    let mut witnesses = Witnesses::default();
    let report = if inclusion.is_yes() {
        let pr_p = profile(p);
        let pr_q = profile(q);
        let ss = singularity(p, q, &pr_p, &pr_q, &equal);
        if ss.verdict.is_no() {
            let witness_err = |e: WitnessError| InternalInconsistency(format!("witness construction failed: {e}"));
            if matches!(ss.gap, Some(GapVerdict::Zero { .. })) {
                witnesses.equality = Some(equality_witness(p, q, opts.witness_count, opts.gap_bound).map_err(witness_err)?);
            }
            if pr_p.bounded_above == Tri::No {
                witnesses.linf = Some(linf_witness(p, opts.witness_count).map_err(witness_err)?);
            }
        }
        let (compact, lw, mw) = (canonical_basis(), canonical_basis(), canonical_basis());
        InclusionReport {
            inclusion_holds: inclusion,
            spaces_equal: equal,
            strictly_singular: ss.verdict,
            weakly_compact: weak_compactness(&pr_q),
            compact,
            l_weakly_compact: lw,
            m_weakly_compact: mw,
            witnesses,
        }
    } else {
        InclusionReport {
            inclusion_holds: inclusion,
            spaces_equal: equal,
            strictly_singular: Verdict::not_applicable(),
            weakly_compact: Verdict::not_applicable(),
            compact: Verdict::not_applicable(),
            l_weakly_compact: Verdict::not_applicable(),
            m_weakly_compact: Verdict::not_applicable(),
            witnesses,
        }
    };
    validate(&report, p, q)?;
    Ok(report)
}

fn fail<T>(msg: impl Into<String>) -> Result<T, InternalInconsistency> {
    Err(InternalInconsistency(msg.into()))
}

/// Re-derive every report invariant; an error means the classifier is wrong.
pub fn validate(report: &InclusionReport, p: &ExponentSequence, q: &ExponentSequence) -> Result<(), InternalInconsistency> {
    for (label, v) in report.verdicts() {
        if v.answer != Answer::Unknown {
            if v.certificate.is_none() {
                return fail(format!("{label}: {} without a certificate", v.answer));
            }
            if !ANCHORS.contains(&v.citation.as_str()) {
                return fail(format!("{label}: citation {:?} outside the anchor set", v.citation));
            }
        }
    }
    let (incl, eq, ss) = (&report.inclusion_holds, &report.spaces_equal, &report.strictly_singular);
    if eq.is_yes() && !ss.is_no() {
        return fail(format!("equal spaces but SS is {}", ss.answer));
    }
    if ss.is_yes() && eq.is_yes() {
        return fail("SS together with equal spaces");
    }
    if eq.is_yes() && !incl.is_yes() {
        return fail(format!("equal spaces but inclusion is {}", incl.answer));
    }
    if !incl.is_yes() {
        for (label, v) in report.operator_verdicts() {
            if v.answer != Answer::Unknown || v.citation != INCLUSION_NOT_ESTABLISHED {
                return fail(format!("{label} decided although the inclusion is not established"));
            }
        }
        return Ok(());
    }
    if ss.is_yes() {
        let Some(Certificate {
            evidence: Evidence::Composite { parts },
            ..
        }) = &ss.certificate
        else {
            return fail("SS Yes without its composite certificate");
        };
        let bounded_p = parts.iter().any(|c| {
            matches!(&c.evidence, Evidence::Profile { quantity, interval } if quantity == "limsup p" && interval.hi < f64::INFINITY)
        });
        let positive_gap = parts
            .iter()
            .any(|c| matches!(&c.evidence, Evidence::Gap { gap: GapVerdict::Positive { epsilon, .. } } if *epsilon > 0.0));
        if !(bounded_p && positive_gap) {
            return fail("SS Yes not backed by limsup p < inf and a positive gap");
        }
        // p_n > q_n infinitely often with a positive gap would contradict the inclusion
        let r = ExponentSequence::rn_of(p.clone(), q.clone());
        for k in [0u32, 16, 32, 48] {
            if let Some(c) = classes(&r, 1u64 << k).iter().find(|c| c.asym.finite && c.asym.tail.hi < f64::INFINITY) {
                return fail(format!(
                    "q_n < p_n with a certified gap on {} while the inclusion holds",
                    c.region.describe()
                ));
            }
        }
    }
    if report.weakly_compact.is_yes() && !space_profile(q).reflexive.is_yes() {
        return fail("weakly compact inclusion into a target not certified reflexive");
    }
    for (label, v) in [
        ("Compact", &report.compact),
        ("L-weakly compact", &report.l_weakly_compact),
        ("M-weakly compact", &report.m_weakly_compact),
    ] {
        if !v.is_no() {
            return fail(format!("{label} must be No for an inclusion that holds"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = ExponentSequence;

    fn cst(c: f64) -> E {
        E::constant(c).unwrap()
    }

    fn drift() -> E {
        E::drift(1.0, 1.0, 1.0).unwrap()
    }

    fn n() -> E {
        E::linear(1.0, 0.0).unwrap()
    }

    fn example3_q() -> E {
        E::shift(2.0, E::recip(E::blocks())).unwrap()
    }

    fn opts() -> SeriesOptions {
        SeriesOptions { probe_horizon: 10_000 }
    }

    #[test]
    fn space_profiles() {
        let s = space_profile(&drift());
        assert!(s.separable.is_yes());
        assert!(s.reflexive.is_no());
        assert!(s.contains_linf_copy.is_no());
        let s = space_profile(&E::blocks());
        assert!(s.separable.is_no());
        assert!(s.contains_linf_copy.is_yes());
        assert_eq!(s.linf_witness.unwrap().indices, [1, 2, 6, 33, 289]);
        let s = space_profile(&cst(2.0));
        assert!(s.separable.is_yes() && s.reflexive.is_yes());
    }

    #[test]
    fn equality_examples() {
        assert!(spaces_equal(&drift(), &cst(1.0), &opts()).is_yes());
        assert!(spaces_equal(&cst(2.0), &cst(2.0), &opts()).is_yes());
        assert!(spaces_equal(&cst(2.0), &example3_q(), &opts()).is_no());
        assert_eq!(spaces_equal(&cst(2.0), &example3_q(), &opts()).citation, "Prop 1.2");
    }

    #[test]
    fn inclusion_examples() {
        assert!(inclusion_holds(&drift(), &n(), &opts()).is_yes());
        assert!(inclusion_holds(&cst(2.0), &cst(2.0), &opts()).is_yes());
        assert!(inclusion_holds(&cst(3.0), &cst(2.0), &opts()).is_no());
    }

    #[test]
    fn reverse_gap_on_half_the_indices_is_enough() {
        // q < p on the odd indices only
        let q = E::merge(crate::exponents::IndexSet::Odds, cst(2.0), cst(4.0)).unwrap();
        assert!(inclusion_holds(&cst(3.0), &q, &opts()).is_no());
        // q = n, p = 2n: q < p everywhere but the spaces coincide
        let v = inclusion_holds(&E::linear(2.0, 0.0).unwrap(), &n(), &opts());
        assert_ne!(v.answer, Answer::No);
    }

    #[test]
    fn paper_examples() {
        let r = full_report(&drift(), &n()).unwrap();
        assert!(r.inclusion_holds.is_yes());
        assert!(r.spaces_equal.is_no());
        assert!(r.strictly_singular.is_yes());
        assert_eq!(r.strictly_singular.citation, "Thm 2.2");
        assert!(r.weakly_compact.is_no());
        assert!(r.compact.is_no());

        let r = full_report(&E::blocks(), &E::infinity()).unwrap();
        assert!(r.spaces_equal.is_no());
        assert!(r.strictly_singular.is_no());
        assert_eq!(r.strictly_singular.citation, "Thm 2.3");
        assert!(r.witnesses.linf.is_some());

        let r = full_report(&cst(2.0), &example3_q()).unwrap();
        assert!(r.inclusion_holds.is_yes());
        assert!(r.spaces_equal.is_no());
        assert!(r.strictly_singular.is_no());
        assert_eq!(r.strictly_singular.citation, "Thm 2.1");
        let w = r.witnesses.equality.unwrap();
        assert_eq!(w.indices, [1, 2, 6, 33, 289]);

        let r = full_report(&cst(2.0), &cst(2.0)).unwrap();
        assert!(r.spaces_equal.is_yes());
        assert!(r.strictly_singular.is_no());
        assert!(r.weakly_compact.is_yes());
    }

    #[test]
    fn gating_when_inclusion_fails() {
        let r = full_report(&cst(3.0), &cst(2.0)).unwrap();
        assert!(r.inclusion_holds.is_no());
        for (_, v) in r.operator_verdicts() {
            assert_eq!(v.answer, Answer::Unknown);
            assert_eq!(v.citation, INCLUSION_NOT_ESTABLISHED);
        }
    }

    #[test]
    fn weak_compactness_examples() {
        assert!(weakly_compact(&cst(2.0), &cst(2.0), &opts()).is_yes());
        assert!(weakly_compact(&drift(), &n(), &opts()).is_no());
        assert!(weakly_compact(&cst(1.0), &cst(1.0), &opts()).is_no());
        let (c, l, m) = compactness_suite(&drift(), &n(), &opts());
        assert!(c.is_no() && l.is_no() && m.is_no());
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let (p, q) = (cst(2.0), cst(2.0));
        let mut r = full_report(&p, &q).unwrap();
        r.strictly_singular = r.spaces_equal.clone();
        assert!(validate(&r, &p, &q).is_err());
        let mut r = full_report(&p, &q).unwrap();
        r.compact.citation = "Lemma 9".into();
        assert!(validate(&r, &p, &q).is_err());
    }

    #[test]
    fn equality_is_symmetric_and_reflexive() {
        let seqs = [cst(2.0), drift(), E::blocks(), n(), example3_q(), E::infinity()];
        for p in &seqs {
            assert!(spaces_equal(p, p, &opts()).is_yes(), "{p:?}");
            for q in &seqs {
                assert_eq!(spaces_equal(p, q, &opts()).answer, spaces_equal(q, p, &opts()).answer);
            }
        }
    }
}
