//! Skolem-closure membership on sample sets, the combinators `θ` and `ρ`,
//! the Lemma-Z style profile functions, certification of
//! integer-valuedness, and the verification suites.

mod certify;
mod lemz;
pub mod suites;

pub use certify::{certify_int_valued, BranchNode, CertOutcome, Certificate, CertifyMode, NodeStatus};
pub use lemz::{construct_lemz, lemz_grid, verify_lemz, LemZ, LemZBranch, LemZCheck};

use serde::Serialize;
use serde_json::json;

use crate::domains::{dom_contains, dom_ideal_member, dom_value_ideal, Domain, ValueIdeal};
use crate::error::{Error, Result};
use crate::ratfunc::{rf_compose, rf_eval, EvalResult, KPoly, RatFunc};
use crate::valgroup::{GroupDescriptor, Valuation};
use crate::valued_field::ValuedElement;

/// What a sample set stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// The set E itself.
    FiniteExact,
    /// Finitely many points of the valuation ring.
    SampleOfV,
    /// Finitely many points of the field.
    SampleOfK,
}

#[derive(Clone, Debug)]
pub struct SampleSet {
    pub points: Vec<ValuedElement>,
    pub label: String,
    pub kind: SampleKind,
}

impl SampleSet {
    pub fn new(label: &str, kind: SampleKind, points: Vec<ValuedElement>) -> SampleSet {
        let mut uniq: Vec<ValuedElement> = Vec::with_capacity(points.len());
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        SampleSet {
            points: uniq,
            label: label.to_string(),
            kind,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkVerdict {
    Member,
    NotMember,
    /// Every sampled point passed, but the set is only a sample.
    Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointResult {
    pub point: String,
    pub value_ideal: String,
    pub psi_valuation: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkReport {
    pub member: SkVerdict,
    pub per_point: Vec<PointResult>,
    /// Indices of points where ψ has a pole.
    pub poles: Vec<usize>,
}

impl SkReport {
    pub fn all_pass(&self) -> bool {
        self.per_point.iter().all(|p| p.pass)
    }
}

fn describe_ideal(ideal: &ValueIdeal) -> String {
    match ideal {
        ValueIdeal::ValuationIdeal(Valuation::Infinity) => "(0)".into(),
        ValueIdeal::ValuationIdeal(Valuation::Finite(g)) => {
            format!("{{v >= {}}}", crate::valgroup::fmt_q(g))
        }
        ValueIdeal::PvdIdeal(gens) => format!(
            "({})D",
            gens.iter().map(|g| g.to_expr()).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Checks `ψ(a) ∈ I(a)` at every point of `E`.
pub fn sk_member(psi: &RatFunc, gens: &[RatFunc], e: &SampleSet, d: &Domain) -> Result<SkReport> {
    let mut per_point = Vec::with_capacity(e.points.len());
    let mut poles = Vec::new();
    for (idx, a) in e.points.iter().enumerate() {
        let ideal = dom_value_ideal(d, gens, a)?;
        let (pass, psi_val) = match rf_eval(psi, a) {
            EvalResult::Pole => {
                poles.push(idx);
                (false, "POLE".to_string())
            }
            EvalResult::Value(y) => {
                let pass = match &ideal {
                    ValueIdeal::ValuationIdeal(g) => dom_contains(d, &y) && y.valuation() >= *g,
                    ValueIdeal::PvdIdeal(values) => {
                        dom_contains(d, &y) && dom_ideal_member(d, values, &y)?.is_member()
                    }
                };
                (pass, y.valuation().to_string())
            }
        };
        per_point.push(PointResult {
            point: a.to_expr(),
            value_ideal: describe_ideal(&ideal),
            psi_valuation: psi_val,
            pass,
        });
    }
    let all = per_point.iter().all(|p| p.pass);
    let member = match (all, e.kind) {
        (false, _) => SkVerdict::NotMember,
        (true, SampleKind::FiniteExact) => SkVerdict::Member,
        (true, _) => SkVerdict::Evidence,
    };
    Ok(SkReport {
        member,
        per_point,
        poles,
    })
}

/// `θ(x) = t(1+x⁴)/((1+tx²)(t+x²))`, which sends every point of `K` into
/// `D`: into `m` at units and into `1 + m` elsewhere.
pub fn construct_theta(d: &Domain) -> Result<RatFunc> {
    let kv = d.kv();
    if *kv.group() != GroupDescriptor::Integers {
        return Err(Error::MNotPrincipal);
    }
    let t = kv.t();
    let (z, one) = (kv.zero(), kv.one());
    let num = KPoly::new(kv, vec![t.clone(), z.clone(), z.clone(), z.clone(), t.clone()]);
    let d1 = KPoly::new(kv, vec![one.clone(), z.clone(), t.clone()]);
    let d2 = KPoly::new(kv, vec![t, z, one]);
    crate::ratfunc::rf_normalize(num, d1.mul(&d2))
}

/// `ρ = φ₁ + θ(φ₁/φ₂)·φ₂`, with `v(ρ(a)) = min(v(φ₁(a)), v(φ₂(a)))`.
pub fn construct_rho(phi1: &RatFunc, phi2: &RatFunc, d: &Domain) -> Result<RatFunc> {
    if phi2.is_zero() {
        return Err(Error::ZeroSecond);
    }
    let theta = construct_theta(d)?;
    let ratio = phi1.div(phi2)?;
    let inner = rf_compose(&theta, &ratio)?;
    phi1.add(&inner.mul(phi2)?)
}

/// JSON summary of a sample set, for reports.
pub fn sample_summary(e: &SampleSet) -> serde_json::Value {
    json!({"label": e.label, "kind": e.kind, "size": e.points.len()})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_field::Field;
    use crate::valgroup::qi;
    use crate::valued_field::ValuedField;

    fn scene_a() -> Domain {
        Domain::valuation(&ValuedField::new(Field::prime(3).unwrap(), GroupDescriptor::Integers).unwrap())
    }

    #[test]
    fn theta_examples() {
        let d = scene_a();
        let kv = d.kv().clone();
        let th = construct_theta(&d).unwrap();
        let v1 = rf_eval(&th, &kv.one());
        assert_eq!(v1.value().unwrap().valuation(), Valuation::Finite(qi(1)));
        let t = kv.t();
        assert_eq!(
            rf_eval(&th, &t).value().unwrap().residue().unwrap(),
            kv.field().one()
        );
        let inv = t.checked_inv().unwrap();
        assert_eq!(
            rf_eval(&th, &inv).value().unwrap().residue().unwrap(),
            kv.field().one()
        );
        let b = Domain::valuation(
            &ValuedField::new(
                Field::prime(3).unwrap(),
                GroupDescriptor::localized(&[2]).unwrap(),
            )
            .unwrap(),
        );
        assert_eq!(construct_theta(&b), Err(Error::MNotPrincipal));
    }

    #[test]
    fn rho_examples() {
        let d = scene_a();
        let kv = d.kv().clone();
        let t = kv.t();
        let x = RatFunc::x(&kv);
        let tc = RatFunc::constant(t.clone());
        let rho = construct_rho(&x, &tc, &d).unwrap();
        let a = t.pow(3).unwrap();
        assert_eq!(
            rf_eval(&rho, &a).value().unwrap().valuation(),
            Valuation::Finite(qi(1))
        );
        let one = RatFunc::constant(kv.one());
        let rho1 = construct_rho(&one, &one, &d).unwrap();
        assert_eq!(
            rf_eval(&rho1, &t).value().unwrap().valuation(),
            Valuation::Finite(qi(0))
        );
        let xt = x.add(&tc).unwrap();
        let rho2 = construct_rho(&x, &xt, &d).unwrap();
        assert_eq!(
            rf_eval(&rho2, &kv.one()).value().unwrap().valuation(),
            Valuation::Finite(qi(0))
        );
        let zero = RatFunc::constant(kv.zero());
        assert_eq!(construct_rho(&x, &zero, &d), Err(Error::ZeroSecond));
    }

    #[test]
    fn sk_member_trivial_decision() {
        let d = scene_a();
        let kv = d.kv().clone();
        let e = SampleSet::new("zero", SampleKind::FiniteExact, vec![kv.zero()]);
        let r = sk_member(&RatFunc::constant(kv.one()), &[RatFunc::x(&kv)], &e, &d).unwrap();
        assert_eq!(r.member, SkVerdict::NotMember);
        let r = sk_member(&RatFunc::x(&kv), &[RatFunc::x(&kv)], &e, &d).unwrap();
        assert_eq!(r.member, SkVerdict::Member);
    }

    #[test]
    fn sk_member_pole_policy() {
        let d = scene_a();
        let kv = d.kv().clone();
        let inv = RatFunc::constant(kv.one()).div(&RatFunc::x(&kv)).unwrap();
        let e = SampleSet::new("zero", SampleKind::FiniteExact, vec![kv.zero()]);
        let r = sk_member(&inv, &[RatFunc::constant(kv.one())], &e, &d).unwrap();
        assert_eq!(r.member, SkVerdict::NotMember);
        assert_eq!(r.poles, vec![0]);
        assert_eq!(
            sk_member(&RatFunc::x(&kv), &[inv], &e, &d),
            Err(Error::PoleAtSample(vec![0]))
        );
    }
}
