//! Verification suites for the two worked non-membership examples:
//! `tx` against `(x², t²)` over a non-discrete valuation domain, and
//! `x` against `(x², m)` over a pseudovaluation domain.

use rand::Rng;
use serde_json::{json, Value};

use super::{sample_summary, sk_member, SampleKind, SampleSet, SkReport, SkVerdict};
use crate::domains::{
    dom_ideal_member, dom_value_ideal, pvd_m_generators, Domain, DomainKind, Membership, ValueIdeal,
};
use crate::error::{Error, Result};
use crate::newton::{nv_forced_profile_check, ProfileVerdict};
use crate::ratfunc::{KPoly, RatFunc};
use crate::report::{Check, CheckStatus};
use crate::valgroup::{fmt_q, q, qi, GroupDescriptor, Valuation, Q};
use crate::valued_field::{SampleConstraints, ValuationConstraint, ValuedElement, ValuedField};

/// Number of positive and negative probes for the generators of `m`.
pub const M_POSITIVE_PROBES: usize = 200;
pub const M_NEGATIVE_PROBES: usize = 50;

fn residue_from_base<R: Rng>(d: &Domain, rng: &mut R) -> ValuedElement {
    let kv = d.kv();
    let f = kv.field();
    let n = loop {
        let n = rng.gen_range(-6i64..=6);
        if n != 0 && !f.from_int(n).is_zero() {
            break n;
        }
    };
    match f.size() {
        Some(_) => kv.from_int(n),
        None => kv.constant(f.from_q(&q(n, rng.gen_range(1..=4)))),
    }
}

/// `n` pseudorandom points of the domain with valuations in `[0, 3]`.
///
/// For a pseudovaluation domain the units are drawn with residues in the
/// subfield.
pub fn sample_domain<R: Rng>(d: &Domain, n: usize, rng: &mut R) -> Result<SampleSet> {
    let kv = d.kv();
    let c = SampleConstraints::valuation(ValuationConstraint::closed(qi(0), qi(3)));
    let pos = SampleConstraints::valuation(ValuationConstraint::closed(qi(1), qi(3)));
    let mut points: Vec<ValuedElement> = Vec::with_capacity(n);
    // distinct points; the attempt cap only matters for tiny sample spaces
    let mut attempts = 0;
    while points.len() < n && attempts < 50 * n {
        attempts += 1;
        let mut a = kv.sample(rng, &c)?;
        if d.is_pvd() && a.val_q() == Some(qi(0)) {
            a = residue_from_base(d, rng).add(&kv.sample(rng, &pos)?);
        }
        if !points.contains(&a) {
            points.push(a);
        }
    }
    Ok(SampleSet::new("samples", SampleKind::SampleOfV, points))
}

fn sk_check(name: &str, r: &SkReport, e: &SampleSet) -> Check {
    let status = match r.member {
        SkVerdict::Member => CheckStatus::Pass,
        SkVerdict::Evidence => CheckStatus::Evidence,
        SkVerdict::NotMember => CheckStatus::Fail,
    };
    let failures: Vec<&str> = r
        .per_point
        .iter()
        .filter(|p| !p.pass)
        .map(|p| p.point.as_str())
        .take(5)
        .collect();
    Check::new(
        name,
        status,
        json!({
            "samples": sample_summary(e),
            "passed": r.per_point.iter().filter(|p| p.pass).count(),
            "failures": failures,
            "poles": r.poles,
        }),
    )
}

/// Value of the ideal `(x², t²)` at a point of valuation `γ`: `min(2γ, 2)`.
fn expected_vx2t2(gamma: &Q) -> Q {
    let two_g = qi(2) * gamma;
    two_g.min(qi(2))
}

/// Checks for `tx` against `(x², t²)` on a valuation domain whose value
/// group is not divisible and whose maximal ideal is not principal.
///
/// `ideal` is the ideal under test; the value-ideal table is always
/// compared with the one of `(x², t²)`.
pub fn suite_vx2t2<R: Rng>(
    d: &Domain,
    ideal: &[RatFunc],
    psi: &RatFunc,
    samples: &SampleSet,
    rng: &mut R,
) -> Result<Vec<Check>> {
    let kv = d.kv();
    let group = kv.group();
    if d.is_pvd() {
        return Err(Error::SceneMismatch("needs a valuation domain".into()));
    }
    if *group == GroupDescriptor::Integers {
        return Err(Error::SceneMismatch("maximal ideal is principal".into()));
    }
    if group.is_divisible() {
        return Err(Error::SceneMismatch("value group is divisible".into()));
    }
    let mut checks = vec![Check::pass_if(
        "hypotheses",
        true,
        json!({"group": group.to_string(), "m_principal": false, "divisible": false}),
    )];

    let mut rows = Vec::new();
    let mut first_mismatch: Option<Q> = None;
    let grid: Vec<Q> = (0..=12).map(|k| q(k, 4)).filter(|g| group.contains(g)).collect();
    for g in &grid {
        let a = kv.sample(
            rng,
            &SampleConstraints::valuation(ValuationConstraint::Exact(g.clone())),
        )?;
        let got = match dom_value_ideal(d, ideal, &a)? {
            ValueIdeal::ValuationIdeal(v) => v,
            ValueIdeal::PvdIdeal(_) => unreachable!(),
        };
        let want = Valuation::Finite(expected_vx2t2(g));
        if got != want && first_mismatch.is_none() {
            first_mismatch = Some(g.clone());
        }
        rows.push(json!({"v": fmt_q(g), "expected": want.to_string(), "actual": got.to_string()}));
    }
    checks.push(Check::pass_if(
        "value-ideal-table",
        first_mismatch.is_none(),
        json!({
            "rows": rows,
            "first_mismatch": first_mismatch.as_ref().map(fmt_q),
        }),
    ));

    let r = sk_member(psi, ideal, samples, d)?;
    checks.push(sk_check("sk-member", &r, samples));

    // In td = φ(d)d² + ψ(d)t² with v(d) < v(t) the last term has valuation
    // above v(td), so v(φ(d)) = v(td) − v(d²) is forced.
    let t = kv.t();
    let beta = qi(1);
    let mut pts: Vec<ValuedElement> = samples
        .points
        .iter()
        .filter(|a| matches!(a.val_q(), Some(v) if v >= qi(0) && v < beta))
        .cloned()
        .collect();
    for g in grid.iter().filter(|g| **g < beta) {
        pts.push(kv.make(g, &kv.field().one())?);
    }
    let mut constraints = Vec::with_capacity(pts.len());
    for a in &pts {
        let v_td = t.mul(a).val_q().expect("nonzero");
        let v_d2 = a.mul(a).val_q().expect("nonzero");
        constraints.push((a.val_q().expect("nonzero"), v_td - v_d2));
    }
    let verdict = nv_forced_profile_check(&constraints, &beta)?;
    let (ok, desc) = match &verdict {
        ProfileVerdict::ContradictionPattern {
            left_slope,
            right_slope_lower_bound,
            envelope,
        } => (
            true,
            json!({
                "pattern": "contradiction",
                "left_slope": left_slope,
                "right_slope_lower_bound": right_slope_lower_bound,
                "envelope": envelope.to_json(),
            }),
        ),
        ProfileVerdict::ConsistentEnvelope(env) => {
            (false, json!({"pattern": "consistent", "envelope": env.to_json()}))
        }
    };
    let mut details = desc;
    details["beta"] = json!(fmt_q(&beta));
    details["constraints"] = json!(constraints.len());
    checks.push(Check::pass_if("forced-profile", ok, details));

    checks.push(Check::new(
        "non-membership",
        CheckStatus::TheoremLevel,
        json!({
            "claim": "tx is not in (x^2, t^2)",
            "hypotheses_met": true,
            "machine_checked": false,
        }),
    ));
    Ok(checks)
}

/// A random element of `D`.
fn random_d_element<R: Rng>(d: &Domain, rng: &mut R) -> Result<ValuedElement> {
    let kv = d.kv();
    let c = SampleConstraints::valuation(ValuationConstraint::closed(qi(0), qi(3)));
    let tail = kv.t().mul(&kv.sample(rng, &c)?);
    if rng.gen_bool(0.2) {
        return Ok(tail);
    }
    Ok(residue_from_base(d, rng).add(&tail))
}

fn verify_member(d: &Domain, gens: &[ValuedElement], c: &ValuedElement) -> Result<bool> {
    Ok(match dom_ideal_member(d, gens, c)? {
        Membership::Member(cert) => cert.verify(d, gens, c),
        Membership::NotMember => false,
    })
}

/// Checks for `x` against `(x², m)` on a pseudovaluation domain, with
/// `basis` a set of units whose residues form a basis of `V/m` over the
/// residue field of `D`.
pub fn suite_pvd_x2m<R: Rng>(
    d: &Domain,
    basis: &[ValuedElement],
    samples: &SampleSet,
    rng: &mut R,
) -> Result<Vec<Check>> {
    let DomainKind::Pvd { subfield } = d.kind() else {
        return Err(Error::SceneMismatch("needs a pseudovaluation domain".into()));
    };
    let kv = d.kv();
    let mut checks = Vec::new();
    let gens = pvd_m_generators(d, basis)?;
    let gen_exprs: Vec<String> = gens.iter().map(|g| g.to_expr()).collect();

    let c = SampleConstraints::valuation(ValuationConstraint::closed(qi(1), qi(4)));
    let mut failures = Vec::new();
    for k in 0..M_POSITIVE_PROBES {
        // alternate D-combinations of the generators and arbitrary points of m
        let target = if k % 2 == 0 {
            let mut acc = kv.zero();
            for g in &gens {
                acc = acc.add(&random_d_element(d, rng)?.mul(g));
            }
            acc
        } else {
            kv.sample(rng, &c)?
        };
        if !verify_member(d, &gens, &target)? {
            failures.push(target.to_expr());
        }
    }
    checks.push(Check::pass_if(
        "m-generators",
        failures.is_empty(),
        json!({
            "generators": gen_exprs,
            "probes": M_POSITIVE_PROBES,
            "failures": failures,
        }),
    ));

    let t_only = [kv.t()];
    let mut wrong = Vec::new();
    for k in 0..M_NEGATIVE_PROBES {
        let (target, against): (ValuedElement, &[ValuedElement]) = if k % 2 == 0 {
            let tail = kv.t().mul(&kv.sample(
                rng,
                &SampleConstraints::valuation(ValuationConstraint::closed(qi(0), qi(2))),
            )?);
            (residue_from_base(d, rng).add(&tail), &gens)
        } else {
            let lead = residue_from_base(d, rng);
            let other = residue_from_base(d, rng).mul(&kv.constant(kv.field().gen()));
            (kv.t().mul(&lead.add(&other)), &t_only)
        };
        if dom_ideal_member(d, against, &target)?.is_member() {
            wrong.push(target.to_expr());
        }
    }
    checks.push(Check::pass_if(
        "m-generators-negative",
        wrong.is_empty(),
        json!({"probes": M_NEGATIVE_PROBES, "false_positives": wrong}),
    ));

    let x = RatFunc::x(kv);
    let x2 = x.mul(&x)?;
    let mut ideal = vec![x2];
    ideal.extend(gens.iter().map(|g| RatFunc::constant(g.clone())));
    let (mut unit_pts, mut m_pts, mut bad) = (0usize, 0usize, Vec::new());
    for a in &samples.points {
        let ValueIdeal::PvdIdeal(values) = dom_value_ideal(d, &ideal, a)? else {
            unreachable!()
        };
        let ok = if a.val_q() == Some(qi(0)) {
            unit_pts += 1;
            verify_member(d, &values, &kv.one())?
        } else {
            m_pts += 1;
            let mut ok = true;
            for v in &values {
                ok &= verify_member(d, &gens, v)?;
            }
            for g in &gens {
                ok &= verify_member(d, &values, g)?;
            }
            ok
        };
        if !ok {
            bad.push(a.to_expr());
        }
    }
    checks.push(Check::pass_if(
        "value-ideals",
        bad.is_empty() && unit_pts > 0 && m_pts > 0,
        json!({
            "unit_points": unit_pts,
            "m_points": m_pts,
            "failures": bad,
        }),
    ));

    let r = sk_member(&x, &ideal, samples, d)?;
    checks.push(sk_check("sk-member", &r, samples));

    let residue_infinite = !kv.field().is_finite();
    checks.push(Check::new(
        "non-membership",
        CheckStatus::TheoremLevel,
        json!({
            "claim": "x is not in (x^2, m)",
            "hypotheses_met": residue_infinite,
            "residue_field_infinite": residue_infinite,
            "subfield": subfield.to_string(),
            "machine_checked": false,
        }),
    ));
    Ok(checks)
}

/// `x²` and `c·t^k` as an ideal-generator list, for scenes and tests.
pub fn x2_and_t_power(kv: &ValuedField, k: i64) -> Result<Vec<RatFunc>> {
    let x = RatFunc::x(kv);
    let tk = kv.t().pow(k)?;
    Ok(vec![x.mul(&x)?, RatFunc::constant(tk)])
}

/// `t·x`.
pub fn tx(kv: &ValuedField) -> RatFunc {
    RatFunc::from_poly(KPoly::new(kv, vec![kv.zero(), kv.t()]))
}

/// Summary of a list of checks: overall pass unless some check failed.
pub fn checks_ok(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != CheckStatus::Fail)
}

pub fn checks_json(checks: &[Check]) -> Value {
    serde_json::to_value(checks).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_field::{gaussian_rationals, Field};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scene_b() -> Domain {
        let kv = ValuedField::new(
            Field::prime(3).unwrap(),
            GroupDescriptor::localized(&[2]).unwrap(),
        )
        .unwrap();
        Domain::valuation(&kv)
    }

    fn scene_c() -> (Domain, Vec<ValuedElement>) {
        let kv = ValuedField::new(gaussian_rationals(), GroupDescriptor::Integers).unwrap();
        let d = Domain::pvd(&kv, &Field::rationals()).unwrap();
        let basis = vec![kv.one(), kv.constant(kv.field().gen())];
        (d, basis)
    }

    #[test]
    fn vx2t2_full_run() {
        let d = scene_b();
        let kv = d.kv().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = sample_domain(&d, 200, &mut rng).unwrap();
        let ideal = x2_and_t_power(&kv, 2).unwrap();
        let checks = suite_vx2t2(&d, &ideal, &tx(&kv), &e, &mut rng).unwrap();
        let status = |n: &str| checks.iter().find(|c| c.name == n).unwrap().status;
        assert_eq!(status("value-ideal-table"), CheckStatus::Pass);
        assert_eq!(status("sk-member"), CheckStatus::Evidence);
        assert_eq!(status("forced-profile"), CheckStatus::Pass);
        assert_eq!(status("non-membership"), CheckStatus::TheoremLevel);
    }

    #[test]
    fn vx2t2_tampered_ideal() {
        let d = scene_b();
        let kv = d.kv().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = sample_domain(&d, 50, &mut rng).unwrap();
        let ideal = x2_and_t_power(&kv, 3).unwrap();
        let checks = suite_vx2t2(&d, &ideal, &tx(&kv), &e, &mut rng).unwrap();
        let table = &checks[1];
        assert_eq!(table.status, CheckStatus::Fail);
        assert_eq!(table.details["first_mismatch"], json!("5/4"));
    }

    #[test]
    fn vx2t2_rejects_integers() {
        let kv = ValuedField::new(Field::prime(3).unwrap(), GroupDescriptor::Integers).unwrap();
        let d = Domain::valuation(&kv);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = SampleSet::new("one", SampleKind::FiniteExact, vec![kv.one()]);
        let ideal = x2_and_t_power(&kv, 2).unwrap();
        assert!(matches!(
            suite_vx2t2(&d, &ideal, &tx(&kv), &e, &mut rng),
            Err(Error::SceneMismatch(_))
        ));
    }

    #[test]
    fn pvd_full_run() {
        let (d, basis) = scene_c();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = sample_domain(&d, 100, &mut rng).unwrap();
        let checks = suite_pvd_x2m(&d, &basis, &e, &mut rng).unwrap();
        for c in &checks {
            assert_ne!(c.status, CheckStatus::Fail, "{}: {}", c.name, c.details);
        }
        let nm = checks.iter().find(|c| c.name == "non-membership").unwrap();
        assert_eq!(nm.details["hypotheses_met"], json!(true));
    }

    #[test]
    fn pvd_value_ideal_examples() {
        let (d, basis) = scene_c();
        let kv = d.kv().clone();
        let gens = pvd_m_generators(&d, &basis).unwrap();
        let x = RatFunc::x(&kv);
        let mut ideal = vec![x.mul(&x).unwrap()];
        ideal.extend(gens.iter().map(|g| RatFunc::constant(g.clone())));
        let a = kv.one().add(&kv.t());
        let ValueIdeal::PvdIdeal(vals) = dom_value_ideal(&d, &ideal, &a).unwrap() else {
            panic!()
        };
        assert!(verify_member(&d, &vals, &kv.one()).unwrap());
        let ti = kv.t().mul(&kv.constant(kv.field().gen()));
        let ValueIdeal::PvdIdeal(vals) = dom_value_ideal(&d, &ideal, &ti).unwrap() else {
            panic!()
        };
        assert!(verify_member(&d, &vals, &ti).unwrap());
        assert!(!verify_member(&d, &vals, &kv.one()).unwrap());
    }
}
