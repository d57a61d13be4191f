//! Valuation domains `V` and pseudovaluation domains `D = π⁻¹(F) ⊂ V`,
//! where `π: V → V/m` and `F` is the prime field of `V/m`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratfunc::{rf_eval, EvalResult, RatFunc};
use crate::residue_field::{fld_linear_solve, Field, FieldElement, LinearSolution};
use crate::valgroup::{GroupDescriptor, Valuation, Q};
use crate::valued_field::{ValuedElement, ValuedField};

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    Valuation,
    /// Elements of `V` whose residue lies in `subfield`.
    Pvd {
        subfield: Field,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    kv: ValuedField,
    kind: DomainKind,
}

impl Domain {
    pub fn valuation(kv: &ValuedField) -> Domain {
        Domain {
            kv: kv.clone(),
            kind: DomainKind::Valuation,
        }
    }

    /// `π⁻¹(F)` for the prime field `F` of the residue field. The residue
    /// field must be a proper extension of `F`, and `m` must be principal
    /// in `V` (value group `ℤ`).
    pub fn pvd(kv: &ValuedField, subfield: &Field) -> Result<Domain> {
        if !subfield.is_base_of(kv.field()) {
            return Err(Error::SubfieldMismatch(format!(
                "{subfield} is not the prime field of {}",
                kv.field()
            )));
        }
        if kv.field().degree() < 2 {
            return Err(Error::SubfieldMismatch(
                "subfield must be a proper subfield of the residue field".into(),
            ));
        }
        if *kv.group() != GroupDescriptor::Integers {
            return Err(Error::MNotPrincipal);
        }
        Ok(Domain {
            kv: kv.clone(),
            kind: DomainKind::Pvd {
                subfield: subfield.clone(),
            },
        })
    }

    pub fn kv(&self) -> &ValuedField {
        &self.kv
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn is_pvd(&self) -> bool {
        matches!(self.kind, DomainKind::Pvd { .. })
    }

    /// Whether a residue lies in the residue field of `D`.
    pub fn residue_in_subfield(&self, r: &FieldElement) -> bool {
        match &self.kind {
            DomainKind::Valuation => true,
            DomainKind::Pvd { .. } => r.in_base(),
        }
    }
}

pub fn dom_contains(d: &Domain, x: &ValuedElement) -> bool {
    match x.valuation() {
        Valuation::Infinity => true,
        Valuation::Finite(v) if v.is_negative() => false,
        Valuation::Finite(v) if v.is_positive() => true,
        Valuation::Finite(_) => d.residue_in_subfield(&x.residue().expect("unit")),
    }
}

/// Coefficients `a_i ∈ D` with `Σ a_i g_i = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct MemberCertificate {
    pub coefficients: Vec<ValuedElement>,
}

impl MemberCertificate {
    /// Independent check of the certificate.
    pub fn verify(&self, d: &Domain, gens: &[ValuedElement], c: &ValuedElement) -> bool {
        if self.coefficients.len() != gens.len() {
            return false;
        }
        if !self.coefficients.iter().all(|a| dom_contains(d, a)) {
            return false;
        }
        let sum = self
            .coefficients
            .iter()
            .zip(gens)
            .fold(d.kv.zero(), |acc, (a, g)| acc.add(&a.mul(g)));
        sum == *c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member(MemberCertificate),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Decides `c ∈ (g_1, …, g_n)D`.
///
/// With `μ = min v(g_i)` attained by `g_min`: every `y` with `v(y) > μ`
/// equals `(y/g_min)·g_min` with `y/g_min ∈ m ⊆ D`, so only the level-`μ`
/// residues matter. There the question is whether the residue of
/// `c/t^μ` lies in the `F`-span of the residues of `g_i/t^μ` with
/// `v(g_i) = μ`, one linear solve.
pub fn dom_ideal_member(d: &Domain, gens: &[ValuedElement], c: &ValuedElement) -> Result<Membership> {
    if !dom_contains(d, c) || !gens.iter().all(|g| dom_contains(d, g)) {
        return Err(Error::NotInDomain);
    }
    let zero_cert = || MemberCertificate {
        coefficients: vec![d.kv.zero(); gens.len()],
    };
    if c.is_zero() {
        return Ok(Membership::Member(zero_cert()));
    }
    let Some((imin, mu)) = gens
        .iter()
        .enumerate()
        .filter_map(|(i, g)| g.val_q().map(|v| (i, v)))
        .min_by(|a, b| a.1.cmp(&b.1))
    else {
        return Ok(Membership::NotMember);
    };
    let vc = c.val_q().unwrap();
    if vc < mu {
        return Ok(Membership::NotMember);
    }
    let mut coeffs = vec![d.kv.zero(); gens.len()];
    let remainder = if vc > mu || !d.is_pvd() {
        c.clone()
    } else {
        let level: Vec<usize> = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.val_q().as_ref() == Some(&mu))
            .map(|(i, _)| i)
            .collect();
        let t_mu = d.kv.t_pow(&mu)?;
        let unit_res = |x: &ValuedElement| -> Result<FieldElement> { x.checked_div(&t_mu)?.residue() };
        let vectors = level
            .iter()
            .map(|i| unit_res(&gens[*i]))
            .collect::<Result<Vec<_>>>()?;
        let target = unit_res(c)?;
        let DomainKind::Pvd { subfield } = &d.kind else {
            unreachable!()
        };
        match fld_linear_solve(&vectors, &target, subfield)? {
            LinearSolution::NoSolution => return Ok(Membership::NotMember),
            LinearSolution::Coefficients(lams) => {
                let mut r = c.clone();
                for (i, lam) in level.iter().zip(lams) {
                    let a = d.kv.constant(d.kv.field().from_q(&lam));
                    r = r.sub(&a.mul(&gens[*i]));
                    coeffs[*i] = a;
                }
                r
            }
        }
    };
    if !remainder.is_zero() {
        let extra = remainder.checked_div(&gens[imin])?;
        coeffs[imin] = coeffs[imin].add(&extra);
    }
    Ok(Membership::Member(MemberCertificate { coefficients: coeffs }))
}

/// The ideal `I(a) = {φ(a) | φ ∈ I}` of the domain.
#[derive(Clone, Debug, PartialEq)]
pub enum ValueIdeal {
    /// `{y : v(y) ≥ γ}`; `Finite(0)` is the unit ideal, `Infinity` the zero ideal.
    ValuationIdeal(Valuation),
    PvdIdeal(Vec<ValuedElement>),
}

pub fn dom_value_ideal(d: &Domain, gens: &[RatFunc], a: &ValuedElement) -> Result<ValueIdeal> {
    let mut values = Vec::with_capacity(gens.len());
    let mut poles = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        match rf_eval(g, a) {
            EvalResult::Pole => poles.push(i),
            EvalResult::Value(v) => values.push(v),
        }
    }
    if !poles.is_empty() {
        return Err(Error::PoleAtSample(poles));
    }
    match d.kind {
        DomainKind::Valuation => Ok(ValueIdeal::ValuationIdeal(
            values
                .iter()
                .map(|v| v.valuation())
                .min()
                .unwrap_or(Valuation::Infinity),
        )),
        DomainKind::Pvd { .. } => {
            if !values.iter().all(|v| dom_contains(d, v)) {
                return Err(Error::NotInDomain);
            }
            Ok(ValueIdeal::PvdIdeal(values))
        }
    }
}

/// Generators `t·t_1, …, t·t_n` of `m` as an ideal of `D`, where the
/// residues of the `t_i` form a basis of `V/m` over `D/m`.
pub fn pvd_m_generators(d: &Domain, basis: &[ValuedElement]) -> Result<Vec<ValuedElement>> {
    let DomainKind::Pvd { subfield } = &d.kind else {
        return Err(Error::SubfieldMismatch("not a pseudovaluation domain".into()));
    };
    if *d.kv.group() != GroupDescriptor::Integers {
        return Err(Error::MNotPrincipal);
    }
    let field = d.kv.field();
    let mut residues = Vec::with_capacity(basis.len());
    for b in basis {
        if b.val_q() != Some(Q::zero()) {
            return Err(Error::NotABasis(format!("{b} is not a unit")));
        }
        residues.push(b.residue()?);
    }
    if residues.len() != field.degree() {
        return Err(Error::NotABasis(format!(
            "{} elements for a degree-{} extension",
            residues.len(),
            field.degree()
        )));
    }
    let mut power = field.one();
    for _ in 0..field.degree() {
        if fld_linear_solve(&residues, &power, subfield)? == LinearSolution::NoSolution {
            return Err(Error::NotABasis("residues do not span".into()));
        }
        power = power.mul(&field.gen());
    }
    let t = d.kv.t();
    Ok(basis.iter().map(|b| t.mul(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_field::{f9, gaussian_rationals};
    use crate::valgroup::qi;

    fn scene_c() -> Domain {
        let kv = ValuedField::new(gaussian_rationals(), GroupDescriptor::Integers).unwrap();
        Domain::pvd(&kv, &Field::rationals()).unwrap()
    }

    fn scene_d() -> Domain {
        let kv = ValuedField::new(f9(), GroupDescriptor::Integers).unwrap();
        Domain::pvd(&kv, &Field::prime(3).unwrap()).unwrap()
    }

    #[test]
    fn containment() {
        let d = scene_c();
        let kv = d.kv().clone();
        let i = kv.constant(kv.field().gen());
        assert!(!dom_contains(&d, &i));
        assert!(dom_contains(&d, &i.mul(&kv.t())));
        assert!(dom_contains(&d, &kv.one()));
        let a = Domain::valuation(
            &ValuedField::new(Field::prime(3).unwrap(), GroupDescriptor::Integers).unwrap(),
        );
        let t = a.kv().t();
        assert!(!dom_contains(&a, &t.checked_inv().unwrap()));
    }

    #[test]
    fn membership_scene_c() {
        let d = scene_c();
        let kv = d.kv().clone();
        let t = kv.t();
        let i = kv.constant(kv.field().gen());
        let gens = vec![t.clone(), t.mul(&i)];
        let c = t.mul(&kv.from_int(2).add(&kv.from_int(3).mul(&i)));
        match dom_ideal_member(&d, &gens, &c).unwrap() {
            Membership::Member(cert) => {
                assert_eq!(cert.coefficients, vec![kv.from_int(2), kv.from_int(3)]);
                assert!(cert.verify(&d, &gens, &c));
            }
            m => panic!("{m:?}"),
        }
        assert_eq!(
            dom_ideal_member(&d, std::slice::from_ref(&t), &t.mul(&i)).unwrap(),
            Membership::NotMember
        );
    }

    #[test]
    fn membership_scene_d() {
        let d = scene_d();
        let kv = d.kv().clone();
        let t = kv.t();
        let w = kv.constant(kv.field().gen());
        let gens = vec![t.clone(), t.mul(&w)];
        let c = t.mul(&w.mul(&w));
        match dom_ideal_member(&d, &gens, &c).unwrap() {
            Membership::Member(cert) => {
                assert_eq!(cert.coefficients, vec![kv.one(), kv.one()]);
                assert!(cert.verify(&d, &gens, &c));
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn membership_higher_level_absorbed() {
        let d = scene_c();
        let kv = d.kv().clone();
        let t = kv.t();
        let i = kv.constant(kv.field().gen());
        let c = t.mul(&t).mul(&i);
        let gens = vec![t.clone()];
        let m = dom_ideal_member(&d, &gens, &c).unwrap();
        let Membership::Member(cert) = m else { panic!() };
        assert!(cert.verify(&d, &gens, &c));
        assert_eq!(
            dom_ideal_member(&d, &[t.mul(&t)], &t).unwrap(),
            Membership::NotMember
        );
        assert_eq!(
            dom_ideal_member(&d, std::slice::from_ref(&i), &t),
            Err(Error::NotInDomain)
        );
    }

    #[test]
    fn value_ideals() {
        let kv = ValuedField::new(
            Field::prime(3).unwrap(),
            GroupDescriptor::localized(&[2]).unwrap(),
        )
        .unwrap();
        let d = Domain::valuation(&kv);
        let x2 = RatFunc::x(&kv).pow(2).unwrap();
        let t2 = RatFunc::constant(kv.t().pow(2).unwrap());
        let gens = vec![x2, t2];
        let a = kv.t_pow(&crate::valgroup::q(1, 2)).unwrap();
        assert_eq!(
            dom_value_ideal(&d, &gens, &a).unwrap(),
            ValueIdeal::ValuationIdeal(Valuation::Finite(qi(1)))
        );
        let b = kv.t_pow(&qi(2)).unwrap();
        assert_eq!(
            dom_value_ideal(&d, &gens, &b).unwrap(),
            ValueIdeal::ValuationIdeal(Valuation::Finite(qi(2)))
        );
        let one = vec![RatFunc::constant(kv.one())];
        assert_eq!(
            dom_value_ideal(&d, &one, &b).unwrap(),
            ValueIdeal::ValuationIdeal(Valuation::Finite(qi(0)))
        );
        let inv = vec![RatFunc::constant(kv.one()).div(&RatFunc::x(&kv)).unwrap()];
        assert_eq!(
            dom_value_ideal(&d, &inv, &kv.zero()),
            Err(Error::PoleAtSample(vec![0]))
        );
    }

    #[test]
    fn m_generators() {
        let d = scene_c();
        let kv = d.kv().clone();
        let t = kv.t();
        let i = kv.constant(kv.field().gen());
        let gens = pvd_m_generators(&d, &[kv.one(), i.clone()]).unwrap();
        assert_eq!(gens, vec![t.clone(), t.mul(&i)]);
        assert!(matches!(
            pvd_m_generators(&d, &[kv.one(), kv.from_int(2)]),
            Err(Error::NotABasis(_))
        ));
        let dd = scene_d();
        let kd = dd.kv().clone();
        let w = kd.constant(kd.field().gen());
        assert_eq!(
            pvd_m_generators(&dd, &[kd.one(), w.clone()]).unwrap(),
            vec![kd.t(), kd.t().mul(&w)]
        );
    }

    #[test]
    fn pvd_requires_proper_subfield_and_principal_m() {
        let kv = ValuedField::new(Field::prime(3).unwrap(), GroupDescriptor::Integers).unwrap();
        assert!(Domain::pvd(&kv, &Field::prime(3).unwrap()).is_err());
        let kq = ValuedField::new(f9(), GroupDescriptor::Rationals).unwrap();
        assert_eq!(
            Domain::pvd(&kq, &Field::prime(3).unwrap()),
            Err(Error::MNotPrincipal)
        );
    }
}
