//! Minimum-valuation envelopes, local polynomials and exactness of
//! `v(f(a)) = minval_f(v(a))`.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::{KPoly, RatFunc};
use crate::residue_field::FieldElement;
use crate::valgroup::{fmt_q, Line, PlFunction, Valuation, Q};
use crate::valued_field::ValuedElement;

/// `γ ↦ min_i v(a_i) + iγ` over the nonzero coefficients of `f`.
pub fn nv_minval_poly(f: &KPoly) -> Result<PlFunction> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lines: Vec<Line> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.val_q().map(|v| Line::new(i as i64, v)))
        .collect();
    Ok(PlFunction::from_lines(&lines))
}

/// `minval_num − minval_den`.
pub fn nv_minval_rf(phi: &RatFunc) -> Result<PlFunction> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(nv_minval_poly(phi.num())?.sub(&nv_minval_poly(phi.den())?))
}

/// The local polynomial of `f` at an element `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalPolyResult {
    /// Largest index attaining the minimum.
    pub d_index: usize,
    /// `f(tx)/(a_d t^d) mod m`, of degree `d_index`.
    pub residue_poly: Poly<FieldElement>,
    /// `minval_f(v(t))`.
    pub minval_at: Q,
}

pub fn nv_local_poly(f: &KPoly, t: &ValuedElement) -> Result<LocalPolyResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let gamma = t.val_q().ok_or(Error::DivisionByZero)?;
    let terms: Vec<Option<Q>> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.val_q().map(|v| v + &gamma * Q::from_integer(i.into())))
        .collect();
    let minval = terms.iter().flatten().min().cloned().expect("nonzero polynomial");
    let d = terms.iter().rposition(|x| x.as_ref() == Some(&minval)).unwrap();
    let field = t.kv().field().clone();
    let pivot = f.coeff(d).mul(&t.pow(d as i64)?);
    let pivot_inv = pivot.checked_inv()?;
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut t_pow = t.kv().one();
    for (i, c) in f.coeffs().iter().enumerate().take(d + 1) {
        if terms[i].as_ref() == Some(&minval) {
            coeffs.push(c.mul(&t_pow).mul(&pivot_inv).residue()?);
        } else {
            coeffs.push(field.zero());
        }
        t_pow = t_pow.mul(t);
    }
    Ok(LocalPolyResult {
        d_index: d,
        residue_poly: Poly::new(&field, coeffs),
        minval_at: minval,
    })
}

/// Predicted against actual valuation of `f(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessRecord {
    #[serde(serialize_with = "ser_q")]
    pub predicted: Q,
    #[serde(serialize_with = "ser_val")]
    pub actual: Valuation,
    pub exact: bool,
    pub witness_root: bool,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_val<S: serde::Serializer>(x: &Valuation, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Compares `minval_f(v(a))` with `v(f(a))`. The local polynomial is taken
/// at the monomial `t^{v(a)}`, so the root test uses the residue of the unit
/// `a / t^{v(a)}`.
pub fn nv_exactness(f: &KPoly, a: &ValuedElement) -> Result<ExactnessRecord> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let gamma = a.val_q().ok_or(Error::DivisionByZero)?;
    let kv = a.kv();
    let monomial = kv.make(&gamma, &kv.field().one())?;
    let unit_residue = a.checked_div(&monomial)?.residue()?;
    let loc = nv_local_poly(f, &monomial)?;
    let witness_root = loc.residue_poly.eval(&unit_residue).is_zero();
    let actual = f.eval(a).valuation();
    let exact = actual == Valuation::Finite(loc.minval_at.clone());
    Ok(ExactnessRecord {
        predicted: loc.minval_at,
        actual,
        exact,
        witness_root,
    })
}

/// Outcome of fitting a profile through forced values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileVerdict {
    ConsistentEnvelope(PlFunction),
    /// Slope −1 into β with value 0 there, while values at or beyond β must
    /// stay nonnegative, so every admissible right slope is at least
    /// `right_slope_lower_bound`.
    ContradictionPattern {
        left_slope: i64,
        right_slope_lower_bound: i64,
        envelope: PlFunction,
    },
}

/// Fits the piecewise-linear interpolant through `(γ, value)` constraints
/// and looks for the slope pattern `(−1, ≥0)` at β.
pub fn nv_forced_profile_check(constraints: &[(Q, Q)], beta: &Q) -> Result<ProfileVerdict> {
    if constraints.is_empty() {
        return Err(Error::InconsistentConstraints("no constraints".into()));
    }
    let mut pts: Vec<(Q, Q)> = constraints.to_vec();
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    let mut uniq: Vec<(Q, Q)> = Vec::with_capacity(pts.len());
    for (g, v) in pts {
        match uniq.last() {
            Some((lg, lv)) if *lg == g => {
                if *lv != v {
                    return Err(Error::InconsistentConstraints(format!(
                        "two values forced at {}",
                        fmt_q(&g)
                    )));
                }
            }
            _ => uniq.push((g, v)),
        }
    }
    let envelope = if uniq.len() == 1 {
        PlFunction::constant(uniq[0].1.clone())
    } else {
        let mut pieces = Vec::new();
        for w in uniq.windows(2) {
            let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            if !slope.is_integer() {
                return Err(Error::InconsistentConstraints(format!(
                    "non-integer slope {} between {} and {}",
                    fmt_q(&slope),
                    fmt_q(&w[0].0),
                    fmt_q(&w[1].0)
                )));
            }
            let s = slope
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::InconsistentConstraints("slope out of range".into()))?;
            pieces.push(Line::new(s, &w[0].1 - Q::from_integer(s.into()) * &w[0].0));
        }
        let bps: Vec<Q> = uniq[1..uniq.len() - 1].iter().map(|p| p.0.clone()).collect();
        PlFunction::from_pieces(pieces, bps)?
    };
    let kink = envelope.kink_report(beta);
    let has_right_data = uniq.iter().any(|(g, _)| g > beta);
    let left_defined = uniq.iter().any(|(g, _)| g < beta);
    if left_defined
        && kink.left_slope == -1
        && kink.value.is_zero()
        && !beta.is_negative()
        && (!has_right_data || kink.right_slope >= 0)
    {
        return Ok(ProfileVerdict::ContradictionPattern {
            left_slope: -1,
            right_slope_lower_bound: 0,
            envelope,
        });
    }
    Ok(ProfileVerdict::ConsistentEnvelope(envelope))
}
