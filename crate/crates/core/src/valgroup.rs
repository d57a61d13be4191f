//! Value groups (subgroups of ℚ), valuations and piecewise-linear
//! minimum-valuation functions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number. All value groups implemented here live inside ℚ,
/// so `QΓ` is represented by plain rationals.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Syntax {
        pos: 0,
        msg: format!("not a rational: `{s}`"),
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A value group Γ ⊆ ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupDescriptor {
    Integers,
    Rationals,
    /// Rationals whose reduced denominators only use the listed primes.
    LocalizedIntegers {
        primes: Vec<u64>,
    },
}

impl GroupDescriptor {
    /// Builds `ℤ[1/S]`, collapsing the empty prime set to `Integers`.
    pub fn localized(primes: &[u64]) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if let Some(p) = ps.iter().find(|p| !is_prime(**p)) {
            return Err(Error::GroupMismatch(format!("{p} is not prime")));
        }
        if ps.is_empty() {
            Ok(GroupDescriptor::Integers)
        } else {
            Ok(GroupDescriptor::LocalizedIntegers { primes: ps })
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let GroupDescriptor::LocalizedIntegers { primes } = self {
            if primes.is_empty() {
                return Err(Error::GroupMismatch("empty prime set".into()));
            }
            if primes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::GroupMismatch("prime set not sorted".into()));
            }
            if let Some(p) = primes.iter().find(|p| !is_prime(**p)) {
                return Err(Error::GroupMismatch(format!("{p} is not prime")));
            }
        }
        Ok(())
    }

    /// Whether a positive integer may appear as a denominator.
    pub fn allows_denominator(&self, n: u64) -> bool {
        match self {
            GroupDescriptor::Integers => n == 1,
            GroupDescriptor::Rationals => n >= 1,
            GroupDescriptor::LocalizedIntegers { primes } => {
                n >= 1 && prime_factors(n).iter().all(|p| primes.contains(p))
            }
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        match self {
            GroupDescriptor::Rationals => true,
            GroupDescriptor::Integers => x.is_integer(),
            GroupDescriptor::LocalizedIntegers { primes } => {
                let mut d = x.denom().clone();
                for p in primes {
                    let bp = BigInt::from(*p);
                    while (&d % &bp).is_zero() {
                        d /= &bp;
                    }
                }
                d.is_one()
            }
        }
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, GroupDescriptor::Rationals)
    }

    /// Γ has a least positive element, i.e. the maximal ideal of the
    /// valuation ring is principal.
    pub fn has_least_positive(&self) -> bool {
        matches!(self, GroupDescriptor::Integers)
    }

    /// A pair `(α, m)` with `α/m ∉ Γ`, if Γ is not divisible.
    pub fn non_divisible_witness(&self) -> Option<(Q, u64)> {
        match self {
            GroupDescriptor::Rationals => None,
            GroupDescriptor::Integers => Some((qi(1), 2)),
            GroupDescriptor::LocalizedIntegers { primes } => {
                let m = (2..).find(|p| is_prime(*p) && !primes.contains(p))?;
                Some((qi(1), m))
            }
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Integers => write!(f, "Z"),
            GroupDescriptor::Rationals => write!(f, "Q"),
            GroupDescriptor::LocalizedIntegers { primes } => {
                let ps: Vec<String> = primes.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", ps.join(","))
            }
        }
    }
}

/// An element of Γ, or of its rational span `QΓ` when `span` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub value: Q,
    pub group: GroupDescriptor,
    pub span: bool,
}

impl GroupElement {
    pub fn new(value: Q, group: &GroupDescriptor) -> Result<Self> {
        if !group.contains(&value) {
            return Err(Error::GroupMismatch(format!(
                "{} is not in {group}",
                fmt_q(&value)
            )));
        }
        Ok(GroupElement {
            value,
            group: group.clone(),
            span: false,
        })
    }

    pub fn span(value: Q, group: &GroupDescriptor) -> Self {
        GroupElement {
            value,
            group: group.clone(),
            span: true,
        }
    }
}

/// Total order on Γ (or on `QΓ` when both operands are span elements).
pub fn vg_compare(a: &GroupElement, b: &GroupElement) -> Result<Ordering> {
    if a.group != b.group && !(a.span && b.span) {
        return Err(Error::GroupMismatch(format!(
            "cannot compare elements of {} and {}",
            a.group, b.group
        )));
    }
    Ok(a.value.cmp(&b.value))
}

/// Whether `γ/n ∈ Γ`.
pub fn vg_divisible(gamma: &GroupElement, n: u64) -> bool {
    assert!(n >= 1, "divisor must be positive");
    let quotient = &gamma.value / qi(n as i64);
    gamma.group.contains(&quotient)
}

/// A valuation value: an element of Γ or +∞ (the valuation of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Valuation::Finite(x) => Some(x),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// Sum, with ∞ absorbing.
    pub fn plus(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(x) => write!(f, "{}", fmt_q(x)),
            Valuation::Infinity => write!(f, "INFINITY"),
        }
    }
}

/// The affine function `γ ↦ slope·γ + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub slope: i64,
    pub intercept: Q,
}

impl Line {
    pub fn new(slope: i64, intercept: Q) -> Self {
        Line { slope, intercept }
    }

    pub fn at(&self, gamma: &Q) -> Q {
        qi(self.slope) * gamma + &self.intercept
    }

    /// Abscissa where two lines of different slopes meet.
    fn meet(&self, other: &Line) -> Q {
        (&other.intercept - &self.intercept) / qi(self.slope - other.slope)
    }
}

/// A continuous piecewise-linear function `QΓ → QΓ` with integer slopes.
///
/// `pieces[k]` is active on `[breakpoints[k-1], breakpoints[k]]`, with the
/// outer pieces extending to ±∞. Breakpoints are strictly increasing and
/// adjacent pieces have different slopes, which makes the representation
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlFunction {
    pieces: Vec<Line>,
    breakpoints: Vec<Q>,
}

/// Slopes around a point and the value there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinkReport {
    pub left_slope: i64,
    pub right_slope: i64,
    pub value: Q,
}

impl PlFunction {
    /// Lower envelope (pointwise minimum) of a nonempty list of lines.
    pub fn from_lines(lines: &[Line]) -> PlFunction {
        assert!(!lines.is_empty(), "envelope of an empty line set");
        let mut sorted: Vec<Line> = lines.to_vec();
        // Largest slope is lowest as γ → -∞; among equal slopes keep the
        // smallest intercept.
        sorted.sort_by(|a, b| b.slope.cmp(&a.slope).then(a.intercept.cmp(&b.intercept)));
        sorted.dedup_by(|b, a| a.slope == b.slope);

        let mut hull: Vec<Line> = Vec::with_capacity(sorted.len());
        for line in sorted {
            while hull.len() >= 2 {
                let l1 = &hull[hull.len() - 2];
                let l2 = &hull[hull.len() - 1];
                if l1.meet(&line) <= l1.meet(l2) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(line);
        }
        let breakpoints = hull.windows(2).map(|w| w[0].meet(&w[1])).collect();
        PlFunction {
            pieces: hull,
            breakpoints,
        }
    }

    pub fn constant(c: Q) -> PlFunction {
        PlFunction {
            pieces: vec![Line::new(0, c)],
            breakpoints: Vec::new(),
        }
    }

    /// Builds a function from pieces and breakpoints, checking continuity and
    /// merging adjacent pieces that share a slope.
    pub fn from_pieces(pieces: Vec<Line>, breakpoints: Vec<Q>) -> Result<PlFunction> {
        if pieces.is_empty() || pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InconsistentConstraints(
                "piece/breakpoint count mismatch".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InconsistentConstraints(
                "breakpoints not strictly increasing".into(),
            ));
        }
        for (k, b) in breakpoints.iter().enumerate() {
            if pieces[k].at(b) != pieces[k + 1].at(b) {
                return Err(Error::InconsistentConstraints(format!(
                    "discontinuity at {}",
                    fmt_q(b)
                )));
            }
        }
        let mut out_p: Vec<Line> = vec![pieces[0].clone()];
        let mut out_b: Vec<Q> = Vec::new();
        for (k, b) in breakpoints.into_iter().enumerate() {
            let next = &pieces[k + 1];
            if out_p.last().unwrap().slope == next.slope {
                continue;
            }
            out_p.push(next.clone());
            out_b.push(b);
        }
        Ok(PlFunction {
            pieces: out_p,
            breakpoints: out_b,
        })
    }

    pub fn pieces(&self) -> &[Line] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    fn piece_left_of(&self, gamma: &Q) -> &Line {
        let idx = self.breakpoints.partition_point(|b| b < gamma);
        &self.pieces[idx]
    }

    fn piece_right_of(&self, gamma: &Q) -> &Line {
        let idx = self.breakpoints.partition_point(|b| b <= gamma);
        &self.pieces[idx]
    }

    /// Value at a point of `QΓ`.
    pub fn eval(&self, gamma: &Q) -> Q {
        self.piece_left_of(gamma).at(gamma)
    }

    /// Value at a point that must lie in Γ itself.
    pub fn eval_on_group(&self, gamma: &Q, group: &GroupDescriptor) -> Result<Q> {
        if !group.contains(gamma) {
            return Err(Error::GroupMismatch(format!(
                "{} is not in {group}",
                fmt_q(gamma)
            )));
        }
        Ok(self.eval(gamma))
    }

    /// Pointwise difference `self − other`.
    pub fn sub(&self, other: &PlFunction) -> PlFunction {
        let mut cuts: Vec<Q> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        // Probe each interval strictly inside it.
        for k in 0..=cuts.len() {
            let probe = match (k.checked_sub(1).map(|j| &cuts[j]), cuts.get(k)) {
                (None, None) => Q::zero(),
                (None, Some(r)) => r - Q::one(),
                (Some(l), None) => l + Q::one(),
                (Some(l), Some(r)) => (l + r) / qi(2),
            };
            let a = self.piece_left_of(&probe);
            let b = other.piece_left_of(&probe);
            pieces.push(Line::new(a.slope - b.slope, &a.intercept - &b.intercept));
        }
        PlFunction::from_pieces(pieces, cuts).expect("difference of continuous functions")
    }

    pub fn add(&self, other: &PlFunction) -> PlFunction {
        let neg = PlFunction {
            pieces: other
                .pieces
                .iter()
                .map(|l| Line::new(-l.slope, -l.intercept.clone()))
                .collect(),
            breakpoints: other.breakpoints.clone(),
        };
        self.sub(&neg)
    }

    pub fn kink_report(&self, beta: &Q) -> KinkReport {
        KinkReport {
            left_slope: self.piece_left_of(beta).slope,
            right_slope: self.piece_right_of(beta).slope,
            value: self.eval(beta),
        }
    }

    /// Slopes are non-increasing left to right.
    pub fn is_concave(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].slope >= w[1].slope)
    }

    /// Infimum over `[from, ∞)`; `None` when unbounded below.
    pub fn min_on_ray(&self, from: &Q) -> Option<Q> {
        if self.pieces.last().unwrap().slope < 0 {
            return None;
        }
        let mut best = self.eval(from);
        for b in self.breakpoints.iter().filter(|b| *b > from) {
            let v = self.eval(b);
            if v < best {
                best = v;
            }
        }
        Some(best)
    }

    /// JSON form `{"lines": [[slope, "p/q"], ...], "breakpoints": [...]}`.
    ///
    /// Both arrays run from the rightmost piece (γ → +∞) to the leftmost, so
    /// for a polynomial envelope the lines appear in ascending slope order.
    pub fn to_json(&self) -> serde_json::Value {
        let lines: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .rev()
            .map(|l| serde_json::json!([l.slope, fmt_q(&l.intercept)]))
            .collect();
        let bps: Vec<String> = self.breakpoints.iter().rev().map(fmt_q).collect();
        serde_json::json!({ "lines": lines, "breakpoints": bps })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<PlFunction> {
        let schema = |msg: &str| Error::Schema {
            path: "lines".into(),
            msg: msg.into(),
        };
        let lines = value["lines"].as_array().ok_or_else(|| schema("missing"))?;
        let mut pieces = Vec::new();
        for l in lines.iter().rev() {
            let slope = l[0].as_i64().ok_or_else(|| schema("bad slope"))?;
            let icpt = parse_q(l[1].as_str().ok_or_else(|| schema("bad intercept"))?)?;
            pieces.push(Line::new(slope, icpt));
        }
        let mut bps = Vec::new();
        if let Some(arr) = value["breakpoints"].as_array() {
            for b in arr.iter().rev() {
                bps.push(parse_q(b.as_str().ok_or_else(|| schema("bad breakpoint"))?)?);
            }
        }
        PlFunction::from_pieces(pieces, bps)
    }
}

impl fmt::Display for PlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Converts a small rational to `f64`; used only for human-facing text.
pub fn approx(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Floor of a rational.
pub fn floor_q(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(lines: &[(i64, Q)]) -> PlFunction {
        let ls: Vec<Line> = lines.iter().map(|(s, b)| Line::new(*s, b.clone())).collect();
        PlFunction::from_lines(&ls)
    }

    #[test]
    fn compare_examples() {
        let z = GroupDescriptor::Rationals;
        let a = GroupElement::new(q(1, 2), &z).unwrap();
        let one = GroupElement::new(qi(1), &z).unwrap();
        assert_eq!(vg_compare(&a, &one).unwrap(), Ordering::Less);
        let zero = GroupElement::new(qi(0), &z).unwrap();
        assert_eq!(vg_compare(&zero, &zero).unwrap(), Ordering::Equal);
        let b = GroupElement::new(q(3, 2), &z).unwrap();
        assert_eq!(vg_compare(&b, &one).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_mismatched_groups() {
        let a = GroupElement::new(qi(1), &GroupDescriptor::Integers).unwrap();
        let b = GroupElement::new(qi(1), &GroupDescriptor::Rationals).unwrap();
        assert!(matches!(vg_compare(&a, &b), Err(Error::GroupMismatch(_))));
        let sa = GroupElement::span(q(1, 3), &GroupDescriptor::Integers);
        let sb = GroupElement::span(qi(1), &GroupDescriptor::Rationals);
        assert_eq!(vg_compare(&sa, &sb).unwrap(), Ordering::Less);
    }

    #[test]
    fn element_outside_group_rejected() {
        assert!(GroupElement::new(q(1, 2), &GroupDescriptor::Integers).is_err());
        let dyadic = GroupDescriptor::localized(&[2]).unwrap();
        assert!(GroupElement::new(q(3, 8), &dyadic).is_ok());
        assert!(GroupElement::new(q(1, 6), &dyadic).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let z = GroupDescriptor::Integers;
        assert!(!vg_divisible(&GroupElement::new(qi(1), &z).unwrap(), 2));
        assert!(vg_divisible(&GroupElement::new(qi(4), &z).unwrap(), 2));
        let dyadic = GroupDescriptor::localized(&[2]).unwrap();
        assert!(!vg_divisible(&GroupElement::new(qi(1), &dyadic).unwrap(), 3));
        assert!(vg_divisible(&GroupElement::new(qi(1), &dyadic).unwrap(), 4));
    }

    #[test]
    fn empty_localization_is_integers() {
        assert_eq!(
            GroupDescriptor::localized(&[]).unwrap(),
            GroupDescriptor::Integers
        );
        assert!(GroupDescriptor::localized(&[4]).is_err());
        assert!(GroupDescriptor::LocalizedIntegers { primes: vec![3, 2] }
            .validate()
            .is_err());
    }

    #[test]
    fn non_divisible_witness() {
        assert_eq!(
            GroupDescriptor::Integers.non_divisible_witness(),
            Some((qi(1), 2))
        );
        let dyadic = GroupDescriptor::localized(&[2]).unwrap();
        assert_eq!(dyadic.non_divisible_witness(), Some((qi(1), 3)));
        assert_eq!(GroupDescriptor::Rationals.non_divisible_witness(), None);
    }

    #[test]
    fn envelope_of_two_lines() {
        let f = env(&[(0, qi(1)), (2, qi(0))]);
        assert_eq!(f.breakpoints(), &[q(1, 2)]);
        assert_eq!(f.pieces()[0].slope, 2);
        assert_eq!(f.pieces()[1].slope, 0);
        assert_eq!(f.eval(&qi(1)), qi(1));
        assert_eq!(f.eval(&q(1, 2)), qi(1));
    }

    #[test]
    fn envelope_constant_and_dominated() {
        let c = env(&[(0, qi(0))]);
        assert_eq!(c, PlFunction::constant(qi(0)));
        let d = env(&[(1, qi(1)), (1, qi(3))]);
        assert_eq!(d.pieces(), &[Line::new(1, qi(1))]);
        assert!(d.breakpoints().is_empty());
    }

    #[test]
    fn envelope_with_hidden_middle_line() {
        // slope-2 line at intercept 5 never attains the minimum of 1 and 4γ
        let f = env(&[(0, qi(1)), (2, qi(5)), (4, qi(0))]);
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.breakpoints(), &[q(1, 4)]);
    }

    #[test]
    fn theta_numerator_envelope_at_zero() {
        let f = env(&[(0, qi(1)), (4, qi(1))]);
        assert_eq!(f.eval(&qi(0)), qi(1));
    }

    #[test]
    fn difference_examples() {
        let f = env(&[(0, qi(0))]);
        assert_eq!(f.sub(&f), PlFunction::constant(qi(0)));
        let x = env(&[(1, qi(0))]);
        let one = env(&[(0, qi(0))]);
        assert_eq!(x.sub(&one).pieces(), &[Line::new(1, qi(0))]);
        // θ: numerator t(1+x⁴), denominator t + (1+t²)x² + t x⁴
        let num = env(&[(0, qi(1)), (4, qi(1))]);
        let den = env(&[(0, qi(1)), (2, qi(0)), (4, qi(1))]);
        let theta = num.sub(&den);
        assert_eq!(theta.eval(&qi(0)), qi(1));
        assert_eq!(theta.eval(&qi(-3)), qi(0));
        assert_eq!(theta.eval(&qi(5)), qi(0));
    }

    #[test]
    fn kink_reports() {
        let f = env(&[(0, qi(1)), (2, qi(0))]);
        let k = f.kink_report(&q(1, 2));
        assert_eq!(
            k,
            KinkReport {
                left_slope: 2,
                right_slope: 0,
                value: qi(1)
            }
        );
        let l = env(&[(3, qi(2))]);
        let k = l.kink_report(&q(7, 3));
        assert_eq!((k.left_slope, k.right_slope), (3, 3));
    }

    #[test]
    fn json_form_matches_cli_layout() {
        let f = env(&[(0, qi(1)), (2, qi(0))]);
        assert_eq!(
            f.to_json().to_string(),
            r#"{"lines":[[0,"1"],[2,"0"]],"breakpoints":["1/2"]}"#
        );
        assert_eq!(PlFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn min_on_ray() {
        let f = env(&[(0, qi(1)), (2, qi(0))]);
        assert_eq!(f.min_on_ray(&qi(0)), Some(qi(0)));
        let g = PlFunction::from_pieces(vec![Line::new(-1, qi(1))], vec![]).unwrap();
        assert_eq!(g.min_on_ray(&qi(0)), None);
    }

    #[test]
    fn from_pieces_rejects_discontinuity() {
        let r = PlFunction::from_pieces(vec![Line::new(1, qi(0)), Line::new(0, qi(5))], vec![qi(1)]);
        assert!(r.is_err());
    }
}
