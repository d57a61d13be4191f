//! The valued field `K`: rational functions in `u = t^{1/M}` over a residue
//! field, with the `t`-adic valuation normalized so that `v(t) = 1`.
//!
//! For `Γ = ℤ` every element has `M = 1`. For denser groups each element
//! carries its own ramification index, lifted to a common multiple for
//! arithmetic and re-minimized afterwards.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{Coeff, Poly};
use crate::residue_field::{Field, FieldElement};
use crate::valgroup::{fmt_q, q, qi, GroupDescriptor, Valuation, Q};

/// Default bound on denominators of sampled valuations in dense groups.
pub const DEFAULT_SAMPLE_DENOMINATOR: u64 = 16;

#[derive(Debug, PartialEq, Eq)]
pub struct ValuedFieldDescriptor {
    field: Field,
    group: GroupDescriptor,
    uniformizer: String,
    sample_denominator: u64,
}

#[derive(Clone, Debug)]
pub struct ValuedField(Arc<ValuedFieldDescriptor>);

impl PartialEq for ValuedField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.field == other.0.field && self.0.group == other.0.group)
    }
}

impl ValuedField {
    pub fn new(field: Field, group: GroupDescriptor) -> Result<ValuedField> {
        Self::with_sample_denominator(field, group, DEFAULT_SAMPLE_DENOMINATOR)
    }

    pub fn with_sample_denominator(
        field: Field,
        group: GroupDescriptor,
        sample_denominator: u64,
    ) -> Result<ValuedField> {
        group.validate()?;
        Ok(ValuedField(Arc::new(ValuedFieldDescriptor {
            field,
            group,
            uniformizer: "t".into(),
            sample_denominator: sample_denominator.max(1),
        })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.0.group
    }

    pub fn is_puiseux(&self) -> bool {
        self.0.group != GroupDescriptor::Integers
    }

    pub fn uniformizer(&self) -> &str {
        &self.0.uniformizer
    }

    pub fn zero(&self) -> ValuedElement {
        ValuedElement {
            num: Poly::zero(self.field()),
            den: Poly::one(self.field()),
            ram: 1,
            kv: self.clone(),
        }
    }

    pub fn one(&self) -> ValuedElement {
        self.constant(self.field().one())
    }

    pub fn from_int(&self, n: i64) -> ValuedElement {
        self.constant(self.field().from_int(n))
    }

    pub fn constant(&self, c: FieldElement) -> ValuedElement {
        ValuedElement {
            num: Poly::constant(c),
            den: Poly::one(self.field()),
            ram: 1,
            kv: self.clone(),
        }
    }

    /// The uniformizer `t`.
    pub fn t(&self) -> ValuedElement {
        self.from_t_poly(vec![self.field().zero(), self.field().one()])
    }

    /// `Σ c_i t^i`.
    pub fn from_t_poly(&self, coeffs: Vec<FieldElement>) -> ValuedElement {
        ValuedElement::from_parts(self, Poly::new(self.field(), coeffs), Poly::one(self.field()), 1)
            .expect("polynomial in t is always valid")
    }

    /// `t^γ`; γ must lie in the value group.
    pub fn t_pow(&self, gamma: &Q) -> Result<ValuedElement> {
        self.make(gamma, &self.field().one())
    }

    /// Builds `c · t^γ`, an element of valuation γ whose unit part has
    /// residue `c`.
    pub fn make(&self, gamma: &Q, unit_residue: &FieldElement) -> Result<ValuedElement> {
        if !self.group().contains(gamma) {
            return Err(Error::GroupMismatch(format!(
                "{} is not in {}",
                fmt_q(gamma),
                self.group()
            )));
        }
        if unit_residue.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if unit_residue.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ram = gamma.denom().to_u64().expect("small denominator");
        let n = gamma.numer().to_i64().expect("small numerator");
        let f = self.field();
        let (num, den) = if n >= 0 {
            (Poly::monomial(unit_residue.clone(), n as usize), Poly::one(f))
        } else {
            (
                Poly::constant(unit_residue.clone()),
                Poly::monomial(f.one(), n.unsigned_abs() as usize),
            )
        };
        ValuedElement::from_parts(self, num, den, ram)
    }

    /// A pseudorandom residue-field element (small height in characteristic 0).
    pub fn random_residue<R: Rng>(&self, rng: &mut R) -> FieldElement {
        let f = self.field();
        match f.size() {
            Some(size) => f.element_at(rng.gen_range(0..size)),
            None => {
                let coords: Vec<Q> = (0..f.degree())
                    .map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                    .collect();
                f.from_coords(&coords)
            }
        }
    }

    /// Group elements in `[lo, hi]` (or the open variant) whose denominator
    /// is at most the sampling bound, sorted ascending.
    pub fn group_elements_in(&self, range: &ValuationConstraint) -> Vec<Q> {
        self.group_pairs_in(range)
            .into_iter()
            .map(|(n, d)| q(n, d))
            .collect()
    }

    /// [`Self::group_elements_in`] as reduced `(numerator, denominator)` pairs.
    fn group_pairs_in(&self, range: &ValuationConstraint) -> Vec<(i64, i64)> {
        let (lo, hi, lo_open, hi_open) = match range {
            ValuationConstraint::Exact(g) => {
                let pair = g.numer().to_i64().zip(g.denom().to_i64());
                return match pair {
                    Some(p) if self.group().contains(g) => vec![p],
                    _ => vec![],
                };
            }
            ValuationConstraint::Range {
                lo,
                hi,
                lo_open,
                hi_open,
            } => (lo, hi, *lo_open, *hi_open),
        };
        let bound = match self.group() {
            GroupDescriptor::Integers => 1,
            _ => self.0.sample_denominator,
        };
        // reduced fractions n/d in machine integers, converted at the end
        let mut pairs: Vec<(i64, i64)> = Vec::new();
        for d in 1..=bound {
            if !self.group().allows_denominator(d) {
                continue;
            }
            let di = d as i64;
            let scaled_lo = lo * qi(di);
            let scaled_hi = hi * qi(di);
            let mut start = scaled_lo.ceil().to_integer();
            let mut end = scaled_hi.floor().to_integer();
            if lo_open && scaled_lo.is_integer() {
                start += 1;
            }
            if hi_open && scaled_hi.is_integer() {
                end -= 1;
            }
            let (Some(start), Some(end)) = (start.to_i64(), end.to_i64()) else {
                continue;
            };
            for n in start..=end {
                if n.gcd(&di) == 1 {
                    pairs.push((n, di));
                }
            }
        }
        pairs.sort_by(|a, b| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128)));
        pairs
    }

    /// Pseudorandom element meeting the constraints.
    pub fn sample<R: Rng>(&self, rng: &mut R, c: &SampleConstraints) -> Result<ValuedElement> {
        if let ValuationConstraint::Exact(g) = &c.valuation {
            if !self.group().contains(g) {
                return Err(Error::GroupMismatch(format!(
                    "{} is not in {}",
                    fmt_q(g),
                    self.group()
                )));
            }
        }
        let gammas = self.group_pairs_in(&c.valuation);
        if gammas.is_empty() {
            return Err(Error::Unsatisfiable(
                "no group element in the requested valuation range".into(),
            ));
        }
        let f = self.field();
        let avoid = |r: &FieldElement| r.is_zero() || c.residue_avoid.contains(r);
        if let Some(size) = f.size() {
            if (0..size).all(|n| avoid(&f.element_at(n))) {
                return Err(Error::Unsatisfiable("every residue is excluded".into()));
            }
        }
        let (gn, gd) = gammas[rng.gen_range(0..gammas.len())];
        let gamma = &q(gn, gd);
        let mut r = self.random_residue(rng);
        let mut tries = 0;
        while avoid(&r) {
            r = self.random_residue(rng);
            tries += 1;
            if tries > 10_000 {
                return Err(Error::Unsatisfiable("could not find an allowed residue".into()));
            }
        }
        let mut coeffs = vec![r];
        for _ in 0..rng.gen_range(0..=2) {
            coeffs.push(self.random_residue(rng));
        }
        let mut unit = self.from_t_poly(coeffs);
        if rng.gen_bool(0.25) {
            let mut c1 = self.random_residue(rng);
            if c1.is_zero() {
                c1 = f.one();
            }
            let den = self.from_t_poly(vec![f.one(), c1]);
            unit = unit.checked_div(&den)?;
        }
        Ok(unit.mul(&self.t_pow(gamma)?))
    }
}

/// Valuation requirement for [`ValuedField::sample`].
#[derive(Clone, Debug, PartialEq)]
pub enum ValuationConstraint {
    Exact(Q),
    Range {
        lo: Q,
        hi: Q,
        lo_open: bool,
        hi_open: bool,
    },
}

impl ValuationConstraint {
    pub fn closed(lo: Q, hi: Q) -> Self {
        ValuationConstraint::Range {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        ValuationConstraint::Range {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }
}

/// Constraints for sampling. `residue_avoid` restricts the residue of the
/// unit part (the leading coefficient); zero is always avoided.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConstraints {
    pub valuation: ValuationConstraint,
    pub residue_avoid: Vec<FieldElement>,
}

impl SampleConstraints {
    pub fn valuation(v: ValuationConstraint) -> Self {
        SampleConstraints {
            valuation: v,
            residue_avoid: Vec::new(),
        }
    }
}

/// Numerator and denominator in `u`.
type Frac = (Poly<FieldElement>, Poly<FieldElement>);

/// An element `num(u)/den(u)` of `K` with `u = t^{1/ram}`.
#[derive(Clone, Debug)]
pub struct ValuedElement {
    num: Poly<FieldElement>,
    den: Poly<FieldElement>,
    ram: u64,
    kv: ValuedField,
}

impl PartialEq for ValuedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ram == other.ram && self.num == other.num && self.den == other.den
    }
}

impl ValuedElement {
    /// Builds and normalizes `num(u)/den(u)` with `u = t^{1/ram}`.
    pub fn from_parts(
        kv: &ValuedField,
        num: Poly<FieldElement>,
        den: Poly<FieldElement>,
        ram: u64,
    ) -> Result<ValuedElement> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if ram == 0 || !kv.group().allows_denominator(ram) {
            return Err(Error::GroupMismatch(format!(
                "ramification {ram} not allowed in {}",
                kv.group()
            )));
        }
        Ok(normalize(kv, num, den, ram))
    }

    pub fn kv(&self) -> &ValuedField {
        &self.kv
    }

    pub fn num(&self) -> &Poly<FieldElement> {
        &self.num
    }

    pub fn den(&self) -> &Poly<FieldElement> {
        &self.den
    }

    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        match self.val_q() {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinity,
        }
    }

    /// The valuation as a rational, `None` for zero.
    pub fn val_q(&self) -> Option<Q> {
        let on = self.num.order()? as i64;
        let od = self.den.order().expect("nonzero denominator") as i64;
        Some(q(on - od, self.ram as i64))
    }

    /// Residue class in `V/m`.
    pub fn residue(&self) -> Result<FieldElement> {
        match self.val_q() {
            None => Ok(self.kv.field().zero()),
            Some(v) if v.is_negative() => Err(Error::NegativeValuation),
            Some(v) if v.is_positive() => Ok(self.kv.field().zero()),
            Some(_) => Ok(self.num.coeff(0).mul(&self.den.coeff(0).inv())),
        }
    }

    /// Residue of `self / t^{v(self)}`; `None` for zero.
    pub fn unit_residue(&self) -> Option<FieldElement> {
        let on = self.num.order()?;
        let od = self.den.order().expect("nonzero denominator");
        Some(self.num.coeff(on).mul(&self.den.coeff(od).inv()))
    }

    fn lifted(&self, m: u64) -> Frac {
        let k = (m / self.ram) as usize;
        (self.num.inflate(k), self.den.inflate(k))
    }

    fn common(&self, other: &Self) -> (u64, [Frac; 2]) {
        assert!(self.kv == other.kv, "valued field mismatch");
        let m = self.ram.lcm(&other.ram);
        (m, [self.lifted(m), other.lifted(m)])
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (m, [(a, b), (c, d)]) = self.common(other);
        if b == d {
            return normalize(&self.kv, a.add(&c), b, m);
        }
        normalize(&self.kv, a.mul(&d).add(&c.mul(&b)), b.mul(&d), m)
    }

    pub fn neg(&self) -> Self {
        ValuedElement {
            num: self.num.neg(),
            den: self.den.clone(),
            ram: self.ram,
            kv: self.kv.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.kv.zero();
        }
        let (m, [(a, b), (c, d)]) = self.common(other);
        normalize(&self.kv, a.mul(&c), b.mul(&d), m)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(normalize(&self.kv, self.den.clone(), self.num.clone(), self.ram))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.checked_inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = self.kv.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Multiplies by a residue-field scalar.
    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return self.kv.zero();
        }
        ValuedElement {
            num: self.num.scale(c),
            den: self.den.clone(),
            ram: self.ram,
            kv: self.kv.clone(),
        }
    }

    /// Whether the element is a polynomial in `u` (no denominator).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Rendering in the expression language.
    pub fn to_expr(&self) -> String {
        let num = u_poly_expr(&self.num, self.ram, self.kv.uniformizer());
        if self.den.is_constant() {
            return num;
        }
        let den = u_poly_expr(&self.den, self.ram, self.kv.uniformizer());
        let wrap = |s: String| {
            if s.contains(['+', '-', '*', '/']) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num), wrap(den))
    }
}

fn u_poly_expr(p: &Poly<FieldElement>, ram: u64, t: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = q(i as i64, ram as i64);
        let mono = if e.is_zero() {
            String::new()
        } else if e.is_one() {
            t.to_string()
        } else if e.is_integer() {
            format!("{t}^{e}")
        } else {
            format!("{t}^({e})")
        };
        let term = if mono.is_empty() {
            c.to_expr()
        } else if c.is_one() {
            mono
        } else if *c == c.field().from_int(-1) && c.field().characteristic() == 0 {
            format!("-{mono}")
        } else if c.is_compound() {
            format!("({})*{mono}", c.to_expr())
        } else {
            format!("{}*{mono}", c.to_expr())
        };
        terms.push(term);
    }
    let mut out = terms[0].clone();
    for term in &terms[1..] {
        if term.starts_with('-') {
            out.push_str(term);
        } else {
            out.push('+');
            out.push_str(term);
        }
    }
    out
}

impl fmt::Display for ValuedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

fn normalize(
    kv: &ValuedField,
    mut num: Poly<FieldElement>,
    mut den: Poly<FieldElement>,
    mut ram: u64,
) -> ValuedElement {
    let field = kv.field();
    if num.is_zero() {
        return kv.zero();
    }
    if den.is_constant() {
        let inv = den.coeff(0).inv();
        num = num.scale(&inv);
        den = Poly::one(field);
    } else {
        let od = den.order().unwrap();
        let is_monomial = den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        if is_monomial {
            let k = od.min(num.order().unwrap());
            num = num.shift_down(k);
            den = den.shift_down(k);
        } else {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lead = den.leading().unwrap().inv();
        if !lead.is_one() {
            num = num.scale(&lead);
            den = den.scale(&lead);
        }
    }
    let g = num_integer::gcd(
        ram as usize,
        num_integer::gcd(num.exponent_gcd(), den.exponent_gcd()),
    );
    if g > 1 {
        num = num.deflate(g);
        den = den.deflate(g);
        ram /= g as u64;
    }
    ValuedElement {
        num,
        den,
        ram,
        kv: kv.clone(),
    }
}

impl Coeff for ValuedElement {
    type Ctx = ValuedField;

    fn ctx(&self) -> ValuedField {
        self.kv.clone()
    }
    fn zero(ctx: &ValuedField) -> Self {
        ctx.zero()
    }
    fn one(ctx: &ValuedField) -> Self {
        ctx.one()
    }
    fn is_zero(&self) -> bool {
        ValuedElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        ValuedElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ValuedElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ValuedElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        ValuedElement::neg(self)
    }
    fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
    fn is_one(&self) -> bool {
        self.ram == 1
            && self.den.is_constant()
            && self.num.coeffs().len() == 1
            && self.num.coeffs()[0].is_one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KvOp {
    Add,
    Mul,
    Div,
    Neg,
}

/// Checked arithmetic entry point.
pub fn kv_arith(op: KvOp, x: &ValuedElement, y: Option<&ValuedElement>) -> Result<ValuedElement> {
    if let Some(y) = y {
        if x.kv != y.kv {
            return Err(Error::FieldMismatch);
        }
    }
    let need = || y.ok_or(Error::FieldMismatch);
    match op {
        KvOp::Add => Ok(x.add(need()?)),
        KvOp::Mul => Ok(x.mul(need()?)),
        KvOp::Div => x.checked_div(need()?),
        KvOp::Neg => Ok(x.neg()),
    }
}
