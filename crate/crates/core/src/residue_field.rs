//! Exact arithmetic in residue fields: `F_p`, `F_{p^k}` (k ≤ 4), `ℚ`, and
//! quadratic extensions of `ℚ`.
//!
//! Every field is presented as `B[w]/(μ(w))` over its prime field `B`
//! (`F_p` or `ℚ`); the prime fields themselves use `μ = w`. Elements are
//! coordinate vectors in the power basis `1, w, …, w^{k-1}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::poly::{Coeff, Poly};
use crate::valgroup::{fmt_q, is_prime, parse_q, qi, Q};

const MAX_PRIME: u64 = 1 << 20;
const MAX_DEGREE: usize = 4;

/// Serialized description of a field, as it appears in scene files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    PrimeFinite {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
    ExtFinite {
        p: u64,
        minpoly: Vec<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
    Rationals {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
    /// `ℚ(w)` with either `w² = d` or an explicit monic quadratic.
    QuadraticExt {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        minpoly: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        symbol: Option<String>,
    },
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        let sym = |s: &Option<String>| s.clone().unwrap_or_else(|| "w".to_string());
        match self {
            FieldSpec::PrimeFinite { p, symbol } => Field::prime_with_symbol(*p, &sym(symbol)),
            FieldSpec::ExtFinite { p, minpoly, symbol } => Field::extension(*p, minpoly, &sym(symbol)),
            FieldSpec::Rationals { symbol } => Ok(Field::rationals_with_symbol(&sym(symbol))),
            FieldSpec::QuadraticExt { d, minpoly, symbol } => match (d, minpoly) {
                (Some(d), None) => Field::quadratic(&[-parse_q(d)?, qi(0), qi(1)], &sym(symbol)),
                (None, Some(mp)) => {
                    let coeffs = mp.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
                    Field::quadratic(&coeffs, &sym(symbol))
                }
                _ => Err(Error::InvalidField(
                    "QuadraticExt needs exactly one of `d` or `minpoly`".into(),
                )),
            },
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    /// 0 for characteristic zero.
    characteristic: u64,
    /// Monic minimal polynomial of the generator over the prime field,
    /// low-to-high.
    minpoly: Vec<Q>,
    symbol: String,
}

/// Shared handle to a field.
#[derive(Clone, Debug, Eq)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn is_rational_square(x: &Q) -> bool {
    if x.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(x.numer()) && sq(x.denom())
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if !is_rational_square(x) {
        return None;
    }
    Some(Q::new(x.numer().sqrt(), x.denom().sqrt()))
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        Self::prime_with_symbol(p, "w")
    }

    pub fn prime_with_symbol(p: u64, symbol: &str) -> Result<Field> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field(Arc::new(FieldDescriptor {
            characteristic: p,
            minpoly: vec![qi(0), qi(1)],
            symbol: symbol.to_string(),
        })))
    }

    pub fn rationals() -> Field {
        Self::rationals_with_symbol("w")
    }

    pub fn rationals_with_symbol(symbol: &str) -> Field {
        Field(Arc::new(FieldDescriptor {
            characteristic: 0,
            minpoly: vec![qi(0), qi(1)],
            symbol: symbol.to_string(),
        }))
    }

    /// `F_p[w]/(μ)`; `μ` is given low-to-high and must be monic and
    /// irreducible of degree 2..=4.
    pub fn extension(p: u64, minpoly: &[i64], symbol: &str) -> Result<Field> {
        let base = Field::prime(p)?;
        let mp: Vec<Q> = minpoly.iter().map(|c| qi(c.rem_euclid(p as i64))).collect();
        let deg = mp.len().saturating_sub(1);
        if !(2..=MAX_DEGREE).contains(&deg) {
            return Err(Error::InvalidField(format!(
                "extension degree {deg} outside 2..={MAX_DEGREE}"
            )));
        }
        if !mp[deg].is_one() {
            return Err(Error::InvalidField("minimal polynomial not monic".into()));
        }
        let poly = Poly::new(&base, mp.iter().map(|c| base.from_q(c)).collect());
        if let Some(factor) = find_factor_finite(&base, &poly) {
            return Err(Error::InvalidField(format!(
                "minimal polynomial has a factor {}",
                poly_to_string(&factor, "x")
            )));
        }
        Ok(Field(Arc::new(FieldDescriptor {
            characteristic: p,
            minpoly: mp,
            symbol: symbol.to_string(),
        })))
    }

    /// `ℚ[w]/(μ)` for a monic irreducible quadratic `μ`.
    pub fn quadratic(minpoly: &[Q], symbol: &str) -> Result<Field> {
        if minpoly.len() != 3 || !minpoly[2].is_one() {
            return Err(Error::InvalidField(
                "quadratic minimal polynomial must be monic of degree 2".into(),
            ));
        }
        let disc = &minpoly[1] * &minpoly[1] - qi(4) * &minpoly[0];
        if is_rational_square(&disc) {
            return Err(Error::InvalidField(
                "minimal polynomial has a rational root".into(),
            ));
        }
        Ok(Field(Arc::new(FieldDescriptor {
            characteristic: 0,
            minpoly: minpoly.to_vec(),
            symbol: symbol.to_string(),
        })))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub fn minpoly(&self) -> &[Q] {
        &self.0.minpoly
    }

    pub fn is_finite(&self) -> bool {
        self.0.characteristic != 0
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.characteristic().pow(self.degree() as u32))
    }

    /// The prime field this field is built over.
    pub fn base(&self) -> Field {
        if self.degree() == 1 {
            return self.clone();
        }
        match self.characteristic() {
            0 => Field::rationals_with_symbol(self.symbol()),
            p => Field::prime_with_symbol(p, self.symbol()).expect("validated prime"),
        }
    }

    /// Whether `other` is this field's prime field.
    pub fn is_base_of(&self, other: &Field) -> bool {
        self.degree() == 1 && self.characteristic() == other.characteristic()
    }

    fn reduce_scalar(&self, x: &Q) -> Q {
        match self.characteristic() {
            0 => x.clone(),
            p => {
                let bp = BigInt::from(p);
                let n = (x.numer() % &bp + &bp) % &bp;
                let d = (x.denom() % &bp + &bp) % &bp;
                let n = n.to_u64().unwrap();
                let d = d.to_u64().unwrap();
                assert!(d != 0, "denominator divisible by the characteristic");
                qi((n * mod_inv(d, p) % p) as i64)
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: self.zero_coords(),
            field: self.clone(),
        }
    }

    fn zero_coords(&self) -> Coords {
        match self.characteristic() {
            0 => Coords::Rational(vec![Q::zero(); self.degree()]),
            _ => Coords::Modular(smallvec![0; self.degree()]),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_q(&qi(n))
    }

    /// Embeds a rational (reduced mod p in positive characteristic).
    pub fn from_q(&self, x: &Q) -> FieldElement {
        let mut coords = vec![Q::zero(); self.degree()];
        coords[0] = x.clone();
        self.from_coords(&coords)
    }

    /// The generator `w`.
    pub fn gen(&self) -> FieldElement {
        if self.degree() == 1 {
            // w is a root of μ = w, i.e. 0; there is no separate generator.
            return self.zero();
        }
        let mut coords = vec![Q::zero(); self.degree()];
        coords[1] = Q::one();
        self.from_coords(&coords)
    }

    pub fn from_coords(&self, coords: &[Q]) -> FieldElement {
        assert_eq!(coords.len(), self.degree(), "coordinate length");
        let coords = match self.characteristic() {
            0 => Coords::Rational(coords.to_vec()),
            _ => Coords::Modular(
                coords
                    .iter()
                    .map(|c| self.reduce_scalar(c).to_integer().to_u64().unwrap())
                    .collect(),
            ),
        };
        FieldElement {
            coords,
            field: self.clone(),
        }
    }

    /// Element number `n` in the canonical enumeration of a finite field
    /// (base-p digits of `n`, lowest coordinate first).
    pub fn element_at(&self, mut n: u64) -> FieldElement {
        let p = self.characteristic();
        assert!(p != 0, "enumeration of an infinite field");
        let mut coords = SmallVec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            coords.push(n % p);
            n /= p;
        }
        FieldElement {
            coords: Coords::Modular(coords),
            field: self.clone(),
        }
    }

    /// All elements of a finite field, zero first.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        let size = self.size()?;
        Some((0..size).map(|n| self.element_at(n)).collect())
    }

    /// Whether `x` has a square root in this field.
    pub fn is_square(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        if let Some(elems) = self.elements() {
            return elems.iter().any(|s| s.mul(s) == *x);
        }
        let c = x.coords();
        if self.degree() == 1 {
            return is_rational_square(&c[0]);
        }
        // ℚ(√D) with √D = w + β/2 for μ = w² + βw + γ.
        let beta = &self.minpoly()[1];
        let gamma = &self.minpoly()[0];
        let half_beta = beta / qi(2);
        let d = &half_beta * &half_beta - gamma;
        // x = a + b·w = (a − bβ/2) + b·√D
        let b = c[1].clone();
        let a = &c[0] - &b * &half_beta;
        if b.is_zero() {
            return is_rational_square(&a) || is_rational_square(&(&a / &d));
        }
        let norm = &a * &a - &d * &b * &b;
        let Some(r) = rational_sqrt(&norm) else {
            return false;
        };
        [(&a + &r) / qi(2), (&a - &r) / qi(2)]
            .iter()
            .any(|big_x| !big_x.is_zero() && is_rational_square(big_x))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.characteristic() {
            0 => "Q".to_string(),
            p => format!("F_{p}"),
        };
        if self.degree() == 1 {
            return write!(f, "{base}");
        }
        let mp = Poly::new(self, self.minpoly().iter().map(|c| self.from_q(c)).collect());
        write!(
            f,
            "{base}[{s}]/({})",
            poly_to_string(&mp, self.symbol()),
            s = self.symbol()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coords {
    Modular(SmallVec<[u64; 4]>),
    Rational(Vec<Q>),
}

/// An element of a residue field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Coords,
    field: Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Checked field arithmetic.
pub fn fld_arith(op: FieldOp, a: &FieldElement, b: Option<&FieldElement>) -> Result<FieldElement> {
    if let Some(b) = b {
        if a.field != b.field {
            return Err(Error::FieldMismatch);
        }
    }
    let need_b = || b.ok_or(Error::FieldMismatch);
    match op {
        FieldOp::Add => Ok(a.add(need_b()?)),
        FieldOp::Mul => Ok(a.mul(need_b()?)),
        FieldOp::Neg => Ok(a.neg()),
        FieldOp::Inv => a.checked_inv(),
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coordinates as rationals (integers `0..p` in characteristic p).
    pub fn coords(&self) -> Vec<Q> {
        match &self.coords {
            Coords::Modular(v) => v.iter().map(|c| qi(*c as i64)).collect(),
            Coords::Rational(v) => v.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coords {
            Coords::Modular(v) => v.iter().all(|c| *c == 0),
            Coords::Rational(v) => v.iter().all(|c| c.is_zero()),
        }
    }

    /// Lies in the prime field.
    pub fn in_base(&self) -> bool {
        match &self.coords {
            Coords::Modular(v) => v[1..].iter().all(|c| *c == 0),
            Coords::Rational(v) => v[1..].iter().all(|c| c.is_zero()),
        }
    }

    /// Index in the canonical enumeration of a finite field.
    pub fn index(&self) -> Option<u64> {
        let p = self.field.characteristic();
        match &self.coords {
            Coords::Modular(v) => Some(v.iter().rev().fold(0, |acc, c| acc * p + c)),
            Coords::Rational(_) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = match (&self.coords, &other.coords) {
            (Coords::Modular(a), Coords::Modular(b)) => {
                let p = self.field.characteristic();
                Coords::Modular(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Coords::Rational(a), Coords::Rational(b)) => {
                Coords::Rational(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("field mismatch"),
        };
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        let coords = match &self.coords {
            Coords::Modular(a) => {
                let p = self.field.characteristic();
                Coords::Modular(a.iter().map(|x| (p - x) % p).collect())
            }
            Coords::Rational(a) => Coords::Rational(a.iter().map(|x| -x).collect()),
        };
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.field.degree();
        let mp = self.field.minpoly();
        let coords = match (&self.coords, &other.coords) {
            (Coords::Modular(a), Coords::Modular(b)) => {
                let p = self.field.characteristic();
                if k == 1 {
                    Coords::Modular(smallvec![a[0] * b[0] % p])
                } else {
                    let mut prod: SmallVec<[u64; 4]> = smallvec![0u64; 2 * k - 1];
                    for (i, x) in a.iter().enumerate() {
                        for (j, y) in b.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    let mpm: Vec<u64> = mp.iter().map(|c| c.to_integer().to_u64().unwrap()).collect();
                    for top in (k..prod.len()).rev() {
                        let c = prod[top];
                        if c == 0 {
                            continue;
                        }
                        for (j, m) in mpm.iter().enumerate() {
                            let idx = top - k + j;
                            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                        }
                    }
                    prod.truncate(k);
                    Coords::Modular(prod)
                }
            }
            (Coords::Rational(a), Coords::Rational(b)) => {
                if k == 1 {
                    Coords::Rational(vec![&a[0] * &b[0]])
                } else {
                    let mut prod = vec![Q::zero(); 2 * k - 1];
                    for (i, x) in a.iter().enumerate() {
                        for (j, y) in b.iter().enumerate() {
                            prod[i + j] += x * y;
                        }
                    }
                    for top in (k..prod.len()).rev() {
                        let c = prod[top].clone();
                        if c.is_zero() {
                            continue;
                        }
                        for (j, m) in mp.iter().enumerate() {
                            prod[top - k + j] -= &c * m;
                        }
                    }
                    prod.truncate(k);
                    Coords::Rational(prod)
                }
            }
            _ => panic!("field mismatch"),
        };
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = self.field.degree();
        if k == 1 {
            let coords = match &self.coords {
                Coords::Modular(a) => Coords::Modular(smallvec![mod_inv(a[0], self.field.characteristic())]),
                Coords::Rational(a) => Coords::Rational(vec![a[0].recip()]),
            };
            return Ok(FieldElement {
                coords,
                field: self.field.clone(),
            });
        }
        // Solve Σ x_j (self · w^j) = 1 over the prime field.
        let mut col = self.clone();
        let w = self.field.gen();
        let mut columns = Vec::with_capacity(k);
        for _ in 0..k {
            columns.push(col.clone());
            col = col.mul(&w);
        }
        let sol =
            solve_over_base(&columns, &self.field.one()).expect("nonzero element of a field is invertible");
        Ok(self.field.from_coords(&sol))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Rendering in the expression language, e.g. `2+w` or `-1/2*i`.
    pub fn to_expr(&self) -> String {
        let coords = self.coords();
        let sym = self.field.symbol();
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{i}"),
            };
            let term = if mono.is_empty() {
                fmt_q(c)
            } else if c.is_one() {
                mono
            } else if *c == -Q::one() {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", fmt_q(c))
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push('-');
                out.push_str(rest);
            } else {
                out.push('+');
                out.push_str(t);
            }
        }
        out
    }

    /// Whether the expression form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        let e = self.to_expr();
        e[1..].contains(['+', '-']) || e.contains('/') || e.starts_with('-')
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl Coeff for FieldElement {
    type Ctx = Field;

    fn ctx(&self) -> Field {
        self.field.clone()
    }
    fn zero(ctx: &Field) -> Self {
        ctx.zero()
    }
    fn one(ctx: &Field) -> Self {
        ctx.one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        FieldElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
}

/// Renders a polynomial over a residue field in variable `var`.
pub fn poly_to_string(p: &Poly<FieldElement>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let cs = if c.is_compound() {
            format!("({})", c.to_expr())
        } else {
            c.to_expr()
        };
        terms.push(if mono.is_empty() {
            cs
        } else if c.is_one() {
            mono
        } else {
            format!("{cs}*{mono}")
        });
    }
    terms.join(" + ")
}

/// Gaussian elimination over the prime field: coordinates `x` with
/// `Σ x_j · vectors[j] = target`, or `None`.
fn solve_over_base(vectors: &[FieldElement], target: &FieldElement) -> Option<Vec<Q>> {
    let field = target.field();
    let base = field.base();
    let k = field.degree();
    let n = vectors.len();
    let red = |x: &Q| base.reduce_scalar(x);
    // rows = coordinates, columns = vectors, augmented with target
    let mut m: Vec<Vec<Q>> = (0..k)
        .map(|r| {
            let mut row: Vec<Q> = vectors.iter().map(|v| v.coords()[r].clone()).collect();
            row.push(target.coords()[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..k).find(|r| !m[*r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = base.from_q(&m[row][col]).checked_inv().ok()?.coords()[0].clone();
        for c in col..=n {
            m[row][c] = red(&(&m[row][c] * &inv));
        }
        for r in 0..k {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let v = &m[r][c] - &f * &m[row][c];
                    m[r][c] = red(&v);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == k {
            break;
        }
    }
    if (row..k).any(|r| !m[r][n].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); n];
    for (r, col) in pivots.iter().enumerate() {
        sol[*col] = m[r][n].clone();
    }
    Some(sol)
}

/// Outcome of a linear solve over a subfield.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Coefficients(Vec<Q>),
    NoSolution,
}

/// Coordinates of `target` in the span of `vectors`, viewing the common
/// field as a vector space over `subfield`. Only the prime field is
/// supported as a subfield.
pub fn fld_linear_solve(
    vectors: &[FieldElement],
    target: &FieldElement,
    subfield: &Field,
) -> Result<LinearSolution> {
    let field = target.field();
    if vectors.iter().any(|v| v.field() != field) {
        return Err(Error::FieldMismatch);
    }
    if !subfield.is_base_of(field) {
        return Err(Error::SubfieldMismatch(format!(
            "{subfield} is not the prime field of {field}"
        )));
    }
    Ok(match solve_over_base(vectors, target) {
        Some(c) => LinearSolution::Coefficients(c),
        None => LinearSolution::NoSolution,
    })
}

/// Exhaustive search for a monic factor of degree `1..=deg/2`.
fn find_factor_finite(field: &Field, f: &Poly<FieldElement>) -> Option<Poly<FieldElement>> {
    let deg = f.degree()?;
    let size = field.size()?;
    for k in 1..=deg / 2 {
        let count = size.checked_pow(k as u32)?;
        for n in 0..count {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut m = n;
            for _ in 0..k {
                coeffs.push(field.element_at(m % size));
                m /= size;
            }
            coeffs.push(field.one());
            let g = Poly::new(field, coeffs);
            if f.div_rem(&g).1.is_zero() {
                return Some(g);
            }
        }
    }
    None
}

/// Whether a polynomial of degree ≥ 1 has a root in its coefficient field.
/// Exhaustive for finite fields; for characteristic zero only degrees ≤ 2
/// are decided (via the discriminant).
pub fn has_root(f: &Poly<FieldElement>) -> Option<bool> {
    let field = f.ctx();
    if let Some(elems) = field.elements() {
        return Some(elems.iter().any(|e| f.eval(e).is_zero()));
    }
    match f.degree()? {
        0 => Some(false),
        1 => Some(true),
        2 => {
            let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
            let disc = b.mul(&b).sub(&field.from_int(4).mul(&a).mul(&c));
            Some(field.is_square(&disc))
        }
        _ => None,
    }
}

/// A monic polynomial of degree ≤ `max_degree` without roots in `field`.
pub fn fld_find_rootless_monic(field: &Field, max_degree: usize) -> Result<Poly<FieldElement>> {
    if max_degree < 2 {
        return Err(Error::NotFound(max_degree));
    }
    if let Some(size) = field.size() {
        // x² + b x + c, c varying fastest
        for n in 0..size * size {
            let c = field.element_at(n % size);
            let b = field.element_at(n / size);
            let f = Poly::new(field, vec![c, b, field.one()]);
            if has_root(&f) == Some(false) {
                return Ok(f);
            }
        }
        return Err(Error::NotFound(max_degree));
    }
    let x2_minus = |r: i64| Poly::new(field, vec![field.from_int(-r), field.zero(), field.one()]);
    if field.degree() == 1 {
        return Ok(Poly::new(field, vec![field.one(), field.zero(), field.one()]));
    }
    for r in [-1i64, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7] {
        let f = x2_minus(r);
        if has_root(&f) == Some(false) {
            return Ok(f);
        }
    }
    Err(Error::NotFound(max_degree))
}

/// Convenience for tests and presets: `F_9 = F_3[w]/(w² − w − 1)`.
pub fn f9() -> Field {
    Field::extension(3, &[-1, -1, 1], "w").expect("irreducible")
}

/// `ℚ(i)` with `i² = −1`.
pub fn gaussian_rationals() -> Field {
    Field::quadratic(&[qi(1), qi(0), qi(1)], "i").expect("irreducible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valgroup::q;

    #[test]
    fn f9_generator_squares_to_w_plus_one() {
        let f = f9();
        let w = f.gen();
        let w2 = fld_arith(FieldOp::Mul, &w, Some(&w)).unwrap();
        assert_eq!(w2, w.add(&f.one()));
    }

    #[test]
    fn gaussian_i_squared() {
        let f = gaussian_rationals();
        let i = f.gen();
        assert_eq!(i.mul(&i), f.from_int(-1));
    }

    #[test]
    fn add_negation_is_zero() {
        for f in [
            Field::prime(3).unwrap(),
            f9(),
            gaussian_rationals(),
            Field::rationals(),
        ] {
            let a = f.gen().add(&f.from_int(2));
            assert!(a.add(&a.neg()).is_zero());
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = f9();
        assert_eq!(
            fld_arith(FieldOp::Inv, &f.zero(), None),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = f9().one();
        let b = gaussian_rationals().one();
        assert_eq!(fld_arith(FieldOp::Add, &a, Some(&b)), Err(Error::FieldMismatch));
    }

    #[test]
    fn inverses_in_f9_exhaustive() {
        let f = f9();
        for e in f.elements().unwrap().into_iter().skip(1) {
            assert_eq!(e.mul(&e.checked_inv().unwrap()), f.one());
        }
    }

    #[test]
    fn reducible_minimal_polynomials_rejected() {
        // w² − 1 = (w−1)(w+1)
        assert!(Field::extension(3, &[-1, 0, 1], "w").is_err());
        // (w²+1)² over F_3 has no roots but a quadratic factor
        assert!(Field::extension(3, &[1, 0, 2, 0, 1], "w").is_err());
        assert!(Field::extension(3, &[2, 0, 0, 1], "w").is_err());
        assert!(Field::quadratic(&[qi(-4), qi(0), qi(1)], "w").is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::extension(2, &[1, 1, 0, 0, 1], "w").is_ok());
    }

    #[test]
    fn rootless_monic_over_f3_is_x2_plus_1() {
        let f = Field::prime(3).unwrap();
        let g = fld_find_rootless_monic(&f, 2).unwrap();
        assert_eq!(g, Poly::new(&f, vec![f.one(), f.zero(), f.one()]));
    }

    #[test]
    fn rootless_monic_over_q_is_x2_plus_1() {
        let f = Field::rationals();
        let g = fld_find_rootless_monic(&f, 2).unwrap();
        assert_eq!(poly_to_string(&g, "x"), "x^2 + 1");
    }

    #[test]
    fn rootless_monic_over_f9_has_no_root() {
        let f = f9();
        let g = fld_find_rootless_monic(&f, 2).unwrap();
        assert_eq!(g.degree(), Some(2));
        for e in f.elements().unwrap() {
            assert!(!g.eval(&e).is_zero());
        }
    }

    #[test]
    fn rootless_monic_over_gaussian_rationals() {
        let f = gaussian_rationals();
        let g = fld_find_rootless_monic(&f, 2).unwrap();
        // x² − 2: (a+bi)² = 2 forces ab = 0 and a² = 2 or b² = −2
        assert_eq!(g, Poly::new(&f, vec![f.from_int(-2), f.zero(), f.one()]));
        assert_eq!(fld_find_rootless_monic(&f, 1), Err(Error::NotFound(1)));
    }

    #[test]
    fn squares_in_gaussian_rationals() {
        let f = gaussian_rationals();
        let i = f.gen();
        assert!(f.is_square(&f.from_int(-1)));
        assert!(f.is_square(&f.from_int(2).mul(&i))); // (1+i)²
        assert!(!f.is_square(&f.from_int(2)));
        assert!(!f.is_square(&i));
        let z = f.from_int(3).add(&f.from_int(4).mul(&i)); // (2+i)²
        assert!(f.is_square(&z));
    }

    #[test]
    fn linear_solve_examples() {
        let f = f9();
        let base = f.base();
        let one = f.one();
        let w = f.gen();
        let target = w.add(&f.from_int(2));
        assert_eq!(
            fld_linear_solve(&[one.clone(), w.clone()], &target, &base).unwrap(),
            LinearSolution::Coefficients(vec![qi(2), qi(1)])
        );
        // brute force over the three scalars confirms w+1 ∉ F_3·w
        for c in 0..3 {
            assert_ne!(w.mul(&f.from_int(c)), w.add(&one));
        }
        assert_eq!(
            fld_linear_solve(std::slice::from_ref(&w), &w.add(&one), &base).unwrap(),
            LinearSolution::NoSolution
        );
        let g = gaussian_rationals();
        assert_eq!(
            fld_linear_solve(&[g.one()], &g.gen(), &g.base()).unwrap(),
            LinearSolution::NoSolution
        );
    }

    #[test]
    fn linear_solve_subfield_mismatch() {
        let f = f9();
        assert!(matches!(
            fld_linear_solve(&[f.one()], &f.gen(), &Field::prime(5).unwrap()),
            Err(Error::SubfieldMismatch(_))
        ));
    }

    #[test]
    fn field_spec_from_json() {
        let spec: FieldSpec =
            serde_json::from_str(r#"{"kind":"ExtFinite","p":3,"minpoly":[-1,-1,1]}"#).unwrap();
        assert_eq!(spec.build().unwrap(), f9());
        let spec: FieldSpec =
            serde_json::from_str(r#"{"kind":"QuadraticExt","d":"-1","symbol":"i"}"#).unwrap();
        assert_eq!(spec.build().unwrap(), gaussian_rationals());
    }

    #[test]
    fn expression_rendering() {
        let f = f9();
        assert_eq!(f.gen().add(&f.from_int(2)).to_expr(), "2+w");
        let g = gaussian_rationals();
        let z = g.from_q(&q(-1, 2)).add(&g.gen().mul(&g.from_int(3)));
        assert_eq!(z.to_expr(), "-1/2+3*i");
    }
}
