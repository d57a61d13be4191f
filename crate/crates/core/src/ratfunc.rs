//! Rational functions in `x` over the valued field `K`.

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::{Coeff, Poly};
use crate::residue_field::FieldElement;
use crate::valgroup::Valuation;
use crate::valued_field::{ValuedElement, ValuedField};

/// Polynomials in `x` over `K`.
pub type KPoly = Poly<ValuedElement>;

/// Default cap on the degree of any polynomial built by this module.
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: KPoly,
    den: KPoly,
}

/// Result of evaluating a rational function at a point of `K`.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalResult {
    Value(ValuedElement),
    Pole,
}

impl EvalResult {
    pub fn value(&self) -> Option<&ValuedElement> {
        match self {
            EvalResult::Value(v) => Some(v),
            EvalResult::Pole => None,
        }
    }
}

/// Valuation of a rational function at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValAt {
    Val(Valuation),
    Pole,
}

fn check_cap(p: &KPoly) -> Result<()> {
    match p.degree() {
        Some(d) if d > DEFAULT_DEGREE_CAP => Err(Error::DegreeOverflow {
            degree: d,
            cap: DEFAULT_DEGREE_CAP,
        }),
        _ => Ok(()),
    }
}

type UPoly = Poly<FieldElement>;

fn upoly_lcm(a: &UPoly, b: &UPoly) -> UPoly {
    a.mul(&b.div_rem(&a.gcd(b)).0)
}

/// Clears denominators: `p = P / l` with `P` a polynomial in `x` over `F[u]`,
/// `u = t^{1/ram}`, and `l ∈ F[u]`.
fn lift_exact(p: &KPoly, ram: u64) -> (Vec<UPoly>, UPoly) {
    let parts: Vec<(UPoly, UPoly)> = p
        .coeffs()
        .iter()
        .map(|c| {
            let k = (ram / c.ram()) as usize;
            (c.num().inflate(k), c.den().inflate(k))
        })
        .collect();
    let field = p.ctx().field().clone();
    let l = parts
        .iter()
        .filter(|(n, _)| !n.is_zero())
        .fold(UPoly::one(&field), |acc, (_, d)| upoly_lcm(&acc, d));
    let lifted = parts
        .into_iter()
        .map(|(n, d)| if n.is_zero() { n } else { n.mul(&l.div_rem(&d).0) })
        .collect();
    (lifted, l)
}

fn lift(p: &KPoly, ram: u64) -> Vec<UPoly> {
    lift_exact(p, ram).0
}

fn common_ram<'a>(ps: impl IntoIterator<Item = &'a KPoly>) -> u64 {
    ps.into_iter()
        .flat_map(|p| p.coeffs())
        .fold(1u64, |m, c| num_integer::lcm(m, c.ram()))
}

/// Product in `K[x]`, multiplying the lifts so each coefficient of the
/// result is normalized once.
fn kmul(a: &KPoly, b: &KPoly) -> KPoly {
    let kv = a.ctx().clone();
    if a.is_zero() || b.is_zero() {
        return KPoly::zero(&kv);
    }
    if a.is_constant() {
        return b.scale(&a.coeff(0));
    }
    if b.is_constant() {
        return a.scale(&b.coeff(0));
    }
    let ram = common_ram([a, b]);
    let ((x, lx), (y, ly)) = (lift_exact(a, ram), lift_exact(b, ram));
    let field = kv.field().clone();
    let mut prod = vec![UPoly::zero(&field); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            prod[i + j] = prod[i + j].add(&xi.mul(yj));
        }
    }
    let den = lx.mul(&ly);
    let coeffs = prod
        .into_iter()
        .map(|c| ValuedElement::from_parts(&kv, c, den.clone(), ram).expect("ramification in group"))
        .collect();
    KPoly::new(&kv, coeffs)
}

fn primitive(mut v: Vec<UPoly>) -> Vec<UPoly> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let Some(first) = v.iter().find(|c| !c.is_zero()) else {
        return v;
    };
    let mut g = first.monic();
    for c in &v {
        if g.is_constant() {
            break;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    let g = g.scale(v.last().unwrap().leading().unwrap());
    v.iter().map(|c| c.div_rem(&g).0).collect()
}

/// Pseudo-remainder of `a` by `b`, both nonzero.
fn prem(mut a: Vec<UPoly>, b: &[UPoly]) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let la = a.last().unwrap().clone();
        let shift = a.len() - 1 - db;
        for c in a.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bj) in b.iter().enumerate() {
            a[shift + j] = a[shift + j].sub(&la.mul(bj));
        }
        a.pop();
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
fn inv_mod(a: &UPoly, m: &UPoly) -> Option<UPoly> {
    let field = m.ctx().clone();
    let (mut r0, mut r1) = (m.clone(), a.div_rem(m).1);
    let (mut s0, mut s1) = (UPoly::zero(&field), UPoly::one(&field));
    while !r1.is_zero() {
        let (quo, rem) = r0.div_rem(&r1);
        let s2 = s0.sub(&quo.mul(&s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if !r0.is_constant() {
        return None;
    }
    Some(s0.scale(&r0.coeff(0).inv()).div_rem(m).1)
}

/// Degree of the gcd of the images of `a` and `b` in `(F[u]/m)[x]`, or
/// `None` if Euclid meets a leading coefficient that is not a unit. When it
/// succeeds this bounds the degree of the gcd over `K` from above.
fn image_gcd_degree(a: &[UPoly], b: &[UPoly], m: &UPoly) -> Option<usize> {
    let reduce = |v: &[UPoly]| -> Vec<UPoly> { v.iter().map(|c| c.div_rem(m).1).collect() };
    let (mut x, mut y) = (reduce(a), reduce(b));
    if x.last()?.is_zero() || y.last()?.is_zero() {
        return None;
    }
    while !y.is_empty() {
        let inv = inv_mod(y.last().unwrap(), m)?;
        let dy = y.len() - 1;
        while x.len() > dy {
            let c = x.last().unwrap().mul(&inv).div_rem(m).1;
            let shift = x.len() - 1 - dy;
            for (j, yj) in y.iter().enumerate() {
                x[shift + j] = x[shift + j].sub(&c.mul(yj)).div_rem(m).1;
            }
            x.pop();
            while x.last().is_some_and(|c| c.is_zero()) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len() - 1)
}

/// Moduli used for the gcd degree test: `u - n` over infinite fields, and
/// fixed monic polynomials of degree about `log_q 10^4` over finite ones.
fn test_moduli(field: &crate::residue_field::Field) -> Vec<UPoly> {
    match field.size() {
        None => [2i64, 3]
            .iter()
            .map(|&n| UPoly::new(field, vec![field.from_int(-n), field.one()]))
            .collect(),
        Some(q) => {
            let mut k = 1;
            while q.saturating_pow(k as u32) < 10_000 {
                k += 1;
            }
            (0..2u64)
                .map(|s| {
                    let mut coeffs: Vec<FieldElement> = (0..k as u64)
                        .map(|i| field.element_at((i * 7 + s * 5 + i * i + 1) % q))
                        .collect();
                    coeffs.push(field.one());
                    UPoly::new(field, coeffs)
                })
                .collect()
        }
    }
}

fn from_lift(kv: &ValuedField, v: Vec<UPoly>, ram: u64) -> KPoly {
    let field = kv.field().clone();
    let coeffs = v
        .into_iter()
        .map(|c| ValuedElement::from_parts(kv, c, UPoly::one(&field), ram).expect("ramification in group"))
        .collect();
    KPoly::new(kv, coeffs).monic()
}

/// Monic gcd over `K`. A modular image settles the common coprime case;
/// otherwise primitive remainder sequences over `F[u]` are used, since plain
/// Euclid over `K` swells the coefficients.
pub(crate) fn kpoly_gcd(a: &KPoly, b: &KPoly) -> KPoly {
    let kv = a.ctx().clone();
    if a.is_zero() || b.is_zero() {
        return if a.is_zero() { b.monic() } else { a.monic() };
    }
    if a.is_constant() || b.is_constant() {
        return KPoly::one(&kv);
    }
    let ram = common_ram([a, b]);
    let (mut x, mut y) = (primitive(lift(a, ram)), primitive(lift(b, ram)));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let mut bound = None;
    for m in test_moduli(kv.field()) {
        if let Some(d) = image_gcd_degree(&x, &y, &m) {
            bound = Some(d);
            break;
        }
    }
    match bound {
        Some(0) => return KPoly::one(&kv),
        Some(d) if d + 1 == y.len() => {
            let yk = from_lift(&kv, y.clone(), ram);
            let xk = from_lift(&kv, x.clone(), ram);
            if xk.div_rem(&yk).1.is_zero() {
                return yk;
            }
        }
        _ => {}
    }
    while !y.is_empty() {
        let r = primitive(prem(x, &y));
        x = y;
        y = r;
    }
    from_lift(&kv, x, ram)
}

/// Cancels common factors and makes the denominator monic.
pub fn rf_normalize(num: KPoly, den: KPoly) -> Result<RatFunc> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    check_cap(&num)?;
    check_cap(&den)?;
    let kv = den.ctx().clone();
    if num.is_zero() {
        return Ok(RatFunc {
            num,
            den: KPoly::one(&kv),
        });
    }
    let (mut num, mut den) = (num, den);
    if !den.is_constant() {
        // strip common powers of x before the general gcd
        let k = num.order().unwrap().min(den.order().unwrap());
        if k > 0 {
            num = num.shift_down(k);
            den = den.shift_down(k);
        }
        if !den.is_constant() && !num.is_constant() {
            let g = kpoly_gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
    }
    let lead = den.leading().unwrap().checked_inv()?;
    if !crate::poly::Coeff::is_one(&lead) {
        num = num.scale(&lead);
        den = den.scale(&lead);
    }
    Ok(RatFunc { num, den })
}

impl RatFunc {
    pub fn from_poly(p: KPoly) -> RatFunc {
        let kv = p.ctx().clone();
        RatFunc {
            num: p,
            den: KPoly::one(&kv),
        }
    }

    pub fn constant(c: ValuedElement) -> RatFunc {
        Self::from_poly(KPoly::constant(c))
    }

    pub fn x(kv: &ValuedField) -> RatFunc {
        Self::from_poly(KPoly::x(kv))
    }

    pub fn kv(&self) -> &ValuedField {
        self.den.ctx()
    }

    pub fn num(&self) -> &KPoly {
        &self.num
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.den == other.den {
            return rf_normalize(self.num.add(&other.num), self.den.clone());
        }
        let g = kpoly_gcd(&self.den, &other.den);
        if g.is_constant() {
            return rf_normalize(
                kmul(&self.num, &other.den).add(&kmul(&other.num, &self.den)),
                kmul(&self.den, &other.den),
            );
        }
        let (b, d) = (self.den.div_rem(&g).0, other.den.div_rem(&g).0);
        rf_normalize(
            kmul(&self.num, &d).add(&kmul(&other.num, &b)),
            kmul(&kmul(&b, &d), &g),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.is_zero() || other.is_zero() {
            return Ok(RatFunc::from_poly(KPoly::zero(self.kv())));
        }
        // cross-cancel so only the smaller gcds are needed
        let g1 = kpoly_gcd(&self.num, &other.den);
        let g2 = kpoly_gcd(&other.num, &self.den);
        let cut = |p: &KPoly, g: &KPoly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.div_rem(g).0
            }
        };
        rf_normalize(
            kmul(&cut(&self.num, &g1), &cut(&other.num, &g2)),
            kmul(&cut(&self.den, &g2), &cut(&other.den, &g1)),
        )
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = rf_normalize(other.den.clone(), other.num.clone())?;
        self.mul(&inv)
    }

    pub fn scale(&self, c: &ValuedElement) -> RatFunc {
        if c.is_zero() {
            return RatFunc::from_poly(KPoly::zero(self.kv()));
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<RatFunc> {
        let num = self.num.pow(e);
        let den = self.den.pow(e);
        check_cap(&num)?;
        check_cap(&den)?;
        Ok(RatFunc { num, den })
    }

    /// Renders as an expression in `x`.
    pub fn to_expr(&self) -> String {
        let num = kpoly_expr(&self.num);
        if self.den.is_constant() {
            return num;
        }
        let wrap = |s: String| {
            if s.contains(['+', '-', '*', '/']) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num), wrap(kpoly_expr(&self.den)))
    }

    /// `{"num":[...],"den":[...]}` with coefficient expressions low-to-high.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs = |p: &KPoly| -> Vec<String> { p.coeffs().iter().map(|c| c.to_expr()).collect() };
        json!({"num": coeffs(&self.num), "den": coeffs(&self.den)})
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Renders a polynomial in `x` over `K`.
pub fn kpoly_expr(p: &KPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let ce = c.to_expr();
        let term = if mono.is_empty() {
            ce
        } else if crate::poly::Coeff::is_one(c) {
            mono
        } else if ce.contains(['+', '-', '/']) {
            format!("({ce})*{mono}")
        } else {
            format!("{ce}*{mono}")
        };
        terms.push(term);
    }
    terms.join("+")
}

/// Exact evaluation; `Pole` iff the (reduced) denominator vanishes.
pub fn rf_eval(phi: &RatFunc, a: &ValuedElement) -> EvalResult {
    let d = phi.den.eval(a);
    if d.is_zero() {
        return EvalResult::Pole;
    }
    let n = phi.num.eval(a);
    EvalResult::Value(n.checked_div(&d).expect("nonzero denominator"))
}

pub fn rf_val_at(phi: &RatFunc, a: &ValuedElement) -> ValAt {
    match rf_eval(phi, a) {
        EvalResult::Pole => ValAt::Pole,
        EvalResult::Value(v) => ValAt::Val(v.valuation()),
    }
}

/// `outer ∘ inner`, normalized.
pub fn rf_compose(outer: &RatFunc, inner: &RatFunc) -> Result<RatFunc> {
    if inner.is_constant() {
        let c = inner.num.coeff(0).checked_div(&inner.den.coeff(0))?;
        return match rf_eval(outer, &c) {
            EvalResult::Pole => Err(Error::UndefinedComposite),
            EvalResult::Value(v) => Ok(RatFunc::constant(v)),
        };
    }
    let n = outer.degree();
    if n * inner.degree() > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeOverflow {
            degree: n * inner.degree(),
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    let kv = outer.kv();
    let a_pows: Vec<KPoly> = std::iter::successors(Some(KPoly::one(kv)), |p| Some(kmul(p, &inner.num)))
        .take(n + 1)
        .collect();
    let b_pows: Vec<KPoly> = std::iter::successors(Some(KPoly::one(kv)), |p| Some(kmul(p, &inner.den)))
        .take(n + 1)
        .collect();
    let homogenize = |p: &KPoly| {
        let mut acc = KPoly::zero(kv);
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&kmul(&a_pows[i], &b_pows[n - i]).scale(c));
        }
        acc
    };
    let num = homogenize(&outer.num);
    let den = homogenize(&outer.den);
    if den.is_zero() {
        return Err(Error::UndefinedComposite);
    }
    rf_normalize(num, den)
}
