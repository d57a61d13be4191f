//! Dense univariate polynomials over a field, generic over the coefficient
//! type. Used for residue polynomials, for the `u = t^{1/M}` polynomials
//! inside valued-field elements, and for polynomials in `x` over `K`.

use std::fmt::Debug;

/// A field element that knows its own field (the context), so that zero
/// polynomials can still produce zeros and ones of the right field.
pub trait Coeff: Clone + PartialEq + Debug {
    type Ctx: Clone + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; callers guarantee `self != 0`.
    fn inv(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }
}

/// Coefficients low-to-high; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Coeff> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(ctx: &C::Ctx, coeffs: Vec<C>) -> Self {
        let mut p = Poly {
            ctx: ctx.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(ctx: &C::Ctx) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Self::constant(C::one(ctx))
    }

    pub fn constant(c: C) -> Self {
        let ctx = c.ctx();
        Self::new(&ctx, vec![c])
    }

    /// `c·X^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![C::zero(&ctx); k];
        coeffs.push(c);
        Self::new(&ctx, coeffs)
    }

    /// The variable `X`.
    pub fn x(ctx: &C::Ctx) -> Self {
        Self::monomial(C::one(ctx), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(&self.ctx, coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![C::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ctx, out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut quot = vec![C::zero(&self.ctx); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(&self.ctx, quot), Self::new(&self.ctx, rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `self(X^k)`
    pub fn inflate(&self, k: usize) -> Self {
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.ctx); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(&self.ctx, coeffs)
    }

    /// Inverse of [`Poly::inflate`]; caller guarantees all exponents are
    /// multiples of `k`.
    pub fn deflate(&self, k: usize) -> Self {
        if k == 1 {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().step_by(k).cloned().collect();
        Self::new(&self.ctx, coeffs)
    }

    /// Divides by `X^k`; caller guarantees the low coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// gcd of the exponents carrying nonzero coefficients (0 if none are
    /// positive).
    pub fn exponent_gcd(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, c)| *i > 0 && !c.is_zero())
            .fold(0, |g, (i, _)| num_integer::gcd(g, i))
    }

    /// Substitutes a polynomial for the variable: `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn map<D: Coeff>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(ctx, self.coeffs.iter().map(f).collect())
    }
}
