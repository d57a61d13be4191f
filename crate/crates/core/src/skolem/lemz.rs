//! Profile functions `φ ∈ Int^R(K, V)` with `v(φ(d)) ≤ ε` everywhere,
//! `v(φ(c)) = ε`, and `v(φ(d)) > 0` exactly when `v(d − c) > γ`.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ratfunc::{rf_eval, rf_normalize, EvalResult, KPoly, RatFunc};
use crate::residue_field::{fld_find_rootless_monic, poly_to_string};
use crate::valgroup::{fmt_q, q, qi, GroupDescriptor, Valuation, Q};
use crate::valued_field::{ValuedElement, ValuedField};

#[derive(Clone, Debug, PartialEq)]
pub enum LemZBranch {
    /// Non-divisible group, with `α/m ∉ Γ`; `eps_divisible` records
    /// whether `ε/m ∈ Γ`.
    NonDivisible { alpha: Q, m: u64, eps_divisible: bool },
    /// Divisible group; `f` is a monic polynomial without residue roots.
    ResidueRootless { f: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemZ {
    pub phi: RatFunc,
    pub gamma: Q,
    pub n: u64,
    pub va: Q,
    pub vb: Q,
    pub eps: Q,
    pub branch: LemZBranch,
}

impl LemZ {
    /// The predicted `v(φ(d))` as a function of `s = v(d − c)`
    /// (`None` for `d = c`).
    pub fn predicted(&self, s: Option<&Q>) -> Q {
        let Some(s) = s else { return self.eps.clone() };
        let n = qi(self.n as i64);
        match self.branch {
            LemZBranch::NonDivisible { .. } => {
                let ns = &n * s;
                if ns < self.vb {
                    Q::zero()
                } else if ns < self.va {
                    ns - &self.vb
                } else {
                    self.eps.clone()
                }
            }
            LemZBranch::ResidueRootless { .. } => {
                if *s < self.vb {
                    Q::zero()
                } else if *s <= self.va {
                    n * (s - &self.vb)
                } else {
                    self.eps.clone()
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let branch = match &self.branch {
            LemZBranch::NonDivisible {
                alpha,
                m,
                eps_divisible,
            } => {
                json!({"case": "non-divisible", "alpha": fmt_q(alpha), "m": m, "eps_over_m_in_group": eps_divisible})
            }
            LemZBranch::ResidueRootless { f } => json!({"case": "residue-rootless", "f": f}),
        };
        json!({
            "phi": self.phi.to_expr(),
            "gamma": fmt_q(&self.gamma),
            "n": self.n,
            "v_a": fmt_q(&self.va),
            "v_b": fmt_q(&self.vb),
            "epsilon": fmt_q(&self.eps),
            "branch": branch,
        })
    }
}

/// `(x − c)` as a polynomial.
fn shift(kv: &ValuedField, c: &ValuedElement) -> KPoly {
    KPoly::new(kv, vec![c.neg(), kv.one()])
}

pub fn construct_lemz(eps: &Q, delta: &Q, c: &ValuedElement) -> Result<LemZ> {
    let kv = c.kv();
    let group = kv.group();
    for (name, x) in [("epsilon", eps), ("delta", delta)] {
        if !group.contains(x) {
            return Err(Error::GroupMismatch(format!(
                "{name} = {} is not in {group}",
                fmt_q(x)
            )));
        }
        if !x.is_positive() {
            return Err(Error::Unsatisfiable(format!("{name} must be positive")));
        }
    }
    let one = kv.field().one();
    let xc = shift(kv, c);
    if let Some((alpha, m)) = group.non_divisible_witness() {
        let mq = qi(m as i64);
        let eps_divisible = group.contains(&(eps / &mq));
        let (n, va, vb) = if eps_divisible {
            (m, &alpha + &mq * delta + eps, &alpha + &mq * delta)
        } else {
            (
                2 * m,
                qi(2) * eps + qi(2) * &mq * delta,
                eps + qi(2) * &mq * delta,
            )
        };
        let a = kv.make(&va, &one)?;
        let b = kv.make(&vb, &one)?;
        let xn = xc.pow(n as u32);
        let phi = rf_normalize(xn.add(&KPoly::constant(a)), xn.add(&KPoly::constant(b)))?;
        let gamma = &vb / qi(n as i64);
        return Ok(LemZ {
            phi,
            gamma,
            n,
            va,
            vb,
            eps: eps.clone(),
            branch: LemZBranch::NonDivisible {
                alpha,
                m,
                eps_divisible,
            },
        });
    }
    let f = fld_find_rootless_monic(kv.field(), 2)?;
    let n = f.degree().expect("nonconstant") as u64;
    let step = eps / qi(n as i64);
    let vb = delta + &step;
    let va = &vb + &step;
    let a = kv.make(&va, &one)?;
    let b = kv.make(&vb, &one)?;
    // s^n f((x−c)/s) = Σ f_i s^{n−i} (x−c)^i
    let scaled = |s: &ValuedElement| -> Result<KPoly> {
        let mut acc = KPoly::zero(kv);
        for (i, fi) in f.coeffs().iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let coeff = kv.constant(fi.clone()).mul(&s.pow((n as usize - i) as i64)?);
            acc = acc.add(&xc.pow(i as u32).scale(&coeff));
        }
        Ok(acc)
    };
    let phi = rf_normalize(scaled(&a)?, scaled(&b)?)?;
    Ok(LemZ {
        phi,
        gamma: vb.clone(),
        n,
        va,
        vb,
        eps: eps.clone(),
        branch: LemZBranch::ResidueRootless {
            f: poly_to_string(&f, "x"),
        },
    })
}

/// Result of checking the three profile properties on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LemZCheck {
    pub points: usize,
    pub gamma_exceeds_delta: bool,
    pub violations: Vec<String>,
}

impl LemZCheck {
    pub fn ok(&self) -> bool {
        self.gamma_exceeds_delta && self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({"points": self.points, "gamma_exceeds_delta": self.gamma_exceeds_delta, "violations": self.violations})
    }
}

/// Grid of valuations straddling `γ` and `v(a)/n`, inside the group.
pub fn lemz_grid(kv: &ValuedField, lz: &LemZ, delta: &Q) -> Vec<Q> {
    let step = match kv.group() {
        GroupDescriptor::Integers => qi(1),
        GroupDescriptor::LocalizedIntegers { primes } => q(1, (primes[0] * primes[0]) as i64),
        GroupDescriptor::Rationals => q(1, 8),
    };
    let lo_anchor = if *delta < lz.gamma {
        delta.clone()
    } else {
        lz.gamma.clone()
    };
    let hi_anchor = &lz.va / qi(lz.n as i64);
    let mut lo = (&lo_anchor / &step).floor() * &step - qi(2);
    let mut hi = (&hi_anchor / &step).ceil() * &step + qi(2);
    let count = |lo: &Q, hi: &Q| ((hi - lo) / &step).to_integer().to_i64().unwrap_or(0) + 1;
    while count(&lo, &hi) < 30 {
        lo -= &step;
        hi += &step;
    }
    let mut out = Vec::new();
    let mut s = lo;
    while s <= hi {
        out.push(s.clone());
        s += &step;
    }
    out
}

/// Checks properties (i) to (iii) at `d = c + t^s·u` for every `s` in the grid
/// (with a random unit `u`), at `d = c`, and at `extra` random points.
pub fn verify_lemz<R: Rng>(
    lz: &LemZ,
    c: &ValuedElement,
    delta: &Q,
    grid: &[Q],
    extra: usize,
    rng: &mut R,
) -> Result<LemZCheck> {
    let kv = c.kv();
    let mut violations = Vec::new();
    let mut points = 0;
    let mut check_point = |d: &ValuedElement, violations: &mut Vec<String>| {
        points += 1;
        let s = d.sub(c).val_q();
        let val = match rf_eval(&lz.phi, d) {
            EvalResult::Pole => {
                violations.push(format!("pole at {}", d.to_expr()));
                return;
            }
            EvalResult::Value(y) => y.valuation(),
        };
        let Valuation::Finite(val) = val else {
            violations.push(format!("zero at {}", d.to_expr()));
            return;
        };
        if val > lz.eps {
            violations.push(format!("v(phi) = {} > epsilon at {}", fmt_q(&val), d.to_expr()));
        }
        let positive = val.is_positive();
        let near = match &s {
            None => true,
            Some(s) => *s > lz.gamma,
        };
        if positive != near {
            violations.push(format!("positivity mismatch at {}", d.to_expr()));
        }
        if s.is_none() && val != lz.eps {
            violations.push(format!("v(phi(c)) = {} != epsilon", fmt_q(&val)));
        }
        let predicted = lz.predicted(s.as_ref());
        if val != predicted {
            violations.push(format!(
                "profile mismatch at {}: {} vs predicted {}",
                d.to_expr(),
                fmt_q(&val),
                fmt_q(&predicted)
            ));
        }
    };
    check_point(c, &mut violations);
    for s in grid {
        let unit_residue = loop {
            let r = kv.random_residue(rng);
            if !r.is_zero() {
                break r;
            }
        };
        let d = c.add(&kv.make(s, &unit_residue)?);
        check_point(&d, &mut violations);
    }
    let range = crate::valued_field::ValuationConstraint::closed(qi(-4), qi(8));
    for _ in 0..extra {
        let y = kv.sample(
            rng,
            &crate::valued_field::SampleConstraints::valuation(range.clone()),
        )?;
        check_point(&c.add(&y), &mut violations);
    }
    Ok(LemZCheck {
        points,
        gamma_exceeds_delta: lz.gamma > *delta,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue_field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kv(group: GroupDescriptor) -> ValuedField {
        ValuedField::new(Field::prime(3).unwrap(), group).unwrap()
    }

    #[test]
    fn integers_eps_divisible() {
        let k = kv(GroupDescriptor::Integers);
        let lz = construct_lemz(&qi(2), &qi(1), &k.zero()).unwrap();
        assert_eq!((lz.n, lz.va.clone(), lz.vb.clone()), (2, qi(5), qi(3)));
        assert_eq!(lz.gamma, q(3, 2));
        for (s, expected) in [(0, 0), (1, 0), (2, 1), (3, 2), (5, 2)] {
            let d = k.t_pow(&qi(s)).unwrap();
            let v = rf_eval(&lz.phi, &d).value().unwrap().val_q().unwrap();
            assert_eq!(v, qi(expected), "s = {s}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let grid = lemz_grid(&k, &lz, &qi(1));
        assert!(grid.len() >= 30);
        let chk = verify_lemz(&lz, &k.zero(), &qi(1), &grid, 20, &mut rng).unwrap();
        assert!(chk.ok(), "{:?}", chk.violations);
    }

    #[test]
    fn integers_eps_not_divisible() {
        let k = kv(GroupDescriptor::Integers);
        let lz = construct_lemz(&qi(1), &qi(1), &k.zero()).unwrap();
        assert_eq!((lz.n, lz.va.clone(), lz.vb.clone()), (4, qi(6), qi(5)));
        assert_eq!(lz.gamma, q(5, 4));
    }

    #[test]
    fn rationals_residue_branch() {
        let k = kv(GroupDescriptor::Rationals);
        let lz = construct_lemz(&qi(1), &qi(1), &k.zero()).unwrap();
        assert_eq!(lz.n, 2);
        assert_eq!(lz.vb, q(3, 2));
        assert_eq!(lz.va, qi(2));
        assert_eq!(lz.gamma, q(3, 2));
        assert!(matches!(lz.branch, LemZBranch::ResidueRootless { .. }));
        // profile 0 / 2(s − 3/2) / 1
        for (s, expected) in [
            (q(1, 1), qi(0)),
            (q(3, 2), qi(0)),
            (q(7, 4), q(1, 2)),
            (qi(3), qi(1)),
        ] {
            let d = k.t_pow(&s).unwrap();
            let v = rf_eval(&lz.phi, &d).value().unwrap().val_q().unwrap();
            assert_eq!(v, expected);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let grid = lemz_grid(&k, &lz, &qi(1));
        let chk = verify_lemz(&lz, &k.zero(), &qi(1), &grid, 10, &mut rng).unwrap();
        assert!(chk.ok(), "{:?}", chk.violations);
    }

    #[test]
    fn dyadic_group_uses_m_three() {
        let k = kv(GroupDescriptor::localized(&[2]).unwrap());
        let c = k.t().add(&k.one());
        let lz = construct_lemz(&q(1, 2), &q(1, 4), &c).unwrap();
        assert!(matches!(lz.branch, LemZBranch::NonDivisible { m: 3, .. }));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = lemz_grid(&k, &lz, &q(1, 4));
        let chk = verify_lemz(&lz, &c, &q(1, 4), &grid, 10, &mut rng).unwrap();
        assert!(chk.ok(), "{:?}", chk.violations);
    }

    #[test]
    fn rejects_bad_parameters() {
        let k = kv(GroupDescriptor::Integers);
        assert!(construct_lemz(&q(1, 2), &qi(1), &k.zero()).is_err());
        assert!(construct_lemz(&qi(0), &qi(1), &k.zero()).is_err());
    }
}
