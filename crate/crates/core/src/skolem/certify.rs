//! Deciding `φ(V) ⊆ V` by exploring residue balls `c + t^k V`.

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::newton::nv_local_poly;
use crate::ratfunc::{rf_eval, EvalResult, KPoly, RatFunc};
use crate::residue_field::FieldElement;
use crate::valgroup::{fmt_q, qi, GroupDescriptor, Q};
use crate::valued_field::{SampleConstraints, ValuationConstraint, ValuedElement, ValuedField};

/// Upper bound on explored balls before giving up.
const NODE_BUDGET: usize = 50_000;
/// Number of sample points used when exhaustive search is unavailable.
const FALLBACK_SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMode {
    /// Ball exploration only; unsupported scenes are an error.
    Exhaustive,
    /// Ball exploration when supported, sampling otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertOutcome {
    Certified,
    /// A point of `V` where `φ` has negative valuation or a pole.
    Counterexample {
        point: ValuedElement,
        valuation: Option<Q>,
    },
    Unknown {
        depth: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    Certified,
    Branch,
    Counterexample,
    Unknown,
}

/// One ball `center + t^level V`; `bound` is `minval_num(0) − minval_den(0)`
/// after the shift `x = center + t^level y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchNode {
    pub center: String,
    pub level: u32,
    pub bound: String,
    pub status: NodeStatus,
    pub children: Vec<BranchNode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub outcome: CertOutcome,
    /// Deepest level reached.
    pub depth: u32,
    pub tree: Option<BranchNode>,
    /// Points evaluated in sampling mode.
    pub samples: usize,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let outcome = match &self.outcome {
            CertOutcome::Certified => json!({"kind": "CERTIFIED"}),
            CertOutcome::Counterexample { point, valuation } => json!({
                "kind": "COUNTEREXAMPLE",
                "point": point.to_expr(),
                "valuation": valuation.as_ref().map(fmt_q).unwrap_or_else(|| "POLE".into()),
            }),
            CertOutcome::Unknown { depth } => json!({"kind": "UNKNOWN", "depth": depth}),
        };
        json!({
            "outcome": outcome,
            "depth": self.depth,
            "samples": self.samples,
            "tree": self.tree,
        })
    }
}

struct Explorer<'a> {
    phi: &'a RatFunc,
    kv: ValuedField,
    residues: Vec<FieldElement>,
    depth_limit: u32,
    nodes: usize,
    max_depth: u32,
    counterexample: Option<(ValuedElement, Option<Q>)>,
    unknown: bool,
}

/// Minimum coefficient valuation and level-0 residue polynomial of `p`.
fn level_zero(p: &KPoly, kv: &ValuedField) -> Result<(Q, crate::poly::Poly<FieldElement>)> {
    let loc = nv_local_poly(p, &kv.one())?;
    Ok((loc.minval_at, loc.residue_poly))
}

impl Explorer<'_> {
    fn point_value(&self, x: &ValuedElement) -> Option<Option<Q>> {
        // Some(v) when the value is bad: negative valuation or a pole.
        match rf_eval(self.phi, x) {
            EvalResult::Pole => Some(None),
            EvalResult::Value(y) => match y.val_q() {
                Some(v) if v < qi(0) => Some(Some(v)),
                _ => None,
            },
        }
    }

    fn explore(&mut self, center: &ValuedElement, level: u32) -> Result<BranchNode> {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(level);
        let kv = self.kv.clone();
        let tk = kv.t().pow(level as i64)?;
        let inner = KPoly::new(&kv, vec![center.clone(), tk.clone()]);
        let num = self.phi.num().compose(&inner);
        let den = self.phi.den().compose(&inner);
        let (mu_n, loc_n) = level_zero(&num, &kv)?;
        let (mu_d, loc_d) = level_zero(&den, &kv)?;
        let bound = &mu_n - &mu_d;
        let mut node = BranchNode {
            center: center.to_expr(),
            level,
            bound: fmt_q(&bound),
            status: NodeStatus::Certified,
            children: Vec::new(),
        };
        let den_roots: Vec<bool> = self.residues.iter().map(|r| loc_d.eval(r).is_zero()).collect();
        if bound >= qi(0) && !den_roots.iter().any(|b| *b) {
            return Ok(node);
        }
        node.status = NodeStatus::Branch;
        for (i, r) in self.residues.clone().iter().enumerate() {
            let x_r = center.add(&tk.mul(&kv.constant(r.clone())));
            let num_exact = !loc_n.eval(r).is_zero();
            let den_exact = !den_roots[i];
            let mut child = BranchNode {
                center: x_r.to_expr(),
                level: level + 1,
                bound: fmt_q(&bound),
                status: NodeStatus::Certified,
                children: Vec::new(),
            };
            if den_exact && (bound >= qi(0)) {
                node.children.push(child);
                continue;
            }
            if den_exact && num_exact {
                // value is exactly `bound < 0` on the whole sub-ball
                let v = self.point_value(&x_r).unwrap_or(Some(bound.clone()));
                self.counterexample = Some((x_r, v));
                child.status = NodeStatus::Counterexample;
                node.children.push(child);
                return Ok(node);
            }
            if let Some(v) = self.point_value(&x_r) {
                self.counterexample = Some((x_r, v));
                child.status = NodeStatus::Counterexample;
                node.children.push(child);
                return Ok(node);
            }
            if level + 1 > self.depth_limit || self.nodes >= NODE_BUDGET {
                self.unknown = true;
                child.status = NodeStatus::Unknown;
                node.children.push(child);
                continue;
            }
            let sub = self.explore(&x_r, level + 1)?;
            node.children.push(sub);
            if self.counterexample.is_some() {
                return Ok(node);
            }
        }
        Ok(node)
    }
}

/// Decides whether `φ` maps the valuation ring into itself.
///
/// Exhaustive exploration needs a valuation domain with value group `ℤ`
/// and a finite residue field. In [`CertifyMode::Auto`] other scenes are
/// sampled instead, which can find counterexamples but never certify.
pub fn certify_int_valued<R: Rng>(
    phi: &RatFunc,
    v: &Domain,
    depth_limit: u32,
    mode: CertifyMode,
    rng: &mut R,
) -> Result<Certificate> {
    let kv = v.kv().clone();
    let supported = !v.is_pvd() && *kv.group() == GroupDescriptor::Integers && kv.field().is_finite();
    if !supported {
        if mode == CertifyMode::Exhaustive {
            return Err(Error::UnsupportedScene(
                "exhaustive certification needs a discrete valuation domain with finite residue field".into(),
            ));
        }
        return sample_certificate(phi, &kv, rng);
    }
    if phi.is_zero() {
        return Ok(Certificate {
            outcome: CertOutcome::Certified,
            depth: 0,
            tree: None,
            samples: 0,
        });
    }
    let mut ex = Explorer {
        phi,
        kv: kv.clone(),
        residues: kv.field().elements().expect("finite"),
        depth_limit,
        nodes: 0,
        max_depth: 0,
        counterexample: None,
        unknown: false,
    };
    let tree = ex.explore(&kv.zero(), 0)?;
    let outcome = match (ex.counterexample.take(), ex.unknown) {
        (Some((point, valuation)), _) => CertOutcome::Counterexample { point, valuation },
        (None, true) => CertOutcome::Unknown { depth: depth_limit },
        (None, false) => CertOutcome::Certified,
    };
    Ok(Certificate {
        outcome,
        depth: ex.max_depth,
        tree: Some(tree),
        samples: 0,
    })
}

fn sample_certificate<R: Rng>(phi: &RatFunc, kv: &ValuedField, rng: &mut R) -> Result<Certificate> {
    let c = SampleConstraints::valuation(ValuationConstraint::closed(qi(0), qi(6)));
    let mut points: Vec<ValuedElement> = vec![kv.zero()];
    for _ in 0..FALLBACK_SAMPLES {
        points.push(kv.sample(rng, &c)?);
    }
    for (i, a) in points.iter().enumerate() {
        let bad = match rf_eval(phi, a) {
            EvalResult::Pole => Some(None),
            EvalResult::Value(y) => match y.val_q() {
                Some(v) if v < qi(0) => Some(Some(v)),
                _ => None,
            },
        };
        if let Some(valuation) = bad {
            return Ok(Certificate {
                outcome: CertOutcome::Counterexample {
                    point: a.clone(),
                    valuation,
                },
                depth: 0,
                tree: None,
                samples: i + 1,
            });
        }
    }
    Ok(Certificate {
        outcome: CertOutcome::Unknown { depth: 0 },
        depth: 0,
        tree: None,
        samples: points.len(),
    })
}
