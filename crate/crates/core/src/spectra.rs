//! Finite families of pointed maximal ideals `M_{m,a} = {φ | φ(a) ∈ m}`:
//! characteristic sets, the finite intersection property, filters on a
//! finite ground set and their limits.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use serde_json::{json, Value};

use crate::domains::{dom_ideal_member, dom_value_ideal, Domain, ValueIdeal};
use crate::error::{Error, Result};
use crate::ratfunc::{rf_eval, EvalResult, RatFunc};
use crate::skolem::{construct_rho, SampleSet};
use crate::valgroup::{GroupDescriptor, Valuation, Q};
use crate::valued_field::ValuedElement;

/// Indices into a [`PointedIndex`].
pub type PointSet = BTreeSet<usize>;

/// Pairs `(m, a)` for the points `a` of a sample set. All domains here are
/// local, so the maximal-ideal tag is always `m`.
#[derive(Clone, Debug)]
pub struct PointedIndex {
    domain: Domain,
    points: Vec<ValuedElement>,
}

impl PointedIndex {
    pub fn new(domain: &Domain, points: &[ValuedElement]) -> PointedIndex {
        let mut uniq: Vec<ValuedElement> = Vec::with_capacity(points.len());
        for p in points {
            if !uniq.contains(p) {
                uniq.push(p.clone());
            }
        }
        PointedIndex {
            domain: domain.clone(),
            points: uniq,
        }
    }

    pub fn from_samples(domain: &Domain, e: &SampleSet) -> PointedIndex {
        PointedIndex::new(domain, &e.points)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn points(&self) -> &[ValuedElement] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all(&self) -> PointSet {
        (0..self.len()).collect()
    }

    pub fn label(&self, i: usize) -> String {
        format!("(m, {})", self.points[i].to_expr())
    }

    pub fn labels(&self, s: &PointSet) -> Vec<String> {
        s.iter().map(|i| self.label(*i)).collect()
    }
}

/// `χ_φ` together with the points where `φ` has a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chi {
    pub set: PointSet,
    pub poles: Vec<usize>,
}

fn in_max_ideal(y: &ValuedElement) -> bool {
    match y.valuation() {
        Valuation::Infinity => true,
        Valuation::Finite(v) => v > Q::from_integer(0.into()),
    }
}

/// `χ_φ = {(m, a) | φ(a) ∈ m}`; pole points are left out and listed.
pub fn sp_chi(phi: &RatFunc, pi: &PointedIndex) -> Chi {
    let mut set = PointSet::new();
    let mut poles = Vec::new();
    for (i, a) in pi.points.iter().enumerate() {
        match rf_eval(phi, a) {
            EvalResult::Pole => poles.push(i),
            EvalResult::Value(y) => {
                if in_max_ideal(&y) {
                    set.insert(i);
                }
            }
        }
    }
    Chi { set, poles }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fip {
    /// The common intersection and one point of it.
    HasFip {
        common: PointSet,
        witness: Option<usize>,
    },
    /// Indices of a smallest subfamily with empty intersection.
    Fails { subfamily: Vec<usize> },
}

impl Fip {
    pub fn holds(&self) -> bool {
        matches!(self, Fip::HasFip { .. })
    }
}

fn intersect_all<'a, I: IntoIterator<Item = &'a PointSet>>(sets: I, ground: &PointSet) -> PointSet {
    sets.into_iter()
        .fold(ground.clone(), |acc, s| acc.intersection(s).copied().collect())
}

/// Finite intersection property of a finite family over `ground`.
///
/// On a finite family this is nonemptiness of the full intersection; on
/// failure a smallest empty subfamily is found by increasing size.
pub fn sp_fip(chis: &[PointSet], ground: &PointSet) -> Fip {
    let common = intersect_all(chis, ground);
    if !common.is_empty() || chis.is_empty() {
        let witness = common.iter().next().copied();
        return Fip::HasFip { common, witness };
    }
    for k in 1..=chis.len() {
        for combo in (0..chis.len()).combinations(k) {
            if intersect_all(combo.iter().map(|i| &chis[*i]), ground).is_empty() {
                return Fip::Fails { subfamily: combo };
            }
        }
    }
    unreachable!("the full family has empty intersection")
}

/// A filter on a finite ground set, stored by its generators. Every such
/// filter is the principal filter of its core, the intersection of the
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterRepr {
    ground_len: usize,
    sets: Vec<PointSet>,
    core: PointSet,
    is_ultra: bool,
}

impl FilterRepr {
    /// Filter generated by `sets`; they must have nonempty intersection.
    pub fn generated(ground_len: usize, sets: Vec<PointSet>) -> Result<FilterRepr> {
        let ground: PointSet = (0..ground_len).collect();
        for s in &sets {
            if let Some(i) = s.iter().find(|i| **i >= ground_len) {
                return Err(Error::InvalidFilter(format!("index {i} outside the ground set")));
            }
            if s.is_empty() {
                return Err(Error::InvalidFilter("the empty set is in the filter".into()));
            }
        }
        let core = intersect_all(&sets, &ground);
        if core.is_empty() {
            return Err(Error::InvalidFilter(
                "generators do not have the finite intersection property".into(),
            ));
        }
        Ok(FilterRepr {
            ground_len,
            sets,
            core,
            is_ultra: false,
        })
    }

    /// The principal ultrafilter at one point.
    pub fn principal(ground_len: usize, point: usize) -> Result<FilterRepr> {
        let mut f = FilterRepr::generated(ground_len, vec![PointSet::from([point])])?;
        f.is_ultra = true;
        Ok(f)
    }

    /// An ultrafilter given by generators. On a finite ground set only
    /// principal ultrafilters exist, so the core must be a single point.
    pub fn ultra(ground_len: usize, sets: Vec<PointSet>) -> Result<FilterRepr> {
        let mut f = FilterRepr::generated(ground_len, sets)?;
        if f.core.len() != 1 {
            return Err(Error::InvalidFilter(format!(
                "an ultrafilter on a finite set is principal, but the core has {} points",
                f.core.len()
            )));
        }
        f.is_ultra = true;
        Ok(f)
    }

    pub fn ground_len(&self) -> usize {
        self.ground_len
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn core(&self) -> &PointSet {
        &self.core
    }

    pub fn is_ultra(&self) -> bool {
        self.is_ultra
    }

    pub fn is_principal_ultra(&self) -> bool {
        self.core.len() == 1
    }

    pub fn contains(&self, s: &PointSet) -> bool {
        self.core.is_subset(s)
    }
}

/// `φ ∈ lim_F M_{m,a}`, i.e. `χ_φ ∈ F`. Points where `φ` has a pole are
/// outside `χ_φ`.
pub fn sp_filter_limit_member(phi: &RatFunc, pi: &PointedIndex, f: &FilterRepr) -> Result<bool> {
    if f.ground_len != pi.len() {
        return Err(Error::InvalidFilter(format!(
            "filter on {} points, index has {}",
            f.ground_len,
            pi.len()
        )));
    }
    Ok(f.contains(&sp_chi(phi, pi).set))
}

/// Finite-scale probe of an ideal: characteristic sets of the
/// generators, their intersection property, value ideals at the sample
/// points, and the `ρ` cross-check where available.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UltraProbe {
    pub points: Vec<String>,
    pub chis: Vec<Vec<usize>>,
    pub fip: bool,
    pub fip_witness: Option<usize>,
    pub empty_subfamily: Option<Vec<usize>>,
    /// Per point: is the value ideal proper?
    pub proper_value_ideal: Vec<bool>,
    /// FIP holds exactly when some sampled value ideal is proper.
    pub consistent: bool,
    /// `χ_{φ_i} ∩ χ_{φ_{i+1}} = χ_ρ` for consecutive generator pairs.
    pub rho_check: Option<bool>,
}

impl UltraProbe {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn value_ideal_proper(d: &Domain, ideal: &ValueIdeal) -> Result<bool> {
    Ok(match ideal {
        ValueIdeal::ValuationIdeal(Valuation::Infinity) => true,
        ValueIdeal::ValuationIdeal(Valuation::Finite(g)) => *g > Q::from_integer(0.into()),
        ValueIdeal::PvdIdeal(vals) => !dom_ideal_member(d, vals, &d.kv().one())?.is_member(),
    })
}

pub fn sp_ultraskolem_probe(gens: &[RatFunc], e: &SampleSet, d: &Domain) -> Result<UltraProbe> {
    let pi = PointedIndex::from_samples(d, e);
    let mut proper = Vec::with_capacity(pi.len());
    for a in pi.points() {
        let ideal = dom_value_ideal(d, gens, a)?;
        proper.push(value_ideal_proper(d, &ideal)?);
    }
    let chis: Vec<PointSet> = gens.iter().map(|g| sp_chi(g, &pi).set).collect();
    let fip = sp_fip(&chis, &pi.all());
    let (fip_witness, empty_subfamily) = match &fip {
        Fip::HasFip { witness, .. } => (*witness, None),
        Fip::Fails { subfamily } => (None, Some(subfamily.clone())),
    };
    let consistent = fip.holds() == proper.iter().any(|p| *p) || gens.is_empty();
    let rho_check = if *d.kv().group() == GroupDescriptor::Integers && gens.len() >= 2 {
        let mut ok = true;
        for (p1, p2) in gens.iter().tuple_windows() {
            if p2.is_zero() {
                continue;
            }
            let rho = construct_rho(p1, p2, d)?;
            let chi_rho = sp_chi(&rho, &pi);
            let both: PointSet = sp_chi(p1, &pi)
                .set
                .intersection(&sp_chi(p2, &pi).set)
                .copied()
                .collect();
            ok &= chi_rho.poles.is_empty() && chi_rho.set == both;
        }
        Some(ok)
    } else {
        None
    };
    Ok(UltraProbe {
        points: (0..pi.len()).map(|i| pi.label(i)).collect(),
        chis: chis.iter().map(|s| s.iter().copied().collect()).collect(),
        fip: fip.holds(),
        fip_witness,
        empty_subfamily,
        proper_value_ideal: proper,
        consistent,
        rho_check,
    })
}

impl fmt::Display for Fip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fip::HasFip { witness, .. } => match witness {
                Some(w) => write!(f, "HasFIP(witness {w})"),
                None => write!(f, "HasFIP"),
            },
            Fip::Fails { subfamily } => write!(f, "Fails({subfamily:?})"),
        }
    }
}

/// JSON view of a characteristic set.
pub fn chi_json(pi: &PointedIndex, chi: &Chi) -> Value {
    json!({
        "members": pi.labels(&chi.set),
        "poles": chi.poles.iter().map(|i| pi.label(*i)).collect::<Vec<_>>(),
    })
}
