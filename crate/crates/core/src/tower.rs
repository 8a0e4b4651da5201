//! Towers `k <= K <= L` of abelian fields, relative ramification and
//! arithmetic splitting.
//!
//! All three fields are pulled back to the conductor `M` of `L`, where
//! containment is reverse inclusion of fixing subgroups and, dually, inclusion
//! of character groups.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{factorize, lcm};
use crate::error::{Error, Result};
use crate::field::AbelianField;
use crate::group::{all_subgroups_between, quotient_structure, ElementSet};
use crate::units::{unit_group, UnitGroup};

pub const DEFAULT_SUBGROUP_BOUND: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelativeRamification {
    pub lower: u64,
    pub upper: u64,
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub base: AbelianField,
    pub middle: AbelianField,
    pub top: AbelianField,
    modulus: u64,
    h: [ElementSet; 3],
    x: [ElementSet; 3],
    table: BTreeMap<u64, RelativeRamification>,
}

/// `|I_p ∩ A| / |I_p ∩ B|` for `B <= A`.
fn inertia_index(ug: &UnitGroup, p: u64, a: &ElementSet, b: &ElementSet) -> u64 {
    let i = ug.inertia(p);
    (i.intersection(a).len() / i.intersection(b).len()) as u64
}

impl Tower {
    pub fn new(base: AbelianField, middle: AbelianField, top: AbelianField) -> Result<Self> {
        if !top.contains(&middle) {
            return Err(Error::NotATower(format!("{middle:?} is not contained in {top:?}")));
        }
        if !middle.contains(&base) {
            return Err(Error::NotATower(format!("{base:?} is not contained in {middle:?}")));
        }
        let m = top.conductor();
        let ug = unit_group(m);
        let g = ug.group();
        let h = [base.subgroup_at(m), middle.subgroup_at(m), top.subgroup_at(m)];
        let x = [h[0].annihilator(g), h[1].annihilator(g), h[2].annihilator(g)];
        let table = factorize(m)
            .into_iter()
            .map(|(p, _)| {
                let lower = inertia_index(&ug, p, &h[0], &h[1]);
                let upper = inertia_index(&ug, p, &h[1], &h[2]);
                (p, RelativeRamification { lower, upper })
            })
            .filter(|(_, r)| r.lower > 1 || r.upper > 1)
            .collect();
        Ok(Tower { base, middle, top, modulus: m, h, x, table })
    }

    /// Common modulus: the conductor of the top field.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn unit_group(&self) -> std::sync::Arc<UnitGroup> {
        unit_group(self.modulus)
    }

    /// Fixing subgroups of `k`, `K`, `L` at the common modulus.
    pub fn fixing(&self) -> &[ElementSet; 3] {
        &self.h
    }

    /// Character groups of `k`, `K`, `L` at the common modulus.
    pub fn characters(&self) -> &[ElementSet; 3] {
        &self.x
    }

    /// `p -> (e_{p,K/k}, e_{p,L/K})` for primes ramified somewhere in `L/k`.
    pub fn ramification_table(&self) -> &BTreeMap<u64, RelativeRamification> {
        &self.table
    }

    pub fn e_lower(&self, p: u64) -> u64 {
        self.table.get(&p).map_or(1, |r| r.lower)
    }

    pub fn e_upper(&self, p: u64) -> u64 {
        self.table.get(&p).map_or(1, |r| r.upper)
    }

    /// `e_{p,L/k}`, computed directly.
    pub fn e_total(&self, p: u64) -> u64 {
        if self.modulus % p != 0 {
            return 1;
        }
        inertia_index(&self.unit_group(), p, &self.h[0], &self.h[2])
    }

    pub fn degree_lower(&self) -> u64 {
        self.middle.degree() / self.base.degree()
    }

    pub fn degree_upper(&self) -> u64 {
        self.top.degree() / self.middle.degree()
    }

    /// Primes with `p | e_{p,L/K}`.
    pub fn wild_primes(&self) -> Vec<u64> {
        self.table
            .iter()
            .filter(|(p, r)| r.upper % **p == 0)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn is_tame(&self) -> bool {
        self.wild_primes().is_empty()
    }

    /// Disjoint ramification, with the primes ramified in both `K/k` and `L/K`.
    pub fn has_disjoint_ramification(&self) -> (bool, Vec<u64>) {
        let both: Vec<u64> = self
            .table
            .iter()
            .filter(|(_, r)| r.lower > 1 && r.upper > 1)
            .map(|(p, _)| *p)
            .collect();
        (both.is_empty(), both)
    }

    pub fn ramification_module(&self) -> RamModule {
        let entries: Vec<(u64, u64)> = self
            .table
            .iter()
            .filter(|(_, r)| r.upper > 1)
            .map(|(p, r)| (*p, r.upper))
            .collect();
        let j_action = (0..entries.len()).collect();
        RamModule {
            primes: entries.iter().map(|e| e.0).collect(),
            orders: entries.iter().map(|e| e.1).collect(),
            j_action,
            top_totally_real: self.top.is_totally_real(),
        }
    }

    /// Field of a group of characters at the common modulus.
    pub fn field_of(&self, x: &ElementSet) -> AbelianField {
        AbelianField::from_characters(self.modulus, x)
    }
}

/// `M(L/K) = ⊕ Z/e_p` over the primes ramified in `L/K`, with the action of
/// complex conjugation on the blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamModule {
    pub primes: Vec<u64>,
    pub orders: Vec<u64>,
    /// Image of each block under `j`. Complex conjugation fixes every finite
    /// prime of an abelian field, so this is the identity.
    pub j_action: Vec<usize>,
    pub top_totally_real: bool,
}

impl RamModule {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Drop the components at primes in `s` from every character of `x`.
pub fn strip_components(ug: &UnitGroup, x: &ElementSet, s: &[u64]) -> ElementSet {
    let g = ug.group();
    let dropped: Vec<usize> = s.iter().flat_map(|&p| ug.slots(p)).collect();
    let mut out = ElementSet::trivial(g);
    for w in x.generating_set(g) {
        let mut v = w.clone();
        for &i in &dropped {
            v[i] = 0;
        }
        out = out.adjoin(g, &v);
    }
    out
}

/// Conditions for `Z` (with `X_k <= Z <= X_L`) to cut out a split witness.
fn is_split_witness(t: &Tower, z: &ElementSet) -> bool {
    let ug = t.unit_group();
    let g = ug.group();
    let [xk, xmid, xl] = t.characters();
    if z.join(g, xmid) != *xl || z.intersection(xmid) != *xk {
        return false;
    }
    // no prime may ramify in both L'/k and K/k
    let hz = z.annihilator(g);
    t.table
        .keys()
        .all(|&p| t.e_lower(p) == 1 || inertia_index(&ug, p, &t.h[0], &hz) == 1)
}

/// The unique candidate over `Q`: strip every character of `X_L` to its
/// component of conductor prime to `Ram(K)`.
pub fn canonical_split(t: &Tower) -> Result<Option<AbelianField>> {
    if !t.base.is_rational() {
        return Err(Error::PreconditionFailed("canonical split needs base Q".into()));
    }
    let ug = t.unit_group();
    let s = t.middle.ramified_primes();
    let z = strip_components(&ug, &t.x[2], &s);
    let lp = t.field_of(&z);
    if lp.compositum(&t.middle) == t.top && lp.arithmetically_disjoint(&t.middle) {
        Ok(Some(lp))
    } else {
        Ok(None)
    }
}

/// All split witnesses by enumeration of `X_k <= Z <= X_L`, in lexicographic order.
pub fn split_witnesses(t: &Tower, bound: u64) -> Result<Vec<AbelianField>> {
    let order = t.x[2].len() as u64;
    if order > bound {
        return Err(Error::BoundExceeded { order, bound });
    }
    let ug = t.unit_group();
    Ok(all_subgroups_between(ug.group(), &t.x[0], &t.x[2])
        .into_iter()
        .filter(|z| is_split_witness(t, z))
        .map(|z| t.field_of(&z))
        .collect())
}

pub fn exhaustive_split_oracle(t: &Tower, bound: u64) -> Result<bool> {
    Ok(!split_witnesses(t, bound)?.is_empty())
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitVerdict {
    pub split: bool,
    pub witness: Option<AbelianField>,
    pub method: &'static str,
}

/// Over `Q` the canonical construction decides; otherwise the oracle does.
pub fn is_arithmetically_split(t: &Tower, bound: u64) -> Result<SplitVerdict> {
    if t.base.is_rational() {
        let w = canonical_split(t)?;
        Ok(SplitVerdict { split: w.is_some(), witness: w, method: "canonical" })
    } else {
        let w = split_witnesses(t, bound)?.into_iter().next();
        Ok(SplitVerdict { split: w.is_some(), witness: w, method: "oracle" })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicFactor {
    pub prime: u64,
    pub exponent: u32,
    pub field: AbelianField,
}

/// `L = L_1 ... L_r` with each `L_i / K` cyclic of prime power degree,
/// following the invariant factors of `X_L / X_K`.
pub fn cyclic_prime_power_decomposition(t: &Tower) -> Result<Vec<CyclicFactor>> {
    let ug = t.unit_group();
    let g = ug.group();
    let q = quotient_structure(g, &t.x[2], &t.x[1])?;
    let mut out = Vec::new();
    for (&d, psi) in q.invariant_factors.iter().zip(&q.generators) {
        for (p, a) in factorize(d) {
            let pa = p.pow(a);
            let comp = g.scale(psi, d / pa);
            let z = t.x[1].adjoin(g, &comp);
            out.push(CyclicFactor { prime: p, exponent: a, field: t.field_of(&z) });
        }
    }
    out.sort_by_key(|f| (f.prime, f.exponent, f.field.conductor()));
    Ok(out)
}

/// Common modulus of several fields.
pub fn common_modulus(fields: &[&AbelianField]) -> u64 {
    fields.iter().map(|f| f.conductor()).fold(1, lcm)
}
