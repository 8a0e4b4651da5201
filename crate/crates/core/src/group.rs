//! Finite abelian groups presented as products of cyclic groups.
//!
//! An element is an exponent vector with respect to a fixed list of cyclic
//! factors `Z/o_1 x ... x Z/o_k`. Elements are also addressed by their
//! mixed-radix index, which gives every group a canonical enumeration order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm};
use crate::error::{Error, Result};
use crate::smith::smith_mod;

pub type Elem = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&o| o >= 1), "cyclic factor orders must be positive");
        AbelianGroup { orders }
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: vec![] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &o| lcm(a, o))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.orders.len()]
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.orders.len() && x.iter().zip(&self.orders).all(|(a, o)| a < o)
    }

    pub fn reduce(&self, x: &[i64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &o)| a.rem_euclid(o as i64) as u64)
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), o)| (a + b) % o)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(a, o)| (o - a % o) % o)
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &[u64], k: u64) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(a, o)| ((*a as u128 * k as u128) % *o as u128) as u64)
            .collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&a, &o)| lcm(acc, o / gcd(a, o)))
    }

    pub fn index(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (a, o) in x.iter().zip(&self.orders) {
            idx = idx * (*o as usize) + *a as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Elem {
        let mut x = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let o = self.orders[i] as usize;
            x[i] = (idx % o) as u64;
            idx /= o;
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order() as usize).map(move |i| self.element(i))
    }

    /// Dual pairing with values in Q/Z, returned as a numerator over `exponent()`.
    ///
    /// The dual of `Z/o_1 x ... x Z/o_k` is identified with the same group:
    /// `w` pairs with `x` to `sum w_i x_i / o_i`.
    pub fn pairing(&self, w: &[u64], x: &[u64]) -> u64 {
        let e = self.exponent();
        let mut acc: u128 = 0;
        for ((a, b), o) in w.iter().zip(x).zip(&self.orders) {
            acc += (*a as u128 * *b as u128 % *o as u128) * (e / o) as u128;
        }
        (acc % e as u128) as u64
    }

    /// Closure of a set of generators, as a membership table over indices.
    pub fn span(&self, gens: &[Elem]) -> ElementSet {
        let mut set = ElementSet::trivial(self);
        for g in gens {
            set = set.adjoin(self, g);
        }
        set
    }
}

/// A subgroup stored as a membership table plus its elements in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    members: Vec<bool>,
    list: Vec<usize>,
}

impl ElementSet {
    pub fn trivial(g: &AbelianGroup) -> Self {
        let mut members = vec![false; g.order() as usize];
        members[0] = true;
        ElementSet { members, list: vec![0] }
    }

    pub fn whole(g: &AbelianGroup) -> Self {
        let n = g.order() as usize;
        ElementSet { members: vec![true; n], list: (0..n).collect() }
    }

    pub fn from_indices(g: &AbelianGroup, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; g.order() as usize];
        for i in idx {
            members[i] = true;
        }
        let list = members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        ElementSet { members, list }
    }

    pub fn from_predicate(g: &AbelianGroup, f: impl Fn(&[u64]) -> bool) -> Self {
        Self::from_indices(
            g,
            (0..g.order() as usize).filter(|&i| f(&g.element(i))),
        )
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn contains(&self, g: &AbelianGroup, x: &[u64]) -> bool {
        self.members[g.index(x)]
    }

    pub fn indices(&self) -> &[usize] {
        &self.list
    }

    pub fn elements<'a>(&'a self, g: &'a AbelianGroup) -> impl Iterator<Item = Elem> + 'a {
        self.list.iter().map(move |&i| g.element(i))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.list.iter().all(|&i| other.members[i])
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let list: Vec<usize> = self.list.iter().copied().filter(|&i| other.members[i]).collect();
        let mut members = vec![false; self.members.len()];
        for &i in &list {
            members[i] = true;
        }
        ElementSet { members, list }
    }

    /// Subgroup generated by `self` and `x`.
    pub fn adjoin(&self, g: &AbelianGroup, x: &[u64]) -> ElementSet {
        if self.contains(g, x) {
            return self.clone();
        }
        let mut members = self.members.clone();
        let base: Vec<Elem> = self.elements(g).collect();
        let mut mult = x.to_vec();
        while !self.contains(g, &mult) {
            for b in &base {
                members[g.index(&g.add(b, &mult))] = true;
            }
            mult = g.add(&mult, x);
        }
        let list = members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        ElementSet { members, list }
    }

    /// Sum of two subgroups.
    pub fn join(&self, g: &AbelianGroup, other: &ElementSet) -> ElementSet {
        let mut acc = self.clone();
        for x in other.generating_set(g) {
            acc = acc.adjoin(g, &x);
        }
        acc
    }

    /// A small generating set chosen greedily in index order.
    pub fn generating_set(&self, g: &AbelianGroup) -> Vec<Elem> {
        let mut acc = ElementSet::trivial(g);
        let mut gens = Vec::new();
        for &i in &self.list {
            if !acc.members[i] {
                let x = g.element(i);
                acc = acc.adjoin(g, &x);
                gens.push(x);
            }
        }
        gens
    }

    /// Annihilator in the dual (identified with `g` through `AbelianGroup::pairing`).
    pub fn annihilator(&self, g: &AbelianGroup) -> ElementSet {
        let gens = self.generating_set(g);
        ElementSet::from_predicate(g, |w| gens.iter().all(|x| g.pairing(w, x) == 0))
    }

    /// Canonical representative (smallest index) of the coset `x + self`.
    pub fn coset_rep(&self, g: &AbelianGroup, x: &[u64]) -> usize {
        self.list
            .iter()
            .map(|&h| g.index(&g.add(x, &g.element(h))))
            .min()
            .expect("subgroup is never empty")
    }
}

/// Invariant factor decomposition of a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    /// `d_1 | d_2 | ... | d_k`, each `> 1`.
    pub invariant_factors: Vec<u64>,
    /// One generator per invariant factor, as exponent vectors in the ambient group.
    pub generators: Vec<Elem>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure { invariant_factors: vec![], generators: vec![] }
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// The abstract group `Z/d_1 x ... x Z/d_k`.
    pub fn as_group(&self) -> AbelianGroup {
        AbelianGroup::new(self.invariant_factors.clone())
    }
}

pub fn is_cyclic(s: &AbelianGroupStructure) -> bool {
    s.is_cyclic()
}

/// A subgroup of `ambient` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub ambient: AbelianGroup,
    pub generators: Vec<Elem>,
}

impl Subgroup {
    pub fn new(ambient: AbelianGroup, generators: Vec<Elem>) -> Result<Self> {
        for g in &generators {
            if !ambient.contains(g) {
                return Err(Error::GeneratorOutOfRange(format!(
                    "{g:?} not in group with orders {:?}",
                    ambient.orders()
                )));
            }
        }
        Ok(Subgroup { ambient, generators })
    }

    pub fn elements(&self) -> ElementSet {
        self.ambient.span(&self.generators)
    }

    pub fn structure(&self) -> Result<AbelianGroupStructure> {
        subgroup_structure(self)
    }
}

/// Smallest `m >= 1` with `m * x` in `s`.
fn order_mod(g: &AbelianGroup, s: &ElementSet, x: &[u64]) -> u64 {
    let mut y = x.to_vec();
    let mut m = 1;
    while !s.contains(g, &y) {
        y = g.add(&y, x);
        m += 1;
    }
    m
}

/// Invariant factors of `c / b` together with representatives in `c`.
///
/// Works one prime at a time: an element of largest order modulo the span
/// found so far is corrected by a combination of earlier basis elements so
/// that its order drops to its order in the quotient, which makes the
/// resulting cyclic pieces independent.
fn basis_mod(g: &AbelianGroup, c: &ElementSet, b: &ElementSet) -> Result<AbelianGroupStructure> {
    if !b.is_subset(c) {
        return Err(Error::InvalidParameter("quotient by a non-subgroup".into()));
    }
    let q_order = (c.len() / b.len()) as u64;
    let e = g.exponent().max(1);
    let mut per_prime: Vec<Vec<(u64, Elem)>> = Vec::new();
    for (p, _) in crate::arith::factorize(q_order) {
        let pe = p.pow(crate::arith::valuation(e, p));
        let cofactor = e / pe;
        let mut span = b.clone();
        let mut basis: Vec<(u64, Elem)> = Vec::new();
        loop {
            let mut best: Option<(u64, Elem)> = None;
            for x in c.elements(g) {
                let y = g.scale(&x, cofactor);
                let o = order_mod(g, &span, &y);
                if o > best.as_ref().map_or(1, |(bo, _)| *bo) {
                    best = Some((o, y));
                }
            }
            let Some((o, y)) = best else { break };
            let target = g.scale(&y, o);
            let coeffs = express_mod(g, b, &basis, &target)
                .ok_or_else(|| Error::Internal("basis lift failed".into()))?;
            let mut lifted = y.clone();
            for ((_, x_i), m) in basis.iter().zip(&coeffs) {
                if m % o != 0 {
                    return Err(Error::Internal("basis lift not divisible".into()));
                }
                lifted = g.sub(&lifted, &g.scale(x_i, m / o));
            }
            span = span.adjoin(g, &lifted);
            basis.push((o, lifted));
        }
        per_prime.push(basis);
    }
    Ok(assemble(g, per_prime))
}

/// Combine independent cyclic pieces of prime-power order into invariant
/// factor form `d_1 | d_2 | ...`.
fn assemble(g: &AbelianGroup, mut per_prime: Vec<Vec<(u64, Elem)>>) -> AbelianGroupStructure {
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    let mut gens = vec![g.zero(); len];
    for basis in per_prime.iter_mut() {
        basis.sort_by(|a, b| b.0.cmp(&a.0));
        // the largest piece goes to the last slot
        for (i, (o, x)) in basis.iter().enumerate() {
            let slot = len - 1 - i;
            factors[slot] *= o;
            gens[slot] = g.add(&gens[slot], x);
        }
    }
    AbelianGroupStructure { invariant_factors: factors, generators: gens }
}

/// Coefficients `m_i` in `[0, ord_i)` with `target - sum m_i x_i` in `b`.
fn express_mod(g: &AbelianGroup, b: &ElementSet, basis: &[(u64, Elem)], target: &[u64]) -> Option<Vec<u64>> {
    let mut m = vec![0u64; basis.len()];
    loop {
        let mut acc = target.to_vec();
        for ((_, x), k) in basis.iter().zip(&m) {
            acc = g.sub(&acc, &g.scale(x, *k));
        }
        if b.contains(g, &acc) {
            return Some(m);
        }
        let mut i = 0;
        loop {
            if i == m.len() {
                return None;
            }
            m[i] += 1;
            if m[i] < basis[i].0 {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// Invariant factors of the subgroup generated by `s.generators`, with one
/// generator of the stated order per factor.
///
/// The group is embedded in `(Z/E)^k` for its exponent `E` and the generator
/// matrix is diagonalized mod `E`, so no enumeration is needed.
pub fn subgroup_structure(s: &Subgroup) -> Result<AbelianGroupStructure> {
    let g = &s.ambient;
    for x in &s.generators {
        if !g.contains(x) {
            return Err(Error::GeneratorOutOfRange(format!("{x:?}")));
        }
    }
    let e = g.exponent();
    let scale: Vec<u64> = g.orders().iter().map(|o| e / o).collect();
    let embedded: Vec<Vec<u64>> = s
        .generators
        .iter()
        .map(|x| x.iter().zip(&scale).map(|(a, c)| a * c).collect())
        .collect();
    let snf = smith_mod(&embedded, e);
    let mut per_prime: std::collections::BTreeMap<u64, Vec<(u64, Elem)>> = Default::default();
    for (row, o) in snf.rows.iter().zip(snf.row_orders()) {
        if o == 1 {
            continue;
        }
        let y: Elem = row.iter().zip(&scale).map(|(a, c)| a / c).collect();
        debug_assert!(row.iter().zip(&scale).all(|(a, c)| a % c == 0));
        for (p, a) in crate::arith::factorize(o) {
            let pa = p.pow(a);
            per_prime.entry(p).or_default().push((pa, g.scale(&y, o / pa)));
        }
    }
    Ok(assemble(g, per_prime.into_values().collect()))
}

/// Structure of the quotient `c / b` for subgroups `b <= c` of `g`, with
/// generators given as representatives in `c`.
pub fn quotient_structure(g: &AbelianGroup, c: &ElementSet, b: &ElementSet) -> Result<AbelianGroupStructure> {
    basis_mod(g, c, b)
}

/// All subgroups of `g`, sorted lexicographically by their sorted index lists.
pub fn all_subgroups(g: &AbelianGroup) -> Vec<ElementSet> {
    all_subgroups_between(g, &ElementSet::trivial(g), &ElementSet::whole(g))
}

/// All subgroups `s` with `lower <= s <= upper`, in deterministic order.
pub fn all_subgroups_between(g: &AbelianGroup, lower: &ElementSet, upper: &ElementSet) -> Vec<ElementSet> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![lower.clone()];
    found.insert(lower.indices().to_vec());
    while let Some(s) = stack.pop() {
        for &i in upper.indices() {
            if s.contains_index(i) {
                continue;
            }
            let t = s.adjoin(g, &g.element(i));
            if found.insert(t.indices().to_vec()) {
                stack.push(t);
            }
        }
    }
    found
        .into_iter()
        .map(|idx| ElementSet::from_indices(g, idx))
        .collect()
}

/// All abelian groups of order `n` up to isomorphism, as invariant factor lists.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=n.min(max)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut acc: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in crate::arith::factorize(n) {
        let mut next = Vec::new();
        for part in partitions(e, e) {
            for base in &acc {
                // combine prime-power parts into invariant factors, largest last
                let mut factors = base.clone();
                let mut pp: Vec<u64> = part.iter().map(|&a| p.pow(a)).collect();
                pp.sort_unstable();
                let len = factors.len().max(pp.len());
                let mut f2 = vec![1u64; len];
                for (i, x) in factors.iter().rev().enumerate() {
                    f2[len - 1 - i] *= x;
                }
                for (i, x) in pp.iter().rev().enumerate() {
                    f2[len - 1 - i] *= x;
                }
                factors = f2;
                next.push(factors);
            }
        }
        acc = next;
    }
    if n == 1 {
        return vec![vec![]];
    }
    acc
}
