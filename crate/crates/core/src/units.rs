//! The unit group `(Z/nZ)^x` with a fixed CRT generator list.
//!
//! For each prime power `p^a || n` there is one generator per cyclic factor:
//! a primitive root for odd `p`, `-1` for `4`, and `-1, 5` for `2^a` with
//! `a >= 3`. Each generator is congruent to 1 modulo the other prime powers,
//! so coordinates split along the primes of `n`.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{crt, factorize, gcd, mul_mod, primitive_root};
use crate::group::{subgroup_structure, AbelianGroup, ElementSet, Elem, Subgroup};

#[derive(Debug)]
pub struct UnitGroup {
    n: u64,
    generators: Vec<u64>,
    group: AbelianGroup,
    slots: Vec<(u64, Range<usize>)>,
    residues: Vec<u64>,
    log: HashMap<u64, usize>,
}

/// Invariant factors of `(Z/nZ)^x` with generators given as residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<u64>,
}

fn build(n: u64) -> UnitGroup {
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut slots = Vec::new();
    for (p, a) in factorize(n) {
        let pa = p.pow(a);
        let rest = n / pa;
        let lift = |g: u64| if rest == 1 { g % pa } else { crt(g % pa, pa, 1, rest) };
        let start = generators.len();
        if p == 2 {
            if a >= 2 {
                generators.push(lift(pa - 1));
                orders.push(2);
            }
            if a >= 3 {
                generators.push(lift(5));
                orders.push(pa / 4);
            }
        } else {
            let g = primitive_root(pa).expect("odd prime powers have primitive roots");
            generators.push(lift(g));
            orders.push(pa / p * (p - 1));
        }
        slots.push((p, start..generators.len()));
    }
    let group = AbelianGroup::new(orders);
    // mixed-radix order: the last coordinate varies fastest
    let m = n.max(1);
    let mut residues = vec![1 % m];
    for (&g, &o) in generators.iter().zip(group.orders()) {
        let mut next = Vec::with_capacity(residues.len() * o as usize);
        for &r in &residues {
            let mut v = r;
            for _ in 0..o {
                next.push(v);
                v = mul_mod(v, g, m);
            }
        }
        residues = next;
    }
    let log = residues.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    UnitGroup { n, generators, group, slots, residues, log }
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<UnitGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The unit group mod `n`, shared through a process-wide cache.
pub fn unit_group(n: u64) -> Arc<UnitGroup> {
    assert!(n >= 1, "modulus must be positive");
    if let Some(g) = cache().lock().unwrap().get(&n) {
        return g.clone();
    }
    let g = Arc::new(build(n));
    cache().lock().unwrap().entry(n).or_insert(g).clone()
}

impl UnitGroup {
    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Coordinates belonging to the prime `p` (empty when `p` contributes no factor).
    pub fn slots(&self, p: u64) -> Range<usize> {
        self.slots
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0..0, |(_, r)| r.clone())
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.slots.iter().map(|(p, _)| *p)
    }

    pub fn residue(&self, x: &[u64]) -> u64 {
        self.residues[self.group.index(x)]
    }

    pub fn residue_of_index(&self, i: usize) -> u64 {
        self.residues[i]
    }

    /// Index of a residue; `None` for non-units.
    pub fn index_of(&self, a: u64) -> Option<usize> {
        if self.n == 1 {
            return Some(0);
        }
        self.log.get(&(a % self.n)).copied()
    }

    pub fn log(&self, a: u64) -> Option<Elem> {
        self.index_of(a).map(|i| self.group.element(i))
    }

    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a % self.n.max(1), self.n) == 1 || self.n == 1
    }

    pub fn minus_one(&self) -> Elem {
        self.log(self.n.wrapping_sub(1) % self.n.max(1)).unwrap_or_else(|| self.group.zero())
    }

    /// Residues of all elements of a subgroup, in index order.
    pub fn residues_of(&self, s: &ElementSet) -> Vec<u64> {
        s.indices().iter().map(|&i| self.residues[i]).collect()
    }

    /// Subgroup generated by residues.
    pub fn span_residues(&self, gens: &[u64]) -> Option<ElementSet> {
        let mut logs = Vec::new();
        for &a in gens {
            logs.push(self.log(a)?);
        }
        Some(self.group.span(&logs))
    }

    /// Elements supported on the coordinates of `p`, i.e. residues that are
    /// 1 modulo the prime-to-`p` part of `n`.
    pub fn inertia(&self, p: u64) -> ElementSet {
        let r = self.slots(p);
        ElementSet::from_predicate(&self.group, |x| {
            x.iter().enumerate().all(|(i, &a)| a == 0 || r.contains(&i))
        })
    }

    /// Residues `x == 1 mod d` for a divisor `d` of `n`.
    pub fn congruence_subgroup(&self, d: u64) -> ElementSet {
        ElementSet::from_indices(
            &self.group,
            (0..self.residues.len()).filter(|&i| self.residues[i] % d == 1 % d),
        )
    }

    /// Image of a subgroup of `(Z/nZ)^x` in `(Z/dZ)^x` for `d | n`.
    pub fn project(&self, s: &ElementSet, d: u64) -> ElementSet {
        let target = unit_group(d);
        ElementSet::from_indices(
            target.group(),
            s.indices()
                .iter()
                .map(|&i| target.index_of(self.residues[i] % d).expect("unit reduces to unit")),
        )
    }

    /// Preimage in `(Z/nZ)^x` of a subgroup of `(Z/dZ)^x` for `d | n`.
    pub fn pull_back(&self, d: u64, s: &ElementSet) -> ElementSet {
        let source = unit_group(d);
        ElementSet::from_indices(
            &self.group,
            (0..self.residues.len()).filter(|&i| {
                s.contains_index(source.index_of(self.residues[i] % d).expect("unit"))
            }),
        )
    }
}

/// Decomposition of `(Z/nZ)^x` into invariant factors.
pub fn unit_group_structure(n: u64) -> UnitGroupStructure {
    let ug = unit_group(n);
    let g = ug.group();
    let units: Vec<Elem> = (0..g.rank())
        .map(|i| {
            let mut e = g.zero();
            e[i] = 1;
            e
        })
        .collect();
    let st = subgroup_structure(&Subgroup::new(g.clone(), units).expect("unit vectors"))
        .expect("generators in range");
    UnitGroupStructure {
        modulus: n,
        invariant_factors: st.invariant_factors,
        generators: st.generators.iter().map(|x| ug.residue(x)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{euler_phi, pow_mod};

    #[test]
    fn small_structures() {
        assert_eq!(unit_group_structure(1).invariant_factors, Vec::<u64>::new());
        assert_eq!(unit_group_structure(7).invariant_factors, vec![6]);
        assert_eq!(unit_group_structure(8).invariant_factors, vec![2, 2]);
        assert_eq!(unit_group_structure(15).invariant_factors, vec![2, 4]);
        assert_eq!(unit_group_structure(32).invariant_factors, vec![2, 8]);
    }

    #[test]
    fn generators_have_stated_orders() {
        for n in [7u64, 8, 15, 16, 21, 45, 63, 100, 187] {
            let s = unit_group_structure(n);
            for (&d, &g) in s.invariant_factors.iter().zip(&s.generators) {
                assert_eq!(crate::arith::mult_order(g, n), Some(d), "n={n} g={g}");
            }
        }
    }

    #[test]
    fn order_matches_phi() {
        for n in 1..=2000u64 {
            let coprime = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
            assert_eq!(unit_group(n).order(), coprime, "n={n}");
            assert_eq!(euler_phi(n), coprime);
        }
    }

    #[test]
    fn log_is_inverse_of_residue() {
        let ug = unit_group(120);
        for a in 1..120u64 {
            match ug.log(a) {
                Some(x) => assert_eq!(ug.residue(&x), a),
                None => assert!(gcd(a, 120) > 1),
            }
        }
        // residue is a homomorphism
        let g = ug.group();
        let x = ug.log(7).unwrap();
        let y = ug.log(11).unwrap();
        assert_eq!(ug.residue(&g.add(&x, &y)), 77);
        assert_eq!(ug.residue(&ug.minus_one()), 119);
        assert_eq!(pow_mod(7, 4, 120), ug.residue(&g.scale(&x, 4)));
    }

    #[test]
    fn inertia_is_one_off_p() {
        let ug = unit_group(63);
        let i3 = ug.inertia(3);
        assert_eq!(i3.len(), 6);
        for r in ug.residues_of(&i3) {
            assert_eq!(r % 7, 1);
        }
        assert_eq!(ug.congruence_subgroup(7), i3);
    }

    #[test]
    fn duality_round_trip() {
        for n in [21u64, 35, 48, 91] {
            let ug = unit_group(n);
            let g = ug.group();
            for s in crate::group::all_subgroups(g) {
                assert_eq!(s.annihilator(g).annihilator(g), s);
            }
        }
    }
}
