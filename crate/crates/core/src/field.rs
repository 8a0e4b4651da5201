//! Absolutely abelian fields as subfields of cyclotomic fields.
//!
//! A field is `Q(zeta_n)^H` for a subgroup `H` of `(Z/nZ)^x`, always stored at
//! its conductor so that equality is literal equality. Its character group is
//! the annihilator of `H` in the dual of `(Z/nZ)^x`, which is identified with
//! `(Z/nZ)^x` itself through the CRT generator layout of [`crate::units`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{factorize, gcd, is_prime, lcm, valuation};
use crate::error::{Error, Result};
use crate::group::{ElementSet, Elem};
use crate::units::unit_group;

/// A Dirichlet character mod `modulus`, stored as a dual vector `w`:
/// `chi(g_i) = exp(2 pi i w_i / o_i)` on the CRT generators `g_i` of order `o_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub w: Elem,
    pub order: u64,
    pub conductor: u64,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, w: Elem) -> Self {
        let ug = unit_group(modulus);
        let order = ug.group().element_order(&w);
        let conductor = character_conductor(modulus, &w);
        DirichletCharacter { modulus, w, order, conductor }
    }

    pub fn trivial(modulus: u64) -> Self {
        let ug = unit_group(modulus);
        Self::new(modulus, ug.group().zero())
    }

    /// `chi(a) = zeta_order^k`; `None` when `a` is not a unit.
    pub fn value(&self, a: u64) -> Option<u64> {
        let ug = unit_group(self.modulus);
        let x = ug.log(a)?;
        let g = ug.group();
        let e = g.exponent();
        Some(g.pairing(&self.w, &x) / (e / self.order))
    }

    /// Value as a fraction `k / order` of a full turn, reduced to lowest terms.
    pub fn value_fraction(&self, a: u64) -> Option<(u64, u64)> {
        let k = self.value(a)?;
        let d = gcd(k, self.order);
        Some((k / d, self.order / d))
    }

    /// Exponents of `zeta_order` on each generator residue.
    pub fn value_exponents(&self) -> Vec<(u64, u64)> {
        let ug = unit_group(self.modulus);
        ug.generators()
            .iter()
            .map(|&g| (g, self.value(g).expect("generators are units")))
            .collect()
    }

    pub fn is_even(&self) -> bool {
        self.modulus <= 2 || self.value(self.modulus - 1) == Some(0)
    }

    pub fn parity(&self) -> i8 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// The same character viewed mod a multiple `m` of its modulus.
    pub fn lift(&self, m: u64) -> Result<DirichletCharacter> {
        if m % self.modulus != 0 {
            return Err(Error::ConductorMismatch(self.modulus, m));
        }
        let target = unit_group(m);
        let g = target.group();
        let w = target
            .generators()
            .iter()
            .zip(g.orders())
            .map(|(&r, &o)| {
                let k = self.value(r % self.modulus).expect("unit");
                // chi(g_i) = k / order = w_i / o_i
                k * o / self.order
            })
            .collect();
        Ok(DirichletCharacter::new(m, w))
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> DirichletCharacter {
        let f = self.conductor;
        let target = unit_group(f);
        let g = target.group();
        let w = target
            .generators()
            .iter()
            .zip(g.orders())
            .map(|(&r, &o)| {
                let a = lift_unit(r, f, self.modulus);
                self.value(a).expect("unit") * o / self.order
            })
            .collect();
        DirichletCharacter::new(f, w)
    }

    /// Components of conductor a power of each prime.
    pub fn prime_components(&self) -> Vec<(u64, DirichletCharacter)> {
        let ug = unit_group(self.modulus);
        ug.primes()
            .map(|p| {
                let slots = ug.slots(p);
                let w = self
                    .w
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if slots.contains(&i) { a } else { 0 })
                    .collect();
                (p, DirichletCharacter::new(self.modulus, w))
            })
            .collect()
    }
}

/// A unit mod `m` that reduces to `a` mod `f`, for `f | m`.
pub fn lift_unit(a: u64, f: u64, m: u64) -> u64 {
    let a = if f == 1 { 1 } else { a % f };
    let mut x = a;
    while gcd(x, m) != 1 {
        x += f;
    }
    x % m.max(1)
}

/// Conductor of the character `w` mod `n`, read off from its components.
pub fn character_conductor(n: u64, w: &[u64]) -> u64 {
    let ug = unit_group(n);
    let orders = ug.group().orders();
    let mut f = 1;
    for (p, a) in factorize(n) {
        let slots = ug.slots(p);
        let order_at = |i: usize| orders[i] / gcd(w[i], orders[i]);
        if p == 2 {
            if a == 1 {
                continue;
            }
            let s = slots.start;
            let two_adic = if a >= 3 { order_at(s + 1) } else { 1 };
            if two_adic > 1 {
                f *= 1 << (2 + valuation(two_adic, 2));
            } else if w[s] != 0 {
                f *= 4;
            }
        } else {
            let o = order_at(slots.start);
            if o > 1 {
                f *= p.pow(1 + valuation(o, p));
            }
        }
    }
    f
}

/// `Q(zeta_n)^H`, stored at its conductor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianField {
    modulus: u64,
    h: ElementSet,
}

impl fmt::Debug for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbelianField(conductor {}, degree {}, H = <{:?}>)",
            self.modulus,
            self.degree(),
            self.fixing_generators()
        )
    }
}

impl Serialize for AbelianField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            modulus: u64,
            fixing_subgroup: Vec<u64>,
            degree: u64,
        }
        Repr {
            modulus: self.modulus,
            fixing_subgroup: self.fixing_generators(),
            degree: self.degree(),
        }
        .serialize(s)
    }
}

fn normalize(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

impl AbelianField {
    pub fn rational() -> Self {
        AbelianField { modulus: 1, h: ElementSet::whole(unit_group(1).group()) }
    }

    /// Fixed field of a subgroup of `(Z/nZ)^x`, canonicalized to its conductor.
    pub fn from_subgroup(n: u64, h: &ElementSet) -> Self {
        let ug = unit_group(n);
        let mut f = 1;
        for (p, a) in factorize(n) {
            let rest = n / p.pow(a);
            let c = (0..=a)
                .find(|&c| ug.congruence_subgroup(rest * p.pow(c)).is_subset(h))
                .expect("the full modulus always works");
            f *= p.pow(c);
        }
        let f = normalize(f);
        let hf = if f == n { h.clone() } else { ug.project(h, f) };
        AbelianField { modulus: f, h: hf }
    }

    /// Fixed field of the subgroup generated by the given residues mod `n`.
    pub fn from_fixing_residues(n: u64, gens: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        for &a in gens {
            if gcd(a % n, n) != 1 && n > 1 {
                return Err(Error::NonUnitGenerator(a, n));
            }
        }
        let m = normalize(n);
        let ug = unit_group(m);
        let reduced: Vec<u64> = gens.iter().map(|a| a % m.max(1)).collect();
        let h = ug.span_residues(&reduced).expect("checked units");
        Ok(Self::from_subgroup(m, &h))
    }

    /// Field cut out by a group of characters mod `n` (given as dual vectors).
    pub fn from_characters(n: u64, x: &ElementSet) -> Self {
        let ug = unit_group(n);
        Self::from_subgroup(n, &x.annihilator(ug.group()))
    }

    pub fn cyclotomic(n: u64) -> Self {
        let m = normalize(n.max(1));
        let ug = unit_group(m);
        Self::from_subgroup(m, &ElementSet::trivial(ug.group()))
    }

    pub fn max_real(n: u64) -> Self {
        let m = normalize(n.max(1));
        Self::from_fixing_residues(m, &[m.saturating_sub(1).max(1)]).expect("-1 is a unit")
    }

    /// The degree-`d` subfield of `Q(zeta_p)`.
    pub fn cyclic_subfield(p: u64, d: u64) -> Result<Self> {
        if !is_prime(p) || d == 0 || (p - 1) % d != 0 {
            return Err(Error::InvalidParameter(format!("need prime p and d | p-1, got p={p}, d={d}")));
        }
        let ug = unit_group(p);
        let g = ug.group();
        let h = ElementSet::from_predicate(g, |x| x[0] % d == 0);
        Ok(Self::from_subgroup(p, &h))
    }

    pub fn conductor(&self) -> u64 {
        self.modulus
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn fixing_subgroup(&self) -> &ElementSet {
        &self.h
    }

    pub fn fixing_residues(&self) -> Vec<u64> {
        let mut r = unit_group(self.modulus).residues_of(&self.h);
        r.sort_unstable();
        r
    }

    /// Greedy small generating set of `H`, as residues.
    pub fn fixing_generators(&self) -> Vec<u64> {
        let ug = unit_group(self.modulus);
        self.h
            .generating_set(ug.group())
            .iter()
            .map(|x| ug.residue(x))
            .collect()
    }

    pub fn degree(&self) -> u64 {
        unit_group(self.modulus).order() / self.h.len() as u64
    }

    pub fn is_rational(&self) -> bool {
        self.modulus == 1
    }

    /// `H` pulled back to `(Z/mZ)^x` for a multiple `m` of the conductor.
    pub fn subgroup_at(&self, m: u64) -> ElementSet {
        assert!(m % self.modulus == 0, "modulus {m} is not a multiple of {}", self.modulus);
        if m == self.modulus {
            return self.h.clone();
        }
        unit_group(m).pull_back(self.modulus, &self.h)
    }

    /// Character group as dual vectors mod `m` (a multiple of the conductor).
    pub fn characters_at(&self, m: u64) -> ElementSet {
        self.subgroup_at(m).annihilator(unit_group(m).group())
    }

    pub fn character_group(&self) -> Vec<DirichletCharacter> {
        let ug = unit_group(self.modulus);
        self.characters_at(self.modulus)
            .elements(ug.group())
            .map(|w| DirichletCharacter::new(self.modulus, w))
            .collect()
    }

    /// `true` when `other` is a subfield of `self`.
    pub fn contains(&self, other: &AbelianField) -> bool {
        if self.modulus % other.modulus != 0 {
            return false;
        }
        self.subgroup_at(self.modulus).is_subset(&other.subgroup_at(self.modulus))
    }

    pub fn compositum(&self, other: &AbelianField) -> AbelianField {
        let m = lcm(self.modulus, other.modulus);
        let h = self.subgroup_at(m).intersection(&other.subgroup_at(m));
        AbelianField::from_subgroup(m, &h)
    }

    pub fn intersection(&self, other: &AbelianField) -> AbelianField {
        let m = lcm(self.modulus, other.modulus);
        let ug = unit_group(m);
        let h = self.subgroup_at(m).join(ug.group(), &other.subgroup_at(m));
        AbelianField::from_subgroup(m, &h)
    }

    pub fn linearly_disjoint(&self, other: &AbelianField) -> bool {
        self.intersection(other).is_rational()
    }

    pub fn arithmetically_disjoint(&self, other: &AbelianField) -> bool {
        self.linearly_disjoint(other) && gcd(self.modulus, other.modulus) == 1
    }

    /// Ramification index of `p` in the field over `Q`.
    pub fn ramification_index(&self, p: u64) -> u64 {
        if self.modulus % p != 0 {
            return 1;
        }
        let ug = unit_group(self.modulus);
        let i = ug.inertia(p);
        (i.len() / i.intersection(&self.h).len()) as u64
    }

    /// `p -> e_p` for every ramified prime.
    pub fn ramification_data(&self) -> BTreeMap<u64, u64> {
        factorize(self.modulus)
            .into_iter()
            .map(|(p, _)| (p, self.ramification_index(p)))
            .collect()
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        factorize(self.modulus).into_iter().map(|(p, _)| p).collect()
    }

    /// Residue degree of an unramified prime: the order of `p` in `(Z/nZ)^x / H`.
    pub fn residue_degree(&self, p: u64) -> Result<u64> {
        if self.modulus % p == 0 {
            return Err(Error::InvalidParameter(format!("{p} ramifies")));
        }
        let ug = unit_group(self.modulus);
        let g = ug.group();
        let x = ug.log(p % self.modulus.max(1)).expect("unit");
        let mut k = 1;
        let mut y = x.clone();
        while !self.h.contains(g, &y) {
            y = g.add(&y, &x);
            k += 1;
        }
        Ok(k)
    }

    pub fn is_totally_real(&self) -> bool {
        let ug = unit_group(self.modulus);
        self.h.contains(ug.group(), &ug.minus_one())
    }

    /// `true` when `Q(zeta_d)` is a subfield.
    pub fn contains_cyclotomic(&self, d: u64) -> bool {
        self.contains(&AbelianField::cyclotomic(d))
    }

    /// Order of the group of roots of unity in the field.
    pub fn roots_of_unity_order(&self) -> u64 {
        let w = crate::arith::divisors(self.modulus)
            .into_iter()
            .filter(|d| d % 4 != 2 && self.contains_cyclotomic(*d))
            .fold(1, lcm);
        if w % 2 == 1 {
            2 * w
        } else {
            w
        }
    }

    /// Subfield fixed by `<H, c>` for a residue `c` mod the conductor.
    pub fn fixed_by(&self, c: u64) -> AbelianField {
        let ug = unit_group(self.modulus);
        let h = self.h.adjoin(ug.group(), &ug.log(c).expect("unit"));
        AbelianField::from_subgroup(self.modulus, &h)
    }

    /// Largest subfield unramified at `p`: the fixed field of `H I_p`.
    pub fn inertia_field(&self, p: u64) -> AbelianField {
        let ug = unit_group(self.modulus);
        let h = self.h.join(ug.group(), &ug.inertia(p));
        AbelianField::from_subgroup(self.modulus, &h)
    }
}

/// Result of testing `zeta_q` against `L(zeta_{3^t})`, with the cap `3^t` used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureTest {
    pub contained: bool,
    pub cap: u64,
}

/// Whether `zeta_q` lies in `L(zeta_{3^infinity})`, tested at a finite layer.
///
/// Only the 3-part of `Gal(Q(zeta_q)/Q)` can come from the 3-power layer, so
/// `t = v_3(q - 1) + v_3(cond L) + 1` suffices.
pub fn zeta_q_in_3power_closure_with_cap(q: u64, l: &AbelianField) -> Result<ClosureTest> {
    if q == 2 || !is_prime(q) {
        return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
    }
    let t = valuation(q - 1, 3) + valuation(l.conductor(), 3) + 1;
    let cap = 3u64.pow(t);
    let closure = l.compositum(&AbelianField::cyclotomic(cap));
    Ok(ClosureTest { contained: closure.contains_cyclotomic(q), cap })
}

pub fn zeta_q_in_3power_closure(q: u64, l: &AbelianField) -> Result<bool> {
    zeta_q_in_3power_closure_with_cap(q, l).map(|c| c.contained)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    fn cubic7() -> AbelianField {
        AbelianField::from_fixing_residues(7, &[6]).unwrap()
    }

    #[test]
    fn construction_examples() {
        let q = AbelianField::from_fixing_residues(1, &[]).unwrap();
        assert_eq!(q, AbelianField::rational());
        assert_eq!(q.degree(), 1);
        assert_eq!(cubic7().degree(), 3);
        assert_eq!(cubic7().conductor(), 7);
        let f = AbelianField::from_fixing_residues(15, &[14]).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f, AbelianField::max_real(15));
        assert!(matches!(
            AbelianField::from_fixing_residues(15, &[3]),
            Err(Error::NonUnitGenerator(3, 15))
        ));
    }

    #[test]
    fn canonicalization() {
        // Q(sqrt 5) inside Q(zeta_20) comes back at conductor 5
        let f = AbelianField::from_fixing_residues(20, &[3 * 3, 11]).unwrap();
        let direct = AbelianField::from_fixing_residues(5, &[4]).unwrap();
        assert_eq!(f.conductor(), 5);
        assert_eq!(f, direct);
        assert_eq!(AbelianField::cyclotomic(14), AbelianField::cyclotomic(7));
        // re-encoding at a multiple of the conductor is the identity
        let k = AbelianField::from_subgroup(63, &cubic7().subgroup_at(63));
        assert_eq!(k, cubic7());
    }

    #[test]
    fn character_examples() {
        let x = AbelianField::rational().character_group();
        assert_eq!(x.len(), 1);
        let mut orders: Vec<u64> = cubic7().character_group().iter().map(|c| c.order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 3, 3]);
        let mut conds: Vec<u64> = AbelianField::cyclotomic(5)
            .character_group()
            .iter()
            .map(|c| c.conductor)
            .collect();
        conds.sort_unstable();
        assert_eq!(conds, vec![1, 5, 5, 5]);
    }

    #[test]
    fn ramification_examples() {
        assert_eq!(AbelianField::cyclotomic(7).ramification_data(), BTreeMap::from([(7, 6)]));
        // I_5 = {1, 4, 7, 13} meets {1, 14} trivially, so e_5 = 4
        assert_eq!(
            AbelianField::max_real(15).ramification_data(),
            BTreeMap::from([(3, 2), (5, 4)])
        );
        let f15 = AbelianField::cyclic_subfield(31, 15).unwrap();
        assert_eq!(f15.ramification_data(), BTreeMap::from([(31, 15)]));
    }

    #[test]
    fn compositum_and_intersection() {
        let f = cubic7();
        assert_eq!(f.compositum(&AbelianField::rational()), f);
        let c = f.compositum(&AbelianField::cyclotomic(4));
        assert_eq!((c.degree(), c.conductor()), (6, 28));
        assert!(AbelianField::cyclotomic(7)
            .intersection(&AbelianField::cyclotomic(5))
            .is_rational());
    }

    #[test]
    fn disjointness() {
        let f = cubic7();
        let q = AbelianField::rational();
        assert!(f.linearly_disjoint(&q) && f.arithmetically_disjoint(&q));
        let c9 = AbelianField::max_real(9);
        let r7 = AbelianField::max_real(7);
        assert!(r7.linearly_disjoint(&c9) && r7.arithmetically_disjoint(&c9));
        let r15 = AbelianField::max_real(15);
        let im15 = AbelianField::from_fixing_residues(15, &[2]).unwrap();
        assert_eq!(im15.degree(), 2);
        assert!(!im15.is_totally_real());
        assert!(r15.linearly_disjoint(&im15));
        assert!(!r15.arithmetically_disjoint(&im15));
    }

    #[test]
    fn parity_and_roots_of_unity() {
        let q = AbelianField::rational();
        assert!(q.is_totally_real());
        assert_eq!(q.roots_of_unity_order(), 2);
        let z7 = AbelianField::cyclotomic(7);
        assert!(!z7.is_totally_real());
        assert_eq!(z7.roots_of_unity_order(), 14);
        let r15 = AbelianField::max_real(15);
        assert!(r15.is_totally_real());
        assert_eq!(r15.roots_of_unity_order(), 2);
        assert_eq!(AbelianField::cyclotomic(12).roots_of_unity_order(), 12);
    }

    #[test]
    fn three_power_closure() {
        let q = AbelianField::rational();
        assert!(!zeta_q_in_3power_closure(5, &q).unwrap());
        assert!(zeta_q_in_3power_closure(7, &AbelianField::cyclotomic(7)).unwrap());
        // Q(zeta_7) has the quadratic subfield Q(sqrt -7), which is not in
        // cubic7(zeta_{3^t}): the only quadratic subfield there is Q(sqrt -3)
        assert!(!zeta_q_in_3power_closure(7, &cubic7()).unwrap());
        assert!(zeta_q_in_3power_closure(2, &q).is_err());
        assert!(zeta_q_in_3power_closure(9, &q).is_err());
        // Q(zeta_7)+ (degree 3, conductor 7) together with Q(zeta_3) gives
        // the quadratic Q(sqrt -3); the composite with the imaginary
        // quadratic of conductor 7 would be needed for Q(zeta_7)
        let c = zeta_q_in_3power_closure_with_cap(7, &cubic7()).unwrap();
        assert_eq!(c.cap, 9);
    }

    #[test]
    fn character_conductors_match_containment() {
        for n in [8u64, 9, 16, 20, 27, 32, 45, 48, 63] {
            let ug = unit_group(n);
            let g = ug.group();
            for w in g.elements() {
                let chi = DirichletCharacter::new(n, w.clone());
                let ker = ElementSet::from_predicate(g, |x| g.pairing(&w, x) == 0);
                assert_eq!(
                    AbelianField::from_subgroup(n, &ker).conductor(),
                    chi.conductor,
                    "n={n} w={w:?}"
                );
                let prim = chi.primitive();
                assert_eq!(prim.conductor, chi.conductor);
                for a in 1..n {
                    if gcd(a, n) == 1 {
                        assert_eq!(
                            chi.value_fraction(a),
                            prim.value_fraction(a % prim.conductor.max(1))
                        );
                    }
                }
                assert_eq!(prim.lift(n).unwrap(), chi);
            }
        }
    }

    #[test]
    fn field_invariants_small_moduli() {
        for n in (1..=60u64).filter(|n| n % 4 != 2) {
            let ug = unit_group(n);
            for h in crate::group::all_subgroups(ug.group()) {
                let f = AbelianField::from_subgroup(n, &h);
                let chars = f.character_group();
                assert_eq!(chars.len() as u64, f.degree());
                assert_eq!(euler_phi(n) / h.len() as u64, f.degree());
                let cond = chars.iter().map(|c| c.conductor).fold(1, lcm);
                assert_eq!(cond, f.conductor());
                let ram: Vec<u64> = f.ramified_primes();
                assert_eq!(ram, crate::arith::prime_divisors(f.conductor()));
                for (&p, &e) in &f.ramification_data() {
                    assert!(e >= 2 && f.degree() % e == 0, "p={p}");
                }
                assert_eq!(f.is_totally_real(), chars.iter().all(|c| c.is_even()));
                for p in [2u64, 3, 5, 7, 11, 13] {
                    if f.conductor() % p != 0 {
                        let fdeg = f.residue_degree(p).unwrap();
                        assert_eq!(f.degree() % fdeg, 0);
                    }
                }
            }
        }
    }
}
