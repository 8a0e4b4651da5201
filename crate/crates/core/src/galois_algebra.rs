//! `G`-Galois algebras over `Q` for a finite abelian `G`, given by
//! homomorphisms `φ: (Z/nZ)^× → G`. Two classes are equal when they agree
//! after lifting to a common modulus; `normalized` moves a class to its
//! conductor so that derived equality is class equality.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{factorize, lcm};
use crate::field::{lift_unit, AbelianField};
use crate::group::{AbelianGroup, Elem, ElementSet};
use crate::units::unit_group;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GExtension {
    pub modulus: u64,
    pub group: AbelianGroup,
    /// `φ(g_i)` for the CRT generators `g_i` of `(Z/nZ)^×`.
    pub images: Vec<Elem>,
}

impl GExtension {
    pub fn new(modulus: u64, group: AbelianGroup, images: Vec<Elem>) -> Result<Self> {
        let ug = unit_group(modulus);
        if images.len() != ug.generators().len() {
            return Err(Error::GroupMismatch(format!(
                "{} images for {} generators",
                images.len(),
                ug.generators().len()
            )));
        }
        for (x, &o) in images.iter().zip(ug.group().orders()) {
            if !group.contains(x) {
                return Err(Error::GroupMismatch(format!("{x:?} is not an element of G")));
            }
            if !group.is_zero(&group.scale(x, o)) {
                return Err(Error::GroupMismatch(format!("order of {x:?} does not divide {o}")));
            }
        }
        Ok(GExtension { modulus, group, images })
    }

    /// Build from a map on residues, which must be a homomorphism.
    pub fn from_fn(modulus: u64, group: AbelianGroup, f: impl Fn(u64) -> Elem) -> Result<Self> {
        let images = unit_group(modulus).generators().iter().map(|&g| f(g)).collect();
        Self::new(modulus, group, images)
    }

    /// The split algebra `G × Q`.
    pub fn identity(group: AbelianGroup) -> Self {
        GExtension { modulus: 1, images: Vec::new(), group }
    }

    fn eval_log(&self, x: &[u64]) -> Elem {
        let mut acc = self.group.zero();
        for (&k, y) in x.iter().zip(&self.images) {
            acc = self.group.add(&acc, &self.group.scale(y, k));
        }
        acc
    }

    /// `φ(a)` for a unit `a` mod `n`.
    pub fn eval(&self, a: u64) -> Option<Elem> {
        Some(self.eval_log(&unit_group(self.modulus).log(a % self.modulus.max(1))?))
    }

    /// The same class at a multiple `m` of the modulus.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if m % self.modulus != 0 {
            return Err(Error::ConductorMismatch(self.modulus, m));
        }
        let n = self.modulus;
        Self::from_fn(m, self.group.clone(), |g| self.eval(g % n).expect("unit"))
    }

    fn descend(&self, f: u64) -> Self {
        let n = self.modulus;
        Self::from_fn(f, self.group.clone(), |g| self.eval(lift_unit(g, f, n)).expect("unit"))
            .expect("factors through f")
    }

    fn factors_through(&self, f: u64) -> bool {
        let ug = unit_group(self.modulus);
        let c = ug.congruence_subgroup(f);
        c.generating_set(ug.group()).iter().all(|x| self.group.is_zero(&self.eval_log(x)))
    }

    /// Smallest level through which `φ` factors.
    pub fn conductor(&self) -> u64 {
        let mut f = self.modulus;
        for (p, _) in factorize(self.modulus) {
            while f % p == 0 && self.factors_through(f / p) {
                f /= p;
            }
        }
        f
    }

    /// The class at its conductor.
    pub fn normalized(&self) -> Self {
        self.descend(self.conductor())
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.group == other.group && self.normalized() == other.normalized()
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "{:?} vs {:?}",
                self.group.orders(),
                other.group.orders()
            )));
        }
        let m = lcm(self.modulus, other.modulus);
        Ok((self.lift(m)?, other.lift(m)?))
    }

    /// Pointwise product of the homomorphisms.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let images = a.images.iter().zip(&b.images).map(|(x, y)| a.group.add(x, y)).collect();
        Ok(GExtension { images, ..a })
    }

    /// Inverse class, the opposite algebra.
    pub fn inverse_op(&self) -> Self {
        let images = self.images.iter().map(|x| self.group.neg(x)).collect();
        GExtension { images, ..self.clone() }
    }

    /// `G_0 = φ((Z/nZ)^×)`.
    pub fn image(&self) -> ElementSet {
        self.group.span(&self.images)
    }

    pub fn kernel(&self) -> ElementSet {
        let ug = unit_group(self.modulus);
        ElementSet::from_predicate(ug.group(), |x| self.group.is_zero(&self.eval_log(x)))
    }

    /// `(G_0, core field)`; the algebra is induced from the core field along `G_0 ≤ G`.
    pub fn core(&self) -> (ElementSet, AbelianField) {
        (self.image(), AbelianField::from_subgroup(self.modulus, &self.kernel()))
    }

    fn inertia_image(&self, p: u64) -> ElementSet {
        let ug = unit_group(self.modulus);
        let gens: Vec<Elem> = ug
            .inertia(p)
            .generating_set(ug.group())
            .iter()
            .map(|x| self.eval_log(x))
            .collect();
        self.group.span(&gens)
    }

    pub fn is_unramified(&self) -> bool {
        factorize(self.modulus).iter().all(|&(p, _)| self.inertia_image(p).len() == 1)
    }

    pub fn is_tame(&self) -> bool {
        factorize(self.modulus).iter().all(|&(p, _)| self.inertia_image(p).len() as u64 % p != 0)
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        factorize(self.modulus)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|&p| self.inertia_image(p).len() > 1)
            .collect()
    }
}

/// `ψ` with the `p`-components of `φ` removed for `p ∈ S` and kept otherwise.
pub fn construct_psi(phi: &GExtension, s: &[u64]) -> GExtension {
    let ug = unit_group(phi.modulus);
    let mut images = phi.images.clone();
    for &p in s {
        for i in ug.slots(p) {
            images[i] = phi.group.zero();
        }
    }
    GExtension { images, ..phi.clone() }.normalized()
}

/// A class of `H(Q, G)` restricted to `Gal(Q^ab / K)`.
#[derive(Debug, Clone, Serialize)]
pub struct BaseChange {
    pub base: AbelianField,
    pub phi: GExtension,
}

/// `K ⊗ M` as a `G`-extension of `K`: `φ` restricted to the fixing subgroup of `K`.
pub fn base_change(m: &GExtension, k: &AbelianField) -> Result<BaseChange> {
    let n = lcm(m.modulus, k.modulus());
    Ok(BaseChange { base: k.clone(), phi: m.lift(n)? })
}

impl BaseChange {
    fn fixing(&self) -> ElementSet {
        self.base.subgroup_at(self.phi.modulus)
    }

    /// Values on `H_K`, which determine the class.
    fn restricted(&self, at: u64) -> Result<Vec<Elem>> {
        let phi = self.phi.lift(at)?;
        let ug = unit_group(at);
        let h = self.base.subgroup_at(at);
        Ok(h.elements(ug.group()).map(|x| phi.eval_log(&x)).collect())
    }

    /// `φ(H_K)`, the decomposition group over `K`.
    pub fn image(&self) -> ElementSet {
        let ug = unit_group(self.phi.modulus);
        let gens: Vec<Elem> = self
            .fixing()
            .generating_set(ug.group())
            .iter()
            .map(|x| self.phi.eval_log(x))
            .collect();
        self.phi.group.span(&gens)
    }

    /// Fixed field of `H_K ∩ ker φ`; its degree over `K` is `|image|`.
    pub fn core_field(&self) -> AbelianField {
        let h = self.fixing().intersection(&self.phi.kernel());
        AbelianField::from_subgroup(self.phi.modulus, &h)
    }

    pub fn is_split(&self) -> bool {
        self.image().len() == 1
    }

    /// Trivial on every inertia group `I_p ∩ H_K`.
    pub fn is_unramified(&self) -> bool {
        let ug = unit_group(self.phi.modulus);
        let h = self.fixing();
        factorize(self.phi.modulus).iter().all(|&(p, _)| {
            let i = ug.inertia(p).intersection(&h);
            i.generating_set(ug.group())
                .iter()
                .all(|x| self.phi.group.is_zero(&self.phi.eval_log(x)))
        })
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::GroupMismatch("base changes over different fields".into()));
        }
        Ok(BaseChange { base: self.base.clone(), phi: self.phi.product(&other.phi)? })
    }

    pub fn inverse_op(&self) -> Self {
        BaseChange { base: self.base.clone(), phi: self.phi.inverse_op() }
    }

    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        if self.base != other.base || self.phi.group != other.phi.group {
            return Ok(false);
        }
        let m = lcm(self.phi.modulus, other.phi.modulus);
        Ok(self.restricted(m)? == other.restricted(m)?)
    }
}

/// The identity behind the `ψ`-construction: when `φ` is trivial on
/// `I_p ∩ H_K` for `p ∈ S`, `(K ⊗ ψ) · (K ⊗ φ)^{-1}` is unramified.
/// Returns `None` when that hypothesis fails.
pub fn psi_identity_holds(phi: &GExtension, s: &[u64], k: &AbelianField) -> Result<Option<bool>> {
    let bc = base_change(phi, k)?;
    let ug = unit_group(bc.phi.modulus);
    let h = k.subgroup_at(bc.phi.modulus);
    for &p in s {
        let i = ug.inertia(p).intersection(&h);
        if !i.elements(ug.group()).all(|x| bc.phi.group.is_zero(&bc.phi.eval_log(&x))) {
            return Ok(None);
        }
    }
    let psi = base_change(&construct_psi(phi, s), k)?;
    Ok(Some(psi.product(&bc.inverse_op())?.is_unramified()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmitsurReport {
    pub group: Vec<u64>,
    pub subgroup_order: usize,
    pub middle_order: usize,
    pub is_complex: bool,
    pub kernel_order: usize,
    pub image_order: usize,
    pub exact: bool,
}

fn power_group(g: &AbelianGroup, k: usize) -> AbelianGroup {
    AbelianGroup::new(g.orders().iter().copied().cycle().take(k * g.rank()).collect())
}

fn concat(parts: &[&[u64]]) -> Elem {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Exactness at the middle of `G → G^{(2)} → G^{(3)}`, where
/// `G^{(2)} = G² / {(z, z^{-1})}` and `G^{(3)} = G³ / {(z, z^{-1}, 1), (1, z, z^{-1})}`
/// for `z ∈ G_0`, with `x ↦ (x, x^{-1})` and
/// `(x, y) ↦ (x, y, 1)(x^{-1}, 1, y^{-1})(1, x, y)`.
pub fn amitsur_minus_report(g: &AbelianGroup, g0: &ElementSet) -> Result<AmitsurReport> {
    if g.order() % 2 == 0 {
        return Err(Error::InvalidParameter(format!("|G| = {} is even", g.order())));
    }
    let (g2, g3) = (power_group(g, 2), power_group(g, 3));
    let z = g0.generating_set(g);
    let zero = g.zero();
    let r2_gens: Vec<Elem> = z.iter().map(|z| concat(&[z, &g.neg(z)])).collect();
    let mut r3_gens = Vec::new();
    for z in &z {
        r3_gens.push(concat(&[z, &g.neg(z), &zero]));
        r3_gens.push(concat(&[&zero, z, &g.neg(z)]));
    }
    let r2 = g2.span(&r2_gens);
    let r3 = g3.span(&r3_gens);
    let d1 = |x: &[u64]| concat(&[x, &g.neg(x)]);
    let d2 = |xy: &[u64]| {
        let (x, y) = xy.split_at(g.rank());
        let a = concat(&[x, y, &zero]);
        let b = concat(&[&g.neg(x), &zero, &g.neg(y)]);
        let c = concat(&[&zero, x, y]);
        g3.add(&g3.add(&a, &b), &c)
    };
    let image: BTreeSet<usize> = g.elements().map(|x| r2.coset_rep(&g2, &d1(&x))).collect();
    let is_complex = g.elements().all(|x| r3.contains(&g3, &d2(&d1(&x))));
    let kernel: BTreeSet<usize> = g2
        .elements()
        .filter(|xy| r3.contains(&g3, &d2(xy)))
        .map(|xy| r2.coset_rep(&g2, &xy))
        .collect();
    let middle_order = (g2.order() as usize) / r2.len();
    Ok(AmitsurReport {
        group: g.orders().to_vec(),
        subgroup_order: g0.len(),
        middle_order,
        is_complex,
        kernel_order: kernel.len(),
        image_order: image.len(),
        exact: is_complex && kernel == image,
    })
}

pub fn amitsur_minus_exact(g: &AbelianGroup, g0: &ElementSet) -> Result<bool> {
    Ok(amitsur_minus_report(g, g0)?.exact)
}

/// The surjection `(Z/pZ)^× → Z/d` sending the primitive root to 1, for `d | p - 1`.
pub fn cyclic_character_class(p: u64, d: u64) -> Result<GExtension> {
    if (p - 1) % d != 0 {
        return Err(Error::InvalidParameter(format!("{d} does not divide {p} - 1")));
    }
    GExtension::new(p, AbelianGroup::new(vec![d]), vec![vec![1 % d]])
}

/// The surjection `(Z/p^a Z)^× → Z/p` of the wild layer, for an odd prime `p`.
pub fn wild_layer_class(p: u64, a: u32) -> Result<GExtension> {
    if a < 2 || p % 2 == 0 {
        return Err(Error::InvalidParameter(format!("need an odd prime power p^a with a >= 2, got {p}^{a}")));
    }
    // (Z/p^a)^× is cyclic, generated by a primitive root
    GExtension::new(p.pow(a), AbelianGroup::new(vec![p]), vec![vec![1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::all_subgroups;

    fn z3() -> AbelianGroup {
        AbelianGroup::new(vec![3])
    }

    #[test]
    fn group_law() {
        let a = cyclic_character_class(7, 3).unwrap();
        let b = wild_layer_class(3, 2).unwrap();
        let id = GExtension::identity(z3());
        assert!(a.product(&id).unwrap().equivalent(&a));
        assert!(a.product(&a.inverse_op()).unwrap().equivalent(&id));
        let ab = a.product(&b).unwrap();
        assert_eq!(ab.conductor(), 63);
        assert_eq!(ab.image().len(), 3);
        assert!(ab.equivalent(&b.product(&a).unwrap()));
        assert!(matches!(
            a.product(&GExtension::identity(AbelianGroup::new(vec![5]))),
            Err(Error::GroupMismatch(_))
        ));
    }

    #[test]
    fn core_fields() {
        let (g0, f) = GExtension::identity(z3()).core();
        assert_eq!(g0.len(), 1);
        assert!(f.is_rational());
        let (g0, f) = cyclic_character_class(7, 3).unwrap().core();
        assert_eq!(g0.len(), 3);
        assert_eq!(f, AbelianField::cyclic_subfield(7, 3).unwrap());
        let g = AbelianGroup::new(vec![3, 3]);
        let m = GExtension::new(7, g, vec![vec![1, 0]]).unwrap();
        let (g0, f) = m.core();
        assert_eq!((g0.len(), f.degree()), (3, 3));
    }

    #[test]
    fn ramification() {
        assert!(GExtension::identity(z3()).is_unramified());
        let c7 = cyclic_character_class(7, 3).unwrap();
        assert!(c7.is_tame() && !c7.is_unramified());
        let c9 = wild_layer_class(3, 2).unwrap();
        assert!(!c9.is_tame() && !c9.is_unramified());
        assert_eq!(c9.ramified_primes(), vec![3]);
    }

    #[test]
    fn psi_construction() {
        let phi = cyclic_character_class(7, 3).unwrap().product(&wild_layer_class(3, 2).unwrap()).unwrap();
        assert!(construct_psi(&phi, &[]).equivalent(&phi));
        assert!(construct_psi(&phi, &[3, 7]).equivalent(&GExtension::identity(z3())));
        let psi = construct_psi(&phi, &[3]);
        assert_eq!(psi.conductor(), 7);
        assert!(psi.equivalent(&cyclic_character_class(7, 3).unwrap()));
    }

    #[test]
    fn base_changes() {
        let m = cyclic_character_class(7, 3).unwrap();
        let bc = base_change(&m, &AbelianField::rational()).unwrap();
        assert_eq!(bc.image().len(), 3);
        let c7 = AbelianField::cyclic_subfield(7, 3).unwrap();
        let bc = base_change(&m, &c7).unwrap();
        assert!(bc.is_split());
        let c9 = AbelianField::max_real(9);
        let bc = base_change(&m, &c9).unwrap();
        assert_eq!(bc.image().len(), 3);
        assert_eq!(bc.core_field().degree(), 9);
        // homomorphism property
        let n = wild_layer_class(3, 2).unwrap();
        let lhs = base_change(&m.product(&n).unwrap(), &c7).unwrap();
        let rhs = base_change(&m, &c7).unwrap().product(&base_change(&n, &c7).unwrap()).unwrap();
        assert!(lhs.equivalent(&rhs).unwrap());
    }

    #[test]
    fn psi_identity_instances() {
        let phi = cyclic_character_class(7, 3).unwrap().product(&wild_layer_class(3, 2).unwrap()).unwrap();
        // over K = cubic of conductor 9, φ kills I_3 ∩ H_K only if the 3-part is absorbed
        let k = AbelianField::max_real(9);
        let r = psi_identity_holds(&phi, &[3], &k).unwrap();
        assert_eq!(r, Some(true));
        let r = psi_identity_holds(&phi, &[3], &AbelianField::rational()).unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn amitsur_examples() {
        let g = z3();
        assert!(amitsur_minus_exact(&g, &ElementSet::whole(&g)).unwrap());
        let g = AbelianGroup::new(vec![9]);
        let g0 = g.span(&[vec![3]]);
        assert!(amitsur_minus_exact(&g, &g0).unwrap());
        let g = AbelianGroup::new(vec![3, 3]);
        let diag = g.span(&[vec![1, 1]]);
        assert!(amitsur_minus_exact(&g, &diag).unwrap());
        for h in all_subgroups(&g) {
            let r = amitsur_minus_report(&g, &h).unwrap();
            assert!(r.exact, "{r:?}");
        }
        assert!(amitsur_minus_exact(&AbelianGroup::new(vec![2]), &ElementSet::trivial(&AbelianGroup::new(vec![2]))).is_err());
    }
}
