//! The Stickelberger element in `Z[Δ]` for `Δ = (Z/ℓZ)^x` and its minus part.
//!
//! Group ring elements are coefficient vectors indexed by `δ_1, ..., δ_{ℓ-1}`
//! with `δ_a δ_b = δ_{ab mod ℓ}`. The minus projection sends `δ_{ℓ-i}^{-1}` to
//! `-δ_i^{-1}` and is reported in the basis `δ_1^{-1}, ..., δ_{(ℓ-1)/2}^{-1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{inv_mod, is_prime};
use crate::error::{Error, Result};
use crate::group::{subgroup_structure, AbelianGroup, AbelianGroupStructure, Subgroup};

/// Fermat primes admissible in the weakened linear disjointness condition.
pub const FERMAT_PRIMES: [u64; 6] = [2, 3, 5, 17, 257, 65537];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    pub ell: u64,
    /// `None` for `Z[Δ]`, otherwise coefficients live in `Z/mZ`.
    pub modulus: Option<u64>,
    /// `coeffs[a - 1]` is the coefficient of `δ_a`.
    coeffs: Vec<BigInt>,
}

fn check_odd_prime(ell: u64) -> Result<()> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::InvalidParameter(format!("{ell} is not an odd prime")));
    }
    Ok(())
}

fn inv(a: u64, ell: u64) -> u64 {
    inv_mod(a % ell, ell).expect("nonzero mod a prime")
}

impl GroupRingElement {
    pub fn zero(ell: u64, modulus: Option<u64>) -> Self {
        GroupRingElement { ell, modulus, coeffs: vec![BigInt::zero(); (ell - 1) as usize] }
    }

    /// The basis element `δ_a`.
    pub fn delta(ell: u64, a: u64, modulus: Option<u64>) -> Self {
        let mut x = Self::zero(ell, modulus);
        x.coeffs[(a % ell - 1) as usize] = BigInt::one();
        x.normalized()
    }

    pub fn from_integer(ell: u64, c: i64, modulus: Option<u64>) -> Self {
        let mut x = Self::zero(ell, modulus);
        x.coeffs[0] = BigInt::from(c);
        x.normalized()
    }

    fn normalized(mut self) -> Self {
        if let Some(m) = self.modulus {
            let m = BigInt::from(m);
            for c in self.coeffs.iter_mut() {
                *c = c.mod_floor(&m);
            }
        }
        self
    }

    pub fn coeff(&self, a: u64) -> &BigInt {
        &self.coeffs[(a % self.ell - 1) as usize]
    }

    /// Coefficient of `δ_i^{-1}`.
    pub fn coeff_of_inverse(&self, i: u64) -> &BigInt {
        self.coeff(inv(i, self.ell))
    }

    pub fn reduce(&self, m: u64) -> Self {
        GroupRingElement { ell: self.ell, modulus: Some(m), coeffs: self.coeffs.clone() }.normalized()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell || self.modulus != other.modulus {
            return Err(Error::GroupMismatch(format!(
                "({}, {:?}) vs ({}, {:?})",
                self.ell, self.modulus, other.ell, other.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(GroupRingElement { coeffs, ..self.clone() }.normalized())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        GroupRingElement { coeffs, ..self.clone() }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ell = self.ell;
        let mut out = vec![BigInt::zero(); (ell - 1) as usize];
        for a in 1..ell {
            let ca = self.coeff(a);
            if ca.is_zero() {
                continue;
            }
            for b in 1..ell {
                let cb = other.coeff(b);
                if !cb.is_zero() {
                    out[((a * b % ell) - 1) as usize] += ca * cb;
                }
            }
        }
        Ok(GroupRingElement { coeffs: out, ..self.clone() }.normalized())
    }

    /// Complex conjugation `j = δ_{-1}` acting by multiplication.
    pub fn conj(&self) -> Self {
        self.mul(&Self::delta(self.ell, self.ell - 1, self.modulus)).expect("same ring")
    }

    /// Exact division of every coefficient by `d`.
    pub fn divide_exact(&self, d: u64) -> Result<Self> {
        if self.modulus.is_some() {
            return Err(Error::InvalidParameter("exact division needs integer coefficients".into()));
        }
        let d = BigInt::from(d);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return Err(Error::InvalidParameter(format!("coefficient {c} not divisible by {d}")));
            }
            coeffs.push(q);
        }
        Ok(GroupRingElement { coeffs, ..self.clone() })
    }
}

/// `θ = Σ_{i=1}^{ℓ-1} i δ_i^{-1}` in `Z[Δ]`.
pub fn theta(ell: u64) -> Result<GroupRingElement> {
    check_odd_prime(ell)?;
    let mut x = GroupRingElement::zero(ell, None);
    for i in 1..ell {
        x.coeffs[(inv(i, ell) - 1) as usize] = BigInt::from(i);
    }
    Ok(x)
}

/// Minus projection: component `i` is `c(δ_i^{-1}) - c(δ_{ℓ-i}^{-1})`,
/// reduced mod `m` when given (symmetric residues are not used).
pub fn minus_project(x: &GroupRingElement, m: Option<u64>) -> Vec<BigInt> {
    let ell = x.ell;
    (1..=(ell - 1) / 2)
        .map(|i| {
            let c = x.coeff_of_inverse(i) - x.coeff_of_inverse(ell - i);
            match m.or(x.modulus) {
                Some(m) => c.mod_floor(&BigInt::from(m)),
                None => c,
            }
        })
        .collect()
}

/// `u`: the image of `ℓθ` after dividing by `ℓ`, i.e. `θ` itself.
pub fn u_element(ell: u64) -> Result<GroupRingElement> {
    let t = theta(ell)?;
    t.scale(&BigInt::from(ell)).divide_exact(ell)
}

/// `(g - δ_g)θ / ℓ`; for `g = 2` this is the element `v`.
pub fn v_element(ell: u64, g: u64) -> Result<GroupRingElement> {
    let t = theta(ell)?;
    let g_int = GroupRingElement::from_integer(ell, g as i64, None);
    let factor = g_int.sub(&GroupRingElement::delta(ell, g, None))?;
    factor.mul(&t)?.divide_exact(ell)
}

/// `v = Σ_{j > ℓ/2} δ_j^{-1}` written out directly, for cross-checking.
pub fn v_displayed(ell: u64) -> Result<GroupRingElement> {
    check_odd_prime(ell)?;
    let mut x = GroupRingElement::zero(ell, None);
    for j in 1..ell {
        x.coeffs[(inv(j, ell) - 1) as usize] = BigInt::from(2 * j / ell);
    }
    Ok(x)
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|c| c.to_i64().expect("small")).collect()
}

/// Structure of `<u_-, v_->` inside `(Z/rZ)^{(ℓ-1)/2}`.
pub fn ideal_minus_type(ell: u64, r: u64) -> Result<AbelianGroupStructure> {
    check_odd_prime(ell)?;
    if ell <= 3 {
        return Err(Error::InvalidParameter("need ℓ > 3".into()));
    }
    check_odd_prime(r)?;
    let u = minus_project(&u_element(ell)?, Some(r));
    let v = minus_project(&v_element(ell, 2)?, Some(r));
    let ambient = AbelianGroup::new(vec![r; ((ell - 1) / 2) as usize]);
    let gens = [u, v]
        .iter()
        .map(|x| x.iter().map(|c| c.to_u64().expect("reduced")).collect())
        .collect();
    subgroup_structure(&Subgroup::new(ambient, gens)?)
}

/// Determinant of the `(δ_1, δ_g)` columns of `(u_-, ((g - δ_g)θ/ℓ)_-)`:
/// `2` for `g = 2` and `2(g-1)^2` in general.
pub fn det_certificate(ell: u64, g: u64) -> Result<i64> {
    check_odd_prime(ell)?;
    if !FERMAT_PRIMES.contains(&g) {
        return Err(Error::InvalidParameter(format!("g = {g} is not an admissible Fermat prime")));
    }
    if g == 2 {
        if ell <= 3 {
            return Err(Error::InvalidParameter("need ℓ > 3".into()));
        }
    } else if ell <= g * g {
        return Err(Error::InvalidParameter(format!("need ℓ > g^2, got ℓ = {ell}, g = {g}")));
    }
    let u = to_i64(&minus_project(&u_element(ell)?, None));
    let v = to_i64(&minus_project(&v_element(ell, g)?, None));
    let (a, b) = (0usize, (g - 1) as usize);
    Ok(u[a] * v[b] - u[b] * v[a])
}

/// Additive order of the minus projection of `θ` in `(Z/ℓqZ)[Δ]^-`; for `ℓ = 3`
/// this is the order of `-δ_1`.
pub fn theta_minus_order(ell: u64, q: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    check_odd_prime(q)?;
    if q == ell {
        return Err(Error::InvalidParameter("q must differ from ℓ".into()));
    }
    let m = ell * q;
    let proj = minus_project(&theta(ell)?, Some(m));
    let g = AbelianGroup::new(vec![m; proj.len()]);
    let x: Vec<u64> = proj.iter().map(|c| c.to_u64().expect("reduced")).collect();
    Ok(g.element_order(&x))
}

/// Structure of the minus part of the ideal generated by `θ` in `(Z/mZ)[Δ]`,
/// spanned by the projections of `δ_a θ`.
pub fn stickelberger_minus_structure(ell: u64, m: u64) -> Result<AbelianGroupStructure> {
    let t = theta(ell)?;
    let gens: Vec<Vec<u64>> = (1..ell)
        .map(|a| {
            let x = GroupRingElement::delta(ell, a, None).mul(&t).expect("same ring");
            minus_project(&x, Some(m)).iter().map(|c| c.to_u64().unwrap()).collect()
        })
        .collect();
    let ambient = AbelianGroup::new(vec![m; ((ell - 1) / 2) as usize]);
    subgroup_structure(&Subgroup::new(ambient, gens)?)
}

/// Everything the `minuspart` report needs for one `(ℓ, r)`.
#[derive(Debug, Clone, Serialize)]
pub struct MinusPartReport {
    pub ell: u64,
    pub r: u64,
    pub u_minus: Vec<i64>,
    pub v_minus: Vec<i64>,
    pub u_minus_mod_r: Vec<i64>,
    pub v_minus_mod_r: Vec<i64>,
    pub v_matches_displayed: bool,
    pub invariant_factors: Vec<u64>,
    pub cyclic: bool,
    pub det: i64,
    pub det_g: Vec<(u64, i64)>,
}

pub fn minus_part_report(ell: u64, r: u64) -> Result<MinusPartReport> {
    let u = u_element(ell)?;
    let v = v_element(ell, 2)?;
    let ty = ideal_minus_type(ell, r)?;
    let det_g = FERMAT_PRIMES
        .iter()
        .filter(|&&g| g > 2 && ell > g * g)
        .map(|&g| det_certificate(ell, g).map(|d| (g, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MinusPartReport {
        ell,
        r,
        u_minus: to_i64(&minus_project(&u, None)),
        v_minus: to_i64(&minus_project(&v, None)),
        u_minus_mod_r: to_i64(&minus_project(&u, Some(r))),
        v_minus_mod_r: to_i64(&minus_project(&v, Some(r))),
        v_matches_displayed: v == v_displayed(ell)?,
        cyclic: ty.is_cyclic(),
        invariant_factors: ty.invariant_factors,
        det: det_certificate(ell, 2)?,
        det_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        to_i64(v)
    }

    #[test]
    fn theta_examples() {
        let t = theta(3).unwrap();
        assert_eq!(t.coeff_of_inverse(1), &BigInt::from(1));
        assert_eq!(t.coeff_of_inverse(2), &BigInt::from(2));
        for ell in [5u64, 7] {
            let t = theta(ell).unwrap();
            let c: Vec<i64> = (1..ell).map(|i| t.coeff_of_inverse(i).to_i64().unwrap()).collect();
            assert_eq!(c, (1..ell as i64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn minus_examples() {
        assert_eq!(ints(&minus_project(&u_element(5).unwrap(), None)), vec![-3, -1]);
        assert_eq!(ints(&minus_project(&v_element(5, 2).unwrap(), None)), vec![-1, -1]);
        assert_eq!(ints(&minus_project(&theta(3).unwrap(), None)), vec![-1]);
    }

    #[test]
    fn division_by_ell_gives_displayed_v() {
        for ell in [5u64, 7, 11, 13, 37] {
            assert_eq!(v_element(ell, 2).unwrap(), v_displayed(ell).unwrap());
            let lt = theta(ell).unwrap().scale(&BigInt::from(ell));
            assert_eq!(lt.divide_exact(ell).unwrap(), theta(ell).unwrap());
        }
    }

    #[test]
    fn type_examples() {
        assert_eq!(ideal_minus_type(5, 3).unwrap().invariant_factors, vec![3, 3]);
        assert_eq!(ideal_minus_type(7, 5).unwrap().invariant_factors, vec![5, 5]);
        assert!(ideal_minus_type(5, 2).is_err());
        assert!(ideal_minus_type(3, 5).is_err());
    }

    #[test]
    fn det_examples() {
        for ell in [5u64, 7, 11, 37] {
            assert_eq!(det_certificate(ell, 2).unwrap(), 2);
        }
        assert_eq!(det_certificate(13, 3).unwrap(), 8);
        assert_eq!(det_certificate(29, 5).unwrap(), 32);
        assert!(det_certificate(7, 3).is_err());
        assert!(det_certificate(13, 7).is_err());
    }

    #[test]
    fn theta_order_examples() {
        assert_eq!(theta_minus_order(3, 5).unwrap(), 15);
        assert_eq!(theta_minus_order(3, 7).unwrap(), 21);
        assert!(theta_minus_order(3, 3).is_err());
    }

    #[test]
    fn stickelberger_ideal_minus_part() {
        // J^- over Z/3 for ℓ = 5 is everything: (3, 3)
        assert_eq!(stickelberger_minus_structure(5, 3).unwrap().invariant_factors, vec![3, 3]);
    }

    use proptest::prelude::*;

    fn arb_element(ell: u64) -> impl Strategy<Value = GroupRingElement> {
        proptest::collection::vec(-50i64..50, (ell - 1) as usize).prop_map(move |c| {
            let mut x = GroupRingElement::zero(ell, None);
            for (a, v) in c.into_iter().enumerate() {
                x.coeffs[a] = BigInt::from(v);
            }
            x
        })
    }

    proptest! {
        #[test]
        fn minus_kills_plus_part(x in arb_element(11), y in arb_element(11), k in -5i64..5) {
            let plus = x.add(&x.conj()).unwrap();
            prop_assert!(minus_project(&plus, None).iter().all(|c| c.is_zero()));
            let lin = x.add(&y.scale(&BigInt::from(k))).unwrap();
            let lhs = minus_project(&lin, None);
            let px = minus_project(&x, None);
            let py = minus_project(&y, None);
            for i in 0..lhs.len() {
                prop_assert_eq!(&lhs[i], &(&px[i] + &py[i] * k));
            }
        }

        #[test]
        fn ring_axioms(x in arb_element(7), y in arb_element(7), z in arb_element(7)) {
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.clone(), y.mul(&x).unwrap());
            prop_assert_eq!(xy.mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                xy.add(&x.mul(&z).unwrap()).unwrap()
            );
            let one = GroupRingElement::from_integer(7, 1, None);
            prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
            prop_assert_eq!(x.reduce(5).mul(&y.reduce(5)).unwrap(), xy.reduce(5));
        }
    }
}
