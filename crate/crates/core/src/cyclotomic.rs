//! Exact arithmetic in `Z[zeta_m]` and valuations at primes above `p`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(m)-1)`.
//! For `p` not dividing `m`, a prime above `p` is given by a monic irreducible
//! factor `g` of `Phi_m` mod `p`; its completion is `Z_p[y]/(G)` with `G` the
//! Hensel lift of `g`, so valuations are read off after reducing mod `G`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{euler_phi, gcd, inv_mod, mult_order, split_off};
use crate::error::{Error, Result};
use crate::polymod::{self, hensel_lift, rem_monic_big, Poly};

/// Default cap on the Hensel precision `k`.
pub const DEFAULT_PRECISION_CAP: u32 = 512;
const START_PRECISION: u32 = 8;

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Phi_m`, ascending coefficients.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1);
    if let Some(f) = poly_cache().lock().unwrap().get(&m) {
        return f.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in crate::arith::divisors(m) {
        if d < m {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    let f = Arc::new(num);
    poly_cache().lock().unwrap().entry(m).or_insert(f).clone()
}

/// Exact quotient by a monic polynomial.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i - db + j] -= &c * bj;
        }
        q[i - db] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "division was not exact");
    q
}

/// An element of `Z[zeta_m]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*z^{i}"))
            .collect();
        write!(f, "CycInt[{}](", self.m)?;
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, ")")
    }
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            m: u64,
            coeffs: Vec<String>,
        }
        Repr { m: self.m, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

fn phi_len(m: u64) -> usize {
    euler_phi(m) as usize
}

impl CycInt {
    pub fn zero(m: u64) -> Self {
        CycInt { m, coeffs: vec![BigInt::zero(); phi_len(m)] }
    }

    pub fn from_int(m: u64, c: impl Into<BigInt>) -> Self {
        let mut x = CycInt::zero(m);
        x.coeffs[0] = c.into();
        x
    }

    pub fn one(m: u64) -> Self {
        CycInt::from_int(m, 1)
    }

    /// `zeta_m^k`.
    pub fn zeta(m: u64, k: u64) -> Self {
        let mut dense = vec![BigInt::zero(); m as usize];
        dense[(k % m) as usize] = BigInt::one();
        CycInt::from_dense(m, dense)
    }

    /// `sum_j a_j zeta^j` for any length of `a`.
    pub fn from_dense(m: u64, a: Vec<BigInt>) -> Self {
        let mut folded = vec![BigInt::zero(); m as usize];
        for (j, c) in a.into_iter().enumerate() {
            folded[j % m as usize] += c;
        }
        CycInt { m, coeffs: reduce_mod_phi(m, folded) }
    }

    /// From `(exponent, coefficient)` pairs.
    pub fn from_terms(m: u64, terms: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut dense = vec![BigInt::zero(); m as usize];
        for (e, c) in terms {
            dense[(e % m) as usize] += c;
        }
        CycInt::from_dense(m, dense)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ConductorMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { m: self.m, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let prod = polymod::mul_big(&self.coeffs, &other.coeffs);
        Ok(CycInt { m: self.m, coeffs: reduce_mod_phi(self.m, prod) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = CycInt::one(self.m);
        for _ in 0..e {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// `sigma_a : zeta -> zeta^a`.
    pub fn galois_apply(&self, a: u64) -> Result<Self> {
        let m = self.m;
        if gcd(a % m.max(1), m) != 1 && m > 1 {
            return Err(Error::InvalidParameter(format!("{a} is not a unit mod {m}")));
        }
        let mut dense = vec![BigInt::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[((i as u128 * a as u128) % m as u128) as usize] += c;
            }
        }
        Ok(CycInt { m, coeffs: reduce_mod_phi(m, dense) })
    }

    /// Complex conjugation, `sigma_{-1}`.
    pub fn conj(&self) -> Self {
        self.galois_apply(self.m.saturating_sub(1).max(1)).expect("-1 is a unit")
    }

    /// The same element inside `Z[zeta_n]` for a multiple `n` of `m`.
    pub fn embed(&self, n: u64) -> Result<Self> {
        if n % self.m != 0 {
            return Err(Error::ConductorMismatch(self.m, n));
        }
        let step = n / self.m;
        Ok(CycInt::from_terms(
            n,
            self.coeffs.iter().enumerate().map(|(i, c)| (i as u64 * step, c.clone())),
        ))
    }

    /// Product of `sigma_a(x)` over the given residues.
    pub fn product_of_conjugates(&self, residues: &[u64]) -> Result<Self> {
        let mut out = CycInt::one(self.m);
        for &a in residues {
            out = out.mul(&self.galois_apply(a)?)?;
        }
        Ok(out)
    }

    /// Relative norm to `Q(zeta_d)` for `d | m` with `gcd(d, m/d) = 1`, as an
    /// element of `Z[zeta_d]`.
    pub fn norm_to(&self, d: u64) -> Result<Self> {
        let residues: Vec<u64> = (1..=self.m)
            .filter(|&a| gcd(a, self.m) == 1 && a % d == 1 % d)
            .collect();
        let n = self.product_of_conjugates(&residues)?;
        n.descend(d).ok_or_else(|| Error::Internal("norm is not in the subfield".into()))
    }

    /// Absolute norm.
    pub fn norm(&self) -> Result<BigInt> {
        Ok(self.norm_to(1)?.coeffs[0].clone())
    }

    /// Rewrite an element of `Q(zeta_d)` (with `gcd(d, m/d) = 1`) in `Z[zeta_d]`;
    /// `None` when the element does not lie in that subfield.
    pub fn descend(&self, d: u64) -> Option<Self> {
        let m = self.m;
        if m % d != 0 {
            return None;
        }
        let e = m / d;
        if gcd(d, e) != 1 {
            return None;
        }
        if e == 1 {
            return Some(self.clone());
        }
        // zeta_m = zeta_d^alpha * z^beta with z = zeta_e
        let alpha = if d == 1 { 0 } else { inv_mod(e % d, d).expect("coprime") };
        let beta = inv_mod(d % e, e).expect("coprime");
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); d as usize]; e as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as u64;
            let a = if d == 1 { 0 } else { (j * alpha) % d };
            let b = (j * beta) % e;
            rows[b as usize][a as usize] += c;
        }
        let mut coef: Vec<Vec<BigInt>> =
            rows.into_iter().map(|r| reduce_mod_phi(d, r)).collect();
        let phi_e = cyclotomic_poly(e);
        let de = phi_e.len() - 1;
        for deg in (de..e as usize).rev() {
            let c = std::mem::take(&mut coef[deg]);
            if c.iter().all(Zero::is_zero) {
                coef[deg] = c;
                continue;
            }
            for (j, pj) in phi_e.iter().enumerate().take(de) {
                if pj.is_zero() {
                    continue;
                }
                for (t, ct) in c.iter().enumerate() {
                    coef[deg - de + j][t] -= ct * pj;
                }
            }
            coef[deg] = vec![BigInt::zero(); c.len()];
        }
        if coef[1..de].iter().flatten().any(|c| !c.is_zero()) {
            return None;
        }
        Some(CycInt { m: d, coeffs: coef.swap_remove(0) })
    }
}

fn reduce_mod_phi(m: u64, mut a: Vec<BigInt>) -> Vec<BigInt> {
    let f = cyclotomic_poly(m);
    let n = f.len() - 1;
    if a.len() > n {
        for i in (n..a.len()).rev() {
            let c = std::mem::take(&mut a[i]);
            if c.is_zero() {
                continue;
            }
            for (j, fj) in f.iter().enumerate().take(n) {
                if !fj.is_zero() {
                    a[i - n + j] -= &c * fj;
                }
            }
        }
    }
    a.resize(n, BigInt::zero());
    a
}

/// A prime of `Q(zeta_m)` above `p`, for `p` not dividing `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeAbove {
    pub p: u64,
    pub m: u64,
    pub residue_degree: u64,
    /// Position in the lexicographic order of the factors of `Phi_m` mod `p`.
    pub index: usize,
    /// Constant term of the factor, in `[0, p)`.
    pub label: u64,
    /// Monic irreducible factor of `Phi_m` mod `p`.
    pub factor: Poly,
}

impl PrimeAbove {
    fn cofactor(&self) -> Poly {
        let f = polymod::from_ints(&cyclotomic_poly(self.m), self.p);
        polymod::divrem(&f, &self.factor, self.p).0
    }

    /// The Hensel lift of the factor to `Z/p^k`.
    pub fn hensel_factor(&self, k: u32) -> Vec<BigInt> {
        hensel_lift(&cyclotomic_poly(self.m), &self.factor, &self.cofactor(), self.p, k)
    }

    /// For `f = 1`: the root of the lifted factor, i.e. the image of `zeta_m` mod `p^k`.
    pub fn hensel_root(&self, k: u32) -> Option<BigInt> {
        if self.residue_degree != 1 {
            return None;
        }
        let g = self.hensel_factor(k);
        let modulus = BigInt::from(self.p).pow(k);
        Some((-&g[0]).mod_floor(&modulus))
    }

    /// For `f = 1`: `zeta_m mod P` as an integer in `[0, p)`.
    pub fn root_mod_p(&self) -> Option<u64> {
        (self.residue_degree == 1).then(|| (self.p - self.factor[0]) % self.p)
    }
}

/// Primes of `Q(zeta_m)` above `p`, one per irreducible factor of `Phi_m` mod `p`.
pub fn split_prime(p: u64, m: u64) -> Result<Vec<PrimeAbove>> {
    if !crate::arith::is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if m % p == 0 {
        return Err(Error::PreconditionFailed(format!("{p} divides {m}")));
    }
    let f = if m == 1 { 1 } else { mult_order(p % m, m).expect("p is a unit mod m") };
    let phi = polymod::from_ints(&cyclotomic_poly(m), p);
    let mut rng = ChaCha8Rng::seed_from_u64(p.wrapping_mul(1_000_003) ^ m);
    let factors = polymod::equal_degree_factor(&phi, f as usize, p, &mut rng);
    debug_assert_eq!(factors.len() as u64, euler_phi(m) / f);
    Ok(factors
        .into_iter()
        .enumerate()
        .map(|(index, g)| PrimeAbove {
            p,
            m,
            residue_degree: f,
            index,
            label: g.first().copied().unwrap_or(0),
            factor: g,
        })
        .collect())
}

/// Index of `sigma_a(P)` in `primes`, found as the prime containing `sigma_a(g(zeta))`.
pub fn galois_image_index(primes: &[PrimeAbove], i: usize, a: u64) -> Result<usize> {
    let pr = &primes[i];
    let g = CycInt::from_terms(
        pr.m,
        pr.factor.iter().enumerate().map(|(j, &c)| (j as u64, BigInt::from(c))),
    );
    let image = g.galois_apply(a)?;
    let pb = BigInt::from(pr.p);
    for (j, q) in primes.iter().enumerate() {
        let r = rem_monic_big(image.coeffs(), &q.hensel_factor(1), &pb);
        if r.is_empty() {
            return Ok(j);
        }
    }
    Err(Error::Internal("galois image prime not found".into()))
}

/// `v_P(x)` at working precision `k`.
pub fn valuation_unramified(x: &CycInt, pr: &PrimeAbove, k: u32) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if x.m != pr.m {
        return Err(Error::ConductorMismatch(x.m, pr.m));
    }
    let pb = BigInt::from(pr.p);
    let modulus = pb.pow(k);
    let r = rem_monic_big(x.coeffs(), &pr.hensel_factor(k), &modulus);
    if r.is_empty() {
        return Err(Error::PrecisionExceeded(k));
    }
    Ok(r.iter().filter(|c| !c.is_zero()).map(|c| big_valuation(c, &pb)).min().unwrap_or(k))
}

/// `v_P(x)`, doubling the precision from 8 up to `cap`.
pub fn valuation_with_cap(x: &CycInt, pr: &PrimeAbove, cap: u32) -> Result<u32> {
    let mut k = START_PRECISION.min(cap);
    loop {
        match valuation_unramified(x, pr, k) {
            Err(Error::PrecisionExceeded(_)) if k < cap => k = (2 * k).min(cap),
            other => return other,
        }
    }
}

pub fn valuation_at(x: &CycInt, pr: &PrimeAbove) -> Result<u32> {
    valuation_with_cap(x, pr, DEFAULT_PRECISION_CAP)
}

fn big_valuation(c: &BigInt, p: &BigInt) -> u32 {
    let mut c = c.abs();
    let mut v = 0;
    while !c.is_zero() && (&c % p).is_zero() {
        c /= p;
        v += 1;
    }
    v
}

/// Valuation at the unique prime of `Q(zeta_m)` above a prime `below` of
/// `Q(zeta_m')`, where `m = m' p^t` and the step is totally ramified. The
/// valuation is normalized in `Q(zeta_m)`, so `v(p) = phi(p^t)`.
pub fn valuation_ramified_layer(x: &CycInt, p: u64, below: &PrimeAbove) -> Result<u32> {
    valuation_ramified_layer_with_cap(x, p, below, DEFAULT_PRECISION_CAP)
}

pub fn valuation_ramified_layer_with_cap(
    x: &CycInt,
    p: u64,
    below: &PrimeAbove,
    cap: u32,
) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (rest, pt) = split_off(x.m, p);
    if below.p != p || rest != below.m {
        return Err(Error::UnsupportedConductor(format!(
            "ambient conductor {} does not split as {} * {p}^t",
            x.m, below.m
        )));
    }
    if pt == 1 {
        return valuation_with_cap(x, below, cap);
    }
    let n = x.norm_to(rest)?;
    valuation_with_cap(&n, below, cap)
}

/// `v_p` of a nonzero integer.
pub fn integer_valuation(c: &BigInt, p: u64) -> u32 {
    big_valuation(c, &BigInt::from(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(7), ints(&[1; 7]));
        assert_eq!(cyclotomic_poly(21).len(), 13);
        assert_eq!(*cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn product_identity() {
        for n in 1..=200u64 {
            let mut prod = ints(&[1]);
            for d in crate::arith::divisors(n) {
                prod = polymod::mul_big(&prod, &cyclotomic_poly(d));
            }
            let mut target = vec![BigInt::zero(); n as usize + 1];
            target[0] = BigInt::from(-1);
            target[n as usize] = BigInt::one();
            assert_eq!(prod, target, "n = {n}");
        }
    }

    #[test]
    fn ring_examples() {
        let z = CycInt::zeta(7, 1);
        assert_eq!(z.mul(&CycInt::zeta(7, 6)).unwrap(), CycInt::one(7));
        assert_eq!(CycInt::zeta(21, 1).galois_apply(2).unwrap(), CycInt::zeta(21, 2));
        let a = CycInt::one(3).add(&CycInt::zeta(3, 1)).unwrap();
        let b = CycInt::one(3).add(&CycInt::zeta(3, 2)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), CycInt::one(3));
        assert!(matches!(a.add(&CycInt::one(5)), Err(Error::ConductorMismatch(3, 5))));
        assert_eq!(z.conj(), CycInt::zeta(7, 6));
    }

    #[test]
    fn descend_and_embed() {
        let x = CycInt::zeta(5, 2).add(&CycInt::from_int(5, 3)).unwrap();
        let y = x.embed(35).unwrap();
        assert_eq!(y.descend(5), Some(x));
        assert_eq!(CycInt::zeta(35, 1).descend(5), None);
        assert_eq!(CycInt::zeta(7, 1).norm().unwrap(), BigInt::one());
        let one_minus = CycInt::one(7).sub(&CycInt::zeta(7, 1)).unwrap();
        assert_eq!(one_minus.norm().unwrap(), BigInt::from(7));
    }

    #[test]
    fn split_examples() {
        let s = split_prime(7, 3).unwrap();
        assert_eq!((s.len(), s[0].residue_degree), (2, 1));
        let s = split_prime(2, 7).unwrap();
        assert_eq!((s.len(), s[0].residue_degree), (2, 3));
        let s = split_prime(31, 5).unwrap();
        assert_eq!((s.len(), s[0].residue_degree), (4, 1));
        assert!(matches!(split_prime(5, 15), Err(Error::PreconditionFailed(_))));
        for pr in &s {
            let k = 10;
            let root = pr.hensel_root(k).unwrap();
            let modulus = BigInt::from(31u64).pow(k);
            let val: BigInt = cyclotomic_poly(5)
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, c| (acc * &root + c).mod_floor(&modulus));
            assert!(val.is_zero());
        }
    }

    #[test]
    fn unramified_valuations() {
        for pr in split_prime(7, 3).unwrap() {
            assert_eq!(valuation_at(&CycInt::from_int(3, 7), &pr).unwrap(), 1);
            assert_eq!(valuation_at(&CycInt::one(3), &pr).unwrap(), 0);
        }
        let primes = split_prime(7, 3).unwrap();
        let c = primes[0].hensel_root(32).unwrap();
        let x = CycInt::zeta(3, 1).sub(&CycInt::from_int(3, c)).unwrap();
        assert!(valuation_at(&x, &primes[0]).unwrap() >= 1);
        assert_eq!(valuation_at(&x, &primes[1]).unwrap(), 0);
        assert!(matches!(valuation_at(&CycInt::zero(3), &primes[0]), Err(Error::ZeroElement)));
    }

    #[test]
    fn precision_is_reported() {
        let pr = &split_prime(7, 3).unwrap()[0];
        let x = CycInt::from_int(3, BigInt::from(7).pow(20));
        assert!(matches!(valuation_unramified(&x, pr, 8), Err(Error::PrecisionExceeded(8))));
        assert_eq!(valuation_with_cap(&x, pr, 64).unwrap(), 20);
        assert!(matches!(valuation_with_cap(&x, pr, 16), Err(Error::PrecisionExceeded(16))));
    }

    #[test]
    fn ramified_examples() {
        let below = &split_prime(7, 1).unwrap()[0];
        let x = CycInt::one(7).sub(&CycInt::zeta(7, 1)).unwrap();
        assert_eq!(valuation_ramified_layer(&x, 7, below).unwrap(), 1);
        assert_eq!(valuation_ramified_layer(&CycInt::from_int(7, 7), 7, below).unwrap(), 6);
        // 1 - zeta_7 is a uniformizer of Q(zeta_7), and Q(zeta_21)/Q(zeta_7) is unramified at 7
        for pr in split_prime(7, 3).unwrap() {
            let x = CycInt::one(21).sub(&CycInt::zeta(21, 3)).unwrap();
            assert_eq!(valuation_ramified_layer(&x, 7, &pr).unwrap(), 1);
        }
    }

    /// Resultant of two integer polynomials by fraction-free elimination on
    /// the Sylvester matrix.
    fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
        let (da, db) = (a.len() - 1, b.len() - 1);
        let n = da + db;
        let mut s = vec![vec![BigInt::zero(); n]; n];
        for i in 0..db {
            for (j, c) in a.iter().rev().enumerate() {
                s[i][i + j] = c.clone();
            }
        }
        for i in 0..da {
            for (j, c) in b.iter().rev().enumerate() {
                s[db + i][i + j] = c.clone();
            }
        }
        // Bareiss
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if s[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !s[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                s.swap(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    s[i][j] = (&s[i][j] * &s[k][k] - &s[i][k] * &s[k][j]) / &prev;
                }
            }
            prev = s[k][k].clone();
        }
        sign * &s[n - 1][n - 1]
    }

    fn element(m: u64, c: &[i64]) -> CycInt {
        CycInt::from_dense(m, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn norm_is_resultant(m in 2u64..=40, c in prop::collection::vec(-3i64..=3, 1..8)) {
            let x = element(m, &c);
            prop_assume!(!x.is_zero());
            let mut a: Vec<BigInt> = x.coeffs().to_vec();
            while a.len() > 1 && a.last().unwrap().is_zero() {
                a.pop();
            }
            // Phi_m is monic, so Res(Phi_m, a) is the product of a over the roots
            prop_assert_eq!(x.norm().unwrap(), resultant(&cyclotomic_poly(m), &a));
        }

        #[test]
        fn local_degrees_add_up(m in 2u64..=30, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
                                c in prop::collection::vec(-4i64..=4, 1..6)) {
            prop_assume!(m % p != 0);
            let x = element(m, &c);
            prop_assume!(!x.is_zero());
            let n = x.norm().unwrap();
            let primes = split_prime(p, m).unwrap();
            let total: u64 = primes
                .iter()
                .map(|pr| pr.residue_degree * valuation_at(&x, pr).unwrap() as u64)
                .sum();
            prop_assert_eq!(total, integer_valuation(&n, p) as u64);
        }

        #[test]
        fn galois_permutes_valuations(m in 3u64..=30, p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
                                      a in 1u64..30, c in prop::collection::vec(-4i64..=4, 1..6)) {
            prop_assume!(m % p != 0 && gcd(a, m) == 1);
            let x = element(m, &c);
            prop_assume!(!x.is_zero());
            let y = x.galois_apply(a).unwrap();
            let primes = split_prime(p, m).unwrap();
            for i in 0..primes.len() {
                let j = galois_image_index(&primes, i, a).unwrap();
                prop_assert_eq!(valuation_at(&y, &primes[j]).unwrap(), valuation_at(&x, &primes[i]).unwrap());
            }
        }
    }
}
