//! Dense polynomials over `F_p` and over `Z/p^k`, coefficients in ascending
//! order with no trailing zeros (the zero polynomial is empty).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::arith::{inv_mod, mul_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn from_ints(a: &[BigInt], p: u64) -> Poly {
    let pb = BigInt::from(p);
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect(),
    )
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p).expect("leading coefficient is a unit");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul_mod(r[i], inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = (r[k] + p - mul_mod(c, bj, p)) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&c) => scale(a, inv_mod(c, p).expect("unit"), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` and `g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("not both zero"), p).expect("unit");
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub fn powmod(a: &[u64], e: &BigUint, f: &[u64], p: u64) -> Poly {
    let mut result = rem(&[1], f, p);
    let base = rem(a, f, p);
    for i in (0..e.bits()).rev() {
        result = mulmod(&result, &result, f, p);
        if e.bit(i) {
            result = mulmod(&result, &base, f, p);
        }
    }
    result
}

fn random_poly(n: usize, p: u64, rng: &mut impl Rng) -> Poly {
    trim((0..n).map(|_| rng.gen_range(0..p)).collect())
}

/// Split a monic squarefree `f` whose irreducible factors all have degree `d`.
/// Factors are returned monic and sorted lexicographically by coefficients.
pub fn equal_degree_factor(f: &[u64], d: usize, p: u64, rng: &mut impl Rng) -> Vec<Poly> {
    let mut done = Vec::new();
    let mut todo = vec![monic(f, p)];
    let q = BigUint::from(p).pow(d as u32);
    let half = (&q - 1u32) / 2u32;
    while let Some(g) = todo.pop() {
        let n = degree(&g).unwrap_or(0);
        if n <= d {
            done.push(g);
            continue;
        }
        loop {
            let a = random_poly(n, p, rng);
            if a.is_empty() {
                continue;
            }
            let b = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = mulmod(&t, &t, &g, p);
                    acc = add(&acc, &t, p);
                }
                acc
            } else {
                sub(&powmod(&a, &half, &g, p), &[1], p)
            };
            let h = gcd(&b, &g, p);
            let dh = degree(&h).unwrap_or(0);
            if dh > 0 && dh < n {
                let other = divrem(&g, &h, p).0;
                todo.push(h);
                todo.push(monic(&other, p));
                break;
            }
        }
    }
    done.sort();
    done
}

/// Polynomials with `BigInt` coefficients reduced into `[0, modulus)`.
pub fn reduce_big(a: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(modulus)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn lift(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn mul_big(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `a` modulo a monic `b`, coefficients reduced mod `modulus`.
pub fn rem_monic_big(a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r = reduce_big(a, modulus);
    while r.len() > db {
        let i = r.len() - 1;
        let c = r[i].clone();
        for (j, bj) in b.iter().enumerate() {
            r[i - db + j] -= &c * bj;
        }
        r = reduce_big(&r, modulus);
    }
    r
}

/// Lift a monic factorization `f = g h mod p` (coprime factors) to `mod p^k`,
/// returning the lift of `g`.
pub fn hensel_lift(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> Vec<BigInt> {
    let (one, s, t) = ext_gcd(g, h, p);
    assert_eq!(one, vec![1], "factors must be coprime mod p");
    let pb = BigInt::from(p);
    let (mut gb, mut hb) = (lift(g), lift(h));
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let prod = mul_big(&gb, &hb);
        let n = f.len().max(prod.len());
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default();
                let pi = prod.get(i).cloned().unwrap_or_default();
                (fi - pi).mod_floor(&next) / &pj
            })
            .collect();
        let e = from_ints(&e, p);
        let a = rem(&mul(&e, &t, p), g, p);
        let b = rem(&mul(&e, &s, p), h, p);
        for (i, c) in a.iter().enumerate() {
            gb[i] += &pj * c;
        }
        for (i, c) in b.iter().enumerate() {
            hb[i] += &pj * c;
        }
        gb = reduce_big(&gb, &next);
        hb = reduce_big(&hb, &next);
        pj = next;
    }
    gb
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_identity() {
        let p = 7;
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 1, 3];
        let (q, r) = divrem(&a, &b, p);
        assert_eq!(add(&mul(&q, &b, p), &r, p), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn ext_gcd_bezout() {
        let p = 11;
        let a = vec![1, 2, 0, 1];
        let b = vec![5, 1, 1];
        let (g, s, t) = ext_gcd(&a, &b, p);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), g);
    }

    #[test]
    fn factor_x7_minus_1_over_f2() {
        // Phi_7 = (x^3 + x + 1)(x^3 + x^2 + 1) over F_2
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = equal_degree_factor(&[1, 1, 1, 1, 1, 1, 1], 3, 2, &mut rng);
        assert_eq!(f, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
    }

    #[test]
    fn factor_linear_mod_31() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = equal_degree_factor(&[1, 1, 1, 1, 1], 1, 31, &mut rng);
        // the roots are the elements of order 5: 2, 4, 8, 16
        let roots: Vec<u64> = f.iter().map(|g| (31 - g[0]) % 31).collect();
        let mut sorted = roots.clone();
        sorted.sort();
        assert_eq!(sorted, vec![2, 4, 8, 16]);
    }

    #[test]
    fn hensel_lift_is_a_factor() {
        // x^2 + 1 = (x - 2)(x + 2) mod 5
        let f: Vec<BigInt> = [1, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let g = hensel_lift(&f, &[3, 1], &[2, 1], 5, 6);
        let m = BigInt::from(5u64.pow(6));
        // g = x + c with c^2 + 1 = 0 mod 5^6
        let c = &g[0];
        assert!((c * c + BigInt::one()).mod_floor(&m).is_zero());
        assert!(rem_monic_big(&f, &g, &m).is_empty());
    }
}
