//! Elementary integer arithmetic used throughout the crate.
//!
//! Residues and moduli live in `u64`; every product is formed in `u128` so
//! nothing here can silently overflow for moduli below 2^63.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Ramanujan sum c_m(j): the sum of the j-th powers of all primitive m-th roots of unity.
pub fn ramanujan_sum(m: u64, j: u64) -> i64 {
    let g = gcd(m, j % m);
    let g = if j % m == 0 { m } else { g };
    divisors(g)
        .into_iter()
        .map(|d| moebius(m / d) * d as i64)
        .sum()
}

/// Multiplicative order of `a` modulo `m`; `None` when `a` is not a unit.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Smallest primitive root modulo an odd prime power or 2, 4.
pub fn primitive_root(m: u64) -> Option<u64> {
    let phi = euler_phi(m);
    (1..m.max(2)).find(|&g| mult_order(g, m) == Some(phi))
}

/// Chinese remainder: the unique x mod m1*m2 with x = a1 (m1), x = a2 (m2), moduli coprime.
pub fn crt(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    if m == 1 {
        return 0;
    }
    let inv = inv_mod(m1 % m2, m2).expect("crt moduli must be coprime");
    let t = mul_mod((a2 + m2 - a1 % m2) % m2, inv, m2);
    (a1 % m1 + m1 * t) % m
}

/// The n/p^v(n) and p^v(n) split of n.
pub fn split_off(n: u64, p: u64) -> (u64, u64) {
    let mut pk = 1;
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
        pk *= p;
    }
    (rest, pk)
}

/// Normalize a modulus so that it is not 2 mod 4.
pub fn normalize_modulus(n: u64) -> u64 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_matches_count() {
        for n in 1..300u64 {
            let count = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), count, "n={n}");
        }
    }

    #[test]
    fn ramanujan_sums() {
        assert_eq!(ramanujan_sum(1, 0), 1);
        assert_eq!(ramanujan_sum(7, 1), -1);
        assert_eq!(ramanujan_sum(7, 0), 6);
        assert_eq!(ramanujan_sum(12, 1), 0);
        assert_eq!(ramanujan_sum(9, 3), -3);
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt(2, 3, 3, 5), 8);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(9), Some(2));
        assert_eq!(mult_order(2, 7), Some(3));
    }
}
