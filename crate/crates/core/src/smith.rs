//! Smith normal form over `Z/E`.
//!
//! A finite abelian group of exponent dividing `E` embeds in `(Z/E)^k`, so a
//! subgroup is the row span of an integer matrix taken mod `E`. Diagonalizing
//! with row and column operations mod `E` keeps every entry below `E`, and the
//! rows of `U A` (row operations only) are independent generators of the span.

use crate::arith::gcd;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSmith {
    pub modulus: u64,
    /// Diagonal entries of `U A W`, one per input row, reduced mod `E`.
    pub diagonal: Vec<u64>,
    /// The rows of `U A`; row `i` has additive order `E / gcd(d_i, E)`.
    pub rows: Vec<Vec<u64>>,
}

impl ModSmith {
    pub fn row_orders(&self) -> Vec<u64> {
        self.diagonal
            .iter()
            .map(|&d| self.modulus / gcd(d, self.modulus))
            .collect()
    }
}

fn sub_mul(x: u64, q: u64, y: u64, m: u64) -> u64 {
    let t = (q as u128 * y as u128 % m as u128) as u64;
    (x + m - t) % m
}

pub fn smith_mod(a: &[Vec<u64>], modulus: u64) -> ModSmith {
    assert!(modulus >= 1);
    let m = modulus;
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut w: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % m).collect()).collect();
    let mut u = w.clone();
    let n = rows.min(cols);
    let mut diagonal = vec![0u64; rows];
    for t in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w[i][j] != 0 && best.is_none_or(|(bi, bj)| w[i][j] < w[bi][bj]) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap(t, pi);
        u.swap(t, pi);
        for row in w.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if w[i][t] != 0 {
                    let q = w[i][t] / w[t][t];
                    for j in 0..cols {
                        w[i][j] = sub_mul(w[i][j], q, w[t][j], m);
                        u[i][j] = sub_mul(u[i][j], q, u[t][j], m);
                    }
                    if w[i][t] != 0 {
                        w.swap(t, i);
                        u.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if w[t][j] != 0 {
                    let q = w[t][j] / w[t][t];
                    for i in 0..rows {
                        w[i][j] = sub_mul(w[i][j], q, w[i][t], m);
                    }
                    if w[t][j] != 0 {
                        for row in w.iter_mut() {
                            row.swap(t, j);
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        diagonal[t] = w[t][t];
    }
    ModSmith { modulus, diagonal, rows: u }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_rank() {
        // rows (1,2),(2,4) over Z/5 span a line
        let s = smith_mod(&[vec![1, 2], vec![2, 4]], 5);
        assert_eq!(s.row_orders(), vec![5, 1]);
        assert_eq!(s.rows[0], vec![1, 2]);
    }

    #[test]
    fn mixed_orders() {
        // in (Z/12)^2: (4,0) has order 3, (0,6) order 2
        let s = smith_mod(&[vec![4, 0], vec![0, 6], vec![4, 6]], 12);
        let mut o = s.row_orders();
        o.sort_unstable();
        assert_eq!(o, vec![1, 2, 3]);
    }

    #[test]
    fn no_growth_on_wide_input() {
        let a: Vec<Vec<u64>> = (0..18)
            .map(|i| (0..18).map(|j| (i * 7 + j * j * 3 + 1) % 13).collect())
            .collect();
        let s = smith_mod(&a, 13);
        assert!(s.rows.iter().flatten().all(|&x| x < 13));
    }
}
