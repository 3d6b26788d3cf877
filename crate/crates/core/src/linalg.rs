//! Exact dense linear algebra over the rationals and over prime fields.
#![allow(clippy::needless_range_loop)]


use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn principal_submatrix(m: &Matrix, idx: &[usize]) -> Matrix {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Solves `m x = rhs` for square nonsingular `m`; `None` when singular.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    assert_eq!(rhs.len(), n);
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Coefficients `c_0..c_n` of `det(t I - m) = sum c_k t^k` (Faddeev–LeVerrier).
pub fn char_poly(m: &Matrix) -> Vec<Rational> {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk: Matrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mat_mul(m, &next);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / Rational::from_integer(k.into());
        mk = next;
    }
    coeffs
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let v = &a[i][k] * &b[k][j];
                out[i][j] += v;
            }
        }
    }
    out
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix.
///
/// All roots of the characteristic polynomial are real, so Descartes' rule
/// of signs counts them exactly.
pub fn inertia(m: &Matrix) -> (usize, usize, usize) {
    let c = char_poly(m);
    let zero = c.iter().take_while(|x| x.is_zero()).count();
    let pos = sign_changes(c.iter().cloned());
    let neg =
        sign_changes(
            c.iter()
                .enumerate()
                .map(|(k, x)| if k % 2 == 1 { -x.clone() } else { x.clone() }),
        );
    (pos, neg, zero)
}

fn sign_changes(it: impl Iterator<Item = Rational>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for x in it {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

pub mod modp {
    //! Matrices over the prime field `F_p`, entries kept in `0..p`.

    pub type MatP = Vec<Vec<u64>>;

    pub fn is_prime(p: u64) -> bool {
        p >= 2 && (2..).take_while(|d| d * d <= p).all(|d: u64| !p.is_multiple_of(d))
    }

    pub fn mul(a: &MatP, b: &MatP, p: u64) -> MatP {
        let n = a.len();
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
                }
            }
        }
        out
    }

    pub fn pow(a: &MatP, mut e: u64, p: u64) -> MatP {
        let n = a.len();
        let mut result: MatP = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = mul(&result, &base, p);
            }
            base = mul(&base, &base, p);
            e >>= 1;
        }
        result
    }

    fn inv(a: u64, p: u64) -> u64 {
        // Fermat
        let (mut base, mut e, mut r) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    }

    pub fn rank(a: &MatP, p: u64) -> usize {
        let mut m = a.clone();
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(piv, rank);
            let iv = inv(m[rank][c], p);
            for x in m[rank].iter_mut() {
                *x = *x * iv % p;
            }
            for r in 0..rows {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    for k in 0..cols {
                        m[r][k] = (m[r][k] + p - f * m[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
