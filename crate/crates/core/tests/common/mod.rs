#![allow(dead_code)]

use std::sync::Arc;

use divlat::corpus::{self, Kind};
use divlat::io::{load_lattice, load_resolution, LoadedResolution};
use divlat::lattice::{Divisor, IntersectionLattice};
use divlat::rational::{int, Rational};

/// Every lattice reachable from the bundled fixtures, deduplicated by name,
/// without empty ones.
pub fn corpus_lattices() -> Vec<Arc<IntersectionLattice>> {
    let mut out: Vec<Arc<IntersectionLattice>> = Vec::new();
    let mut push = |l: Arc<IntersectionLattice>| {
        if !l.is_empty() && !out.iter().any(|o| o.name() == l.name()) {
            out.push(l);
        }
    };
    for name in corpus::names(Kind::Lattice) {
        push(load_lattice(&format!("corpus:{name}"), None).unwrap());
    }
    for (_, r) in corpus_resolutions() {
        push(r.model.upstairs().clone());
        push(r.model.downstairs().clone());
    }
    out
}

pub fn corpus_resolutions() -> Vec<(&'static str, LoadedResolution)> {
    corpus::names(Kind::Resolution)
        .map(|n| (n, load_resolution(&format!("corpus:{n}"), None).unwrap()))
        .collect()
}

/// All coefficient vectors of length `n` with entries >= 0 and sum in
/// `1..=max_sum`.
pub fn effective_vectors(n: usize, max_sum: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            if cur.iter().any(|&c| c > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_sum, &mut Vec::new(), &mut out);
    out
}

pub fn divisor(l: &Arc<IntersectionLattice>, v: &[u64]) -> Divisor {
    let c: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    Divisor::from_ints(l, &c).unwrap()
}

/// Every `a` with `0 <= a <= d` componentwise.
pub fn subvectors(d: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &c in d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=c).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

/// `sum a_i b_j M_ij` straight from the matrix.
pub fn pair(l: &IntersectionLattice, a: &[u64], b: &[u64]) -> Rational {
    let mut s = int(0);
    for i in 0..a.len() {
        for j in 0..b.len() {
            if a[i] != 0 && b[j] != 0 {
                s += l.entry(i, j) * Rational::from_integer(((a[i] * b[j]) as i64).into());
            }
        }
    }
    s
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// No decomposition `d = a + b` into nonzero effective parts has `-a` nef
/// over `b`.
pub fn brute_chain_connected(l: &IntersectionLattice, d: &[u64]) -> bool {
    let n = d.len();
    for a in subvectors(d) {
        let b: Vec<u64> = d.iter().zip(&a).map(|(x, y)| x - y).collect();
        if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
            continue;
        }
        let defeats = (0..n)
            .filter(|&i| b[i] > 0)
            .all(|i| pair(l, &a, &unit(n, i)) <= int(0));
        if defeats {
            return false;
        }
    }
    true
}

/// The largest chain-connected subdivisor with the same support, if the
/// chain-connected ones have a unique maximum.
pub fn brute_component(l: &IntersectionLattice, d: &[u64]) -> Option<Vec<u64>> {
    let cands: Vec<Vec<u64>> = subvectors(d)
        .into_iter()
        .filter(|a| a.iter().zip(d).all(|(x, y)| (*x > 0) == (*y > 0)))
        .filter(|a| brute_chain_connected(l, a))
        .collect();
    let top = cands.iter().find(|c| {
        cands
            .iter()
            .all(|o| o.iter().zip(c.iter()).all(|(x, y)| x <= y))
    })?;
    Some(top.clone())
}

/// Negative definiteness of the principal block on `idx` through the
/// pivots of symmetric Gaussian elimination.
pub fn ldl_negative_definite(l: &IntersectionLattice, idx: &[usize]) -> bool {
    let mut m: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| l.entry(i, j).clone()).collect())
        .collect();
    let k = m.len();
    for p in 0..k {
        if m[p][p] >= int(0) {
            return false;
        }
        for r in p + 1..k {
            let f = &m[r][p] / &m[p][p];
            for c in p..k {
                let t = &f * &m[p][c];
                m[r][c] -= t;
            }
        }
    }
    true
}

pub fn coeffs_u64(d: &Divisor) -> Vec<u64> {
    d.coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer().try_into().unwrap()
        })
        .collect()
}
