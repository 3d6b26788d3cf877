//! Zariski decomposition of effective divisors and the integral variant.
//!
//! The negative part is found by support growth: start from the primes of
//! `Supp D` pairing negatively with `D`, solve for the part supported there
//! that makes `D - N` orthogonal to it, and enlarge the support by the primes
//! that still pair negatively. Each solve is on a negative definite block,
//! and the support only grows, so the loop ends after at most `n` rounds.

use num_traits::{Signed, Zero};

use crate::connectivity;
use crate::error::{Error, Result};
use crate::lattice::{self, Divisor};
use crate::linalg;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct ZariskiPair {
    pub positive: Divisor,
    pub negative: Divisor,
}

/// How the support of the negative part is enlarged each round.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum GrowthOrder {
    /// Add every negatively pairing prime at once.
    #[default]
    Batch,
    /// Add only the first negatively pairing prime in this order.
    Sequential(Vec<usize>),
}

pub fn zariski_decompose(d: &Divisor) -> Result<ZariskiPair> {
    zariski_decompose_ordered(d, &GrowthOrder::Batch)
}

pub fn zariski_decompose_ordered(d: &Divisor, order: &GrowthOrder) -> Result<ZariskiPair> {
    if !d.is_effective() {
        return Err(Error::pre(
            "Zariski decomposition needs an effective divisor",
        ));
    }
    let lat = d.lattice();
    let supp = d.support();
    let mut s: Vec<usize> = Vec::new();
    let mut negative = Divisor::zero(lat);
    loop {
        let positive = d - &negative;
        let bad: Vec<usize> = supp
            .iter()
            .copied()
            .filter(|i| !s.contains(i) && positive.dot_prime(*i).is_negative())
            .collect();
        if bad.is_empty() {
            return Ok(ZariskiPair { positive, negative });
        }
        match order {
            GrowthOrder::Batch => s.extend(bad),
            GrowthOrder::Sequential(perm) => {
                let next = perm
                    .iter()
                    .copied()
                    .find(|i| bad.contains(i))
                    .ok_or_else(|| {
                        Error::InvalidInput("growth order is not a permutation".into())
                    })?;
                s.push(next);
            }
        }
        s.sort_unstable();
        if !lattice::is_negative_definite(lat.matrix(), &s) {
            return Err(Error::Model(format!(
                "support candidate {{{}}} is not negative definite; the intersection matrix is inconsistent",
                s.iter().map(|&i| lat.primes()[i].as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        let block = linalg::principal_submatrix(lat.matrix(), &s);
        let rhs: Vec<Rational> = s.iter().map(|&i| d.dot_prime(i)).collect();
        let x = linalg::solve(&block, &rhs).expect("negative definite block is invertible");
        negative = Divisor::zero(lat);
        for (&i, v) in s.iter().zip(x) {
            negative.set_coeff(i, v);
        }
    }
}

impl ZariskiPair {
    /// Lists every violated defining property; empty when the pair is a
    /// Zariski decomposition of `d`.
    pub fn violations(&self, d: &Divisor) -> Vec<String> {
        let mut out = Vec::new();
        if &(&self.positive + &self.negative) != d {
            out.push("P + N differs from D".to_string());
        }
        if !self.negative.is_effective() {
            out.push("N is not effective".to_string());
        }
        for i in d.support() {
            let p = self.positive.dot_prime(i);
            if p.is_negative() {
                out.push(format!("P.{} = {p} < 0", d.lattice().primes()[i]));
            }
        }
        for i in self.negative.support() {
            let p = self.positive.dot_prime(i);
            if !p.is_zero() {
                out.push(format!("P.{} = {p} on Supp N", d.lattice().primes()[i]));
            }
        }
        if !self.positive.dot(&self.negative).is_zero() {
            out.push("P.N != 0".to_string());
        }
        let ns = self.negative.support();
        if !ns.is_empty() && !lattice::is_negative_definite(d.lattice().matrix(), &ns) {
            out.push("Supp N is not negative definite".to_string());
        }
        out
    }

    pub fn positive_square(&self) -> Rational {
        self.positive.self_intersection()
    }
}

/// Bigness of an effective divisor: the positive part has positive square.
pub fn is_big_effective(d: &Divisor) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::pre("bigness test needs a nonzero divisor"));
    }
    let zp = zariski_decompose(d)?;
    Ok(zp.positive_square().is_positive())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralZariskiPair {
    pub positive: Divisor,
    pub negative: Divisor,
}

/// Integral Zariski decomposition of a big integral effective divisor with
/// connected support: the Z-positive part is the chain-connected component.
pub fn integral_zariski(d: &Divisor) -> Result<IntegralZariskiPair> {
    if !d.is_integral() || !d.is_effective() || d.is_zero() {
        return Err(Error::pre(
            "integral Zariski decomposition needs a nonzero integral effective divisor",
        ));
    }
    if !connectivity::support_connected(d) {
        return Err(Error::Unsupported(
            "integral Zariski decomposition is only provided for big divisors with connected support (support is disconnected)".into(),
        ));
    }
    if !is_big_effective(d)? {
        return Err(Error::Unsupported(
            "integral Zariski decomposition is only provided for big divisors with connected support (divisor is not big)".into(),
        ));
    }
    let positive = connectivity::chain_connected_component(d)?;
    let negative = d - &positive;
    Ok(IntegralZariskiPair { positive, negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{l1, l2, l3, lat};
    use crate::rational::{frac, int};

    fn dv(l: &std::sync::Arc<crate::lattice::IntersectionLattice>, c: &[i64]) -> Divisor {
        Divisor::from_ints(l, c).unwrap()
    }

    #[test]
    fn nef_divisor_is_its_own_positive_part() {
        let l = l1();
        let zp = zariski_decompose(&dv(&l, &[3])).unwrap();
        assert_eq!(zp.positive, dv(&l, &[3]));
        assert!(zp.negative.is_zero());
    }

    #[test]
    fn negative_prime_is_all_negative() {
        let l = lat("N", &["E"], &[&[int(-3)]]);
        let zp = zariski_decompose(&dv(&l, &[1])).unwrap();
        assert!(zp.positive.is_zero());
        assert_eq!(zp.negative, dv(&l, &[1]));
    }

    #[test]
    fn elliptic_example() {
        // oracle: solve 2a - b = 0, -1 - a + 3b = 0 for N = aC'2 + bC'3
        let l = l3();
        let d = dv(&l, &[1, 1, 1]);
        let zp = zariski_decompose(&d).unwrap();
        assert_eq!(zp.positive.coeffs(), &[int(1), frac(4, 5), frac(3, 5)]);
        assert_eq!(zp.negative.coeffs(), &[int(0), frac(1, 5), frac(2, 5)]);
        assert_eq!(zp.positive.dot_prime(0), frac(2, 5));
        assert!(zp.positive.dot_prime(1).is_zero());
        assert!(zp.positive.dot_prime(2).is_zero());
        assert!(zp.violations(&d).is_empty());
        assert_eq!(zp.positive_square(), frac(2, 5));
    }

    #[test]
    fn sequential_growth_agrees() {
        let l = l3();
        let d = dv(&l, &[1, 1, 1]);
        let batch = zariski_decompose(&d).unwrap();
        for perm in [[0, 1, 2], [2, 1, 0], [1, 2, 0]] {
            let s = zariski_decompose_ordered(&d, &GrowthOrder::Sequential(perm.to_vec())).unwrap();
            assert_eq!(s, batch);
        }
    }

    #[test]
    fn bigness() {
        assert!(is_big_effective(&dv(&l3(), &[1, 1, 1])).unwrap());
        assert!(!is_big_effective(&dv(&lat("N", &["E"], &[&[int(-1)]]), &[2])).unwrap());
        assert!(!is_big_effective(&dv(&l1(), &[2])).unwrap());
        assert!(is_big_effective(&dv(&l2(), &[2, 2])).unwrap());
    }

    #[test]
    fn rejects_non_effective() {
        assert!(zariski_decompose(&dv(&l3(), &[1, -1, 0])).is_err());
    }

    #[test]
    fn integral_examples() {
        let l = l3();
        let d = dv(&l, &[2, 2, 2]);
        let iz = integral_zariski(&d).unwrap();
        assert_eq!(iz.positive, d);
        assert!(iz.negative.is_zero());

        let split = lat("S", &["A", "B"], &[&[int(1), int(0)], &[int(0), int(-1)]]);
        assert!(matches!(
            integral_zariski(&dv(&split, &[1, 2])),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            integral_zariski(&dv(&l1(), &[2])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn integral_part_drops_dangling_curve() {
        // H with H^2 = 1 meeting a (-2)-curve G once; D = H + 3G
        let l = lat("H", &["H", "G"], &[&[int(1), int(1)], &[int(1), int(-2)]]);
        let iz = integral_zariski(&dv(&l, &[1, 3])).unwrap();
        assert_eq!(iz.positive, dv(&l, &[1, 1]));
        assert_eq!(iz.negative, dv(&l, &[0, 2]));
    }
}
