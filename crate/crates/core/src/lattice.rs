//! Divisor lattices: prime divisors with an exact rational intersection
//! matrix, and divisors as coefficient vectors over such a lattice.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    name: String,
    primes: Vec<String>,
    matrix: Matrix,
    canonical: Option<Vec<Rational>>,
    genus: Option<Vec<Rational>>,
    smooth: bool,
}

/// Raw constructor input for [`IntersectionLattice::from_parts`].
#[derive(Debug, Clone, Default)]
pub struct LatticeParts {
    pub name: String,
    pub primes: Vec<String>,
    pub matrix: Matrix,
    pub canonical: Option<Vec<Rational>>,
    pub genus: Option<Vec<Rational>>,
    pub smooth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefMode {
    NegDef,
    NegSemiDef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definiteness {
    pub holds: bool,
    /// The index set was empty; `holds` is true by convention.
    pub vacuous: bool,
}

impl IntersectionLattice {
    pub fn new(name: impl Into<String>, primes: Vec<String>, matrix: Matrix) -> Result<Arc<Self>> {
        Self::from_parts(LatticeParts {
            name: name.into(),
            primes,
            matrix,
            ..Default::default()
        })
    }

    pub fn from_parts(parts: LatticeParts) -> Result<Arc<Self>> {
        let LatticeParts {
            name,
            primes,
            matrix,
            canonical,
            genus,
            smooth,
        } = parts;
        let n = primes.len();
        let mut seen = HashSet::new();
        for p in &primes {
            if p.is_empty() {
                return Err(Error::Model(format!("lattice `{name}`: empty prime name")));
            }
            if !seen.insert(p.as_str()) {
                return Err(Error::Model(format!(
                    "lattice `{name}`: duplicate prime `{p}`"
                )));
            }
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Model(format!(
                "lattice `{name}`: matrix must be {n}x{n}"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Model(format!(
                        "lattice `{name}`: matrix not symmetric at ({}, {})",
                        primes[i], primes[j]
                    )));
                }
            }
        }
        for (label, v) in [("canonical", &canonical), ("genus", &genus)] {
            if let Some(v) = v {
                if v.len() != n {
                    return Err(Error::Model(format!(
                        "lattice `{name}`: {label} vector has length {}, expected {n}",
                        v.len()
                    )));
                }
            }
        }
        if let Some(g) = &genus {
            if let Some(i) = g.iter().position(|x| x.is_negative()) {
                return Err(Error::Model(format!(
                    "lattice `{name}`: negative genus for `{}`",
                    primes[i]
                )));
            }
        }
        if smooth {
            if let (Some(k), Some(g)) = (&canonical, &genus) {
                for i in 0..n {
                    let lhs = &k[i] + &matrix[i][i];
                    let rhs = rational::int(2) * &g[i] - rational::int(2);
                    if lhs != rhs {
                        return Err(Error::Model(format!(
                            "lattice `{name}`: adjunction fails for `{}`: K.C + C^2 = {lhs}, 2p_a - 2 = {rhs}",
                            primes[i]
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(IntersectionLattice {
            name,
            primes,
            matrix,
            canonical,
            genus,
            smooth,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[String] {
        &self.primes
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn canonical(&self) -> Option<&[Rational]> {
        self.canonical.as_deref()
    }

    pub fn genus(&self) -> Option<&[Rational]> {
        self.genus.as_deref()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn index_of(&self, prime: &str) -> Option<usize> {
        self.primes.iter().position(|p| p == prime)
    }

    /// `K . C_i`: the stored value, else adjunction from genus on smooth lattices.
    pub fn canonical_product(&self, i: usize) -> Option<Rational> {
        if let Some(k) = &self.canonical {
            return Some(k[i].clone());
        }
        match (&self.genus, self.smooth) {
            (Some(g), true) => {
                Some(rational::int(2) * &g[i] - rational::int(2) - &self.matrix[i][i])
            }
            _ => None,
        }
    }

    /// Negative (semi)definiteness of the principal submatrix on `idx`.
    ///
    /// Definite: leading principal minors alternate in sign starting
    /// negative. Semidefinite: every principal minor of order `k` has sign
    /// `(-1)^k` or vanishes.
    pub fn definiteness(&self, idx: &[usize], mode: DefMode) -> Result<Definiteness> {
        let mut seen = HashSet::new();
        for &i in idx {
            if i >= self.len() {
                return Err(Error::pre(format!("prime index {i} out of range")));
            }
            if !seen.insert(i) {
                return Err(Error::pre(format!("prime index {i} repeated")));
            }
        }
        if idx.is_empty() {
            return Ok(Definiteness {
                holds: true,
                vacuous: true,
            });
        }
        let holds = match mode {
            DefMode::NegDef => is_negative_definite(&self.matrix, idx),
            DefMode::NegSemiDef => is_negative_semidefinite(&self.matrix, idx),
        };
        Ok(Definiteness {
            holds,
            vacuous: false,
        })
    }
}

pub(crate) fn is_negative_definite(m: &Matrix, idx: &[usize]) -> bool {
    (1..=idx.len()).all(|k| {
        let d = linalg::determinant(&linalg::principal_submatrix(m, &idx[..k]));
        let s = rational::sign(&d);
        if k % 2 == 1 {
            s < 0
        } else {
            s > 0
        }
    })
}

pub(crate) fn is_negative_semidefinite(m: &Matrix, idx: &[usize]) -> bool {
    let n = idx.len();
    assert!(n < 64);
    (1u64..(1 << n)).all(|mask| {
        let sub: Vec<usize> = (0..n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| idx[b])
            .collect();
        let d = linalg::determinant(&linalg::principal_submatrix(m, &sub));
        let s = rational::sign(&d);
        s == 0 || (s < 0) == (sub.len() % 2 == 1)
    })
}

impl fmt::Display for IntersectionLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// A rational linear combination of the primes of a lattice.
#[derive(Clone)]
pub struct Divisor {
    lattice: Arc<IntersectionLattice>,
    coeffs: Vec<Rational>,
}

pub fn same_lattice(a: &Arc<IntersectionLattice>, b: &Arc<IntersectionLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Divisor {
    pub fn new(lattice: &Arc<IntersectionLattice>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::InvalidInput(format!(
                "divisor has {} coefficients but lattice `{}` has {} primes",
                coeffs.len(),
                lattice.name(),
                lattice.len()
            )));
        }
        Ok(Divisor {
            lattice: lattice.clone(),
            coeffs,
        })
    }

    pub fn from_ints(lattice: &Arc<IntersectionLattice>, coeffs: &[i64]) -> Result<Self> {
        Self::new(lattice, coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero(lattice: &Arc<IntersectionLattice>) -> Self {
        Divisor {
            lattice: lattice.clone(),
            coeffs: vec![Rational::zero(); lattice.len()],
        }
    }

    pub fn prime(lattice: &Arc<IntersectionLattice>, i: usize) -> Self {
        let mut d = Self::zero(lattice);
        d.coeffs[i] = rational::int(1);
        d
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, v: Rational) {
        self.coeffs[i] = v;
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(rational::is_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Indices of primes with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    pub fn check_same_lattice(&self, other: &Divisor) -> Result<()> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: self.lattice.name().to_string(),
                right: other.lattice.name().to_string(),
            })
        }
    }

    /// `D . C_i`
    pub fn dot_prime(&self, i: usize) -> Rational {
        let row = &self.lattice.matrix[i];
        self.coeffs
            .iter()
            .zip(row)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| c * m)
            .sum()
    }

    /// The pairing vector `(D . C_1, ..., D . C_n)`.
    pub fn pairings(&self) -> Vec<Rational> {
        (0..self.coeffs.len()).map(|i| self.dot_prime(i)).collect()
    }

    pub fn intersect(&self, other: &Divisor) -> Result<Rational> {
        self.check_same_lattice(other)?;
        Ok(self.dot(other))
    }

    /// Pairing without the lattice check; callers guarantee a shared lattice.
    pub(crate) fn dot(&self, other: &Divisor) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * other.dot_prime(i))
            .sum()
    }

    pub fn self_intersection(&self) -> Rational {
        self.dot(self)
    }

    /// `D . C >= 0` for every prime `C` with positive coefficient in `B`.
    pub fn nef_over(&self, b: &Divisor) -> Result<bool> {
        self.check_same_lattice(b)?;
        if !b.is_effective() || b.is_zero() {
            return Err(Error::pre("nef_over needs a nonzero effective divisor B"));
        }
        Ok(b.support()
            .into_iter()
            .all(|i| !self.dot_prime(i).is_negative()))
    }

    pub fn is_nef(&self) -> bool {
        (0..self.coeffs.len()).all(|i| !self.dot_prime(i).is_negative())
    }

    pub fn roundup(&self) -> Divisor {
        self.map(|c| c.ceil())
    }

    pub fn rounddown(&self) -> Divisor {
        self.map(|c| c.floor())
    }

    /// The reduced divisor on the same support.
    pub fn reduced(&self) -> Divisor {
        self.map(|c| {
            if c.is_zero() {
                Rational::zero()
            } else {
                rational::int(1)
            }
        })
    }

    pub fn scale(&self, k: &Rational) -> Divisor {
        self.map(|c| c * k)
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Divisor {
        Divisor {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficient-wise `self <= other`.
    pub fn le(&self, other: &Divisor) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    pub fn try_add(&self, other: &Divisor) -> Result<Divisor> {
        self.check_same_lattice(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.check_same_lattice(other)?;
        Ok(self - other)
    }

    /// Sum of coefficients.
    pub fn degree_sum(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Coefficients as machine integers, for enumeration over integral
    /// effective divisors.
    pub(crate) fn int_coeffs(&self) -> Result<Vec<u64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if !rational::is_integer(c) || c.is_negative() {
                    return Err(Error::pre("expected an integral effective divisor"));
                }
                u64::try_from(c.to_integer())
                    .map_err(|_| Error::InvalidInput("coefficient too large".into()))
            })
            .collect()
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice) && self.coeffs == other.coeffs
    }
}

impl Eq for Divisor {}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Divisor({}: {})", self.lattice.name(), self)
    }
}

fn zip_with(a: &Divisor, b: &Divisor, f: impl Fn(&Rational, &Rational) -> Rational) -> Divisor {
    assert!(
        same_lattice(&a.lattice, &b.lattice),
        "divisors on different lattices `{}` and `{}`",
        a.lattice.name(),
        b.lattice.name()
    );
    Divisor {
        lattice: a.lattice.clone(),
        coeffs: a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| f(x, y))
            .collect(),
    }
}

/// Panics on a lattice mismatch; use [`Divisor::try_add`] for checked use.
impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        zip_with(self, rhs, |a, b| a + b)
    }
}

/// Panics on a lattice mismatch; use [`Divisor::try_sub`] for checked use.
impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.map(|c| -c)
    }
}

/// Classification of a surface point, selecting the default cycle `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingClass {
    Smooth,
    DuVal,
    LogTerminal,
    NonLt,
}

impl std::str::FromStr for SingClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "smooth" => Ok(SingClass::Smooth),
            "duval" | "du_val" | "du-val" => Ok(SingClass::DuVal),
            "logterminal" | "log_terminal" | "lt" => Ok(SingClass::LogTerminal),
            "nonlt" | "non_lt" => Ok(SingClass::NonLt),
            other => Err(Error::InvalidInput(format!(
                "unknown point class `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingClass::Smooth => "smooth",
            SingClass::DuVal => "duval",
            SingClass::LogTerminal => "logterminal",
            SingClass::NonLt => "nonlt",
        })
    }
}

/// A zero-dimensional target, seen through which primes pass through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub name: String,
    pub incidence: Vec<bool>,
    pub singclass: Vec<SingClass>,
    pub tau_override: Option<u64>,
    pub delta_override: Option<Rational>,
}

impl Cluster {
    pub fn through(
        name: impl Into<String>,
        lattice: &IntersectionLattice,
        primes: &[&str],
    ) -> Result<Self> {
        let mut incidence = vec![false; lattice.len()];
        for p in primes {
            let i = lattice
                .index_of(p)
                .ok_or_else(|| Error::InvalidInput(format!("unknown prime {p}")))?;
            incidence[i] = true;
        }
        Ok(Cluster {
            name: name.into(),
            incidence,
            singclass: Vec::new(),
            tau_override: None,
            delta_override: None,
        })
    }

    /// Whether an effective divisor meets the cluster.
    pub fn meets(&self, d: &Divisor) -> bool {
        d.support()
            .into_iter()
            .any(|i| self.incidence.get(i).copied().unwrap_or(false))
    }

    pub(crate) fn meets_coeffs(&self, coeffs: &[u64]) -> bool {
        coeffs
            .iter()
            .zip(&self.incidence)
            .any(|(&c, &inc)| c > 0 && inc)
    }

    pub fn check_for(&self, lattice: &IntersectionLattice) -> Result<()> {
        if self.incidence.len() != lattice.len() {
            return Err(Error::InvalidInput(format!(
                "cluster `{}` has {} incidence entries, lattice `{}` has {} primes",
                self.name,
                self.incidence.len(),
                lattice.name(),
                lattice.len()
            )));
        }
        if !self.incidence.iter().any(|&b| b) {
            return Err(Error::InvalidInput(format!(
                "cluster `{}` has no incidence data",
                self.name
            )));
        }
        Ok(())
    }
}
