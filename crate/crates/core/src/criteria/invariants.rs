use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::connectivity::Budget;
use crate::error::{Error, Result};
use crate::lattice::{Cluster, Divisor, IntersectionLattice};
use crate::rational::{self, Rational};

/// Facts about cohomology supplied by the user; never computed here.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CohomologyInputs {
    pub dim_linear_system: Option<u64>,
    pub h1_nilpotent: Option<u64>,
    pub frobenius_injective: Option<bool>,
    pub tau: Option<u64>,
}

impl CohomologyInputs {
    /// `dim|D| - dim H^1(O_X)_n` when both numbers are known.
    pub fn excess(&self) -> Option<i128> {
        Some(self.dim_linear_system? as i128 - self.h1_nilpotent? as i128)
    }
}

/// `mu(x, d) = m (d/m + 1)^2` with `m = min(x, d)`.
pub fn mu(x: &Rational, d: &Rational) -> Result<Rational> {
    if !x.is_positive() || !d.is_positive() {
        return Err(Error::pre("mu needs positive arguments"));
    }
    let m = rational::min(x, d).clone();
    let t = d / &m + rational::int(1);
    Ok(&m * &t * &t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaPrime {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub value: Rational,
    pub equals_delta: bool,
}

/// `delta' = mu(q, delta / 4)`.
pub fn delta_prime(q: &Rational, delta: &Rational) -> Result<DeltaPrime> {
    if !q.is_positive() || !delta.is_positive() {
        return Err(Error::pre("delta' needs q > 0 and delta > 0"));
    }
    let value = mu(q, &(delta / rational::int(4)))?;
    let equals_delta = &value == delta;
    Ok(DeltaPrime {
        value,
        equals_delta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QMin {
    /// `None` when no effective divisor in the box has positive square.
    pub value: Option<Rational>,
    pub witness: Option<Divisor>,
    /// Always true: only the box was searched.
    pub restricted: bool,
}

/// Least positive `E^2` over effective `E != 0` with coefficients in
/// `[0, bound]`, optionally restricted to `E` meeting the cluster.
pub fn q_min(
    lattice: &std::sync::Arc<IntersectionLattice>,
    bound: u64,
    cluster: Option<&Cluster>,
    budget: Budget,
) -> Result<QMin> {
    if bound == 0 {
        return Err(Error::pre("q search box must be positive"));
    }
    if let Some(c) = cluster {
        c.check_for(lattice)?;
    }
    let n = lattice.len();
    budget.check_box(&vec![bound; n])?;
    let m = lattice.matrix();
    let mut best: Option<(Rational, Vec<u64>)> = None;
    let mut a = vec![0u64; n];
    loop {
        let mut k = n;
        loop {
            if k == 0 {
                let witness = best
                    .as_ref()
                    .map(|(_, v)| crate::connectivity::from_u64(&Divisor::zero(lattice), v));
                return Ok(QMin {
                    value: best.map(|(q, _)| q),
                    witness,
                    restricted: true,
                });
            }
            k -= 1;
            if a[k] < bound {
                a[k] += 1;
                break;
            }
            a[k] = 0;
        }
        if let Some(c) = cluster {
            if !c.meets_coeffs(&a) {
                continue;
            }
        }
        let mut sq = Rational::zero();
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if a[j] != 0 {
                    sq += &m[i][j] * Rational::from_integer((a[i] * a[j]).into());
                }
            }
        }
        if sq.is_positive() && best.as_ref().is_none_or(|(q, _)| sq < *q) {
            best = Some((sq, a.clone()));
        }
    }
}

/// Least degree of a finite separable morphism to the line from a smooth
/// plane curve of degree `m`.
pub fn plane_gonality_bound(m: u64) -> Result<u64> {
    if m < 3 {
        return Err(Error::pre("plane curve degree must be at least 3"));
    }
    Ok(m - 1)
}
