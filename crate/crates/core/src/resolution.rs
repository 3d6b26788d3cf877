//! Contractions between two lattices: Mumford pull-back, push-forward,
//! anti-canonical cycle, fundamental cycle and the obstruction number
//! `delta(pi, Z)`.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, Cluster, Divisor, IntersectionLattice, LatticeParts, SingClass};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct ResolutionModel {
    upstairs: Arc<IntersectionLattice>,
    downstairs: Arc<IntersectionLattice>,
    exceptional: Vec<usize>,
    /// `transform[j]` is the upstairs index of the proper transform of
    /// downstairs prime `j`.
    transform: Vec<usize>,
}

impl ResolutionModel {
    pub fn new(
        upstairs: Arc<IntersectionLattice>,
        downstairs: Arc<IntersectionLattice>,
        exceptional: Vec<usize>,
        transform: Vec<usize>,
    ) -> Result<Self> {
        let model = Self::unchecked(upstairs, downstairs, exceptional, transform)?;
        for i in 0..model.downstairs.len() {
            for j in i..model.downstairs.len() {
                let up = model.pullback_coeffs(i).dot(&model.pullback_coeffs(j));
                let down = model.downstairs.entry(i, j);
                if &up != down {
                    return Err(Error::Model(format!(
                        "projection formula fails for ({}, {}): pull-backs meet in {up}, downstairs matrix has {down}",
                        model.downstairs.primes()[i],
                        model.downstairs.primes()[j]
                    )));
                }
            }
        }
        Ok(model)
    }

    /// Builds the model with the downstairs matrix defined by the projection
    /// formula, `C_i . C_j := pi^* C_i . pi^* C_j`.
    pub fn with_derived_downstairs(
        upstairs: Arc<IntersectionLattice>,
        downstairs_name: impl Into<String>,
        exceptional: Vec<usize>,
        transform: Vec<(String, usize)>,
    ) -> Result<Self> {
        let names: Vec<String> = transform.iter().map(|(n, _)| n.clone()).collect();
        let map: Vec<usize> = transform.iter().map(|&(_, i)| i).collect();
        let n = names.len();
        let placeholder = IntersectionLattice::new(
            "placeholder",
            names.clone(),
            vec![vec![Rational::zero(); n]; n],
        )?;
        let probe = Self::unchecked(
            upstairs.clone(),
            placeholder,
            exceptional.clone(),
            map.clone(),
        )?;
        let pulled: Vec<Divisor> = (0..n).map(|i| probe.pullback_coeffs(i)).collect();
        let matrix: Matrix = (0..n)
            .map(|i| (0..n).map(|j| pulled[i].dot(&pulled[j])).collect())
            .collect();
        let downstairs = IntersectionLattice::from_parts(LatticeParts {
            name: downstairs_name.into(),
            primes: names,
            matrix,
            ..Default::default()
        })?;
        Self::new(upstairs, downstairs, exceptional, map)
    }

    fn unchecked(
        upstairs: Arc<IntersectionLattice>,
        downstairs: Arc<IntersectionLattice>,
        exceptional: Vec<usize>,
        transform: Vec<usize>,
    ) -> Result<Self> {
        let n = upstairs.len();
        if transform.len() != downstairs.len() {
            return Err(Error::Model(format!(
                "transform maps {} primes, downstairs lattice `{}` has {}",
                transform.len(),
                downstairs.name(),
                downstairs.len()
            )));
        }
        let mut owner = vec![0u8; n];
        for &i in exceptional.iter().chain(&transform) {
            if i >= n {
                return Err(Error::Model(format!("upstairs index {i} out of range")));
            }
            owner[i] += 1;
        }
        if let Some(i) = owner.iter().position(|&c| c != 1) {
            return Err(Error::Model(format!(
                "upstairs prime `{}` must be exactly one of exceptional or a proper transform",
                upstairs.primes()[i]
            )));
        }
        let mut exceptional = exceptional;
        exceptional.sort_unstable();
        if !lattice::is_negative_definite(upstairs.matrix(), &exceptional) {
            return Err(Error::Model(
                "exceptional intersection matrix is not negative definite".into(),
            ));
        }
        Ok(ResolutionModel {
            upstairs,
            downstairs,
            exceptional,
            transform,
        })
    }

    pub fn upstairs(&self) -> &Arc<IntersectionLattice> {
        &self.upstairs
    }

    pub fn downstairs(&self) -> &Arc<IntersectionLattice> {
        &self.downstairs
    }

    pub fn exceptional(&self) -> &[usize] {
        &self.exceptional
    }

    pub fn transform(&self) -> &[usize] {
        &self.transform
    }

    fn exceptional_block(&self) -> Matrix {
        linalg::principal_submatrix(self.upstairs.matrix(), &self.exceptional)
    }

    /// Exceptional divisor `sum x_j E_j` with `(base + X) . E_j = target_j`.
    fn exceptional_solve(&self, base: &Divisor, target: &[Rational]) -> Result<Divisor> {
        let rhs: Vec<Rational> = self
            .exceptional
            .iter()
            .zip(target)
            .map(|(&e, t)| t - base.dot_prime(e))
            .collect();
        let x = linalg::solve(&self.exceptional_block(), &rhs)
            .ok_or_else(|| Error::Model("exceptional system is singular".into()))?;
        let mut out = Divisor::zero(&self.upstairs);
        for (&e, v) in self.exceptional.iter().zip(x) {
            out.set_coeff(e, v);
        }
        Ok(out)
    }

    fn pullback_coeffs(&self, i: usize) -> Divisor {
        let hat = Divisor::prime(&self.upstairs, self.transform[i]);
        let zeros = vec![Rational::zero(); self.exceptional.len()];
        let ex = self
            .exceptional_solve(&hat, &zeros)
            .expect("negative definite exceptional block");
        &hat + &ex
    }

    /// `pi^* D = D_hat + sum d_i E_i` with `pi^* D . E_j = 0` for all `j`.
    pub fn mumford_pullback(&self, d: &Divisor) -> Result<Divisor> {
        self.check_downstairs(d)?;
        let mut hat = Divisor::zero(&self.upstairs);
        for (j, c) in d.coeffs().iter().enumerate() {
            hat.set_coeff(self.transform[j], c.clone());
        }
        let zeros = vec![Rational::zero(); self.exceptional.len()];
        let ex = self.exceptional_solve(&hat, &zeros)?;
        Ok(&hat + &ex)
    }

    pub fn pushforward(&self, d: &Divisor) -> Result<Divisor> {
        if !lattice::same_lattice(d.lattice(), &self.upstairs) {
            return Err(Error::LatticeMismatch {
                left: d.lattice().name().to_string(),
                right: self.upstairs.name().to_string(),
            });
        }
        let coeffs = self.transform.iter().map(|&u| d.coeff(u).clone()).collect();
        Divisor::new(&self.downstairs, coeffs)
    }

    fn check_downstairs(&self, d: &Divisor) -> Result<()> {
        if lattice::same_lattice(d.lattice(), &self.downstairs) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: d.lattice().name().to_string(),
                right: self.downstairs.name().to_string(),
            })
        }
    }

    fn check_upstairs(&self, d: &Divisor) -> Result<()> {
        if lattice::same_lattice(d.lattice(), &self.upstairs) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: d.lattice().name().to_string(),
                right: self.upstairs.name().to_string(),
            })
        }
    }

    /// `K_{X'} . E_j = 2 p_a(E_j) - 2 - E_j^2` from the upstairs genus data.
    pub fn canonical_on_exceptional(&self) -> Result<Vec<Rational>> {
        let genus = self.upstairs.genus().ok_or_else(|| {
            Error::Model(format!(
                "upstairs lattice `{}` has no genus data; the anti-canonical cycle needs p_a of every exceptional curve",
                self.upstairs.name()
            ))
        })?;
        Ok(self
            .exceptional
            .iter()
            .map(|&e| rational::int(2) * &genus[e] - rational::int(2) - self.upstairs.entry(e, e))
            .collect())
    }

    /// `Delta = pi^* K_X - K_{X'}`: exceptional, with `Delta . E_j = -K_{X'} . E_j`.
    pub fn anticanonical_cycle(&self) -> Result<Divisor> {
        let target: Vec<Rational> = self
            .canonical_on_exceptional()?
            .into_iter()
            .map(|k| -k)
            .collect();
        self.exceptional_solve(&Divisor::zero(&self.upstairs), &target)
    }

    fn exceptional_connected(&self) -> bool {
        let ex = Divisor::new(
            &self.upstairs,
            (0..self.upstairs.len())
                .map(|i| {
                    if self.exceptional.contains(&i) {
                        rational::int(1)
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )
        .expect("length matches");
        crate::connectivity::support_connected(&ex)
    }

    /// Least integral `Z > 0` on the whole exceptional locus with
    /// `Z . E_j <= 0` for all `j` (Laufer's increment loop).
    pub fn fundamental_cycle(&self) -> Result<Divisor> {
        if self.exceptional.is_empty() {
            return Err(Error::pre("model has no exceptional curves"));
        }
        if !self.exceptional_connected() {
            return Err(Error::pre("exceptional set is disconnected"));
        }
        let mut z = Divisor::zero(&self.upstairs);
        for &e in &self.exceptional {
            z.set_coeff(e, rational::int(1));
        }
        while let Some(&e) = self
            .exceptional
            .iter()
            .find(|&&e| z.dot_prime(e).is_positive())
        {
            let v = z.coeff(e) + rational::int(1);
            z.set_coeff(e, v);
        }
        Ok(z)
    }

    /// The cycle `Z` prescribed for a point of the given class: the
    /// exceptional curve of the blow-up of a smooth point, the fundamental
    /// cycle at a Du Val point, `ceil(Delta)` at a log terminal point and
    /// `floor(Delta)` otherwise.
    pub fn default_z(&self, class: SingClass) -> Result<Divisor> {
        let delta = self.anticanonical_cycle()?;
        let is_zero = delta.is_zero();
        let below_one = delta.coeffs().iter().all(|c| *c < rational::int(1));
        match class {
            SingClass::Smooth => {
                let [e] = self.exceptional[..] else {
                    return Err(Error::Model(
                        "a smooth-point blow-up has exactly one exceptional curve".into(),
                    ));
                };
                if *self.upstairs.entry(e, e) != rational::int(-1) {
                    return Err(Error::Model(
                        "a smooth-point blow-up has a (-1)-curve".into(),
                    ));
                }
                Ok(Divisor::prime(&self.upstairs, e))
            }
            SingClass::DuVal => {
                if !is_zero {
                    return Err(Error::Model(format!(
                        "Du Val point requires Delta = 0, found Delta = {delta}"
                    )));
                }
                self.fundamental_cycle()
            }
            SingClass::LogTerminal => {
                if is_zero || !below_one || !delta.is_effective() {
                    return Err(Error::Model(format!(
                        "log terminal (non Du Val) point requires 0 < Delta with coefficients below 1, found Delta = {delta}"
                    )));
                }
                Ok(delta.roundup())
            }
            SingClass::NonLt => {
                if below_one {
                    return Err(Error::Model(format!(
                        "non log terminal point requires a coefficient of Delta at least 1, found Delta = {delta}"
                    )));
                }
                Ok(delta.rounddown())
            }
        }
    }

    /// `delta(pi, Z)`: `0` if `Delta - Z` is effective, else `-(Delta - Z)^2`;
    /// with `d` given, also condition (E): `pi^* D + Delta - Z` effective.
    pub fn delta_invariant(
        &self,
        z: &Divisor,
        d: Option<&Divisor>,
        cluster: Option<&Cluster>,
    ) -> Result<DeltaReport> {
        self.check_upstairs(z)?;
        if !z.is_integral() || !z.is_effective() || z.is_zero() {
            return Err(Error::pre("Z must be a nonzero integral effective divisor"));
        }
        if z.support().iter().any(|i| !self.exceptional.contains(i)) {
            return Err(Error::pre("Z must be supported on exceptional curves"));
        }
        let delta_cycle = self.anticanonical_cycle()?;
        let diff = &delta_cycle - z;
        let delta = if diff.is_effective() {
            Rational::zero()
        } else {
            -diff.self_intersection()
        };
        let cond_e = match d {
            Some(d) => Some((&self.mumford_pullback(d)? + &diff).is_effective()),
            None => None,
        };
        Ok(DeltaReport {
            anticanonical: delta_cycle,
            z: z.clone(),
            delta,
            cond_e,
            cluster_assertion: cluster.map(|c| {
                format!(
                    "pi_* I_Z is contained in I_{} (user-asserted; not visible to lattice data)",
                    c.name
                )
            }),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    #[serde(serialize_with = "ser_divisor")]
    pub anticanonical: Divisor,
    #[serde(serialize_with = "ser_divisor")]
    pub z: Divisor,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub delta: Rational,
    pub cond_e: Option<bool>,
    pub cluster_assertion: Option<String>,
}

fn ser_divisor<S: serde::Serializer>(d: &Divisor, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_string())
}
