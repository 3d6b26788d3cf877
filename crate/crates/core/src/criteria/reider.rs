//! Search for decompositions `D = A + B` obstructing surjectivity of
//! `H^0(K_X + D) -> H^0((K_X + D)|_zeta)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::invariants::{self, CohomologyInputs};
use super::report::{CriterionReport, Status, Verdict, WitnessRecord};
use crate::connectivity::{self, Budget, DecompositionWitness};
use crate::error::{Error, Result};
use crate::lattice::{self, Cluster, Divisor};
use crate::rational::{self, Rational};
use crate::zariski;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReiderMode {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReiderParams {
    pub mode: ReiderMode,
    pub delta: Rational,
    /// `q_{X,zeta}` if known; otherwise it is searched in the box.
    pub q: Option<Rational>,
    pub q_box: u64,
    pub budget: Budget,
    pub acknowledged: bool,
}

impl ReiderParams {
    pub fn new(mode: ReiderMode, delta: Rational) -> Self {
        ReiderParams {
            mode,
            delta,
            q: None,
            q_box: 4,
            budget: Budget::default(),
            acknowledged: false,
        }
    }
}

fn check_inputs(d: &Divisor, delta: &Rational, cluster: &Cluster) -> Result<()> {
    if !d.is_integral() || !d.is_effective() || d.is_zero() {
        return Err(Error::pre("D must be a nonzero integral effective divisor"));
    }
    if delta.is_negative() {
        return Err(Error::pre("delta must be non-negative"));
    }
    cluster.check_for(d.lattice())
}

/// Decompositions with both parts meeting the cluster and `A . B <= delta/4`.
pub fn mode_one_obstructions(
    d: &Divisor,
    delta: &Rational,
    cluster: &Cluster,
    budget: Budget,
) -> Result<Vec<DecompositionWitness>> {
    check_inputs(d, delta, cluster)?;
    let bound = delta / rational::int(4);
    let mut out = Vec::new();
    connectivity::for_each_decomposition(d, budget, |a, b| {
        if cluster.meets_coeffs(a) && cluster.meets_coeffs(b) {
            let w = DecompositionWitness::new(
                connectivity::from_u64(d, a),
                connectivity::from_u64(d, b),
            );
            if w.product <= bound {
                out.push(w);
            }
        }
    })?;
    Ok(out)
}

fn numerically_proportional(d: &Divisor, b: &Divisor, k: &Rational) -> bool {
    (0..d.lattice().len()).all(|i| d.dot_prime(i) == k * b.dot_prime(i))
}

pub fn reider_obstructions(
    d: &Divisor,
    cluster: &Cluster,
    params: &ReiderParams,
    extras: &CohomologyInputs,
) -> Result<CriterionReport> {
    check_inputs(d, &params.delta, cluster)?;
    let delta = &params.delta;
    let (name, citation) = match params.mode {
        ReiderMode::I => ("reider-I", "Reider-type surjectivity onto a cluster"),
        ReiderMode::II => (
            "reider-II",
            "Reider-type surjectivity, nef divisor with negative semi-definite B",
        ),
    };
    let mut r = CriterionReport::new(
        name,
        citation,
        format!(
            "H^0(K_X + D) -> H^0((K_X + D)|_{}) is surjective",
            cluster.name
        ),
    );
    r.value("delta", rational::format(delta));
    r.value("bound", rational::format(&(delta / rational::int(4))));
    r.check("D effective", "D > 0 is effective", true);
    r.push(
        "K_X + D Cartier along zeta",
        format!("K_X + D is Cartier along {}", cluster.name),
        Status::Asserted,
    );
    r.push(
        "condition (E)",
        format!(
            "(pi, Z) satisfies condition (E) with pi_* I_Z contained in I_{} and delta = {}",
            cluster.name,
            rational::format(delta)
        ),
        Status::Asserted,
    );

    let candidates = mode_one_obstructions(d, delta, cluster, params.budget)?;
    match params.mode {
        ReiderMode::I => {
            r.push(
                "chain-connected component with H^0(O_C) = k",
                "D has a chain-connected component containing a prime C with H^0(O_C) = k",
                Status::Asserted,
            );
            r.push(
                "cohomological condition on X'",
                "one of the characteristic-dependent H^1 conditions on the resolution holds",
                Status::Asserted,
            );
            r.witnesses = candidates.iter().map(WitnessRecord::from).collect();
        }
        ReiderMode::II => mode_two(d, cluster, params, extras, &candidates, &mut r)?,
    }

    if r.witnesses.is_empty() {
        r.notes.push("no obstructing decomposition exists".into());
    }
    let found = !r.witnesses.is_empty();
    let mut r = r.finish(Verdict::Inconclusive, params.acknowledged);
    if found {
        r.verdict = Verdict::Inconclusive;
        r.notes
            .push("obstructing decompositions found; surjectivity is not decided".into());
    }
    Ok(r)
}

fn mode_two(
    d: &Divisor,
    cluster: &Cluster,
    params: &ReiderParams,
    extras: &CohomologyInputs,
    candidates: &[DecompositionWitness],
    r: &mut CriterionReport,
) -> Result<()> {
    let delta = &params.delta;
    r.check("D nef", "D . C >= 0 for every prime C", d.is_nef());

    let (q, q_source) = match &params.q {
        Some(q) => (Some(q.clone()), "supplied by the user".to_string()),
        None => {
            let found = invariants::q_min(d.lattice(), params.q_box, Some(cluster), params.budget)?;
            (
                found.value,
                format!("searched in the box [0, {}]", params.q_box),
            )
        }
    };
    r.push(
        "q is box-restricted",
        format!(
            "q_{{X,zeta}} = {} ({q_source}); a smaller value outside the search would raise delta'",
            q.as_ref().map_or("none found".into(), rational::format)
        ),
        Status::Asserted,
    );
    let delta_prime = match &q {
        _ if delta.is_zero() => {
            r.notes.push("delta = 0, so delta' is taken to be 0".into());
            Rational::zero()
        }
        Some(q) => invariants::delta_prime(q, delta)?.value,
        None => {
            r.notes
                .push("no positive square found in the box; delta' taken equal to delta".into());
            delta.clone()
        }
    };
    r.value("delta_prime", rational::format(&delta_prime));
    let dsq = d.self_intersection();
    r.value("D^2", rational::format(&dsq));
    let equality = dsq == delta_prime && delta_prime > *delta;
    r.check(
        "D² > δ′",
        format!(
            "D^2 = {} > delta' = {} (or D^2 = delta' > delta)",
            rational::format(&dsq),
            rational::format(&delta_prime)
        ),
        dsq > delta_prime || equality,
    );
    match (extras.excess(), extras.tau) {
        (Some(ex), Some(tau)) => r.check(
            "dim|D'| >= dim H^1(O_X')_n",
            format!("dim|D| - dim H^1(O_X)_n = {ex} >= tau = {tau}"),
            ex >= tau as i128,
        ),
        _ => r.push(
            "dim|D'| >= dim H^1(O_X')_n",
            "dim|D'| >= dim H^1(O_X')_n for D' = pi^* D + Delta - Z",
            Status::Asserted,
        ),
    }

    let lat = d.lattice();
    for w in candidates {
        if !lattice::is_negative_semidefinite(lat.matrix(), &w.b.support()) {
            continue;
        }
        let diff = &w.a - &w.b;
        let mut rec = WitnessRecord::from(w);
        if diff.is_zero() {
            continue;
        } else if diff.is_effective() {
            if !zariski::is_big_effective(&diff)? {
                continue;
            }
        } else {
            rec.notes
                .push("A - B is not effective; bigness not checkable".into());
        }
        r.witnesses.push(rec);
    }
    if equality {
        if let Some(q) = &q {
            let k = delta / (rational::int(4) * q) + rational::int(1);
            connectivity::for_each_decomposition(d, params.budget, |a, b| {
                if !cluster.meets_coeffs(a) || !cluster.meets_coeffs(b) {
                    return;
                }
                let (a, b) = (connectivity::from_u64(d, a), connectivity::from_u64(d, b));
                if b.self_intersection() == *q && numerically_proportional(d, &b, &k) {
                    let mut rec = WitnessRecord::from(&DecompositionWitness::new(a, b));
                    rec.notes.push(
                        "equality alternative: B^2 = q and D numerically proportional to B".into(),
                    );
                    if !r.witnesses.iter().any(|x| x.a == rec.a && x.b == rec.b) {
                        r.witnesses.push(rec);
                    }
                }
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{l1, l2};
    use crate::rational::{frac, int};

    #[test]
    fn l2_witnesses() {
        let l = l2();
        let d = Divisor::from_ints(&l, &[2, 2]).unwrap();
        let c = Cluster::through("z", &l, &["C1", "C2"]).unwrap();
        let r = reider_obstructions(
            &d,
            &c,
            &ReiderParams::new(ReiderMode::I, int(4)),
            &Default::default(),
        )
        .unwrap();
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.a == "C1 + C2" && w.b == "C1 + C2" && w.product == "1/3"));
        // by hand: C2 . (2C1 + C2) = 1 also qualifies, C1 . (C1 + 2C2) = 2 does not
        assert_eq!(r.witnesses.len(), 3);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(
            mode_one_obstructions(&d, &int(4), &c, Budget::default())
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn single_prime_is_vacuous() {
        let l = l2();
        let d = Divisor::prime(&l, 0);
        let c = Cluster::through("z", &l, &["C1"]).unwrap();
        let mut p = ReiderParams::new(ReiderMode::I, int(4));
        let r = reider_obstructions(&d, &c, &p, &Default::default()).unwrap();
        assert!(r.witnesses.is_empty());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(!r.asserted().is_empty());
        p.acknowledged = true;
        let r = reider_obstructions(&d, &c, &p, &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.acknowledged);
    }

    #[test]
    fn mode_two_threshold_gate() {
        let l = l1();
        let d = Divisor::prime(&l, 0);
        let c = Cluster::through("z", &l, &["F"]).unwrap();
        let mut p = ReiderParams::new(ReiderMode::II, int(4));
        p.acknowledged = true;
        let r = reider_obstructions(&d, &c, &p, &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.hypothesis("D² > δ′").unwrap().status, Status::Fails);
    }

    #[test]
    fn mode_two_filters() {
        let l = l2();
        let d = Divisor::from_ints(&l, &[2, 2]).unwrap();
        let c = Cluster::through("z", &l, &["C1", "C2"]).unwrap();
        let mut p = ReiderParams::new(ReiderMode::II, int(4));
        p.q = Some(frac(1, 3));
        let r = reider_obstructions(&d, &c, &p, &Default::default()).unwrap();
        // D^2 = 4/3 against delta' = mu(1/3, 1) = 16/3
        assert_eq!(r.values["delta_prime"], "16/3");
        assert_eq!(r.hypothesis("D² > δ′").unwrap().status, Status::Fails);
        // B on {C1, C2} is indefinite; B = C2 leaves A - B = 2C1, not big
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn input_checks() {
        let l = l2();
        let c = Cluster::through("z", &l, &["C1"]).unwrap();
        let p = ReiderParams::new(ReiderMode::I, int(-1));
        assert!(reider_obstructions(&Divisor::prime(&l, 0), &c, &p, &Default::default()).is_err());
        let empty = Cluster {
            incidence: vec![false, false],
            ..c.clone()
        };
        let p = ReiderParams::new(ReiderMode::I, int(4));
        assert!(
            reider_obstructions(&Divisor::prime(&l, 0), &empty, &p, &Default::default()).is_err()
        );
    }
}
