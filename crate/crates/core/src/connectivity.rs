//! Connectivity of effective divisors: connecting chains, chain- and
//! m-connectedness, the chain-connected component and Z-positivity.
//!
//! Every decision returns a certificate. A positive chain-connectedness
//! verdict carries the connecting chain; a negative one carries a
//! decomposition `D = A + B` with `-A` nef over `B`.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use petgraph::graph::UnGraph;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::lattice::Divisor;
use crate::rational::{self, Rational};
use crate::zariski::{self, ZariskiPair};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Upper bound on the number of cases an exhaustive search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Fails unless the box `prod (a_i + 1)` fits in the budget.
    pub fn check_box(&self, bounds: &[u64]) -> Result<()> {
        let total: BigUint = bounds.iter().map(|&a| BigUint::from(a) + 1u32).product();
        if total > BigUint::from(self.0) {
            return Err(Error::Budget {
                needed: total.to_string(),
                budget: self.0,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectingChain {
    pub start: Divisor,
    pub end: Divisor,
    /// Prime appended at each step.
    pub steps: Vec<usize>,
}

impl ConnectingChain {
    /// Pairings `D_{i-1} . C_i` along the chain.
    pub fn pairings(&self) -> Vec<Rational> {
        let mut cur = self.start.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for &c in &self.steps {
            out.push(cur.dot_prime(c));
            bump(&mut cur, c);
        }
        out
    }

    /// Replays the chain and checks every invariant.
    pub fn is_valid(&self) -> bool {
        let mut cur = self.start.clone();
        for &c in &self.steps {
            if !cur.dot_prime(c).is_positive() {
                return false;
            }
            bump(&mut cur, c);
            if !cur.le(&self.end) {
                return false;
            }
        }
        cur == self.end
    }
}

fn bump(d: &mut Divisor, i: usize) {
    let v = d.coeff(i) + rational::int(1);
    d.set_coeff(i, v);
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionWitness {
    pub a: Divisor,
    pub b: Divisor,
    pub product: Rational,
}

impl DecompositionWitness {
    pub fn new(a: Divisor, b: Divisor) -> Self {
        let product = a.dot(&b);
        DecompositionWitness { a, b, product }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainOutcome {
    Complete(ConnectingChain),
    /// Growth stalled at `a`: `-a` is nef over `b = D - a`.
    Stalled(DecompositionWitness),
}

impl ChainOutcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, ChainOutcome::Complete(_))
    }
}

fn require_integral_effective(d: &Divisor, what: &str) -> Result<()> {
    if !d.is_integral() || !d.is_effective() {
        return Err(Error::pre(format!("{what} must be integral and effective")));
    }
    Ok(())
}

fn require_nonzero_integral_effective(d: &Divisor, what: &str) -> Result<()> {
    require_integral_effective(d, what)?;
    if d.is_zero() {
        return Err(Error::pre(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// Greedy growth from `current` towards `target`, appending the
/// smallest-index prime with room left and positive pairing.
fn grow(current: &mut Divisor, target: &Divisor, steps: &mut Vec<usize>) {
    let n = target.coeffs().len();
    loop {
        let next = (0..n)
            .find(|&i| current.coeff(i) < target.coeff(i) && current.dot_prime(i).is_positive());
        match next {
            Some(i) => {
                bump(current, i);
                steps.push(i);
            }
            None => return,
        }
    }
}

/// Builds a connecting chain from `d0` to `d`, or the decomposition that
/// blocks one.
///
/// If the greedy growth stalls at `D_i < D`, then `D_i . C <= 0` for every
/// prime `C` of `D - D_i`, i.e. `-D_i` is nef over `D - D_i`. So a stall is
/// itself a witness that no chain from `D_i` exists, and since
/// chain-connected divisors admit chains from every subdivisor, the greedy
/// choice never loses completeness.
pub fn connecting_chain(d0: &Divisor, d: &Divisor) -> Result<ChainOutcome> {
    d0.check_same_lattice(d)?;
    require_nonzero_integral_effective(d0, "chain start")?;
    require_integral_effective(d, "chain end")?;
    if !d0.le(d) {
        return Err(Error::pre("chain start must be a subdivisor of the end"));
    }
    let mut cur = d0.clone();
    let mut steps = Vec::new();
    grow(&mut cur, d, &mut steps);
    if cur == *d {
        Ok(ChainOutcome::Complete(ConnectingChain {
            start: d0.clone(),
            end: d.clone(),
            steps,
        }))
    } else {
        let b = d - &cur;
        Ok(ChainOutcome::Stalled(DecompositionWitness::new(cur, b)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConnectivity {
    pub connected: bool,
    pub certificate: ChainOutcome,
}

pub fn is_chain_connected(d: &Divisor) -> Result<ChainConnectivity> {
    require_nonzero_integral_effective(d, "divisor")?;
    let first = d.support()[0];
    let start = Divisor::prime(d.lattice(), first);
    let certificate = connecting_chain(&start, d)?;
    Ok(ChainConnectivity {
        connected: certificate.is_complete(),
        certificate,
    })
}

/// Visits every effective decomposition `D = A + B` with `A, B > 0`, in
/// lexicographic order of `A`'s coefficient vector (first prime most
/// significant). The callback receives integer coefficient vectors.
pub fn for_each_decomposition(
    d: &Divisor,
    budget: Budget,
    mut f: impl FnMut(&[u64], &[u64]),
) -> Result<()> {
    require_integral_effective(d, "divisor")?;
    let bounds = d.int_coeffs()?;
    budget.check_box(&bounds)?;
    let n = bounds.len();
    let mut a = vec![0u64; n];
    let mut b = bounds.clone();
    loop {
        // advance `a` as an odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if a[k] < bounds[k] {
                a[k] += 1;
                b[k] -= 1;
                break;
            }
            a[k] = 0;
            b[k] = bounds[k];
        }
        if a == bounds {
            return Ok(());
        }
        f(&a, &b);
    }
}

pub(crate) fn from_u64(d: &Divisor, v: &[u64]) -> Divisor {
    Divisor::new(
        d.lattice(),
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect(),
    )
    .expect("length matches lattice")
}

/// All effective decompositions, optionally filtered by `A . B <= bound`.
pub fn enumerate_decompositions(
    d: &Divisor,
    bound: Option<&Rational>,
    budget: Budget,
) -> Result<Vec<DecompositionWitness>> {
    let mut out = Vec::new();
    for_each_decomposition(d, budget, |a, b| {
        let w = DecompositionWitness::new(from_u64(d, a), from_u64(d, b));
        if bound.is_none_or(|c| w.product <= *c) {
            out.push(w);
        }
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MConnectivity {
    pub holds: bool,
    /// `D` has no decomposition at all; the verdict is true by convention.
    pub vacuous: bool,
    /// A decomposition attaining the minimum of `A . B`; the balanced one
    /// (smallest `|A - B|` coefficient spread) among ties, then the
    /// lexicographically first.
    pub minimizer: Option<DecompositionWitness>,
}

pub fn is_m_connected(
    d: &Divisor,
    m: &Rational,
    strict: bool,
    budget: Budget,
) -> Result<MConnectivity> {
    require_integral_effective(d, "divisor")?;
    if d.degree_sum() < rational::int(2) {
        return Ok(MConnectivity {
            holds: true,
            vacuous: true,
            minimizer: None,
        });
    }
    let mut best: Option<(Rational, u64, Vec<u64>, Vec<u64>)> = None;
    for_each_decomposition(d, budget, |a, b| {
        let p = from_u64(d, a).dot(&from_u64(d, b));
        let spread: u64 = a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum();
        let better = match &best {
            None => true,
            Some((bp, bs, _, _)) => p < *bp || (p == *bp && spread < *bs),
        };
        if better {
            best = Some((p, spread, a.to_vec(), b.to_vec()));
        }
    })?;
    let (p, _, a, b) = best.expect("at least one decomposition");
    let holds = if strict { p > *m } else { p >= *m };
    Ok(MConnectivity {
        holds,
        vacuous: false,
        minimizer: Some(DecompositionWitness {
            a: from_u64(d, &a),
            b: from_u64(d, &b),
            product: p,
        }),
    })
}

/// Connectedness of `Supp D` in the graph whose edges are nonzero
/// off-diagonal intersection numbers.
pub fn support_connected(d: &Divisor) -> bool {
    let supp = d.support();
    if supp.len() <= 1 {
        return true;
    }
    let m = d.lattice().matrix();
    let mut uf = UnionFind::<usize>::new(supp.len());
    for (x, &i) in supp.iter().enumerate() {
        for (y, &j) in supp.iter().enumerate().skip(x + 1) {
            if !m[i][j].is_zero() {
                uf.union(x, y);
            }
        }
    }
    let root = uf.find(0);
    (1..supp.len()).all(|x| uf.find(x) == root)
}

/// Connected components of `Supp D`, as lists of prime indices.
pub fn support_components(d: &Divisor) -> Vec<Vec<usize>> {
    let supp = d.support();
    let m = d.lattice().matrix();
    let mut g = UnGraph::<usize, ()>::new_undirected();
    let nodes: Vec<_> = supp.iter().map(|&i| g.add_node(i)).collect();
    for x in 0..supp.len() {
        for y in x + 1..supp.len() {
            if !m[supp[x]][supp[y]].is_zero() {
                g.add_edge(nodes[x], nodes[y], ());
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = petgraph::algo::kosaraju_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| g[n]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort();
    comps
}

/// The greatest chain-connected subdivisor with full support.
///
/// Grown greedily from the reduced divisor, which is chain-connected
/// whenever the support is connected.
pub fn chain_connected_component(d: &Divisor) -> Result<Divisor> {
    require_nonzero_integral_effective(d, "divisor")?;
    if !support_connected(d) {
        return Err(Error::pre(
            "support is disconnected; take the chain-connected component of each connected component",
        ));
    }
    let mut cur = d.reduced();
    let mut steps = Vec::new();
    grow(&mut cur, d, &mut steps);
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZCertificate {
    /// Connecting chain from the round-up of the positive part to `D`.
    Chain(ConnectingChain),
    /// An effective negative definite `B` with `B - D` nef over `B`.
    Obstruction { b: Divisor },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZPositivity {
    pub positive: bool,
    pub zariski: ZariskiPair,
    pub certificate: ZCertificate,
}

/// Z-positivity of an integral effective divisor, decided by the
/// connecting chain from the round-up of its positive part.
///
/// A stall at `D_i` gives `B = D - D_i <= D - ceil(P) <= N`, so `B` lies in
/// the negative definite support of `N`, and `B - D = -D_i` is nef over `B`.
pub fn is_z_positive(d: &Divisor) -> Result<ZPositivity> {
    require_nonzero_integral_effective(d, "divisor")?;
    let zp = zariski::zariski_decompose(d)?;
    if zp.positive.is_zero() {
        return Ok(ZPositivity {
            positive: false,
            zariski: zp,
            certificate: ZCertificate::Obstruction { b: d.clone() },
        });
    }
    let start = zp.positive.roundup();
    match connecting_chain(&start, d)? {
        ChainOutcome::Complete(chain) => Ok(ZPositivity {
            positive: true,
            zariski: zp,
            certificate: ZCertificate::Chain(chain),
        }),
        ChainOutcome::Stalled(w) => Ok(ZPositivity {
            positive: false,
            zariski: zp,
            certificate: ZCertificate::Obstruction { b: w.b },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{l1, l2, l3, lat};
    use crate::lattice::DefMode;
    use crate::rational::{frac, int};

    fn dv(l: &std::sync::Arc<crate::lattice::IntersectionLattice>, c: &[i64]) -> Divisor {
        Divisor::from_ints(l, c).unwrap()
    }

    #[test]
    fn greedy_chain_on_elliptic_pullback() {
        let l = l3();
        let out = connecting_chain(&dv(&l, &[1, 0, 0]), &dv(&l, &[2, 2, 2])).unwrap();
        let ChainOutcome::Complete(chain) = out else {
            panic!("expected a chain")
        };
        // start C'1, then C'2, C'3, C'1, C'2, C'3
        assert_eq!(chain.steps, vec![1, 2, 0, 1, 2]);
        assert!(chain.is_valid());
        assert_eq!(
            chain.pairings(),
            vec![int(1), int(2), int(1), int(1), int(1)]
        );
    }

    #[test]
    fn trivial_chain() {
        let l = l3();
        let d = dv(&l, &[1, 2, 0]);
        let ChainOutcome::Complete(c) = connecting_chain(&d, &d).unwrap() else {
            panic!()
        };
        assert!(c.steps.is_empty());
    }

    #[test]
    fn fibre_multiple_stalls() {
        let l = l1();
        let out = connecting_chain(&dv(&l, &[1]), &dv(&l, &[2])).unwrap();
        assert_eq!(
            out,
            ChainOutcome::Stalled(DecompositionWitness {
                a: dv(&l, &[1]),
                b: dv(&l, &[1]),
                product: int(0)
            })
        );
        let cc = is_chain_connected(&dv(&l, &[2])).unwrap();
        assert!(!cc.connected);
    }

    #[test]
    fn chain_preconditions() {
        let l = l3();
        assert!(connecting_chain(&dv(&l, &[2, 0, 0]), &dv(&l, &[1, 1, 1])).is_err());
        assert!(connecting_chain(&dv(&l, &[0, 0, 0]), &dv(&l, &[1, 1, 1])).is_err());
        let half = Divisor::new(&l, vec![frac(1, 2), int(0), int(0)]).unwrap();
        assert!(is_chain_connected(&half).is_err());
    }

    #[test]
    fn chain_connected_examples() {
        let l = l3();
        assert!(is_chain_connected(&dv(&l, &[2, 2, 2])).unwrap().connected);
        assert!(is_chain_connected(&dv(&l, &[0, 1, 0])).unwrap().connected);
    }

    #[test]
    fn m_connected_examples() {
        let l = l2();
        let r = is_m_connected(&dv(&l, &[2, 2]), &int(0), true, Budget::default()).unwrap();
        assert!(r.holds && !r.vacuous);
        let w = r.minimizer.unwrap();
        assert_eq!(
            (w.a.clone(), w.b.clone()),
            (dv(&l, &[1, 1]), dv(&l, &[1, 1]))
        );
        assert_eq!(w.product, frac(1, 3));

        let l = l3();
        let r = is_m_connected(&dv(&l, &[2, 2, 2]), &int(0), true, Budget::default()).unwrap();
        assert!(!r.holds);
        let w = r.minimizer.unwrap();
        assert_eq!(
            (w.a.clone(), w.b.clone()),
            (dv(&l, &[1, 1, 1]), dv(&l, &[1, 1, 1]))
        );
        assert_eq!(w.product, int(0));

        let r = is_m_connected(&dv(&l1(), &[2]), &int(0), false, Budget::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.minimizer.unwrap().product, int(0));

        let single = is_m_connected(&dv(&l, &[0, 1, 0]), &int(5), true, Budget::default()).unwrap();
        assert!(single.holds && single.vacuous);
    }

    #[test]
    fn budget_is_explicit() {
        let l = l3();
        let err = is_m_connected(&dv(&l, &[9, 9, 9]), &int(0), true, Budget(100)).unwrap_err();
        assert_eq!(
            err,
            Error::Budget {
                needed: "1000".into(),
                budget: 100
            }
        );
    }

    #[test]
    fn enumerate_examples() {
        let l = l2();
        let all = enumerate_decompositions(&dv(&l, &[2, 2]), None, Budget::default()).unwrap();
        assert_eq!(all.len(), 7);
        let a_order: Vec<Vec<Rational>> = all.iter().map(|w| w.a.coeffs().to_vec()).collect();
        let mut sorted = a_order.clone();
        sorted.sort();
        assert_eq!(a_order, sorted);

        let le1 =
            enumerate_decompositions(&dv(&l, &[2, 2]), Some(&int(1)), Budget::default()).unwrap();
        let has = |a: &[i64], b: &[i64], p: Rational| {
            le1.iter()
                .any(|w| w.a == dv(&l, a) && w.b == dv(&l, b) && w.product == p)
        };
        assert!(has(&[1, 1], &[1, 1], frac(1, 3)));
        assert!(has(&[2, 1], &[0, 1], int(1)));
        assert!(le1.iter().all(|w| w.product <= int(1)));

        assert!(
            enumerate_decompositions(&dv(&l, &[0, 1]), None, Budget::default())
                .unwrap()
                .is_empty()
        );

        let l = l3();
        let z = enumerate_decompositions(&dv(&l, &[2, 2, 2]), Some(&int(0)), Budget::default())
            .unwrap();
        assert!(z.iter().any(|w| w.a == dv(&l, &[1, 1, 1])
            && w.b == dv(&l, &[1, 1, 1])
            && w.product == int(0)));
    }

    #[test]
    fn component_examples() {
        assert_eq!(
            chain_connected_component(&dv(&l1(), &[2])).unwrap(),
            dv(&l1(), &[1])
        );
        let l = l3();
        assert_eq!(
            chain_connected_component(&dv(&l, &[2, 2, 2])).unwrap(),
            dv(&l, &[2, 2, 2])
        );
        let split = lat("S", &["A", "B"], &[&[int(1), int(0)], &[int(0), int(-1)]]);
        assert!(matches!(
            chain_connected_component(&dv(&split, &[1, 2])),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            support_components(&dv(&split, &[1, 2])),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn z_positive_examples() {
        let r = is_z_positive(&dv(&l1(), &[2])).unwrap();
        assert!(r.positive);
        let ZCertificate::Chain(c) = &r.certificate else {
            panic!()
        };
        assert!(c.steps.is_empty());

        let neg = lat("N", &["E"], &[&[int(-2)]]);
        let r = is_z_positive(&dv(&neg, &[1])).unwrap();
        assert!(!r.positive);
        assert_eq!(
            r.certificate,
            ZCertificate::Obstruction { b: dv(&neg, &[1]) }
        );

        let l = l3();
        let r = is_z_positive(&dv(&l, &[1, 1, 1])).unwrap();
        assert!(r.positive);
        assert_eq!(
            r.zariski.positive.coeffs(),
            &[int(1), frac(4, 5), frac(3, 5)]
        );
        let ZCertificate::Chain(c) = &r.certificate else {
            panic!()
        };
        assert!(c.steps.is_empty());
    }

    #[test]
    fn z_obstruction_is_negative_definite() {
        // a (-1)-curve E meeting a (-2)-curve G: D = E + 3G has P = 0
        let l = lat("T", &["E", "G"], &[&[int(-1), int(1)], &[int(1), int(-2)]]);
        let d = dv(&l, &[1, 3]);
        let r = is_z_positive(&d).unwrap();
        assert!(!r.positive);
        let ZCertificate::Obstruction { b } = r.certificate else {
            panic!()
        };
        let supp = b.support();
        assert!(l.definiteness(&supp, DefMode::NegDef).unwrap().holds);
        assert!((&b - &d).nef_over(&b).unwrap());
    }
}
