//! Numerical criteria for base point freeness, very ampleness and the
//! extension of morphisms from a curve on the surface.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::invariants::{self, CohomologyInputs};
use super::report::{CriterionReport, Status, Verdict};
use crate::error::{Error, Result};
use crate::lattice::SingClass;
use crate::rational::{self, Rational};

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

/// Appends the dimension row `dim|D| >= dim H^1(O_X)_n + offset`; it is
/// asserted when either number is missing.
fn dim_row(r: &mut CriterionReport, system: &str, extras: &CohomologyInputs, offset: u64) {
    let label = format!("dim{system} >= dim H^1(O_X)_n + {offset}");
    match extras.excess() {
        Some(ex) => r.check(
            label,
            format!("dim{system} - dim H^1(O_X)_n = {ex} >= {offset}"),
            ex >= offset as i128,
        ),
        None => r.push(
            label.clone(),
            format!("{label} (no dimension data supplied)"),
            Status::Asserted,
        ),
    }
}

/// `delta_x` and `tau_x` of a point; only smooth and Du Val points have
/// tabulated values for both.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointData {
    pub delta_override: Option<Rational>,
    pub tau_override: Option<u64>,
}

#[allow(clippy::too_many_arguments)]
pub fn bpf_check(
    dsq: &Rational,
    db_min: &Rational,
    alpha: &Rational,
    beta: &Rational,
    class: SingClass,
    point: &PointData,
    extras: &CohomologyInputs,
    acknowledged: bool,
) -> Result<CriterionReport> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::pre("alpha and beta must be positive"));
    }
    let mut r = CriterionReport::new(
        "bpf",
        "numerical base point freeness criterion",
        "x is not a base point of |K_X + D|",
    );
    let tabulated = match class {
        SingClass::Smooth => Some((rational::int(4), 3)),
        SingClass::DuVal => Some((rational::int(2), 1)),
        _ => None,
    };
    let (delta, tau) = match tabulated {
        Some((d, t)) => {
            if point.delta_override.as_ref().is_some_and(|o| *o != d) {
                return Err(Error::InvalidInput(format!(
                    "delta override disagrees with the tabulated value {} for a {class} point",
                    fmt(&d)
                )));
            }
            if point.tau_override.or(extras.tau).is_some_and(|o| o != t) {
                return Err(Error::InvalidInput(format!(
                    "tau override disagrees with the tabulated value {t} for a {class} point"
                )));
            }
            (d, t)
        }
        None => {
            let delta = match (class, &point.delta_override) {
                (SingClass::NonLt, None) => Rational::zero(),
                (SingClass::NonLt, Some(d)) if d.is_zero() => Rational::zero(),
                (SingClass::NonLt, Some(_)) => {
                    return Err(Error::InvalidInput(
                        "a non log terminal point has delta = 0".into(),
                    ))
                }
                (_, Some(d)) if d.is_positive() && *d < rational::int(2) => d.clone(),
                (_, Some(d)) => {
                    return Err(Error::InvalidInput(format!(
                        "a log terminal (non Du Val) point has 0 < delta < 2, got {}",
                        fmt(d)
                    )))
                }
                (_, None) => {
                    return Err(Error::pre(
                        "a log terminal (non Du Val) point needs a delta override",
                    ))
                }
            };
            let tau = point.tau_override.or(extras.tau).ok_or_else(|| {
                Error::pre(format!("a {class} point needs tau = dim V_n supplied"))
            })?;
            if class == SingClass::LogTerminal {
                r.push(
                    "delta_x",
                    format!("delta_x = {} (user-supplied)", fmt(&delta)),
                    Status::Asserted,
                );
            }
            r.push(
                "tau_x",
                format!("tau_x = dim V_n = {tau} (user-supplied)"),
                Status::Asserted,
            );
            (delta, tau)
        }
    };
    r.value("delta_x", fmt(&delta));
    r.value("tau_x", tau);
    r.check(
        "α ≥ δ_x",
        format!("alpha = {} >= delta_x = {}", fmt(alpha), fmt(&delta)),
        alpha >= &delta,
    );
    let lhs = rational::int(4) * beta * (Rational::one() - beta / alpha);
    r.check(
        "4β(1−β/α) ≥ δ_x",
        format!("4 beta (1 - beta/alpha) = {} >= {}", fmt(&lhs), fmt(&delta)),
        lhs >= delta,
    );
    r.check(
        "D² > α",
        format!("D^2 = {} > {}", fmt(dsq), fmt(alpha)),
        dsq > alpha,
    );
    r.check(
        "DB ≥ β",
        format!(
            "D.B >= {} >= beta = {} for curves B through x",
            fmt(db_min),
            fmt(beta)
        ),
        db_min >= beta,
    );
    dim_row(&mut r, "|D|", extras, tau);
    r.notes
        .push("assumes D nef and K_X + D Cartier at x".into());
    Ok(r.finish(Verdict::Fails, acknowledged))
}

pub fn very_ample_check(
    dsq: &Rational,
    db_min: &Rational,
    alpha: &Rational,
    beta: &Rational,
    extras: &CohomologyInputs,
    acknowledged: bool,
) -> Result<CriterionReport> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::pre("alpha and beta must be positive"));
    }
    let mut r = CriterionReport::new(
        "very-ample",
        "numerical very ampleness criterion on Du Val surfaces",
        "|K_X + D| is very ample",
    );
    r.check(
        "α ≥ 8",
        format!("alpha = {} >= 8", fmt(alpha)),
        alpha >= &rational::int(8),
    );
    let lhs = beta * (Rational::one() - beta / alpha);
    r.check(
        "β(1−β/α) ≥ 2",
        format!("beta (1 - beta/alpha) = {} >= 2", fmt(&lhs)),
        lhs >= rational::int(2),
    );
    r.check(
        "D² > α",
        format!("D^2 = {} > {}", fmt(dsq), fmt(alpha)),
        dsq > alpha,
    );
    r.check(
        "DB ≥ β",
        format!(
            "D.B >= {} >= beta = {} for every curve B",
            fmt(db_min),
            fmt(beta)
        ),
        db_min >= beta,
    );
    dim_row(&mut r, "|D|", extras, 6);
    r.notes
        .push("assumes X has at most Du Val singularities and D Cartier".into());
    Ok(r.finish(Verdict::Fails, acknowledged))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FujitaReport {
    pub bpf: CriterionReport,
    pub very_ample: CriterionReport,
}

/// `|K_X + mH|` for an ample Cartier `H` on a surface with at most Du Val
/// singularities. Each branch condition is cross-checked against the
/// general criteria at `D^2 = m^2 H^2`, `DB = m`.
pub fn fujita_check(
    m: u64,
    hsq: &Rational,
    dims: &CohomologyInputs,
    acknowledged: bool,
) -> Result<FujitaReport> {
    if m == 0 {
        return Err(Error::pre("m must be at least 1"));
    }
    if *hsq < rational::int(1) {
        return Err(Error::pre("H^2 must be at least 1 for an ample Cartier H"));
    }
    let mr = Rational::from_integer(m.into());
    let dsq = &mr * &mr * hsq;
    let big_h = *hsq > rational::int(1);
    let enough = CohomologyInputs {
        dim_linear_system: Some(6),
        h1_nilpotent: Some(0),
        ..Default::default()
    };

    let mut bpf = CriterionReport::new(
        "fujita-bpf",
        "Fujita-type bound",
        "|K_X + mH| is base point free",
    );
    let branch = m >= 3 || (m == 2 && big_h);
    bpf.check(
        "m ≥ 3 or (m = 2 and H² > 1)",
        format!("m = {m}, H^2 = {}", fmt(hsq)),
        branch,
    );
    let inner = bpf_check(
        &dsq,
        &mr,
        &rational::int(4),
        &rational::int(2),
        SingClass::Smooth,
        &PointData::default(),
        &enough,
        false,
    )?;
    if inner.holds() != branch {
        return Err(Error::Model(
            "base point free branch disagrees with the (4, 2) criterion".into(),
        ));
    }
    bpf.check(
        "criterion at (α, β) = (4, 2)",
        format!("D^2 = {} > 4 and D.B >= m = {m} >= 2", fmt(&dsq)),
        inner.holds(),
    );
    dim_row(&mut bpf, "|mH|", dims, 3);
    bpf.value("D^2", fmt(&dsq));

    let mut va = CriterionReport::new(
        "fujita-very-ample",
        "Fujita-type bound",
        "|K_X + mH| is very ample",
    );
    let branch = m >= 4 || (m == 3 && big_h);
    va.check(
        "m ≥ 4 or (m = 3 and H² > 1)",
        format!("m = {m}, H^2 = {}", fmt(hsq)),
        branch,
    );
    let inner = very_ample_check(
        &dsq,
        &mr,
        &rational::int(9),
        &rational::int(3),
        &enough,
        false,
    )?;
    if inner.holds() != branch {
        return Err(Error::Model(
            "very ample branch disagrees with the (9, 3) criterion".into(),
        ));
    }
    va.check(
        "criterion at (α, β) = (9, 3)",
        format!("D^2 = {} > 9 and D.B >= m = {m} >= 3", fmt(&dsq)),
        inner.holds(),
    );
    dim_row(&mut va, "|mH|", dims, 6);
    va.value("D^2", fmt(&dsq));

    Ok(FujitaReport {
        bpf: bpf.finish(Verdict::Fails, acknowledged),
        very_ample: va.finish(Verdict::Fails, acknowledged),
    })
}

/// The five pluri-(anti)canonical cases; `r` is the Cartier index.
pub fn pluri_check(
    case: u8,
    m: u64,
    ksq: &Rational,
    r: Option<u64>,
    dims: &CohomologyInputs,
    acknowledged: bool,
) -> Result<CriterionReport> {
    let big_k = *ksq > rational::int(1);
    let fm = format!("m = {m}, K^2 = {}", fmt(ksq));
    let cite = "pluri-(anti)canonical criterion";
    let rep = match case {
        1 => {
            let mut rep = CriterionReport::new("pluri-1", cite, "|mK_X| is base point free");
            rep.check(
                "m ≥ 4 or (m = 3 and K² > 1)",
                fm,
                m >= 4 || (m == 3 && big_k),
            );
            dim_row(&mut rep, "|(m-1)K_X|", dims, 3);
            rep.notes.push("assumes K_X ample Cartier".into());
            rep
        }
        2 => {
            let mut rep = CriterionReport::new("pluri-2", cite, "|mK_X| is very ample");
            rep.check(
                "m ≥ 5 or (m = 4 and K² > 1)",
                fm,
                m >= 5 || (m == 4 && big_k),
            );
            dim_row(&mut rep, "|(m-1)K_X|", dims, 6);
            rep.notes
                .push("assumes X canonical and K_X ample Cartier".into());
            rep
        }
        3 => {
            let mut rep = CriterionReport::new("pluri-3", cite, "|-mK_X| is base point free");
            rep.check(
                "m ≥ 2 or (m = 1 and K² > 1)",
                fm,
                m >= 2 || (m == 1 && big_k),
            );
            let va = m >= 3 || (m == 2 && big_k);
            rep.notes.push(format!(
                "|-mK_X| is very ample: {} (m >= 3 or m = 2 and K^2 > 1)",
                if va { "yes" } else { "not by this criterion" }
            ));
            rep.value("very_ample", va);
            rep.notes
                .push("assumes -K_X ample Cartier (canonical del Pezzo)".into());
            rep
        }
        4 | 5 => {
            let r = r
                .filter(|&r| r >= 2)
                .ok_or_else(|| Error::pre(format!("case {case} needs a Cartier index r >= 2")))?;
            let mr = m * r;
            if case == 4 {
                let mut rep =
                    CriterionReport::new("pluri-4", cite, format!("|{mr}K_X| is base point free"));
                rep.check("m ≥ 3", fm, m >= 3);
                dim_row(&mut rep, "|(mr-1)K_X|", dims, 3);
                rep.notes
                    .push(format!("assumes K_X ample with Cartier index r = {r}"));
                rep
            } else {
                let mut rep =
                    CriterionReport::new("pluri-5", cite, format!("|-{mr}K_X| is base point free"));
                rep.check("m ≥ 2", fm, m >= 2);
                match dims.dim_linear_system {
                    Some(dim) => {
                        rep.check("dim|-(mr+1)K_X| ≥ 3", format!("dim = {dim} >= 3"), dim >= 3)
                    }
                    None => rep.push(
                        "dim|-(mr+1)K_X| ≥ 3",
                        "dim|-(mr+1)K_X| >= 3 (no dimension data supplied)",
                        Status::Asserted,
                    ),
                }
                rep.notes.push(format!(
                    "assumes -K_X ample with Cartier index r = {r} (klt del Pezzo)"
                ));
                rep
            }
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "pluricanonical case must be 1..5, got {case}"
            )))
        }
    };
    Ok(rep.finish(Verdict::Fails, acknowledged))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionVariant {
    Plain,
    BasePoints,
    Movable,
}

impl std::str::FromStr for ExtensionVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ExtensionVariant::Plain),
            "base_points" | "base-points" => Ok(ExtensionVariant::BasePoints),
            "movable" => Ok(ExtensionVariant::Movable),
            _ => Err(Error::InvalidInput(format!(
                "unknown extension variant `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInputs {
    pub dsq: Rational,
    pub d: u64,
    pub q: Rational,
    /// `q` came from a bounded search rather than from the user.
    pub q_from_box: bool,
    pub dim_d: u64,
    pub h1n: u64,
}

/// The threshold `mu(q, d)` the extension criteria compare `D^2` with.
pub fn extension_threshold(q: &Rational, d: u64) -> Result<Rational> {
    invariants::mu(q, &Rational::from_integer(d.into()))
}

pub fn extension_check(
    inp: &ExtensionInputs,
    variant: ExtensionVariant,
    acknowledged: bool,
) -> Result<CriterionReport> {
    if inp.d == 0 {
        return Err(Error::pre("degree d must be positive"));
    }
    let mu = extension_threshold(&inp.q, inp.d)?;
    let dr = Rational::from_integer(inp.d.into());
    let (name, cite, conclusion) = match variant {
        ExtensionVariant::Plain => ("extension", "extension of morphisms from D", "phi extends to a morphism psi: X -> P^1"),
        ExtensionVariant::BasePoints => (
            "extension-base-points",
            "extension of morphisms from D, base point case",
            "phi is induced by a linear pencil {F_lambda} with F_lambda^2 = q_X and no fixed part",
        ),
        ExtensionVariant::Movable => (
            "extension-movable",
            "extension of morphisms from D, movable case",
            "phi extends to a morphism, or is induced by a linear pencil {F_lambda} with F_lambda^2 = q_{X,inf}",
        ),
    };
    let mut r = CriterionReport::new(name, cite, conclusion);
    r.value("threshold", fmt(&mu));
    let cmp = format!("D^2 = {}, mu(q, d) = {}", fmt(&inp.dsq), fmt(&mu));
    match variant {
        ExtensionVariant::Plain => r.check("D² > μ(q_X, d)", cmp, inp.dsq > mu),
        ExtensionVariant::BasePoints => {
            r.check("D² = μ(q_X, d)", cmp, inp.dsq == mu);
            r.check(
                "q_X < d",
                format!("q = {} < d = {}", fmt(&inp.q), inp.d),
                inp.q < dr,
            );
        }
        ExtensionVariant::Movable => r.check(
            "D² > μ(q_X,∞, d) or (D² = μ and q < d)",
            cmp,
            inp.dsq > mu || (inp.dsq == mu && inp.q < dr),
        ),
    }
    let need = 3 * inp.d + inp.h1n;
    r.check(
        "dim|D| ≥ 3d + dim H^1(O_X)_n",
        format!("dim|D| = {} >= {need}", inp.dim_d),
        inp.dim_d >= need,
    );
    if inp.q_from_box {
        r.push(
            "q is box-restricted",
            format!(
                "q = {} was found by a bounded search; the true value may be smaller",
                fmt(&inp.q)
            ),
            Status::Asserted,
        );
    }
    r.notes.push(
        "assumes D > 0 with every prime component of positive square and phi: D -> P^1 finite separable of degree d"
            .into(),
    );
    Ok(r.finish(Verdict::Fails, acknowledged))
}
