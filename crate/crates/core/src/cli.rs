//! Command-line front end. Exit status 0 for computed results (a failing
//! criterion is a result), 2 for invalid input, 3 for an exhausted
//! enumeration budget.

use std::path::Path;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::connectivity::{self, Budget, ChainOutcome, ZCertificate};
use crate::criteria::{
    self, CohomologyInputs, ExtensionInputs, ExtensionVariant, PointData, ReiderMode, ReiderParams,
};
use crate::dualgraph;
use crate::error::{Error, Result};
use crate::io;
use crate::lattice::{Cluster, Divisor, IntersectionLattice, SingClass};
use crate::linalg;
use crate::parse::parse_divisor;
use crate::rational::{self, Rational};
use crate::zariski::{self, GrowthOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckModel,
    Intersect,
    Zariski,
    IntegralZariski,
    Connectivity,
    Component,
    Zpositive,
    Pullback,
    Pushforward,
    Anticanonical,
    Fundcycle,
    Delta,
    #[value(name = "dualgraph-b1")]
    #[serde(rename = "dualgraph-b1")]
    DualgraphB1,
    Mu,
    Qmin,
    Reider,
    Bpf,
    VeryAmple,
    Fujita,
    Pluri,
    Extension,
    Gonality,
    Frobenius,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Structured,
}

/// Every flag may also be given as a key of a `--scenario` JSON file;
/// flags on the command line take precedence.
#[derive(Debug, Clone, Default, Parser, Serialize, Deserialize)]
#[command(
    name = "divlat",
    version,
    about = "Exact intersection theory on divisor lattices"
)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Args {
    /// Command to run; may come from the scenario file instead.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON file bundling any of the flags below.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Lattice file, or corpus:NAME.
    #[arg(long)]
    pub model: Option<String>,
    /// Resolution file, or corpus:NAME.
    #[arg(long)]
    pub resolution: Option<String>,
    /// Curve configuration file (repeat to compare two).
    #[arg(long)]
    pub graph: Vec<String>,
    /// Divisor expression such as "2C1 + 1/3 C2" (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: Vec<String>,
    /// Cluster as "[name:]P1,P2,..." listing the primes through it.
    #[arg(long)]
    pub cluster: Option<String>,
    /// Per-prime coefficient bound for searches.
    #[arg(long = "box")]
    #[serde(rename = "box")]
    pub box_bound: Option<u64>,
    /// Maximum number of cases an exhaustive search may visit.
    #[arg(long)]
    pub budget: Option<u64>,
    /// User-supplied dimensions: "dimD=..,h1n=..,tau=..,frob=true|false".
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Accept asserted hypotheses as true when forming verdicts.
    #[arg(long)]
    pub acknowledge_asserted: bool,

    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Use `A.B >= m` instead of `A.B > m`.
    #[arg(long)]
    pub non_strict: bool,
    /// Zariski growth order as a comma-separated prime list.
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Reider mode: I or II.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// Point class: smooth, duval, logterminal, nonlt.
    #[arg(long)]
    pub class: Option<String>,
    /// Cycle Z on the resolution (defaults by point class).
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub dsq: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub db_min: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub delta_override: Option<String>,
    #[arg(long)]
    pub tau_override: Option<u64>,
    #[arg(long)]
    pub hsq: Option<String>,
    #[arg(long)]
    pub case: Option<u8>,
    #[arg(long, allow_hyphen_values = true)]
    pub ksq: Option<String>,
    #[arg(long)]
    pub r: Option<u64>,
    /// Extension variant: plain, base_points, movable.
    #[arg(long)]
    pub variant: Option<String>,
    /// Characteristic for frobenius.
    #[arg(long)]
    pub p: Option<u64>,
    /// Matrix rows separated by ';', entries by ','.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!(
                        "error[E_USAGE]: {}\n",
                        text.lines()
                            .next()
                            .unwrap_or("")
                            .trim_start_matches("error: ")
                    ),
                },
            };
        }
    };
    match execute(cli) {
        Ok(out) => Outcome {
            code: 0,
            stdout: out,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if matches!(e, Error::Budget { .. }) {
                3
            } else {
                2
            },
            stdout: String::new(),
            stderr: format!(
                "error[{}]: {}\n",
                e.code(),
                e.to_string().replace('\n', " ")
            ),
        },
    }
}

fn execute(cli: Args) -> Result<String> {
    let args = match cli.scenario.clone() {
        Some(s) => merge_scenario(&cli, &s)?,
        None => cli,
    };
    let command = args
        .command
        .ok_or_else(|| Error::InvalidInput("no command given".into()))?;
    let data = dispatch(command, &args)?;
    let name = command.name();
    Ok(match args.format.unwrap_or(Format::Text) {
        Format::Structured => {
            let doc = json!({ "command": name, "data": data });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut s = format!("{name}\n");
            render_text(&data, 1, &mut s);
            s
        }
    })
}

fn prune(v: Value) -> Map<String, Value> {
    let Value::Object(m) = v else {
        unreachable!("Args serializes to an object")
    };
    m.into_iter()
        .filter(|(_, v)| match v {
            Value::Null | Value::Bool(false) => false,
            Value::Array(a) => !a.is_empty(),
            _ => true,
        })
        .collect()
}

fn merge_scenario(cli: &Args, reference: &str) -> Result<Args> {
    let (text, dir) = io::read_ref(reference, None)?;
    let mut scen: Map<String, Value> = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("scenario `{reference}`: {e}")))?;
    let fix = |v: &mut Value| {
        if let (Value::String(s), Some(dir)) = (&*v, &dir) {
            if !s.starts_with("corpus:") && Path::new(s).is_relative() {
                *v = Value::String(dir.join(s).to_string_lossy().into_owned());
            }
        }
    };
    for key in ["model", "resolution"] {
        if let Some(v) = scen.get_mut(key) {
            fix(v);
        }
    }
    if let Some(Value::Array(a)) = scen.get_mut("graph") {
        a.iter_mut().for_each(fix);
    }
    if let Some(Value::Object(o)) = scen.get("dims").cloned() {
        let s = o
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str().map_or(v.to_string(), str::to_string)))
            .collect::<Vec<_>>()
            .join(",");
        scen.insert("dims".into(), Value::String(s));
    }
    scen.remove("scenario");
    let mut over = prune(serde_json::to_value(cli).expect("serializable"));
    over.remove("scenario");
    scen.extend(over);
    serde_json::from_value(Value::Object(scen))
        .map_err(|e| Error::InvalidInput(format!("scenario `{reference}`: {e}")))
}

fn render_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, depth + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

fn rat(v: &Option<String>, flag: &str) -> Result<Rational> {
    rational::parse(need(v, flag)?.trim())
        .map_err(|e| Error::InvalidInput(format!("--{flag}: {e}")))
}

fn uint(v: &Option<String>, flag: &str) -> Result<u64> {
    need(v, flag)?
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("--{flag} must be a non-negative integer")))
}

fn q(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn dv(d: &Divisor) -> Value {
    Value::String(d.to_string())
}

fn budget(a: &Args) -> Budget {
    a.budget.map(Budget).unwrap_or_default()
}

fn lattice(a: &Args) -> Result<Arc<IntersectionLattice>> {
    io::load_lattice(need(&a.model, "model")?, None)
}

fn divisors(
    a: &Args,
    l: &Arc<IntersectionLattice>,
    min: usize,
    max: usize,
) -> Result<Vec<Divisor>> {
    if a.divisor.len() < min || a.divisor.len() > max {
        return Err(Error::InvalidInput(if min == max {
            format!(
                "expected {min} --divisor argument(s), got {}",
                a.divisor.len()
            )
        } else {
            format!(
                "expected {min} to {max} --divisor arguments, got {}",
                a.divisor.len()
            )
        }));
    }
    a.divisor.iter().map(|t| parse_divisor(t, l)).collect()
}

fn one_divisor(a: &Args, l: &Arc<IntersectionLattice>) -> Result<Divisor> {
    Ok(divisors(a, l, 1, 1)?.remove(0))
}

pub fn parse_cluster(text: &str, l: &IntersectionLattice) -> Result<Cluster> {
    let (name, list) = match text.split_once(':') {
        Some((n, rest)) => (n.trim(), rest),
        None => ("zeta", text),
    };
    let primes: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let c = Cluster::through(name, l, &primes)?;
    c.check_for(l)?;
    Ok(c)
}

pub fn parse_dims(text: &str) -> Result<CohomologyInputs> {
    let mut out = CohomologyInputs::default();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("--dims entry `{part}` is not key=value"))
        })?;
        let num = || {
            v.trim().parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!("--dims {k} must be a non-negative integer"))
            })
        };
        match k.trim() {
            "dimD" | "dim" => out.dim_linear_system = Some(num()?),
            "h1n" => out.h1_nilpotent = Some(num()?),
            "tau" => out.tau = Some(num()?),
            "frob" => {
                out.frobenius_injective =
                    Some(v.trim().parse().map_err(|_| {
                        Error::InvalidInput("--dims frob must be true or false".into())
                    })?)
            }
            other => return Err(Error::InvalidInput(format!("unknown --dims key `{other}`"))),
        }
    }
    Ok(out)
}

fn dims(a: &Args) -> Result<CohomologyInputs> {
    a.dims
        .as_deref()
        .map_or(Ok(CohomologyInputs::default()), parse_dims)
}

fn class(a: &Args, fallback: Option<SingClass>) -> Result<SingClass> {
    match &a.class {
        Some(c) => c.parse(),
        None => fallback.ok_or_else(|| Error::InvalidInput("missing --class".into())),
    }
}

fn witness(w: &connectivity::DecompositionWitness) -> Value {
    json!({ "a": dv(&w.a), "b": dv(&w.b), "product": q(&w.product) })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn dispatch(cmd: Command, a: &Args) -> Result<Value> {
    use Command::*;
    Ok(match cmd {
        CheckModel => check_model(a)?,
        Intersect => {
            let l = lattice(a)?;
            let ds = divisors(a, &l, 1, 2)?;
            let e = ds.get(1).unwrap_or(&ds[0]);
            json!({ "d": dv(&ds[0]), "e": dv(e), "product": q(&ds[0].intersect(e)?) })
        }
        Zariski => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            let zp = match &a.order {
                Some(o) => {
                    let perm = o
                        .split(',')
                        .map(|n| {
                            l.index_of(n.trim()).ok_or_else(|| {
                                Error::InvalidInput(format!("--order: unknown prime {}", n.trim()))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    zariski::zariski_decompose_ordered(&d, &GrowthOrder::Sequential(perm))?
                }
                None => zariski::zariski_decompose(&d)?,
            };
            let sq = zp.positive_square();
            json!({
                "divisor": dv(&d),
                "positive": dv(&zp.positive),
                "negative": dv(&zp.negative),
                "positive_square": q(&sq),
                "big": num_traits::Signed::is_positive(&sq),
                "violations": zp.violations(&d),
            })
        }
        IntegralZariski => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            let iz = zariski::integral_zariski(&d)?;
            json!({ "divisor": dv(&d), "positive": dv(&iz.positive), "negative": dv(&iz.negative) })
        }
        Connectivity => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            let cc = connectivity::is_chain_connected(&d)?;
            let chain = match &cc.certificate {
                ChainOutcome::Complete(c) => json!({
                    "start": dv(&c.start),
                    "steps": c.steps.iter().map(|&i| l.primes()[i].clone()).collect::<Vec<_>>(),
                    "pairings": c.pairings().iter().map(q).collect::<Vec<_>>(),
                }),
                ChainOutcome::Stalled(w) => json!({ "stalled": witness(w) }),
            };
            let m = match &a.m {
                Some(_) => rat(&a.m, "m")?,
                None => Rational::from_integer(0.into()),
            };
            let strict = !a.non_strict;
            let mc = connectivity::is_m_connected(&d, &m, strict, budget(a))?;
            json!({
                "divisor": dv(&d),
                "chain_connected": cc.connected,
                "chain": chain,
                "m": q(&m),
                "strict": strict,
                "m_connected": mc.holds,
                "vacuous": mc.vacuous,
                "minimizer": mc.minimizer.as_ref().map(witness),
                "support_connected": connectivity::support_connected(&d),
            })
        }
        Component => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            json!({ "divisor": dv(&d), "component": dv(&connectivity::chain_connected_component(&d)?) })
        }
        Zpositive => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            let z = connectivity::is_z_positive(&d)?;
            let cert = match &z.certificate {
                ZCertificate::Chain(c) => json!({
                    "chain_from": dv(&c.start),
                    "steps": c.steps.iter().map(|&i| l.primes()[i].clone()).collect::<Vec<_>>(),
                }),
                ZCertificate::Obstruction { b } => json!({ "obstruction": dv(b) }),
            };
            json!({
                "divisor": dv(&d),
                "z_positive": z.positive,
                "positive_part": dv(&z.zariski.positive),
                "negative_part": dv(&z.zariski.negative),
                "certificate": cert,
            })
        }
        Pullback => {
            let r = resolution(a)?;
            let d = one_divisor(a, r.model.downstairs())?;
            let p = r.model.mumford_pullback(&d)?;
            json!({ "divisor": dv(&d), "pullback": dv(&p), "roundup": dv(&p.roundup()) })
        }
        Pushforward => {
            let r = resolution(a)?;
            let d = one_divisor(a, r.model.upstairs())?;
            json!({ "divisor": dv(&d), "pushforward": dv(&r.model.pushforward(&d)?) })
        }
        Anticanonical => {
            let r = resolution(a)?;
            json!({ "anticanonical": dv(&r.model.anticanonical_cycle()?) })
        }
        Fundcycle => {
            let r = resolution(a)?;
            let z = r.model.fundamental_cycle()?;
            let pairs: Map<String, Value> = r
                .model
                .exceptional()
                .iter()
                .map(|&e| (r.model.upstairs().primes()[e].clone(), q(&z.dot_prime(e))))
                .collect();
            json!({ "fundamental_cycle": dv(&z), "pairings": pairs })
        }
        Delta => {
            let r = resolution(a)?;
            let model = &r.model;
            let c = class(a, r.class)?;
            let z = match &a.z {
                Some(t) => parse_divisor(t, model.upstairs())?,
                None => model.default_z(c)?,
            };
            let d = match a.divisor.len() {
                0 => None,
                _ => Some(one_divisor(a, model.downstairs())?),
            };
            let cl = a
                .cluster
                .as_deref()
                .map(|s| parse_cluster(s, model.downstairs()))
                .transpose()?;
            let mut v = to_value(&model.delta_invariant(&z, d.as_ref(), cl.as_ref())?);
            v["class"] = Value::String(c.to_string());
            v
        }
        DualgraphB1 => {
            if a.graph.is_empty() || a.graph.len() > 2 {
                return Err(Error::InvalidInput(
                    "expected one or two --graph files".into(),
                ));
            }
            let mut out = Vec::new();
            for g in &a.graph {
                let cfg = io::load_config(g, None)?;
                let graph = dualgraph::build_graph(&cfg)?;
                let comps = graph.connected_components();
                out.push(json!({
                    "vertices": graph.vertex_count(),
                    "edges": graph.edge_count(),
                    "connected_components": comps,
                    "betti1": dualgraph::betti1(&graph),
                    "closed_formula": if comps == 1 { json!(graph.closed_formula()) } else { Value::Null },
                }));
            }
            let mut v = json!({ "graphs": out });
            if a.graph.len() == 2 {
                v["betti1_equal"] = json!(v["graphs"][0]["betti1"] == v["graphs"][1]["betti1"]);
            }
            v
        }
        Mu => {
            let (x, d) = (rat(&a.x, "x")?, rat(&a.d, "d")?);
            json!({ "x": q(&x), "d": q(&d), "mu": q(&criteria::mu(&x, &d)?) })
        }
        Qmin => {
            let l = lattice(a)?;
            let bx = a.box_bound.unwrap_or(4);
            let cl = a
                .cluster
                .as_deref()
                .map(|s| parse_cluster(s, &l))
                .transpose()?;
            let r = criteria::q_min(&l, bx, cl.as_ref(), budget(a))?;
            json!({
                "box": bx,
                "value": r.value.as_ref().map(q),
                "witness": r.witness.as_ref().map(dv),
                "restricted": r.restricted,
                "found": r.value.is_some(),
            })
        }
        Reider => {
            let l = lattice(a)?;
            let d = one_divisor(a, &l)?;
            let cl = parse_cluster(need(&a.cluster, "cluster")?, &l)?;
            let mode = match a.mode.as_deref().unwrap_or("I") {
                "I" | "i" | "1" => ReiderMode::I,
                "II" | "ii" | "2" => ReiderMode::II,
                m => {
                    return Err(Error::InvalidInput(format!(
                        "--mode must be I or II, got {m}"
                    )))
                }
            };
            let mut p = ReiderParams::new(mode, rat(&a.delta, "delta")?);
            if a.q.is_some() {
                p.q = Some(rat(&a.q, "q")?);
            }
            if let Some(b) = a.box_bound {
                p.q_box = b;
            }
            p.budget = budget(a);
            p.acknowledged = a.acknowledge_asserted;
            to_value(&criteria::reider_obstructions(&d, &cl, &p, &dims(a)?)?)
        }
        Bpf => {
            let point = PointData {
                delta_override: a
                    .delta_override
                    .as_ref()
                    .map(|_| rat(&a.delta_override, "delta-override"))
                    .transpose()?,
                tau_override: a.tau_override,
            };
            to_value(&criteria::bpf_check(
                &rat(&a.dsq, "dsq")?,
                &rat(&a.db_min, "db-min")?,
                &rat(&a.alpha, "alpha")?,
                &rat(&a.beta, "beta")?,
                class(a, Some(SingClass::Smooth))?,
                &point,
                &dims(a)?,
                a.acknowledge_asserted,
            )?)
        }
        VeryAmple => to_value(&criteria::very_ample_check(
            &rat(&a.dsq, "dsq")?,
            &rat(&a.db_min, "db-min")?,
            &rat(&a.alpha, "alpha")?,
            &rat(&a.beta, "beta")?,
            &dims(a)?,
            a.acknowledge_asserted,
        )?),
        Fujita => to_value(&criteria::fujita_check(
            uint(&a.m, "m")?,
            &rat(&a.hsq, "hsq")?,
            &dims(a)?,
            a.acknowledge_asserted,
        )?),
        Pluri => to_value(&criteria::pluri_check(
            *need(&a.case, "case")?,
            uint(&a.m, "m")?,
            &rat(&a.ksq, "ksq")?,
            a.r,
            &dims(a)?,
            a.acknowledge_asserted,
        )?),
        Extension => {
            let dm = dims(a)?;
            let (q_val, from_box) = match (&a.q, &a.model) {
                (Some(_), _) => (rat(&a.q, "q")?, false),
                (None, Some(_)) => {
                    let l = lattice(a)?;
                    let r = criteria::q_min(&l, a.box_bound.unwrap_or(4), None, budget(a))?;
                    let v = r.value.ok_or_else(|| {
                        Error::InvalidInput(
                            "no effective divisor with positive square in the box".into(),
                        )
                    })?;
                    (v, true)
                }
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "missing --q (or --model to search for it)".into(),
                    ))
                }
            };
            let inp = ExtensionInputs {
                dsq: rat(&a.dsq, "dsq")?,
                d: uint(&a.d, "d")?,
                q: q_val,
                q_from_box: from_box,
                dim_d: dm
                    .dim_linear_system
                    .ok_or_else(|| Error::InvalidInput("extension needs dimD in --dims".into()))?,
                h1n: dm
                    .h1_nilpotent
                    .ok_or_else(|| Error::InvalidInput("extension needs h1n in --dims".into()))?,
            };
            let variant: ExtensionVariant = a.variant.as_deref().unwrap_or("plain").parse()?;
            to_value(&criteria::extension_check(
                &inp,
                variant,
                a.acknowledge_asserted,
            )?)
        }
        Gonality => {
            let m = uint(&a.m, "m")?;
            json!({ "m": m, "gonality": criteria::plane_gonality_bound(m)? })
        }
        Frobenius => {
            let p = *need(&a.p, "p")?;
            let m = parse_matrix(need(&a.matrix, "matrix")?)?;
            let s = criteria::frobenius_split(&m, p)?;
            json!({ "p": p, "n": m.len(), "dim_s": s.dim_s, "dim_n": s.dim_n })
        }
    })
}

fn resolution(a: &Args) -> Result<io::LoadedResolution> {
    io::load_resolution(need(&a.resolution, "resolution")?, None)
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<u64>>> {
    text.split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim().parse::<u64>().map_err(|_| {
                        Error::InvalidInput(format!(
                            "--matrix entry `{}` is not a non-negative integer",
                            x.trim()
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

fn lattice_summary(l: &IntersectionLattice) -> Value {
    let (pos, neg, zero) = linalg::inertia(l.matrix());
    let all: Vec<usize> = (0..l.len()).collect();
    json!({
        "name": l.name(),
        "primes": l.primes(),
        "inertia": { "positive": pos, "negative": neg, "zero": zero },
        "negative_definite": crate::lattice::is_negative_definite(l.matrix(), &all),
        "smooth": l.is_smooth(),
        "canonical": l.canonical().is_some(),
        "genus": l.genus().is_some(),
    })
}

fn check_model(a: &Args) -> Result<Value> {
    let mut out = Map::new();
    if a.model.is_some() {
        out.insert("lattice".into(), lattice_summary(lattice(a)?.as_ref()));
    }
    if a.resolution.is_some() {
        let r = resolution(a)?;
        let up = r.model.upstairs();
        out.insert(
            "resolution".into(),
            json!({
                "upstairs": lattice_summary(up),
                "downstairs": io::lattice_to_json(r.model.downstairs()),
                "exceptional": r.model.exceptional().iter().map(|&e| up.primes()[e].clone()).collect::<Vec<_>>(),
                "class": r.class.map(|c| c.to_string()),
                "projection_formula": "ok",
            }),
        );
    }
    if !a.graph.is_empty() {
        let mut gs = Vec::new();
        for g in &a.graph {
            let cfg = io::load_config(g, None)?;
            let graph = dualgraph::build_graph(&cfg)?;
            gs.push(json!({ "components": cfg.components.len(), "singular_points": graph.branch_counts.len() }));
        }
        out.insert("graphs".into(), Value::Array(gs));
    }
    if out.is_empty() {
        return Err(Error::InvalidInput(
            "check-model needs --model, --resolution or --graph".into(),
        ));
    }
    out.insert("valid".into(), Value::Bool(true));
    Ok(Value::Object(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> String {
        let mut v = vec!["divlat"];
        v.extend_from_slice(args);
        let o = run(v);
        assert_eq!(o.code, 0, "stderr: {}", o.stderr);
        o.stdout
    }

    #[test]
    fn bundled_examples() {
        let out = ok(&[
            "connectivity",
            "--model",
            "corpus:l3",
            "--divisor",
            "2C'1+2C'2+2C'3",
            "--format",
            "structured",
        ]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["data"]["chain_connected"], true);
        assert_eq!(v["data"]["m_connected"], false);
        assert_eq!(v["data"]["minimizer"]["product"], "0");
        let out = ok(&[
            "pullback",
            "--resolution",
            "corpus:elliptic",
            "--divisor",
            "C1",
        ]);
        assert!(out.contains("pullback: C'1 + 1/3 C'3"));
        let out = ok(&["mu", "--x", "5", "--d", "5"]);
        assert!(out.contains("mu: 20"));
    }

    #[test]
    fn scenario_and_override() {
        let out = ok(&["--scenario", "corpus:mu"]);
        assert!(out.contains("mu: 20"));
        let out = ok(&["--scenario", "corpus:mu", "--x", "1", "--d", "2"]);
        assert!(out.contains("mu: 9"));
    }

    #[test]
    fn exit_codes() {
        let o = run([
            "divlat",
            "intersect",
            "--model",
            "corpus:l2",
            "--divisor",
            "2X9",
        ]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("error[E_PARSE]: "));
        assert!(o.stderr.contains("unknown prime X9"));
        let o = run([
            "divlat",
            "connectivity",
            "--model",
            "corpus:l3",
            "--divisor",
            "9C'1+9C'2+9C'3",
            "--budget",
            "100",
        ]);
        assert_eq!(o.code, 3);
        assert!(o.stderr.starts_with("error[E_BUDGET]"));
        let o = run(["divlat", "frobenius", "--p", "4", "--matrix", "1"]);
        assert_eq!(o.code, 2);
        let o = run(["divlat", "--bogus"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("error[E_USAGE]"));
        let o = run([
            "divlat",
            "fujita",
            "--m",
            "2",
            "--hsq",
            "1",
            "--dims",
            "dimD=9,h1n=0",
        ]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("verdict: fails"));
    }

    #[test]
    fn dims_and_cluster_parsing() {
        let d = parse_dims("dimD=5, h1n=1,tau=3,frob=true").unwrap();
        assert_eq!(d.excess(), Some(4));
        assert_eq!(d.frobenius_injective, Some(true));
        assert!(parse_dims("dimD=x").is_err());
        assert!(parse_dims("nope=1").is_err());
        let l = io::load_lattice("corpus:l2", None).unwrap();
        let c = parse_cluster("z:C1,C2", &l).unwrap();
        assert_eq!(c.name, "z");
        assert_eq!(c.incidence, vec![true, true]);
        assert!(parse_cluster("C3", &l).is_err());
        assert!(parse_cluster("z:", &l).is_err());
    }
}
