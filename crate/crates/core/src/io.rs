//! JSON documents: lattices, resolutions and curve configurations.
//!
//! Rationals are written as JSON integers or strings such as `"-2/3"`.
//! A reference to another document is either a file path, resolved
//! against the directory of the referring file, or `corpus:NAME` for a
//! bundled fixture.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus;
use crate::dualgraph::CurveConfigInput;
use crate::error::{Error, Result};
use crate::lattice::{IntersectionLattice, LatticeParts, SingClass};
use crate::rational::Q;
use crate::resolution::ResolutionModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub name: String,
    pub primes: Vec<String>,
    pub matrix: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<Vec<Q>>,
    #[serde(default)]
    pub smooth: bool,
}

impl LatticeDoc {
    pub fn build(self) -> Result<Arc<IntersectionLattice>> {
        let unwrap = |v: Vec<Q>| v.into_iter().map(|q| q.0).collect::<Vec<_>>();
        IntersectionLattice::from_parts(LatticeParts {
            name: self.name,
            primes: self.primes,
            matrix: self.matrix.into_iter().map(unwrap).collect(),
            canonical: self.canonical.map(unwrap),
            genus: self.genus.map(unwrap),
            smooth: self.smooth,
        })
    }

    pub fn from_lattice(l: &IntersectionLattice) -> Self {
        let wrap = |v: &[crate::Rational]| v.iter().cloned().map(Q).collect::<Vec<_>>();
        LatticeDoc {
            name: l.name().to_string(),
            primes: l.primes().to_vec(),
            matrix: l.matrix().iter().map(|r| wrap(r)).collect(),
            canonical: l.canonical().map(wrap),
            genus: l.genus().map(wrap),
            smooth: l.is_smooth(),
        }
    }
}

/// A lattice given inline or by reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Path(String),
    Inline(LatticeDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDoc {
    pub upstairs: LatticeRef,
    /// Omitted: the downstairs matrix is derived by the projection formula.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub downstairs: Option<LatticeRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub downstairs_name: Option<String>,
    pub exceptional: Vec<String>,
    /// Pairs `[downstairs prime, upstairs proper transform]`.
    #[serde(default)]
    pub transform: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<SingClass>,
}

#[derive(Debug, Clone)]
pub struct LoadedResolution {
    pub model: ResolutionModel,
    pub class: Option<SingClass>,
}

/// Reads a referenced document; returns its text and the directory that
/// relative references inside it resolve against.
pub fn read_ref(reference: &str, base: Option<&Path>) -> Result<(String, Option<PathBuf>)> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        let text = corpus::get(name)
            .ok_or_else(|| Error::InvalidInput(format!("no bundled fixture named `{name}`")))?;
        return Ok((text.to_string(), None));
    }
    let path = match base {
        Some(b) if Path::new(reference).is_relative() => b.join(reference),
        _ => PathBuf::from(reference),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok((text, path.parent().map(Path::to_path_buf)))
}

fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, what: &str, reference: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("{what} `{reference}`: {e}")))
}

pub fn lattice_from_json(text: &str) -> Result<Arc<IntersectionLattice>> {
    parse_doc::<LatticeDoc>(text, "lattice", "<inline>")?.build()
}

pub fn lattice_to_json(l: &IntersectionLattice) -> Value {
    serde_json::to_value(LatticeDoc::from_lattice(l)).expect("serializable")
}

pub fn load_lattice(reference: &str, base: Option<&Path>) -> Result<Arc<IntersectionLattice>> {
    let (text, _) = read_ref(reference, base)?;
    parse_doc::<LatticeDoc>(&text, "lattice", reference)?.build()
}

fn resolve_lattice(r: LatticeRef, base: Option<&Path>) -> Result<Arc<IntersectionLattice>> {
    match r {
        LatticeRef::Path(p) => load_lattice(&p, base),
        LatticeRef::Inline(doc) => doc.build(),
    }
}

fn index(l: &IntersectionLattice, name: &str) -> Result<usize> {
    l.index_of(name)
        .ok_or_else(|| Error::Model(format!("lattice `{}` has no prime `{name}`", l.name())))
}

pub fn resolution_from_doc(doc: ResolutionDoc, base: Option<&Path>) -> Result<LoadedResolution> {
    let up = resolve_lattice(doc.upstairs, base)?;
    let exceptional = doc
        .exceptional
        .iter()
        .map(|n| index(&up, n))
        .collect::<Result<Vec<_>>>()?;
    let model = match doc.downstairs {
        Some(r) => {
            let down = resolve_lattice(r, base)?;
            let mut transform = vec![usize::MAX; down.len()];
            for (d, u) in &doc.transform {
                let j = index(&down, d)?;
                transform[j] = index(&up, u)?;
            }
            if let Some(j) = transform.iter().position(|&t| t == usize::MAX) {
                return Err(Error::Model(format!(
                    "downstairs prime `{}` has no proper transform",
                    down.primes()[j]
                )));
            }
            ResolutionModel::new(up, down, exceptional, transform)?
        }
        None => {
            let transform = doc
                .transform
                .iter()
                .map(|(d, u)| Ok((d.clone(), index(&up, u)?)))
                .collect::<Result<Vec<_>>>()?;
            let name = doc
                .downstairs_name
                .unwrap_or_else(|| format!("{}-contracted", up.name()));
            ResolutionModel::with_derived_downstairs(up, name, exceptional, transform)?
        }
    };
    Ok(LoadedResolution {
        model,
        class: doc.class,
    })
}

pub fn load_resolution(reference: &str, base: Option<&Path>) -> Result<LoadedResolution> {
    let (text, dir) = read_ref(reference, base)?;
    let doc: ResolutionDoc = parse_doc(&text, "resolution", reference)?;
    resolution_from_doc(doc, dir.as_deref())
}

pub fn load_config(reference: &str, base: Option<&Path>) -> Result<CurveConfigInput> {
    let (text, _) = read_ref(reference, base)?;
    parse_doc(&text, "curve configuration", reference)
}
