use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connectivity::DecompositionWitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    /// Depends on user-supplied facts the lattice cannot see.
    Asserted,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub label: String,
    pub predicate: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub a: String,
    pub b: String,
    pub product: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&DecompositionWitness> for WitnessRecord {
    fn from(w: &DecompositionWitness) -> Self {
        WitnessRecord {
            a: w.a.to_string(),
            b: w.b.to_string(),
            product: crate::rational::format(&w.product),
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub hypotheses: Vec<Hypothesis>,
    pub verdict: Verdict,
    pub witnesses: Vec<WitnessRecord>,
    pub citations: Vec<String>,
    pub notes: Vec<String>,
    /// Computed quantities such as thresholds, as normalized strings.
    pub values: BTreeMap<String, String>,
    /// The caller accepted the asserted hypotheses as true.
    pub acknowledged: bool,
    pub conclusion: String,
}

impl CriterionReport {
    pub fn new(
        criterion: impl Into<String>,
        citation: impl Into<String>,
        conclusion: impl Into<String>,
    ) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            hypotheses: Vec::new(),
            verdict: Verdict::Inconclusive,
            witnesses: Vec::new(),
            citations: vec![citation.into()],
            notes: Vec::new(),
            values: BTreeMap::new(),
            acknowledged: false,
            conclusion: conclusion.into(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, predicate: impl Into<String>, status: Status) {
        self.hypotheses.push(Hypothesis {
            label: label.into(),
            predicate: predicate.into(),
            status,
        });
    }

    pub fn check(&mut self, label: impl Into<String>, predicate: impl Into<String>, ok: bool) {
        self.push(label, predicate, Status::from_bool(ok));
    }

    pub fn value(&mut self, key: &str, v: impl ToString) {
        self.values.insert(key.to_string(), v.to_string());
    }

    pub fn hypothesis(&self, label: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.label == label)
    }

    pub fn asserted(&self) -> Vec<&Hypothesis> {
        self.hypotheses
            .iter()
            .filter(|h| h.status == Status::Asserted)
            .collect()
    }

    /// Sets the verdict: a failed hypothesis gives `on_failure`, otherwise
    /// the verdict is `holds` only when nothing is asserted or the caller
    /// acknowledged the asserted rows.
    pub fn finish(mut self, on_failure: Verdict, acknowledged: bool) -> Self {
        self.acknowledged = acknowledged;
        let failed = self.hypotheses.iter().any(|h| h.status == Status::Fails);
        let asserted = self.hypotheses.iter().any(|h| h.status == Status::Asserted);
        self.verdict = if failed {
            on_failure
        } else if asserted && !acknowledged {
            self.notes
                .push("asserted hypotheses not acknowledged; verdict downgraded".into());
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        };
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asserted_rows_block_holds_without_acknowledgement() {
        let mut r = CriterionReport::new("t", "c", "x");
        r.check("a", "a", true);
        r.push("b", "b", Status::Asserted);
        assert_eq!(
            r.clone().finish(Verdict::Fails, false).verdict,
            Verdict::Inconclusive
        );
        let acked = r.finish(Verdict::Fails, true);
        assert_eq!(acked.verdict, Verdict::Holds);
        assert!(acked.acknowledged);
    }

    #[test]
    fn failure_wins() {
        let mut r = CriterionReport::new("t", "c", "x");
        r.check("a", "a", false);
        r.push("b", "b", Status::Asserted);
        assert_eq!(r.finish(Verdict::Fails, true).verdict, Verdict::Fails);
    }
}
