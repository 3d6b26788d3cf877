//! Evaluators for numerical criteria on adjoint linear systems. Facts the
//! lattice cannot see (dimensions of linear systems, cohomology, the
//! Cartier property) are taken from the caller and marked in each report.

mod frobenius;
mod invariants;
mod reider;
mod report;
mod thresholds;

pub use frobenius::{frobenius_split, FrobeniusSplit};
pub use invariants::{
    delta_prime, mu, plane_gonality_bound, q_min, CohomologyInputs, DeltaPrime, QMin,
};
pub use reider::{mode_one_obstructions, reider_obstructions, ReiderMode, ReiderParams};
pub use report::{CriterionReport, Hypothesis, Status, Verdict, WitnessRecord};
pub use thresholds::{
    bpf_check, extension_check, extension_threshold, fujita_check, pluri_check, very_ample_check,
    ExtensionInputs, ExtensionVariant, FujitaReport, PointData,
};
