use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::modp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusSplit {
    /// Dimension of the stable image (semi-simple part).
    pub dim_s: usize,
    /// Dimension of the stable kernel (nilpotent part).
    pub dim_n: usize,
}

/// Splits `F_p^n` under a linear map `M` into the stable image and stable
/// kernel by taking rank and nullity of `M^n`. Entries are reduced mod `p`.
pub fn frobenius_split(m: &[Vec<u64>], p: u64) -> Result<FrobeniusSplit> {
    if !modp::is_prime(p) {
        return Err(Error::Unsupported(format!(
            "only prime fields F_p are supported, got order {p}"
        )));
    }
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput(
            "Frobenius matrix must be square".into(),
        ));
    }
    let reduced: modp::MatP = m
        .iter()
        .map(|row| row.iter().map(|x| x % p).collect())
        .collect();
    let power = modp::pow(&reduced, n as u64, p);
    let dim_s = modp::rank(&power, p);
    Ok(FrobeniusSplit {
        dim_s,
        dim_n: n - dim_s,
    })
}
