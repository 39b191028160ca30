use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LiminfGrid;
use crate::error::Error;
use crate::linalg::ToleranceProfile;

/// The inequalities the checkers know about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    L1,
    T1i,
    T1ii,
    T1iii,
    E55,
    T2,
    E17,
    T3a,
    T3b,
    L2a,
    L2b,
    T4a,
    T4b,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::L1,
        TheoremId::T1i,
        TheoremId::T1ii,
        TheoremId::T1iii,
        TheoremId::E55,
        TheoremId::T2,
        TheoremId::E17,
        TheoremId::T3a,
        TheoremId::T3b,
        TheoremId::L2a,
        TheoremId::L2b,
        TheoremId::T4a,
        TheoremId::T4b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::L1 => "l1",
            TheoremId::T1i => "t1i",
            TheoremId::T1ii => "t1ii",
            TheoremId::T1iii => "t1iii",
            TheoremId::E55 => "e55",
            TheoremId::T2 => "t2",
            TheoremId::E17 => "e17",
            TheoremId::T3a => "t3a",
            TheoremId::T3b => "t3b",
            TheoremId::L2a => "l2a",
            TheoremId::L2b => "l2b",
            TheoremId::T4a => "t4a",
            TheoremId::T4b => "t4b",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem id '{s}'")))
    }
}

/// Reference to the instance a report was computed on.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WitnessRef {
    pub family: String,
    pub seed: Option<u64>,
    pub dim: usize,
    pub order: usize,
    pub note: Option<String>,
}

impl WitnessRef {
    pub fn planted(family: &str, dim: usize, order: usize) -> Self {
        Self { family: family.into(), seed: None, dim, order, note: None }
    }
}

/// Outcome of one check. `passed` iff `margin >= -psd_tol * scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub r: f64,
    pub mu: Option<f64>,
    pub passed: bool,
    pub margin: f64,
    pub scale: f64,
    pub witness: WitnessRef,
    pub side_values: BTreeMap<String, f64>,
}

impl TheoremReport {
    pub fn normalized_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckOptions {
    pub tol: ToleranceProfile,
    /// Allow radii beyond the stated one (diagnostics only).
    pub force: bool,
    /// Use the improved bounds for normal rotated coefficients.
    pub normal_variant: bool,
    /// Starting index `k` of the Cauchy-Schwarz majorant check.
    pub lemma_k: usize,
    pub liminf_grid: LiminfGrid,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert!("t5".parse::<TheoremId>().is_err());
    }
}
