use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::WitnessRef;
use crate::linalg::Matrix;
use crate::series::{compose_subordination, DiskFunction, HarmonicSeries, HoloSeries, SubordinationWitness};

/// Analytic bound on the coefficients past the truncation order, used to
/// penalize the left-hand side of every majorant check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailBound {
    /// The series is exact (a polynomial, or a finite sequence).
    None,
    /// `||C_n|| <= scale * ratio^n`.
    Geometric { scale: f64, ratio: f64 },
    /// `||C_n|| <= scale * n`.
    Linear { scale: f64 },
    /// `||C_n|| <= exp(k (1 + rho)/(1 - rho)) rho^{-n}` for every `rho < 1` (Cauchy estimate).
    Exterior { k: f64 },
}

impl TailBound {
    /// Upper bound for `sum_{n > order} ||C_n|| r^n`.
    pub fn tail(&self, r: f64, order: usize) -> f64 {
        let n1 = (order + 1) as f64;
        match *self {
            TailBound::None => 0.0,
            TailBound::Geometric { scale, ratio } => {
                let q = ratio * r;
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    scale * q.powf(n1) / (1.0 - q)
                }
            }
            TailBound::Linear { scale } => {
                if r >= 1.0 {
                    f64::INFINITY
                } else {
                    scale * r.powf(n1) * (n1 - (n1 - 1.0) * r) / ((1.0 - r) * (1.0 - r))
                }
            }
            TailBound::Exterior { k } => {
                if r == 0.0 {
                    return 0.0;
                }
                (1..200)
                    .map(|i| r + (1.0 - r) * i as f64 / 200.0)
                    .map(|rho| {
                        let q = r / rho;
                        (k * (1.0 + rho) / (1.0 - rho) + n1 * q.ln() - (1.0 - q).ln()).exp()
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// A closed-form evaluator shared between threads.
pub type SharedDiskFunction = Arc<dyn DiskFunction + Send + Sync>;

/// Exterior-valued series with the data the majorant bounds need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExteriorInstance {
    pub series: HoloSeries,
    pub tail: TailBound,
    /// `f(z)` is normal for every `z` (routes the spherical-distance check).
    pub normal: bool,
    /// `||log A_0||`, i.e. half the squared norm of the colligation map.
    pub log_norm: f64,
}

/// `g = f o phi` together with the pieces the subordination checks use.
#[derive(Clone)]
pub struct SubordinateInstance {
    pub f: HoloSeries,
    pub witness: SubordinationWitness,
    pub g: HoloSeries,
    pub g_tail: TailBound,
    /// Closed form of `f` for boundary liminf estimates.
    pub boundary: Option<SharedDiskFunction>,
}

impl SubordinateInstance {
    pub fn new(f: HoloSeries, witness: SubordinationWitness, g_tail: TailBound) -> Self {
        let g = compose_subordination(&f, &witness, f.order());
        Self { f, witness, g, g_tail, boundary: None }
    }

    pub fn with_boundary(mut self, boundary: SharedDiskFunction) -> Self {
        self.boundary = Some(boundary);
        self
    }
}

impl fmt::Debug for SubordinateInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubordinateInstance")
            .field("f", &self.f)
            .field("witness", &self.witness)
            .field("g_tail", &self.g_tail)
            .field("boundary", &self.boundary.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum InstanceData {
    /// Harmonic function with `||f|| <= 1`.
    Harmonic { series: HarmonicSeries, tail: TailBound },
    /// Holomorphic function with `||f|| <= 1`.
    Holo { series: HoloSeries, tail: TailBound },
    /// Finite coefficient sequence `H_0..H_L`.
    Sequence(Vec<Matrix>),
    Exterior(ExteriorInstance),
    Subordinate(SubordinateInstance),
    /// Ordered triples `(alpha, beta, gamma)` with `0 <= gamma <= alpha <= beta`.
    Triples(Vec<[f64; 3]>),
}

impl InstanceData {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceData::Harmonic { .. } => "harmonic",
            InstanceData::Holo { .. } => "holomorphic",
            InstanceData::Sequence(_) => "sequence",
            InstanceData::Exterior(_) => "exterior",
            InstanceData::Subordinate(_) => "subordinate",
            InstanceData::Triples(_) => "triples",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub witness: WitnessRef,
    pub data: InstanceData,
}

impl Instance {
    pub fn new(witness: WitnessRef, data: InstanceData) -> Self {
        Self { witness, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tails() {
        assert_eq!(TailBound::None.tail(0.5, 3), 0.0);
        let g = TailBound::Geometric { scale: 1.0, ratio: 0.5 };
        // sum_{n >= 4} 0.25^n = 0.25^4 / 0.75
        assert!((g.tail(0.5, 3) - 0.25f64.powi(4) / 0.75).abs() < 1e-16);
        let l = TailBound::Linear { scale: 1.0 };
        let brute: f64 = (4..2000).map(|n| n as f64 * 0.3f64.powi(n)).sum();
        assert!((l.tail(0.3, 3) - brute).abs() < 1e-15);
        let e = TailBound::Exterior { k: 1.0 };
        assert!(e.tail(1.0 / 3.0, 64) < 1e-15);
        assert!(e.tail(1.0 / 3.0, 4) > e.tail(1.0 / 3.0, 8));
    }
}
