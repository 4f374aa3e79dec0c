//! Benchmark barrier potentials in hartree atomic units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `V0 sech^2(alpha x)`.
    Eckart { v0: f64, alpha: f64 },
    /// Rectangular barrier of height `v0` on `[x1, x2)`.
    SquareBarrier { v0: f64, x1: f64, x2: f64 },
    /// `V0/2 [1 + tanh(x / 2 alpha)]`.
    UphillRamp { v0: f64, alpha: f64 },
    /// `V0 {exp[-beta (x - c)^2] + exp[-beta (x + c)^2]}`.
    DoubleGaussian { v0: f64, beta: f64, center: f64 },
    /// Piecewise-constant: `values[k]` on `[edges[k-1], edges[k])`, so
    /// `values.len() == edges.len() + 1`.
    CustomPiecewise { edges: Vec<f64>, values: Vec<f64> },
}

/// A 1D potential together with the particle mass. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub kind: PotentialKind,
    pub mass: f64,
}

impl PotentialModel {
    pub fn new(kind: PotentialKind, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Config(format!("mass must be positive, got {mass}")));
        }
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        match &kind {
            PotentialKind::Eckart { v0, alpha } | PotentialKind::UphillRamp { v0, alpha } => {
                if *v0 < 0.0 {
                    return bad("v0 must be >= 0");
                }
                if !(*alpha > 0.0) {
                    return bad("alpha must be > 0");
                }
            }
            PotentialKind::SquareBarrier { v0, x1, x2 } => {
                if *v0 < 0.0 {
                    return bad("v0 must be >= 0");
                }
                if !(x1 < x2) {
                    return bad("square barrier needs x1 < x2");
                }
            }
            PotentialKind::DoubleGaussian { v0, beta, .. } => {
                if *v0 < 0.0 {
                    return bad("v0 must be >= 0");
                }
                if !(*beta > 0.0) {
                    return bad("beta must be > 0");
                }
            }
            PotentialKind::CustomPiecewise { edges, values } => {
                if values.len() != edges.len() + 1 {
                    return bad("custom_piecewise needs values.len() == edges.len() + 1");
                }
                if edges.windows(2).any(|w| !(w[0] < w[1])) {
                    return bad("custom_piecewise edges must be strictly increasing");
                }
                if values.first().copied().unwrap_or(0.0) != 0.0 {
                    return bad("custom_piecewise must start from V = 0 on the left");
                }
            }
        }
        Ok(Self { kind, mass })
    }

    pub fn eckart(v0: f64, alpha: f64, mass: f64) -> Result<Self> {
        Self::new(PotentialKind::Eckart { v0, alpha }, mass)
    }

    pub fn square_barrier(v0: f64, x1: f64, x2: f64, mass: f64) -> Result<Self> {
        Self::new(PotentialKind::SquareBarrier { v0, x1, x2 }, mass)
    }

    pub fn uphill_ramp(v0: f64, alpha: f64, mass: f64) -> Result<Self> {
        Self::new(PotentialKind::UphillRamp { v0, alpha }, mass)
    }

    pub fn double_gaussian(v0: f64, beta: f64, center: f64, mass: f64) -> Result<Self> {
        Self::new(PotentialKind::DoubleGaussian { v0, beta, center }, mass)
    }

    /// V identically zero.
    pub fn free(mass: f64) -> Result<Self> {
        Self::new(
            PotentialKind::CustomPiecewise {
                edges: vec![],
                values: vec![0.0],
            },
            mass,
        )
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Eckart { v0, alpha } => {
                let s = 1.0 / (alpha * x).cosh();
                v0 * s * s
            }
            PotentialKind::SquareBarrier { v0, x1, x2 } => {
                if x >= *x1 && x < *x2 {
                    *v0
                } else {
                    0.0
                }
            }
            PotentialKind::UphillRamp { v0, alpha } => {
                0.5 * v0 * (1.0 + (x / (2.0 * alpha)).tanh())
            }
            PotentialKind::DoubleGaussian { v0, beta, center } => {
                v0 * ((-beta * (x - center).powi(2)).exp() + (-beta * (x + center).powi(2)).exp())
            }
            PotentialKind::CustomPiecewise { edges, values } => {
                values[edges.partition_point(|&e| e <= x)]
            }
        }
    }

    /// Analytic dV/dx; zero at declared discontinuities.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Eckart { v0, alpha } => {
                let s = 1.0 / (alpha * x).cosh();
                -2.0 * alpha * v0 * s * s * (alpha * x).tanh()
            }
            PotentialKind::UphillRamp { v0, alpha } => {
                let s = 1.0 / (x / (2.0 * alpha)).cosh();
                v0 * s * s / (4.0 * alpha)
            }
            PotentialKind::DoubleGaussian { v0, beta, center } => {
                let a = x - center;
                let b = x + center;
                -2.0 * beta * v0 * (a * (-beta * a * a).exp() + b * (-beta * b * b).exp())
            }
            PotentialKind::SquareBarrier { .. } | PotentialKind::CustomPiecewise { .. } => 0.0,
        }
    }

    /// `(V(-inf), V(+inf))`.
    pub fn asymptotes(&self) -> (f64, f64) {
        match &self.kind {
            PotentialKind::UphillRamp { v0, .. } => (0.0, *v0),
            PotentialKind::CustomPiecewise { values, .. } => (values[0], values[values.len() - 1]),
            _ => (0.0, 0.0),
        }
    }

    pub fn discontinuities(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::SquareBarrier { x1, x2, .. } => vec![*x1, *x2],
            PotentialKind::CustomPiecewise { edges, values } => edges
                .iter()
                .zip(values.windows(2))
                .filter(|(_, w)| w[0] != w[1])
                .map(|(e, _)| *e)
                .collect(),
            _ => vec![],
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.discontinuities().is_empty()
    }

    pub fn is_asymptotically_symmetric(&self) -> bool {
        let (l, r) = self.asymptotes();
        l == r
    }

    /// `(V, V')` inside `[a, b]`; outside, the asymptotic value and zero slope.
    pub fn clamped(&self, x: f64, a: f64, b: f64) -> (f64, f64) {
        if x < a {
            (self.asymptotes().0, 0.0)
        } else if x > b {
            (self.asymptotes().1, 0.0)
        } else {
            (self.value(x), self.derivative(x))
        }
    }

    /// `p(x) = sqrt(2m(E - V(x)))`.
    pub fn classical_momentum(&self, x: f64, energy: f64) -> Result<f64> {
        momentum_from(self.mass, energy, self.value(x)).ok_or(Error::TurningPoint {
            x,
            energy,
            potential: self.value(x),
        })
    }

    /// Interval outside which V sits within `tol` (absolute, hartree) of its
    /// asymptotes.
    pub fn support(&self, tol: f64) -> (f64, f64) {
        let tol = tol.max(f64::MIN_POSITIVE);
        match &self.kind {
            PotentialKind::Eckart { v0, alpha } => {
                if *v0 <= tol {
                    return (0.0, 0.0);
                }
                let r = (v0 / tol).sqrt().acosh() / alpha;
                (-r, r)
            }
            PotentialKind::UphillRamp { v0, alpha } => {
                if *v0 <= tol {
                    return (0.0, 0.0);
                }
                let r = alpha * (v0 / tol).ln();
                (-r, r)
            }
            PotentialKind::DoubleGaussian { v0, beta, center } => {
                if *v0 <= tol {
                    return (0.0, 0.0);
                }
                let r = center.abs() + ((2.0 * v0 / tol).ln() / beta).sqrt();
                (-r, r)
            }
            PotentialKind::SquareBarrier { x1, x2, .. } => (*x1, *x2),
            PotentialKind::CustomPiecewise { edges, .. } => match (edges.first(), edges.last()) {
                (Some(a), Some(b)) => (*a, *b),
                _ => (0.0, 0.0),
            },
        }
    }

    /// Largest V on `[a, b]`.
    pub fn max_on(&self, a: f64, b: f64) -> f64 {
        let mut best = self.value(a).max(self.value(b));
        let mut candidates: Vec<f64> = match &self.kind {
            PotentialKind::Eckart { .. } => vec![0.0],
            PotentialKind::DoubleGaussian { center, .. } => vec![-center, 0.0, *center],
            _ => vec![],
        };
        candidates.extend(self.discontinuities());
        for c in candidates {
            if c >= a && c <= b {
                best = best.max(self.value(c));
            }
        }
        if let PotentialKind::CustomPiecewise { edges, values } = &self.kind {
            for (k, v) in values.iter().enumerate() {
                let lo = if k == 0 {
                    f64::NEG_INFINITY
                } else {
                    edges[k - 1]
                };
                let hi = if k == edges.len() {
                    f64::INFINITY
                } else {
                    edges[k]
                };
                if hi > a && lo <= b {
                    best = best.max(*v);
                }
            }
        }
        // Dense scan catches any remaining interior maximum of a smooth shape.
        let n = 4000;
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            best = best.max(self.value(x));
        }
        best
    }
}

/// `sqrt(2 m (E - V))`, or `None` when `E <= V`.
pub fn momentum_from(mass: f64, energy: f64, potential: f64) -> Option<f64> {
    let ke = energy - potential;
    if ke > 0.0 {
        Some((2.0 * mass * ke).sqrt())
    } else {
        None
    }
}
