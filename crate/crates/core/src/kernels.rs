//! Right-hand sides of the bipolar evolution equations and the matching
//! relations at a dividing point. Everything here is a pure function of its
//! inputs; grid handling lives in the engines.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potentials::PotentialModel;
use crate::units::HBAR;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Field and potential data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalState {
    pub psi_plus: Complex64,
    pub psi_minus: Complex64,
    pub x: f64,
    pub energy: f64,
    pub mass: f64,
    pub v: f64,
    pub v_prime: f64,
    /// Momentum of the trajectories through `x`. Classical scheme: the local
    /// `sqrt(2m(E - V))`; constant-velocity schemes: the region's fixed momentum.
    pub p: f64,
    /// `dp/dx`; only read by the classical kernel.
    pub p_prime: f64,
}

impl LocalState {
    /// Classical-trajectory point data, with `p' = -m V'/p`.
    pub fn classical(
        x: f64,
        psi_plus: Complex64,
        psi_minus: Complex64,
        energy: f64,
        mass: f64,
        v: f64,
        v_prime: f64,
    ) -> Result<Self> {
        let p = crate::potentials::momentum_from(mass, energy, v).ok_or(Error::TurningPoint {
            x,
            energy,
            potential: v,
        })?;
        Ok(Self {
            psi_plus,
            psi_minus,
            x,
            energy,
            mass,
            v,
            v_prime,
            p,
            p_prime: -mass * v_prime / p,
        })
    }

    /// Constant-velocity point data; `p` is the region's trajectory momentum.
    pub fn constant_velocity(
        x: f64,
        psi_plus: Complex64,
        psi_minus: Complex64,
        energy: f64,
        mass: f64,
        v: f64,
        p: f64,
    ) -> Self {
        Self {
            psi_plus,
            psi_minus,
            x,
            energy,
            mass,
            v,
            v_prime: 0.0,
            p,
            p_prime: 0.0,
        }
    }
}

/// Which family of evolution equations a region uses.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum KernelKind {
    Classical,
    ConstantVelocity,
    /// Constant velocity measured from a product asymptote `v_inf`.
    Product {
        v_inf: f64,
    },
}

/// How trajectories of one region move.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum VelocityLaw {
    /// `dx/dt = +-p(x)/m`.
    Classical,
    /// `dx/dt = +-p/m` with a fixed momentum.
    Constant(f64),
}

/// Builds the point data for one region's kernel at `x`, with the potential
/// held at its asymptotic values outside `[x_left, x_right]`.
#[allow(clippy::too_many_arguments)]
pub fn local_state(
    law: VelocityLaw,
    model: &PotentialModel,
    bounds: (f64, f64),
    energy: f64,
    x: f64,
    psi_plus: Complex64,
    psi_minus: Complex64,
) -> Result<LocalState> {
    let (v, vp) = model.clamped(x, bounds.0, bounds.1);
    match law {
        VelocityLaw::Classical => {
            LocalState::classical(x, psi_plus, psi_minus, energy, model.mass, v, vp)
        }
        VelocityLaw::Constant(p) => Ok(LocalState::constant_velocity(
            x, psi_plus, psi_minus, energy, model.mass, v, p,
        )),
    }
}

/// Lagrangian derivatives along classical trajectories:
/// `dPsi+-/dt = [-+p'/2m + i(E - 2V)/hbar] Psi+- +- (p'/2m) Psi-+`.
pub fn classical_rhs(s: &LocalState) -> Result<(Complex64, Complex64)> {
    if !(s.p > 0.0) {
        return Err(Error::TurningPoint {
            x: s.x,
            energy: s.energy,
            potential: s.v,
        });
    }
    let c = s.p_prime / (2.0 * s.mass);
    let phase = I * (s.energy - 2.0 * s.v) / HBAR;
    let plus = (phase - c) * s.psi_plus + c * s.psi_minus;
    let minus = (phase + c) * s.psi_minus - c * s.psi_plus;
    Ok((plus, minus))
}

/// Lagrangian derivatives along constant-velocity trajectories:
/// `dPsi+-/dt = i(E - V)/hbar Psi+- - iV/hbar Psi-+`.
pub fn constant_velocity_rhs(s: &LocalState) -> (Complex64, Complex64) {
    let diag = I * (s.energy - s.v) / HBAR;
    let off = -I * s.v / HBAR;
    (
        diag * s.psi_plus + off * s.psi_minus,
        diag * s.psi_minus + off * s.psi_plus,
    )
}

/// Product-side constant-velocity derivatives, with the coupling measured
/// from the asymptote `v_inf = V(+inf)`.
pub fn product_region_rhs(s: &LocalState, v_inf: f64) -> Result<(Complex64, Complex64)> {
    if s.energy <= v_inf {
        return Err(Error::EnergyBelowThreshold {
            energy: s.energy,
            threshold: v_inf,
        });
    }
    let diag = I * (s.energy - s.v - v_inf) / HBAR;
    let off = -I * (s.v - v_inf) / HBAR;
    Ok((
        diag * s.psi_plus + off * s.psi_minus,
        diag * s.psi_minus + off * s.psi_plus,
    ))
}

/// Lagrangian derivative for any kernel family.
pub fn lagrangian_rhs(s: &LocalState, kind: KernelKind) -> Result<(Complex64, Complex64)> {
    match kind {
        KernelKind::Classical => classical_rhs(s),
        KernelKind::ConstantVelocity => Ok(constant_velocity_rhs(s)),
        KernelKind::Product { v_inf } => product_region_rhs(s, v_inf),
    }
}

/// Partial (fixed-point) time derivatives: the Lagrangian right-hand side plus
/// the advection terms `-+(p/m) dPsi+-/dx`.
pub fn eulerian_rhs(
    s: &LocalState,
    dpsi_plus_dx: Complex64,
    dpsi_minus_dx: Complex64,
    kind: KernelKind,
) -> Result<(Complex64, Complex64)> {
    let (plus, minus) = lagrangian_rhs(s, kind)?;
    let v = s.p / s.mass;
    Ok((plus - v * dpsi_plus_dx, minus + v * dpsi_minus_dx))
}

/// Known values on each side of a dividing point `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatchInput {
    pub p_left: f64,
    pub p_right: f64,
    /// Incident from the left, `Psi_L+(x0)`.
    pub psi_left_plus: Complex64,
    /// Incident from the right, `Psi_R-(x0)`.
    pub psi_right_minus: Complex64,
}

/// Solves continuity of `Psi` and `Psi'` at the dividing point for the two
/// outgoing values, returning `(Psi_R+(x0), Psi_L-(x0))`.
pub fn step_match(m: &StepMatchInput) -> (Complex64, Complex64) {
    let (pl, pr) = (m.p_left, m.p_right);
    let sum = pl + pr;
    let r = (pr - pl) / sum;
    let right_plus = (2.0 * pl / sum) * m.psi_left_plus + r * m.psi_right_minus;
    let left_minus = (2.0 * pr / sum) * m.psi_right_minus - r * m.psi_left_plus;
    (right_plus, left_minus)
}

/// Re-expresses a bipolar pair built on momentum `p_from` in the pair built on
/// `p_to` at the same point, keeping `Psi+ + Psi-` and `p (Psi+ - Psi-)` fixed.
pub fn change_representation(
    p_from: f64,
    p_to: f64,
    psi_plus: Complex64,
    psi_minus: Complex64,
) -> (Complex64, Complex64) {
    let total = psi_plus + psi_minus;
    let flux = (psi_plus - psi_minus) * (p_from / p_to);
    (0.5 * (total + flux), 0.5 * (total - flux))
}
