//! Independent stationary-state references: closed forms for the Eckart,
//! rectangular and smooth-step barriers, a piecewise-constant transfer-matrix
//! solver for anything else, and WKB components.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potentials::{momentum_from, PotentialKind, PotentialModel};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Reflection and transmission probabilities.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Probabilities {
    pub reflection: f64,
    pub transmission: f64,
}

impl Probabilities {
    pub fn new(reflection: f64, transmission: f64) -> Self {
        Self {
            reflection,
            transmission,
        }
    }
}

/// `sinh(a)/sinh(b)` for `0 <= a <= b`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    if b < 20.0 {
        a.sinh() / b.sinh()
    } else {
        (a - b).exp() * (1.0 - (-2.0 * a).exp()) / (1.0 - (-2.0 * b).exp())
    }
}

/// Transmission through `V0 sech^2(alpha x)` for a particle of mass `m`.
pub fn eckart_transmission(v0: f64, alpha: f64, m: f64, energy: f64) -> f64 {
    if v0 == 0.0 {
        return 1.0;
    }
    let k = (2.0 * m * energy).sqrt();
    let a = PI * k / alpha;
    let d = 8.0 * m * v0 / (alpha * alpha);
    let barrier = if d >= 1.0 {
        (0.5 * PI * (d - 1.0).sqrt()).cosh().powi(2)
    } else {
        (0.5 * PI * (1.0 - d).sqrt()).cos().powi(2)
    };
    if a > 350.0 {
        return 1.0 / (1.0 + barrier * 4.0 * (-2.0 * a).exp());
    }
    let s = a.sinh().powi(2);
    s / (s + barrier)
}

/// Rectangular barrier of height `v0` on `[x1, x2]`.
pub fn square_barrier_probabilities(
    v0: f64,
    x1: f64,
    x2: f64,
    m: f64,
    energy: f64,
) -> Probabilities {
    if v0 == 0.0 {
        return Probabilities::new(0.0, 1.0);
    }
    let a = x2 - x1;
    let x = if energy > v0 {
        let q = (2.0 * m * (energy - v0)).sqrt();
        v0 * v0 * (q * a).sin().powi(2) / (4.0 * energy * (energy - v0))
    } else if energy < v0 {
        let kappa = (2.0 * m * (v0 - energy)).sqrt();
        v0 * v0 * (kappa * a).sinh().powi(2) / (4.0 * energy * (v0 - energy))
    } else {
        m * v0 * a * a / 2.0
    };
    let t = 1.0 / (1.0 + x);
    Probabilities::new(x * t, t)
}

/// Smooth step `V0 / (1 + exp(-x / alpha))`.
pub fn ramp_probabilities(v0: f64, alpha: f64, m: f64, energy: f64) -> Probabilities {
    if v0 == 0.0 {
        return Probabilities::new(0.0, 1.0);
    }
    if energy <= v0 {
        return Probabilities::new(1.0, 0.0);
    }
    let k1 = (2.0 * m * energy).sqrt();
    let k2 = (2.0 * m * (energy - v0)).sqrt();
    let r = sinh_ratio(PI * alpha * (k1 - k2), PI * alpha * (k1 + k2)).powi(2);
    let b = PI * alpha * (k1 + k2);
    let t = if b < 20.0 {
        (2.0 * PI * alpha * k1).sinh() * (2.0 * PI * alpha * k2).sinh() / b.sinh().powi(2)
    } else {
        let e = |z: f64| 1.0 - (-2.0 * z).exp();
        let (u, w) = (2.0 * PI * alpha * k1, 2.0 * PI * alpha * k2);
        e(u) * e(w) / e(b).powi(2)
    };
    Probabilities::new(r, t)
}

/// Sharp-step probabilities for momenta `pl`, `pr`.
pub fn step_probabilities(pl: f64, pr: f64) -> Probabilities {
    let s = pl + pr;
    Probabilities::new(((pl - pr) / s).powi(2), 4.0 * pl * pr / (s * s))
}

/// Stationary solution from the transfer-matrix construction.
#[derive(Debug, Clone)]
pub struct TransferSolution {
    pub energy: f64,
    pub mass: f64,
    pub probabilities: Probabilities,
    /// Slab boundaries.
    pub x: Vec<f64>,
    /// `Psi` at the boundaries, normalised to unit incident amplitude.
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
    /// Constant potential used in each slab.
    pub slab_v: Vec<f64>,
    pub k_left: f64,
    pub k_right: f64,
}

/// `(C, S, k^2 S)` such that going a distance `d` to the left in a slab with
/// local `k^2 = 2m(E - V)`: `psi <- C psi - S psi'`, `psi' <- k^2 S psi + C psi'`.
fn slab_coefficients(k2: f64, d: f64) -> (f64, f64, f64) {
    let z = k2 * d * d;
    let (c, s) = if z.abs() < 1e-6 {
        (
            1.0 - z / 2.0 + z * z / 24.0,
            d * (1.0 - z / 6.0 + z * z / 120.0),
        )
    } else if k2 > 0.0 {
        let k = k2.sqrt();
        ((k * d).cos(), (k * d).sin() / k)
    } else {
        let q = (-k2).sqrt();
        ((q * d).cosh(), (q * d).sinh() / q)
    };
    (c, s, k2 * s)
}

impl TransferSolution {
    /// `Psi(x)` from the slab containing `x`; outside the slab range the
    /// asymptotic plane waves are used.
    pub fn psi_at(&self, x: f64) -> Complex64 {
        let n = self.x.len();
        if x >= self.x[n - 1] {
            let t = self.psi[n - 1];
            return t * (I * self.k_right * (x - self.x[n - 1])).exp();
        }
        if x <= self.x[0] {
            let (a, b) = self.left_amplitudes();
            let kx = self.k_left * (x - self.x[0]);
            return a * (I * kx).exp() + b * (-I * kx).exp();
        }
        let j = self.x.partition_point(|&b| b <= x).min(n - 1);
        let d = self.x[j] - x;
        let k2 = 2.0 * self.mass * (self.energy - self.slab_v[j - 1]);
        let (c, s, _) = slab_coefficients(k2, d);
        c * self.psi[j] - s * self.dpsi[j]
    }

    /// Incident and reflected amplitudes at the left edge `x[0]`.
    fn left_amplitudes(&self) -> (Complex64, Complex64) {
        let u = self.dpsi[0] / (I * self.k_left);
        (0.5 * (self.psi[0] + u), 0.5 * (self.psi[0] - u))
    }
}

/// Transfer-matrix solve of `V` restricted to `[a, b]` (asymptotic values
/// outside), midpoint-sampled on slabs of width at most `step_dx`. Slabs never
/// straddle a declared discontinuity.
pub fn transfer_matrix_on(
    model: &PotentialModel,
    energy: f64,
    a: f64,
    b: f64,
    step_dx: f64,
) -> Result<TransferSolution> {
    let m = model.mass;
    let (vl, vr) = model.asymptotes();
    let k_left = momentum_from(m, energy, vl).ok_or(Error::NoOpenChannel {
        energy,
        asymptote: vl,
    })?;
    let k_right = momentum_from(m, energy, vr).ok_or(Error::NoOpenChannel {
        energy,
        asymptote: vr,
    })?;
    if !(step_dx > 0.0) || !(b >= a) {
        return Err(Error::Config(
            "transfer matrix needs step_dx > 0 and a <= b".into(),
        ));
    }

    let mut breaks = vec![a];
    breaks.extend(
        model
            .discontinuities()
            .into_iter()
            .filter(|&d| d > a && d < b),
    );
    breaks.push(b);
    let mut x = vec![a];
    let mut slab_v = Vec::new();
    for w in breaks.windows(2) {
        let n = ((w[1] - w[0]) / step_dx).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let lo = w[0] + h * i as f64;
            slab_v.push(model.value(lo + 0.5 * h));
            x.push(if i + 1 == n { w[1] } else { lo + h });
        }
    }
    if a == b {
        slab_v.clear();
    }

    let n = x.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    let mut dpsi = vec![Complex64::new(0.0, 0.0); n];
    psi[n - 1] = Complex64::new(1.0, 0.0);
    dpsi[n - 1] = I * k_right;
    for j in (0..n - 1).rev() {
        let d = x[j + 1] - x[j];
        let (c, s, k2s) = slab_coefficients(2.0 * m * (energy - slab_v[j]), d);
        psi[j] = c * psi[j + 1] - s * dpsi[j + 1];
        dpsi[j] = k2s * psi[j + 1] + c * dpsi[j + 1];
    }

    let mut sol = TransferSolution {
        energy,
        mass: m,
        probabilities: Probabilities::new(0.0, 0.0),
        x,
        psi,
        dpsi,
        slab_v,
        k_left,
        k_right,
    };
    let (inc, refl) = sol.left_amplitudes();
    // move the incident wave phase reference to x = 0
    let norm = inc * (-I * k_left * a).exp();
    for v in sol.psi.iter_mut().chain(sol.dpsi.iter_mut()) {
        *v /= norm;
    }
    let inc2 = inc.norm_sqr();
    sol.probabilities = Probabilities::new(refl.norm_sqr() / inc2, k_right / k_left / inc2);
    Ok(sol)
}

/// Transfer-matrix solve over the potential's numerical support, widened to
/// include `[-3, 3]`.
pub fn transfer_matrix_solve(
    model: &PotentialModel,
    energy: f64,
    step_dx: f64,
) -> Result<TransferSolution> {
    let (a, b) = oracle_range(model);
    transfer_matrix_on(model, energy, a, b, step_dx)
}

fn oracle_range(model: &PotentialModel) -> (f64, f64) {
    let (a, b) = model.support(1e-14);
    (a.min(-3.0), b.max(3.0))
}

/// Ground truth from step halving plus Richardson extrapolation.
#[derive(Debug, Clone)]
pub struct ConvergedTransfer {
    pub probabilities: Probabilities,
    /// Change in `(R, T)` between the last two step sizes, before extrapolation.
    pub last_change: f64,
    pub step_dx: f64,
    /// Finest-step solution, for wavefunction values.
    pub solution: TransferSolution,
}

pub fn transfer_matrix_converged(
    model: &PotentialModel,
    energy: f64,
    a: f64,
    b: f64,
) -> Result<ConvergedTransfer> {
    let mut dx = 1e-2;
    let mut prev = transfer_matrix_on(model, energy, a, b, dx)?;
    loop {
        dx /= 2.0;
        let next = transfer_matrix_on(model, energy, a, b, dx)?;
        let (p0, p1) = (prev.probabilities, next.probabilities);
        let change = (p1.reflection - p0.reflection)
            .abs()
            .max((p1.transmission - p0.transmission).abs());
        if change < 1e-10 || dx < 2e-5 {
            let rich = |f: f64, c: f64| (4.0 * f - c) / 3.0;
            let probabilities = Probabilities::new(
                rich(p1.reflection, p0.reflection),
                rich(p1.transmission, p0.transmission),
            );
            return Ok(ConvergedTransfer {
                probabilities,
                last_change: change,
                step_dx: dx,
                solution: next,
            });
        }
        prev = next;
    }
}

/// Best available reference: closed form where one exists, otherwise the
/// converged transfer matrix.
pub fn reference_probabilities(model: &PotentialModel, energy: f64) -> Result<Probabilities> {
    let m = model.mass;
    let (_, vr) = model.asymptotes();
    if energy <= 0.0 {
        return Err(Error::NoOpenChannel {
            energy,
            asymptote: 0.0,
        });
    }
    Ok(match &model.kind {
        PotentialKind::Eckart { v0, alpha } => {
            let t = eckart_transmission(*v0, *alpha, m, energy);
            Probabilities::new(1.0 - t, t)
        }
        PotentialKind::SquareBarrier { v0, x1, x2 } => {
            square_barrier_probabilities(*v0, *x1, *x2, m, energy)
        }
        PotentialKind::UphillRamp { v0, alpha } => {
            if energy <= vr {
                return Err(Error::NoOpenChannel {
                    energy,
                    asymptote: vr,
                });
            }
            ramp_probabilities(*v0, *alpha, m, energy)
        }
        _ => {
            let (a, b) = oracle_range(model);
            transfer_matrix_converged(model, energy, a, b)?.probabilities
        }
    })
}

/// WKB data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbReference {
    pub r_sc: f64,
    pub s_sc: f64,
    pub p: f64,
    /// Invariant flux `r^2 p / m`, fixed by unit incident amplitude.
    pub flux: f64,
}

impl WkbReference {
    pub fn components(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(self.r_sc, self.s_sc),
            Complex64::from_polar(self.r_sc, -self.s_sc),
        )
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// WKB reference at `x`, normalised so that far to the left it is the unit
/// plane wave `exp(i p_L x)`.
pub fn wkb_reference(model: &PotentialModel, energy: f64, x: f64) -> Result<WkbReference> {
    let m = model.mass;
    let (vl, _) = model.asymptotes();
    let pl = momentum_from(m, energy, vl).ok_or(Error::TurningPoint {
        x: f64::NEG_INFINITY,
        energy,
        potential: vl,
    })?;
    let a = model.support(1e-14).0.min(x);
    let vmax = model.max_on(a, x);
    if energy <= vmax {
        return Err(Error::TurningPoint {
            x,
            energy,
            potential: vmax,
        });
    }
    let p = model.classical_momentum(x, energy)?;
    let excess = |y: f64| (2.0 * m * (energy - model.value(y))).sqrt() - pl;
    let mut s = pl * x;
    // split at discontinuities so Simpson sees smooth pieces
    let mut breaks = vec![a];
    breaks.extend(
        model
            .discontinuities()
            .into_iter()
            .filter(|&d| d > a && d < x),
    );
    breaks.push(x);
    for w in breaks.windows(2) {
        s += adaptive_simpson(&excess, w[0], w[1], 1e-10);
    }
    let flux = pl / m;
    Ok(WkbReference {
        r_sc: (m * flux / p).sqrt(),
        s_sc: s,
        p,
        flux,
    })
}

pub fn wkb_components(
    model: &PotentialModel,
    energy: f64,
    x: f64,
) -> Result<(Complex64, Complex64)> {
    Ok(wkb_reference(model, energy, x)?.components())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::cm1_to_hartree;

    const M: f64 = 2000.0;

    fn v0() -> f64 {
        cm1_to_hartree(400.0)
    }

    #[test]
    fn eckart_limits() {
        assert!((eckart_transmission(v0(), 3.0, M, 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(eckart_transmission(0.0, 3.0, M, 0.001), 1.0);
        let mut prev = 0.0;
        for i in 0..26 {
            let e = cm1_to_hartree(100.0 + 1100.0 * i as f64 / 25.0);
            let t = eckart_transmission(v0(), 3.0, M, e);
            assert!(t > prev && t < 1.0);
            prev = t;
        }
        let t = eckart_transmission(v0(), 3.0, M, cm1_to_hartree(200.0));
        assert!(t > 0.0 && t < 0.5);
    }

    #[test]
    fn eckart_dual_oracle() {
        let model = PotentialModel::eckart(v0(), 3.0, M).unwrap();
        for e_cm in [200.0, 400.0, 450.0, 900.0] {
            let e = cm1_to_hartree(e_cm);
            let tm = transfer_matrix_converged(&model, e, -6.0, 6.0).unwrap();
            let t = eckart_transmission(v0(), 3.0, M, e);
            assert!(
                (tm.probabilities.transmission - t).abs() < 1e-8,
                "{e_cm}: {} vs {t}",
                tm.probabilities.transmission
            );
            let single = transfer_matrix_on(&model, e, -6.0, 6.0, 1e-3).unwrap();
            assert!((single.probabilities.transmission - t).abs() < 1e-6);
        }
    }

    #[test]
    fn square_barrier_branches() {
        assert_eq!(
            square_barrier_probabilities(0.0, -1.0, 1.0, M, 0.001),
            Probabilities::new(0.0, 1.0)
        );
        let p = square_barrier_probabilities(v0(), -1.0, 1.0, M, cm1_to_hartree(450.0));
        assert!((p.reflection + p.transmission - 1.0).abs() < 1e-14);
        let model = PotentialModel::square_barrier(v0(), -1.0, 1.0, M).unwrap();
        for e in [
            cm1_to_hartree(200.0),
            v0(),
            cm1_to_hartree(450.0),
            cm1_to_hartree(1000.0),
        ] {
            let cf = square_barrier_probabilities(v0(), -1.0, 1.0, M, e);
            let tm = transfer_matrix_on(&model, e, -1.0, 1.0, 0.5)
                .unwrap()
                .probabilities;
            assert!((cf.transmission - tm.transmission).abs() < 1e-10);
            assert!((cf.reflection - tm.reflection).abs() < 1e-10);
        }
        // continuity of the E = V0 branch
        let at = square_barrier_probabilities(v0(), -1.0, 1.0, M, v0());
        let near = square_barrier_probabilities(v0(), -1.0, 1.0, M, v0() * (1.0 + 1e-9));
        assert!((at.transmission - near.transmission).abs() < 1e-6);
    }

    #[test]
    fn ramp_limits_and_dual_oracle() {
        assert_eq!(
            ramp_probabilities(0.0, 0.2, M, 0.001),
            Probabilities::new(0.0, 1.0)
        );
        let e = cm1_to_hartree(500.0);
        let sharp = ramp_probabilities(v0(), 1e-9, M, e);
        let step = step_probabilities((2.0 * M * e).sqrt(), (2.0 * M * (e - v0())).sqrt());
        assert!((sharp.reflection - step.reflection).abs() < 1e-12);
        let smooth = ramp_probabilities(v0(), 0.2, M, e);
        assert!((smooth.reflection + smooth.transmission - 1.0).abs() < 1e-12);
        let model = PotentialModel::uphill_ramp(v0(), 0.2, M).unwrap();
        let (a, b) = model.support(1e-14);
        let tm = transfer_matrix_converged(&model, e, a, b).unwrap();
        assert!((tm.probabilities.reflection - smooth.reflection).abs() < 1e-8);
        assert_eq!(ramp_probabilities(v0(), 0.2, M, v0()).transmission, 0.0);
    }

    #[test]
    fn single_step_is_step_formula() {
        let model = PotentialModel::new(
            PotentialKind::CustomPiecewise {
                edges: vec![0.0],
                values: vec![0.0, v0()],
            },
            M,
        )
        .unwrap();
        let e = cm1_to_hartree(500.0);
        let tm = transfer_matrix_on(&model, e, -1.0, 1.0, 0.1)
            .unwrap()
            .probabilities;
        let step = step_probabilities((2.0 * M * e).sqrt(), (2.0 * M * (e - v0())).sqrt());
        assert!((tm.reflection - step.reflection).abs() < 1e-12);
        assert!((tm.transmission - step.transmission).abs() < 1e-12);
    }

    #[test]
    fn no_open_channel() {
        let model = PotentialModel::uphill_ramp(v0(), 0.2, M).unwrap();
        assert!(matches!(
            transfer_matrix_solve(&model, v0() * 0.5, 1e-3),
            Err(Error::NoOpenChannel { .. })
        ));
    }

    #[test]
    fn second_order_in_step() {
        let model = PotentialModel::double_gaussian(v0(), 9.0, 0.75, M).unwrap();
        let e = v0();
        let t = |dx| {
            transfer_matrix_solve(&model, e, dx)
                .unwrap()
                .probabilities
                .transmission
        };
        let (t1, t2, t3) = (t(0.02), t(0.01), t(0.005));
        let ratio = (t1 - t2) / (t2 - t3);
        assert!(ratio >= 3.5, "ratio {ratio}");
    }

    #[test]
    fn unitarity() {
        let model = PotentialModel::double_gaussian(v0(), 9.0, 0.75, M).unwrap();
        for e_cm in [150.0, 400.0, 800.0] {
            let p = transfer_matrix_solve(&model, cm1_to_hartree(e_cm), 1e-3)
                .unwrap()
                .probabilities;
            assert!((p.reflection + p.transmission - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_matches_plane_waves_outside() {
        let model = PotentialModel::eckart(v0(), 3.0, M).unwrap();
        let e = v0();
        let sol = transfer_matrix_solve(&model, e, 1e-3).unwrap();
        let k = sol.k_left;
        let p = sol.probabilities;
        // transmitted side: |Psi|^2 = T
        assert!((sol.psi_at(5.0).norm_sqr() - p.transmission).abs() < 1e-10);
        // incident amplitude 1 with phase exp(ikx)
        let x = -5.0;
        let psi = sol.psi_at(x);
        let dpsi = (sol.psi_at(x + 1e-5) - sol.psi_at(x - 1e-5)) / 2e-5;
        let inc = 0.5 * (psi + dpsi / (I * k));
        assert!((inc - (I * k * x).exp()).norm() < 1e-6);
        // interior evaluation is continuous across slab boundaries
        let xb = sol.x[1234];
        assert!((sol.psi_at(xb - 1e-12) - sol.psi_at(xb + 1e-12)).norm() < 1e-9);
    }

    #[test]
    fn wkb_free_and_flux() {
        let free = PotentialModel::free(M).unwrap();
        let e = cm1_to_hartree(400.0);
        let p = (2.0 * M * e).sqrt();
        let (a, b) = wkb_components(&free, e, 1.3).unwrap();
        assert!((a - (I * p * 1.3).exp()).norm() < 1e-12);
        assert!((b - (-I * p * 1.3).exp()).norm() < 1e-12);

        let model = PotentialModel::eckart(v0(), 3.0, M).unwrap();
        let e = 3.0 * v0();
        for i in 0..30 {
            let x = -3.0 + 0.2 * i as f64;
            let w = wkb_reference(&model, e, x).unwrap();
            assert!((w.r_sc * w.r_sc * w.p / M - w.flux).abs() < 1e-10 * w.flux);
        }
        assert!(matches!(
            wkb_reference(&model, v0(), 0.5),
            Err(Error::TurningPoint { .. })
        ));
    }

    #[test]
    fn wkb_action_matches_quadrature() {
        let model = PotentialModel::eckart(v0(), 3.0, M).unwrap();
        let e = 3.0 * v0();
        let pl = (2.0 * M * e).sqrt();
        // trapezoid on a very fine grid as an independent check
        let (a, x) = (model.support(1e-14).0, 1.0);
        let n = 200_000;
        let h = (x - a) / n as f64;
        let f = |y: f64| (2.0 * M * (e - model.value(y))).sqrt() - pl;
        let mut s = 0.5 * (f(a) + f(x));
        for i in 1..n {
            s += f(a + h * i as f64);
        }
        let expect = pl * x + s * h;
        let got = wkb_reference(&model, e, x).unwrap().s_sc;
        assert!((got - expect).abs() < 1e-8);
    }
}
