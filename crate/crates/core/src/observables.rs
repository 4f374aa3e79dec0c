//! Quantities derived from a field: densities and fluxes, reflection and
//! transmission, the total wavefunction, stationarity residuals and
//! convergence diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Scheme;
use crate::error::Result;
use crate::kernels::{eulerian_rhs, local_state, KernelKind, VelocityLaw};
use crate::numerics::{fd4_derivative, Stencil};
use crate::potentials::PotentialModel;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// One region's components as ordered `(x, value)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionField {
    /// Interval this region owns.
    pub lo: f64,
    pub hi: f64,
    pub law: VelocityLaw,
    pub kernel: KernelKind,
    pub plus_x: Vec<f64>,
    pub plus: Vec<Complex64>,
    pub minus_x: Vec<f64>,
    pub minus: Vec<Complex64>,
}

impl RegionField {
    /// `(Psi+, Psi-)` at `x` by five-point interpolation.
    pub fn sample(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let a = Stencil::new(&self.plus_x, x)?.apply(&self.plus);
        let b = Stencil::new(&self.minus_x, x)?.apply(&self.minus);
        Ok((a, b))
    }
}

/// A field with the stationary phase removed, `phi = Psi exp(iEt)`.
/// Regions are ordered left to right and meet at their shared edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub model: PotentialModel,
    pub energy: f64,
    pub t: f64,
    pub x_left: f64,
    pub x_right: f64,
    /// Nominal grid spacing of the run.
    pub spacing: f64,
    /// Spacing of the uniform grid the samples resolve exactly. Residuals
    /// and integrals are evaluated on it.
    pub resolution: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub regions: Vec<RegionField>,
    /// Measured `max |d(phi)/dt| / E` at fixed positions, when the engine
    /// recorded the field at two times. Used as the phase residual in
    /// place of the kernel evaluation.
    pub drift: Option<f64>,
}

/// Profile sample at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub x: f64,
    pub psi_plus: Complex64,
    pub psi_minus: Complex64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub rho_total: f64,
}

impl ProfileRow {
    pub fn new(x: f64, psi_plus: Complex64, psi_minus: Complex64) -> Self {
        Self {
            x,
            psi_plus,
            psi_minus,
            rho_plus: psi_plus.norm_sqr(),
            rho_minus: psi_minus.norm_sqr(),
            rho_total: (psi_plus + psi_minus).norm_sqr(),
        }
    }
}

/// Densities, fluxes and the rate of probability transfer into the `+`
/// component at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxRow {
    pub x: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub j_plus: f64,
    pub j_minus: f64,
    pub coupling: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub t: f64,
    pub p_refl: f64,
    pub p_trans: f64,
    /// Phase-rotation residual, when evaluated at this time.
    pub residual: Option<f64>,
}

/// Both stationarity residuals, relative to E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max |dPsi+-/dt + iE Psi+-| / E` with the Eulerian kernel.
    pub phase: f64,
    /// `max |-Psi''/2m + (V - E) Psi| / E` for the total wavefunction.
    pub schrodinger: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub scheme: Scheme,
    pub energy: f64,
    pub p_refl: f64,
    pub p_trans: f64,
    pub profile: Vec<ProfileRow>,
    pub history: Vec<HistoryRow>,
    pub residuals: Residuals,
    pub converged: bool,
    /// First time at which the convergence window was satisfied.
    pub convergence_time: Option<f64>,
    pub t_final: f64,
    pub steps: usize,
    /// Smallest and largest sample count of any single ensemble over the run.
    pub min_samples: usize,
    pub max_samples: usize,
}

impl ScatteringResult {
    pub fn unitarity_defect(&self) -> f64 {
        (self.p_refl + self.p_trans - 1.0).abs()
    }
}

/// Densities, fluxes and coupling rate for samples given on a common grid.
/// The coupling is `(p'/m) Re[Psi+* Psi-]` for classical trajectories and
/// `2V Im[Psi+* Psi-]` for constant velocity.
#[allow(clippy::too_many_arguments)]
pub fn densities_and_fluxes(
    model: &PotentialModel,
    bounds: (f64, f64),
    law: VelocityLaw,
    kernel: KernelKind,
    energy: f64,
    x: &[f64],
    plus: &[Complex64],
    minus: &[Complex64],
) -> Result<Vec<FluxRow>> {
    x.iter()
        .zip(plus.iter().zip(minus))
        .map(|(&x, (&a, &b))| {
            let s = local_state(law, model, bounds, energy, x, a, b)?;
            let cross = a.conj() * b;
            let coupling = match (law, kernel) {
                (VelocityLaw::Classical, _) => s.p_prime / s.mass * cross.re,
                (_, KernelKind::Product { v_inf }) => 2.0 * (s.v - v_inf) * cross.im,
                _ => 2.0 * s.v * cross.im,
            };
            let v = s.p / s.mass;
            Ok(FluxRow {
                x,
                rho_plus: a.norm_sqr(),
                rho_minus: b.norm_sqr(),
                j_plus: v * a.norm_sqr(),
                j_minus: -v * b.norm_sqr(),
                coupling,
            })
        })
        .collect()
}

/// `n` equal intervals of at most `h` on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h - 1e-9).ceil().max(1.0) as usize;
    let step = (b - a) / n as f64;
    (0..=n)
        .map(|i| if i == n { b } else { a + step * i as f64 })
        .collect()
}

/// Composite Simpson (trapezoid on a final odd interval) on uniform samples.
pub fn integrate_uniform(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let m = if (n - 1).is_multiple_of(2) { n } else { n - 1 };
    let mut s = 0.0;
    if m >= 3 {
        s = f[0] + f[m - 1];
        for (i, v) in f[1..m - 1].iter().enumerate() {
            s += if i % 2 == 0 { 4.0 } else { 2.0 } * v;
        }
        s *= h / 3.0;
    }
    if m < n {
        s += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    s
}

impl FieldSnapshot {
    fn bounds(&self) -> (f64, f64) {
        (self.x_left, self.x_right)
    }

    /// Region owning `x`; on a shared edge the left region wins unless
    /// `prefer_right`.
    pub fn region_index(&self, x: f64, prefer_right: bool) -> usize {
        let last = self.regions.len() - 1;
        for (i, r) in self.regions.iter().enumerate() {
            let inside = if prefer_right { x < r.hi } else { x <= r.hi };
            if inside || i == last {
                return i;
            }
        }
        last
    }

    pub fn sample(&self, x: f64) -> Result<(Complex64, Complex64)> {
        self.regions[self.region_index(x, false)].sample(x)
    }

    /// `(P_refl, P_trans)` from `|Psi-(x_L)|^2` and `(p_R/p_L)|Psi+(x_R)|^2`.
    pub fn extract_probabilities(&self) -> Result<(f64, f64)> {
        let (_, minus) = self.regions[0].sample(self.x_left)?;
        let (plus, _) = self.regions[self.regions.len() - 1].sample(self.x_right)?;
        Ok((
            minus.norm_sqr(),
            self.p_right / self.p_left * plus.norm_sqr(),
        ))
    }

    /// `Psi = Psi+ + Psi-` at each query point.
    pub fn reconstruct_total(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        xs.iter()
            .map(|&x| self.sample(x).map(|(a, b)| a + b))
            .collect()
    }

    /// Profile at the `n` nominal grid nodes. Where two regions meet the node
    /// is listed twice, left region first.
    pub fn profile(&self, n: usize) -> Result<Vec<ProfileRow>> {
        let h = (self.x_right - self.x_left) / (n - 1) as f64;
        let mut rows = Vec::with_capacity(n + 1);
        for i in 0..n {
            let x = if i == n - 1 {
                self.x_right
            } else {
                self.x_left + h * i as f64
            };
            let tol = 1e-9 * h;
            for (k, r) in self.regions.iter().enumerate() {
                let above = k == 0 || x >= r.lo - tol;
                let below = k == self.regions.len() - 1 || x <= r.hi + tol;
                if above && below {
                    let xq = if self.regions.len() > 1 {
                        x.clamp(r.lo, r.hi)
                    } else {
                        x
                    };
                    let (a, b) = r.sample(xq)?;
                    rows.push(ProfileRow::new(xq, a, b));
                }
            }
        }
        Ok(rows)
    }

    /// Densities, fluxes and coupling on a uniform grid of spacing `h`
    /// covering each region.
    pub fn flux_profile(&self, h: f64) -> Result<Vec<FluxRow>> {
        let mut out = Vec::new();
        for r in &self.regions {
            let xs = uniform_grid(r.lo, r.hi, h);
            let (a, b) = self.region_values(r, &xs)?;
            out.extend(densities_and_fluxes(
                &self.model,
                self.bounds(),
                r.law,
                r.kernel,
                self.energy,
                &xs,
                &a,
                &b,
            )?);
        }
        Ok(out)
    }

    fn region_values(
        &self,
        r: &RegionField,
        xs: &[f64],
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let mut a = Vec::with_capacity(xs.len());
        let mut b = Vec::with_capacity(xs.len());
        for &x in xs {
            let (p, m) = r.sample(x)?;
            a.push(p);
            b.push(m);
        }
        Ok((a, b))
    }

    fn fine_spacing(&self) -> f64 {
        self.resolution
    }

    /// Phase residual `max |dPsi+-/dt + iE Psi+-| / E`, taken from the
    /// recorded drift when there is one, and the Schrödinger residual of the
    /// reconstructed `Psi` on the refined uniform grid.
    pub fn stationarity_residual(&self) -> Result<Residuals> {
        let phase = match self.drift {
            Some(d) => d,
            None => self.kernel_phase_residual()?,
        };
        Ok(Residuals {
            phase,
            schrodinger: self.schrodinger_residual()?,
        })
    }

    /// Phase residual from the Eulerian kernel with fourth-order derivatives
    /// of the interpolated components.
    pub fn kernel_phase_residual(&self) -> Result<f64> {
        let hf = self.fine_spacing();
        let e = self.energy;
        let mut phase: f64 = 0.0;
        for r in &self.regions {
            let xs = uniform_grid(r.lo, r.hi, hf);
            let h = xs[1] - xs[0];
            let (a, b) = self.region_values(r, &xs)?;
            let da = fd4_derivative(&a, h)?;
            let db = fd4_derivative(&b, h)?;
            for i in 0..xs.len() {
                let s = local_state(r.law, &self.model, self.bounds(), e, xs[i], a[i], b[i])?;
                let (dp, dm) = eulerian_rhs(&s, da[i], db[i], r.kernel)?;
                phase = phase
                    .max((dp + I * e * a[i]).norm() / e)
                    .max((dm + I * e * b[i]).norm() / e);
            }
        }
        Ok(phase)
    }

    /// `max |-Psi''/2m + (V - E) Psi| / E` with `Psi''` from two fourth-order
    /// differences. Nodes whose doubled stencil reaches an outer edge or a
    /// jump of `V` are skipped: one-sided differences applied twice lose two
    /// orders there, and `Psi''` itself jumps at a jump of `V`.
    pub fn schrodinger_residual(&self) -> Result<f64> {
        let hf = self.fine_spacing();
        let e = self.energy;
        let xs = uniform_grid(self.x_left, self.x_right, hf);
        let h = xs[1] - xs[0];
        let psi = self.reconstruct_total(&xs)?;
        let d2 = fd4_derivative(&fd4_derivative(&psi, h)?, h)?;
        let m = self.model.mass;
        let jumps = self.model.discontinuities();
        let reach = 2 * FD_HALF_WIDTH;
        let mut schrodinger: f64 = 0.0;
        for i in reach..xs.len().saturating_sub(reach) {
            if jumps.iter().any(|&d| (xs[i] - d).abs() < reach as f64 * h) {
                continue;
            }
            let v = self.model.value(xs[i]);
            let res = -d2[i] / (2.0 * m) + (v - e) * psi[i];
            schrodinger = schrodinger.max(res.norm() / e);
        }
        Ok(schrodinger)
    }

    /// `d/dt` of the two-component probability on `[x_L, x_R]` is balanced
    /// by the edge fluxes; returns `(N, J(x_L) - J(x_R))`.
    pub fn probability_content(&self) -> Result<(f64, f64)> {
        let hf = self.fine_spacing();
        let mut total = 0.0;
        for r in &self.regions {
            let xs = uniform_grid(r.lo, r.hi, hf);
            let (a, b) = self.region_values(r, &xs)?;
            let rho: Vec<f64> = a
                .iter()
                .zip(&b)
                .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
                .collect();
            total += integrate_uniform(&rho, xs[1] - xs[0]);
        }
        let flux = |r: &RegionField, x: f64| -> Result<f64> {
            let (a, b) = r.sample(x)?;
            let s = local_state(r.law, &self.model, self.bounds(), self.energy, x, a, b)?;
            Ok(s.p / s.mass * (a.norm_sqr() - b.norm_sqr()))
        };
        let jin = flux(&self.regions[0], self.x_left)?;
        let jout = flux(&self.regions[self.regions.len() - 1], self.x_right)?;
        Ok((total, jin - jout))
    }
}

/// Records `(t, P_refl, P_trans)` and decides when both have stayed within
/// `tol` over a trailing time window.
#[derive(Debug, Clone, Default)]
pub struct ConvergenceMonitor {
    pub window: f64,
    pub tol: f64,
    pub history: Vec<HistoryRow>,
    pub convergence_time: Option<f64>,
    /// No convergence is declared before this time.
    pub earliest: f64,
}

impl ConvergenceMonitor {
    pub fn new(window: f64, tol: f64) -> Self {
        Self {
            window,
            tol,
            history: Vec::new(),
            convergence_time: None,
            earliest: 0.0,
        }
    }

    pub fn not_before(mut self, t: f64) -> Self {
        self.earliest = t;
        self
    }

    /// Appends a row; returns whether the window is currently satisfied.
    pub fn push(&mut self, row: HistoryRow) -> bool {
        let t = row.t;
        self.history.push(row);
        let done = self.satisfied(t);
        if done && self.convergence_time.is_none() {
            self.convergence_time = Some(t);
        }
        done
    }

    fn satisfied(&self, t: f64) -> bool {
        if t + 1e-9 < self.window.max(self.earliest) {
            return false;
        }
        let start = t - self.window - 1e-9;
        let mut lo = (f64::MAX, f64::MAX);
        let mut hi = (f64::MIN, f64::MIN);
        for h in self.history.iter().rev().take_while(|h| h.t >= start) {
            lo = (lo.0.min(h.p_refl), lo.1.min(h.p_trans));
            hi = (hi.0.max(h.p_refl), hi.1.max(h.p_trans));
        }
        hi.0 - lo.0 < self.tol && hi.1 - lo.1 < self.tol
    }
}

/// Residual of the two-component probability balance between two snapshots:
/// `|(N1 - N0)/(t1 - t0) - mean net inflow|`.
pub fn balance_residual(a: &FieldSnapshot, b: &FieldSnapshot) -> Result<f64> {
    let (n0, j0) = a.probability_content()?;
    let (n1, j1) = b.probability_content()?;
    Ok(((n1 - n0) / (b.t - a.t) - 0.5 * (j0 + j1)).abs())
}

/// Least-squares line through `log e(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    /// Decay rate (positive when converging).
    pub rate: f64,
    pub r_squared: f64,
    pub points: usize,
    pub t_start: f64,
    pub t_end: f64,
}

/// Error of `P_refl` and `P_trans` against reference values, larger of the two.
pub fn history_error(history: &[HistoryRow], reference: (f64, f64)) -> Vec<(f64, f64)> {
    history
        .iter()
        .map(|h| {
            let e = (h.p_refl - reference.0)
                .abs()
                .max((h.p_trans - reference.1).abs());
            (h.t, e)
        })
        .collect()
}

/// Fits `log e(t)` over the decay phase: after the error has fallen below
/// `start_fraction` of its largest value and while it stays above `floor`.
/// The error is replaced by its running maximum from the right, so the fit
/// measures the decay envelope.
pub fn exponential_fit(
    errors: &[(f64, f64)],
    start_fraction: f64,
    floor: f64,
) -> Option<ExponentialFit> {
    let n = errors.len();
    if n < 3 {
        return None;
    }
    let mut env = vec![0.0; n];
    let mut run: f64 = 0.0;
    for i in (0..n).rev() {
        run = run.max(errors[i].1);
        env[i] = run;
    }
    let peak = env[0];
    let start = env.iter().position(|&e| e < start_fraction * peak)?;
    let end = env.iter().position(|&e| e < floor).unwrap_or(n);
    if end <= start + 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = (start..end).map(|i| (errors[i].0, env[i].ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some(ExponentialFit {
        rate: -slope,
        r_squared,
        points: pts.len(),
        t_start: pts[0].0,
        t_end: pts[pts.len() - 1].0,
    })
}

/// First recorded time after which the error stays below `tol`.
pub fn settle_time(errors: &[(f64, f64)], tol: f64) -> Option<f64> {
    let last_bad = errors.iter().rposition(|&(_, e)| e >= tol);
    match last_bad {
        None => errors.first().map(|e| e.0),
        Some(i) => errors.get(i + 1).map(|e| e.0),
    }
}

/// Mean and population standard deviation of `rho+ - rho-` over a profile.
pub fn density_difference_stats(profile: &[ProfileRow]) -> (f64, f64) {
    let d: Vec<f64> = profile.iter().map(|r| r.rho_plus - r.rho_minus).collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Mean of `rho+` over `[a, b]` and its relative spread `(max - min)/mean`.
pub fn plateau(profile: &[ProfileRow], a: f64, b: f64) -> Option<(f64, f64)> {
    let v: Vec<f64> = profile
        .iter()
        .filter(|r| r.x >= a && r.x <= b)
        .map(|r| r.rho_plus)
        .collect();
    if v.is_empty() {
        return None;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let max = v.iter().cloned().fold(f64::MIN, f64::max);
    let min = v.iter().cloned().fold(f64::MAX, f64::min);
    Some((mean, (max - min) / mean))
}

/// Half width of the fourth-order central difference.
const FD_HALF_WIDTH: usize = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::cm1_to_hartree;

    fn plane_wave_snapshot(model: PotentialModel, e: f64, h: f64) -> FieldSnapshot {
        let p = (2.0 * model.mass * e).sqrt();
        let xs = uniform_grid(-3.0 - 2.0 * h, 3.0 + 2.0 * h, h);
        let plus: Vec<Complex64> = xs.iter().map(|&x| (I * p * x).exp()).collect();
        FieldSnapshot {
            model,
            energy: e,
            t: 0.0,
            x_left: -3.0,
            x_right: 3.0,
            spacing: 4.0 * h,
            resolution: h,
            p_left: p,
            p_right: p,
            regions: vec![RegionField {
                lo: -3.0,
                hi: 3.0,
                law: VelocityLaw::Constant(p),
                kernel: KernelKind::ConstantVelocity,
                plus_x: xs.clone(),
                plus,
                minus_x: xs.clone(),
                minus: vec![Complex64::new(0.0, 0.0); xs.len()],
            }],
            drift: None,
        }
    }

    #[test]
    fn free_plane_wave() {
        let e = cm1_to_hartree(400.0);
        let snap = plane_wave_snapshot(PotentialModel::free(2000.0).unwrap(), e, 0.01);
        let (r, t) = snap.extract_probabilities().unwrap();
        assert!(r.abs() < 1e-30 && (t - 1.0).abs() < 1e-12);
        let res = snap.stationarity_residual().unwrap();
        assert!(res.phase < 1e-6 && res.schrodinger < 1e-5, "{res:?}");
        let flux = snap.flux_profile(0.1).unwrap();
        assert!(flux.iter().all(|f| f.coupling == 0.0 && f.j_minus == 0.0));
        let total = snap.reconstruct_total(&[0.3]).unwrap()[0];
        assert_eq!(total, snap.sample(0.3).unwrap().0);
        let profile = snap.profile(31).unwrap();
        assert_eq!(profile.len(), 31);
        let (mean, sd) = density_difference_stats(&profile);
        assert!((mean - 1.0).abs() < 1e-10 && sd < 1e-10);
    }

    #[test]
    fn plane_wave_residual_converges_with_refinement() {
        let e = cm1_to_hartree(400.0);
        let coarse = plane_wave_snapshot(PotentialModel::free(2000.0).unwrap(), e, 0.05)
            .stationarity_residual()
            .unwrap();
        let fine = plane_wave_snapshot(PotentialModel::free(2000.0).unwrap(), e, 0.0125)
            .stationarity_residual()
            .unwrap();
        assert!(fine.phase < coarse.phase / 100.0);
        assert!(fine.schrodinger < 1e-6);
    }

    #[test]
    fn barrier_makes_plane_wave_non_stationary() {
        let e = cm1_to_hartree(400.0);
        let model = PotentialModel::eckart(e, 3.0, 2000.0).unwrap();
        let snap = plane_wave_snapshot(model, e, 0.05);
        let res = snap.stationarity_residual().unwrap();
        assert!(res.phase > 0.5 && res.schrodinger > 0.5);
    }

    #[test]
    fn coupling_density_forms() {
        let model = PotentialModel::eckart(0.002, 3.0, 2000.0).unwrap();
        let a = Complex64::new(0.6, 0.2);
        let b = Complex64::new(-0.1, 0.3);
        let rows = densities_and_fluxes(
            &model,
            (-3.0, 3.0),
            VelocityLaw::Constant(2.0),
            KernelKind::ConstantVelocity,
            0.003,
            &[0.1],
            &[a],
            &[b],
        )
        .unwrap();
        assert!((rows[0].coupling - 2.0 * model.value(0.1) * (a.conj() * b).im).abs() < 1e-18);
        assert!((rows[0].j_plus - 2.0 / 2000.0 * a.norm_sqr()).abs() < 1e-18);
        let rows = densities_and_fluxes(
            &model,
            (-3.0, 3.0),
            VelocityLaw::Classical,
            KernelKind::Classical,
            0.003,
            &[0.1],
            &[a],
            &[Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(rows[0].coupling, 0.0);
        assert_eq!(rows[0].j_minus, 0.0);
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let h = 0.1;
        let f: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((integrate_uniform(&f, h) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn grid_hits_both_ends() {
        let g = uniform_grid(-3.0, 0.0, 0.05);
        assert_eq!(g.len(), 61);
        assert_eq!(g[0], -3.0);
        assert_eq!(g[60], 0.0);
    }

    #[test]
    fn fit_recovers_rate() {
        let errs: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let t = i as f64 * 10.0;
                (
                    t,
                    0.3 * (-t / 300.0).exp() * (1.0 + 0.3 * (t / 50.0).sin().abs()),
                )
            })
            .collect();
        let fit = exponential_fit(&errs, 0.5, 1e-9).unwrap();
        assert!((fit.rate - 1.0 / 300.0).abs() < 2e-4);
        assert!(fit.r_squared > 0.99);
        assert_eq!(settle_time(&errs, 1e-3).map(|t| t > 1000.0), Some(true));
        assert_eq!(settle_time(&[(0.0, 0.1), (1.0, 0.0)], 1e-3), Some(1.0));
    }

    #[test]
    fn plateau_stats() {
        let rows: Vec<ProfileRow> = (0..11)
            .map(|i| {
                let x = -1.0 + 0.2 * i as f64;
                ProfileRow::new(
                    x,
                    Complex64::new(1.0 + 0.01 * x, 0.0),
                    Complex64::new(0.0, 0.0),
                )
            })
            .collect();
        let (mean, spread) = plateau(&rows, -0.5, 0.5).unwrap();
        assert!((mean - 1.0).abs() < 1e-3 && spread < 0.03);
        assert!(plateau(&rows, 5.0, 6.0).is_none());
    }
}
