//! Classical fourth-order Runge-Kutta on a flat real state vector.

use crate::error::Result;

/// Reusable stage buffers.
#[derive(Debug, Default, Clone)]
pub struct Rk4 {
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances `y` from `t` to `t + dt`. `rhs(t, y, dy)` fills `dy`.
    pub fn step<F>(&mut self, t: f64, y: &mut [f64], dt: f64, mut rhs: F) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let n = y.len();
        for k in &mut self.k {
            k.resize(n, 0.0);
        }
        self.stage.resize(n, 0.0);
        let [k1, k2, k3, k4] = &mut self.k;
        let stage = &mut self.stage;

        rhs(t, y, k1)?;
        for i in 0..n {
            stage[i] = y[i] + 0.5 * dt * k1[i];
        }
        rhs(t + 0.5 * dt, stage, k2)?;
        for i in 0..n {
            stage[i] = y[i] + 0.5 * dt * k2[i];
        }
        rhs(t + 0.5 * dt, stage, k3)?;
        for i in 0..n {
            stage[i] = y[i] + dt * k3[i];
        }
        rhs(t + dt, stage, k4)?;
        for i in 0..n {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(())
    }
}

/// One RK4 step returning the new state.
pub fn rk4_step<F>(t: f64, y: &[f64], dt: f64, rhs: F) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let mut out = y.to_vec();
    Rk4::new().step(t, &mut out, dt, rhs)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::cm1_to_hartree;

    #[test]
    fn zero_rhs_is_identity() {
        let y = [1.0, -2.0, 3.5];
        let out = rk4_step(0.0, &y, 10.0, |_, _, dy| {
            dy.fill(0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(out, y);
    }

    #[test]
    fn exponential_growth() {
        let mut y = [1.0];
        let mut rk = Rk4::new();
        for i in 0..100 {
            rk.step(0.01 * i as f64, &mut y, 0.01, |_, y, dy| {
                dy[0] = y[0];
                Ok(())
            })
            .unwrap();
        }
        assert!((y[0] / std::f64::consts::E - 1.0).abs() < 1e-8);
    }

    fn rotate(omega: f64, dt: f64, steps: usize) -> [f64; 2] {
        // y = a + ib, dy/dt = i omega y
        let mut y = [1.0, 0.0];
        let mut rk = Rk4::new();
        for i in 0..steps {
            rk.step(dt * i as f64, &mut y, dt, |_, y, dy| {
                dy[0] = -omega * y[1];
                dy[1] = omega * y[0];
                Ok(())
            })
            .unwrap();
        }
        y
    }

    #[test]
    fn phase_rotation_drift_bound() {
        let omega = cm1_to_hartree(400.0);
        let dt = 10.0;
        let y = rotate(omega, dt, 1);
        let drift = ((y[0] * y[0] + y[1] * y[1]).sqrt() - 1.0).abs();
        assert!(drift <= (omega * dt).powi(5) / 120.0);
    }

    #[test]
    fn fourth_order_global_error() {
        let omega = 1.0;
        let err = |dt: f64| {
            let steps = (10.0 / dt).round() as usize;
            let y = rotate(omega, dt, steps);
            ((y[0] - 10f64.cos()).powi(2) + (y[1] - 10f64.sin()).powi(2)).sqrt()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((14.0..18.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn errors_propagate() {
        let r = rk4_step(0.0, &[1.0], 1.0, |_, _, _| {
            Err(crate::error::Error::Config("boom".into()))
        });
        assert!(r.is_err());
    }
}
