//! Fourth-order first derivatives on uniform grids.

use super::Field;
use crate::error::{Error, Result};

const INTERIOR: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

fn dot<T: Field>(c: &[f64; 5], f: &[T], scale: f64) -> T {
    c.iter().zip(f).fold(T::zero(), |acc, (&w, &v)| acc + v * w) * scale
}

/// Writes `d f/dx` into `out`. Centred 5-point stencil in the interior,
/// one-sided 5-point stencils at the two nodes nearest each end.
pub fn fd4_derivative_into<T: Field>(f: &[T], h: f64, out: &mut [T]) -> Result<()> {
    let n = f.len();
    if n < 5 {
        return Err(Error::InsufficientPoints { needed: 5, got: n });
    }
    debug_assert_eq!(out.len(), n);
    let s = 1.0 / (12.0 * h);
    out[0] = dot(&EDGE0, &f[..5], s);
    out[1] = dot(&EDGE1, &f[..5], s);
    for i in 2..n - 2 {
        out[i] = dot(&INTERIOR, &f[i - 2..i + 3], s);
    }
    // mirrored stencils, sign flipped
    let tail = &f[n - 5..];
    let mut rev = [T::zero(); 5];
    for (r, &v) in rev.iter_mut().zip(tail.iter().rev()) {
        *r = v;
    }
    out[n - 1] = dot(&EDGE0, &rev, -s);
    out[n - 2] = dot(&EDGE1, &rev, -s);
    Ok(())
}

pub fn fd4_derivative<T: Field>(f: &[T], h: f64) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); f.len()];
    fd4_derivative_into(f, h, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn constant_field() {
        let d = fd4_derivative(&[2.5; 9], 0.1).unwrap();
        assert!(d.iter().all(|v| v.abs() <= 1e-14));
    }

    #[test]
    fn needs_five() {
        assert!(fd4_derivative(&[0.0; 4], 1.0).is_err());
    }

    #[test]
    fn quartic_exact_everywhere() {
        let h = 0.3;
        let xs: Vec<f64> = (0..12).map(|i| -1.7 + h * i as f64).collect();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
        let d = fd4_derivative(&f, h).unwrap();
        for (x, v) in xs.iter().zip(d) {
            assert!((v - 4.0 * x.powi(3)).abs() < 1e-11, "{x} {v}");
        }
    }

    fn plane_wave_error(h: f64) -> f64 {
        let k = 2.8638;
        let n = (6.0 / h).round() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|i| -3.0 + h * i as f64).collect();
        let f: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::from_polar(1.0, k * x))
            .collect();
        let d = fd4_derivative(&f, h).unwrap();
        xs.iter()
            .zip(&f)
            .zip(&d)
            .map(|((_, &v), &dv)| (dv - Complex64::new(0.0, k) * v).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn fourth_order_convergence() {
        let ratio = plane_wave_error(0.05) / plane_wave_error(0.025);
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    proptest! {
        #[test]
        fn exact_on_random_quartics(c in proptest::collection::vec(-2.0..2.0f64, 5), h in 0.05..0.5f64, a in -2.0..2.0f64) {
            let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
            let dp = |x: f64| c[1] + x * (2.0 * c[2] + x * (3.0 * c[3] + x * 4.0 * c[4]));
            let xs: Vec<f64> = (0..9).map(|i| a + h * i as f64).collect();
            let f: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
            let d = fd4_derivative(&f, h).unwrap();
            let scale = 1.0 + xs.iter().map(|&x| dp(x).abs()).fold(0.0, f64::max);
            for (x, v) in xs.iter().zip(d) {
                prop_assert!((v - dp(*x)).abs() < 1e-9 * scale / h);
            }
        }
    }
}
