//! Five-point moving-least-squares interpolation on ordered scattered nodes.
//!
//! With five nodes and a quartic basis the least-squares fit is exact, so the
//! result is the Lagrange quartic through the five nearest nodes.

use std::cell::Cell;

use super::Field;
use crate::error::{Error, Result};

pub const STENCIL_SIZE: usize = 5;

thread_local! {
    static CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of stencils built on this thread since the last reset.
pub fn mls_invocations() -> u64 {
    CALLS.with(|c| c.get())
}

pub fn reset_mls_invocations() {
    CALLS.with(|c| c.set(0));
}

/// Up to six consecutive nodes and their weights for one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub start: usize,
    pub len: usize,
    pub weights: [f64; STENCIL_SIZE + 1],
    pub target_x: f64,
    pub extrapolated: bool,
}

fn lagrange_weights(nodes: &[f64], q: f64) -> [f64; STENCIL_SIZE] {
    let mut weights = [0.0; STENCIL_SIZE];
    for (i, w) in weights.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for (k, &xk) in nodes.iter().enumerate() {
            if k != i {
                num *= q - xk;
                den *= nodes[i] - xk;
            }
        }
        *w = num / den;
    }
    weights
}

fn check(xs: &[f64], q: f64) -> Result<bool> {
    let n = xs.len();
    if n < STENCIL_SIZE {
        return Err(Error::InsufficientPoints {
            needed: STENCIL_SIZE,
            got: n,
        });
    }
    CALLS.with(|c| c.set(c.get() + 1));
    let extrapolated = q < xs[0] || q > xs[n - 1];
    if extrapolated {
        log::warn!(
            "MLS extrapolation to x = {q} outside [{}, {}]",
            xs[0],
            xs[n - 1]
        );
    }
    Ok(extrapolated)
}

impl Stencil {
    /// Quartic through the five nodes nearest `q` (window shifted inward at
    /// the ends). `xs` must be strictly increasing.
    pub fn new(xs: &[f64], q: f64) -> Result<Self> {
        let extrapolated = check(xs, q)?;
        let n = xs.len();
        let j = xs.partition_point(|&x| x < q);
        let nearest = if j == 0 {
            0
        } else if j == n || q - xs[j - 1] <= xs[j] - q {
            j - 1
        } else {
            j
        };
        let start = nearest.saturating_sub(2).min(n - STENCIL_SIZE);
        let mut weights = [0.0; STENCIL_SIZE + 1];
        weights[..STENCIL_SIZE]
            .copy_from_slice(&lagrange_weights(&xs[start..start + STENCIL_SIZE], q));
        Ok(Self {
            start,
            len: STENCIL_SIZE,
            weights,
            target_x: q,
            extrapolated,
        })
    }

    /// Blend of the quartics centred on the two nodes bracketing `q`, with
    /// linear weights in the position inside the bracket. Both quartics are
    /// exact at the nodes, so the interpolant is continuous with a
    /// continuous slope as `q` (or the nodes) move, unlike [`Self::new`]
    /// which jumps where the nearest node changes.
    pub fn blended(xs: &[f64], q: f64) -> Result<Self> {
        let extrapolated = check(xs, q)?;
        Ok(Self::blend(xs, q, extrapolated))
    }

    fn blend(xs: &[f64], q: f64, extrapolated: bool) -> Self {
        let n = xs.len();
        let j = xs.partition_point(|&x| x < q).clamp(1, n - 1);
        let s = ((q - xs[j - 1]) / (xs[j] - xs[j - 1])).clamp(0.0, 1.0);
        let a = (j - 1).saturating_sub(2).min(n - STENCIL_SIZE);
        let b = j.saturating_sub(2).min(n - STENCIL_SIZE);
        let mut weights = [0.0; STENCIL_SIZE + 1];
        let wa = lagrange_weights(&xs[a..a + STENCIL_SIZE], q);
        let wb = lagrange_weights(&xs[b..b + STENCIL_SIZE], q);
        for k in 0..STENCIL_SIZE {
            weights[k] += (1.0 - s) * wa[k];
            weights[b - a + k] += s * wb[k];
        }
        Self {
            start: a,
            len: STENCIL_SIZE + (b - a),
            weights,
            target_x: q,
            extrapolated,
        }
    }

    pub fn apply<T: Field>(&self, values: &[T]) -> T {
        self.weights[..self.len]
            .iter()
            .zip(&values[self.start..self.start + self.len])
            .fold(T::zero(), |acc, (&w, &v)| acc + v * w)
    }
}

/// Interpolates `values` (sampled at `xs`) at `q`.
pub fn mls_interpolate<T: Field>(xs: &[f64], values: &[T], q: f64) -> Result<T> {
    debug_assert_eq!(xs.len(), values.len());
    Ok(Stencil::new(xs, q)?.apply(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn grid(a: f64, h: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + h * i as f64).collect()
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            mls_interpolate(&[0.0, 1.0, 2.0, 3.0], &[0.0; 4], 1.5),
            Err(Error::InsufficientPoints { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn reproduces_quartic() {
        let q = |x: f64| x.powi(4) - 2.0 * x * x + 1.0;
        let xs = [-1.3, -0.2, 0.1, 0.9, 1.7, 2.0, 2.6];
        let vs: Vec<f64> = xs.iter().map(|&x| q(x)).collect();
        for i in 0..200 {
            let x = -1.3 + 3.9 * i as f64 / 199.0;
            assert!((mls_interpolate(&xs, &vs, x).unwrap() - q(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn nodal_values_exact() {
        let xs = grid(-3.0, 0.2, 31);
        let vs: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new(x.sin() * 3.7, (x * 1.1).cos()))
            .collect();
        for (x, v) in xs.iter().zip(&vs) {
            assert_eq!(mls_interpolate(&xs, &vs, *x).unwrap(), *v);
        }
    }

    #[test]
    fn sine_error_below_h5() {
        let h = 0.2;
        let xs = grid(-3.0, h, 31);
        let vs: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let q = -2.6 + 5.2 * (i as f64 + 0.5) / 1000.0;
            let e = (mls_interpolate(&xs, &vs, q).unwrap() - q.sin()).abs();
            worst = worst.max(e / h.powi(5));
        }
        assert!(worst < 1.0, "C = {worst}");
    }

    #[test]
    fn window_shifts_inward() {
        let xs = grid(0.0, 1.0, 8);
        assert_eq!(Stencil::new(&xs, 0.1).unwrap().start, 0);
        assert_eq!(Stencil::new(&xs, 6.9).unwrap().start, 3);
        assert_eq!(Stencil::new(&xs, 3.4).unwrap().start, 1);
        assert_eq!(Stencil::new(&xs, 3.6).unwrap().start, 2);
        assert!(Stencil::new(&xs, 7.5).unwrap().extrapolated);
        assert!(!Stencil::new(&xs, 7.0).unwrap().extrapolated);
    }

    #[test]
    fn counter_counts() {
        reset_mls_invocations();
        let xs = grid(0.0, 1.0, 6);
        let _ = mls_interpolate(&xs, &[1.0; 6], 2.5).unwrap();
        let _ = mls_interpolate(&xs, &[1.0; 6], 3.5).unwrap();
        assert_eq!(mls_invocations(), 2);
    }

    #[test]
    fn blended_reproduces_quartic_and_nodes() {
        let q = |x: f64| 0.3 * x.powi(4) - x.powi(3) + 2.0 * x - 0.5;
        let xs = [-1.3, -0.2, 0.1, 0.9, 1.7, 2.0, 2.6, 3.1];
        let vs: Vec<f64> = xs.iter().map(|&x| q(x)).collect();
        for i in 0..300 {
            let x = -1.3 + 4.4 * i as f64 / 299.0;
            let st = Stencil::blended(&xs, x).unwrap();
            assert!((st.apply(&vs) - q(x)).abs() < 1e-10);
        }
        let ws: Vec<f64> = xs.iter().map(|&x| (3.0 * x).sin()).collect();
        for (x, w) in xs.iter().zip(&ws) {
            assert!((Stencil::blended(&xs, *x).unwrap().apply(&ws) - w).abs() < 1e-14);
        }
    }

    #[test]
    fn blended_is_continuous_where_nearest_jumps() {
        let xs = grid(0.0, 0.2, 12);
        let vs: Vec<f64> = xs.iter().map(|&x| (4.0 * x).sin()).collect();
        // midpoint between nodes 5 and 6, where the nearest-node window moves
        let mid = 0.5 * (xs[5] + xs[6]);
        let eps = 1e-9;
        let jump = |f: &dyn Fn(f64) -> f64| (f(mid + eps) - f(mid - eps)).abs();
        let nearest = |x: f64| mls_interpolate(&xs, &vs, x).unwrap();
        let blended = |x: f64| Stencil::blended(&xs, x).unwrap().apply(&vs);
        assert!(jump(&nearest) > 1e-5);
        assert!(jump(&blended) < 1e-7);
        // slope is continuous across a node too
        let slope = |x: f64| (blended(x + 1e-7) - blended(x - 1e-7)) / 2e-7;
        assert!((slope(xs[6] - 1e-5) - slope(xs[6] + 1e-5)).abs() < 1e-3);
    }

    fn lagrange(xs: &[f64], vs: &[f64], q: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..xs.len() {
            let mut l = 1.0;
            for k in 0..xs.len() {
                if k != i {
                    l *= (q - xs[k]) / (xs[i] - xs[k]);
                }
            }
            s += vs[i] * l;
        }
        s
    }

    proptest! {
        #[test]
        fn uniform_nodes_equal_lagrange(
            a in -5.0..5.0f64, h in 0.01..1.0f64, vs in proptest::collection::vec(-3.0..3.0f64, 5), t in 0.0..1.0f64
        ) {
            let xs = grid(a, h, 5);
            let q = a + 4.0 * h * t;
            let got = mls_interpolate(&xs, &vs, q).unwrap();
            prop_assert!((got - lagrange(&xs, &vs, q)).abs() < 1e-12);
        }

        #[test]
        fn constant_preserved(vals in proptest::collection::vec(0.01..1.0f64, 5..20), c in -4.0..4.0f64, t in 0.0..1.0f64) {
            let mut xs = Vec::with_capacity(vals.len());
            let mut x = 0.0;
            for d in &vals { x += d; xs.push(x); }
            let q = xs[0] + (xs[xs.len() - 1] - xs[0]) * t;
            let vs = vec![c; xs.len()];
            prop_assert!((mls_interpolate(&xs, &vs, q).unwrap() - c).abs() < 1e-9);
        }
    }
}
