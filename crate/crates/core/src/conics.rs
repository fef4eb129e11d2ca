//! Sample points on the conics `x1² − z·x1·x2 + x2² + 1 = 0`.
//!
//! Each curve is split into real points and purely imaginary points
//! `x = i·u`. In the rotated coordinates `a = (p+q)/√2, b = (p−q)/√2` the
//! quadratic form is `α p² + β q²` with `α = 1 − z/2`, `β = 1 + z/2`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Branches are clipped to coordinates of this size.
const CLIP: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSample {
    pub z: f64,
    pub branch: String,
    pub t: f64,
    pub x1: Complex64,
    pub x2: Complex64,
}

/// `x1² − z·x1·x2 + x2² + 1`.
pub fn residual(z: f64, x1: Complex64, x2: Complex64) -> Complex64 {
    x1 * x1 - z * x1 * x2 + x2 * x2 + 1.0
}

/// The four points with one coordinate zero, common to every curve.
pub fn base_points() -> [(Complex64, Complex64); 4] {
    let i = Complex64::i();
    let o = Complex64::new(0.0, 0.0);
    [(o, i), (o, -i), (i, o), (-i, o)]
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

/// Parameter range for `cosh(t)/√c` staying inside the clip box.
fn hyperbola_range(c: f64) -> f64 {
    (CLIP * c.sqrt()).max(1.0).acosh()
}

/// Real solutions `(a, b)` of `a² − z·a·b + b² = target`, `target = ±1`,
/// grouped by branch.
fn real_branches(z: f64, target: f64, samples: usize) -> Vec<(usize, Vec<(f64, f64, f64)>)> {
    let alpha = 1.0 - z / 2.0;
    let beta = 1.0 + z / 2.0;
    let rotate = |p: f64, q: f64| ((p + q) * FRAC_1_SQRT_2, (p - q) * FRAC_1_SQRT_2);
    let mut out = Vec::new();
    if alpha == 0.0 || beta == 0.0 {
        // z = ±2: the form is a square (a ∓ b)², giving two lines for target 1
        if target > 0.0 {
            let s = if alpha == 0.0 { 1.0 } else { -1.0 };
            for (idx, c) in [1.0, -1.0].into_iter().enumerate() {
                let pts = linspace(-CLIP, CLIP, samples)
                    .map(|t| (t, t, s * t - s * c))
                    .collect();
                out.push((idx, pts));
            }
        }
        return out;
    }
    let (ta, tb) = (target * alpha, target * beta);
    if ta > 0.0 && tb > 0.0 {
        let pts = (0..samples)
            .map(|k| {
                let t = TAU * k as f64 / samples as f64;
                let (a, b) = rotate(t.cos() / ta.sqrt(), t.sin() / tb.sqrt());
                (t, a, b)
            })
            .collect();
        out.push((0, pts));
    } else if ta > 0.0 {
        let range = hyperbola_range(ta);
        for (idx, sign) in [1.0, -1.0].into_iter().enumerate() {
            let pts = linspace(-range, range, samples)
                .map(|t| {
                    let (a, b) = rotate(sign * t.cosh() / ta.sqrt(), t.sinh() / (-tb).sqrt());
                    (t, a, b)
                })
                .collect();
            out.push((idx, pts));
        }
    } else if tb > 0.0 {
        let range = hyperbola_range(tb);
        for (idx, sign) in [1.0, -1.0].into_iter().enumerate() {
            let pts = linspace(-range, range, samples)
                .map(|t| {
                    let (a, b) = rotate(t.sinh() / (-ta).sqrt(), sign * t.cosh() / tb.sqrt());
                    (t, a, b)
                })
                .collect();
            out.push((idx, pts));
        }
    }
    out
}

/// Samples of every branch of every curve, followed by the base points
/// under branch name `base`.
pub fn conic_samples(zs: &[f64], samples: usize) -> Result<Vec<ConicSample>> {
    if samples < 2 {
        return Err(Error::HypothesisViolated(format!(
            "need at least 2 samples per branch, got {samples}"
        )));
    }
    if let Some(z) = zs.iter().find(|z| !z.is_finite()) {
        return Err(Error::HypothesisViolated(format!("z = {z} is not finite")));
    }
    let mut out = Vec::new();
    for &z in zs {
        for (idx, pts) in real_branches(z, -1.0, samples) {
            for (t, a, b) in pts {
                out.push(ConicSample {
                    z,
                    branch: format!("real-{}", idx + 1),
                    t,
                    x1: Complex64::new(a, 0.0),
                    x2: Complex64::new(b, 0.0),
                });
            }
        }
        for (idx, pts) in real_branches(z, 1.0, samples) {
            for (t, a, b) in pts {
                out.push(ConicSample {
                    z,
                    branch: format!("imag-{}", idx + 1),
                    t,
                    x1: Complex64::new(0.0, a),
                    x2: Complex64::new(0.0, b),
                });
            }
        }
        for (k, (x1, x2)) in base_points().into_iter().enumerate() {
            out.push(ConicSample {
                z,
                branch: "base".into(),
                t: k as f64,
                x1,
                x2,
            });
        }
    }
    Ok(out)
}

/// Number of distinct non-base branches sampled for `z`.
pub fn branch_count(samples: &[ConicSample], z: f64) -> usize {
    let mut names: Vec<&str> = samples
        .iter()
        .filter(|s| s.z == z && s.branch != "base")
        .map(|s| s.branch.as_str())
        .collect();
    names.sort_unstable();
    names.dedup();
    names.len()
}
