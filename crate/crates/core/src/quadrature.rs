//! Composite tensor Gauss–Legendre quadrature on cubes.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

const ORDER: usize = 8;
const MAX_PANELS: usize = 64;

/// Nodes and weights of the composite rule on `[-l, l]` with `panels`
/// equal panels of `ORDER` points each.
pub fn composite_rule(l: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(ORDER).expect("nonzero order"));
    let h = 2.0 * l / panels as f64;
    let mut out = Vec::with_capacity(panels * ORDER);
    for p in 0..panels {
        let a = -l + p as f64 * h;
        for (x, w) in rule.iter() {
            out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// `∫_{[-l,l]^dim} f` with a fixed composite rule.
pub fn integrate_cube<F>(f: &F, dim: usize, l: f64, panels: usize) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    integrate_box(f, &vec![l; dim], panels)
}

/// `∫ f` over `∏_k [-l_k, l_k]` with a fixed composite rule.
pub fn integrate_box<F>(f: &F, half_widths: &[f64], panels: usize) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = half_widths.len();
    if dim == 0 {
        return f(&[]);
    }
    let rules: Vec<Vec<(f64, f64)>> = half_widths.iter().map(|&l| composite_rule(l, panels)).collect();
    rules[0]
        .par_iter()
        .map(|&(x0, w0)| {
            let mut point = vec![0.0; dim];
            point[0] = x0;
            w0 * tensor_sum(f, &rules, &mut point, 1)
        })
        .sum()
}

fn tensor_sum<F>(f: &F, rules: &[Vec<(f64, f64)>], point: &mut Vec<f64>, axis: usize) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    if axis == point.len() {
        return f(point);
    }
    let mut acc = 0.0;
    for &(x, w) in &rules[axis] {
        point[axis] = x;
        acc += w * tensor_sum(f, rules, point, axis + 1);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub panels: usize,
    /// Difference between the last two refinements.
    pub estimate_change: f64,
}

/// Double the panel count until two successive values agree to `tol`.
pub fn integrate_adaptive<F>(f: &F, half_widths: &[f64], tol: f64) -> QuadratureResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut panels = 1;
    let mut prev = integrate_box(f, half_widths, panels);
    loop {
        panels *= 2;
        let cur = integrate_box(f, half_widths, panels);
        let change = (cur - prev).abs();
        if change <= tol * cur.abs().max(1.0) || panels >= MAX_PANELS {
            return QuadratureResult {
                value: cur,
                panels,
                estimate_change: change,
            };
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate_cube(&|x: &[f64]| x[0].powi(4), 1, 1.0, 1);
        assert!((v - 0.4).abs() < 1e-14);
        let v = integrate_cube(&|x: &[f64]| x[0] * x[0] * x[1] * x[1], 2, 1.0, 2);
        assert!((v - 4.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn anisotropic_box() {
        let v = integrate_box(&|x: &[f64]| x[0] * x[0] + x[1], &[1.0, 3.0], 1);
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_in_three_dimensions() {
        let r = integrate_adaptive(
            &|x: &[f64]| (-PI * x.iter().map(|t| t * t).sum::<f64>()).exp(),
            &[6.0; 3],
            1e-10,
        );
        assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
    }
}
