//! Unitary, grid-centred discrete Fourier transforms between the momentum and
//! position grids, applied one axis at a time.
//!
//! With `p_k = (k − n/2) dp` and `x_l = (l − n/2) dx`,
//!
//! ```text
//! ψ(x_l) = (2π)^{-1/2} Σ_k exp(+i p_k x_l) ψ(p_k) dp
//! ψ(p_k) = (2π)^{-1/2} Σ_l exp(−i p_k x_l) ψ(x_l) dx
//! ```
//!
//! which reduces to an FFT sandwiched between `(−1)^k` sign factors.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{MomentumGrid, Representation};
use crate::algebra::{Spinor4, C64, ZERO};

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Offsets of the first node of every line along `axis`.
fn line_bases(grid: &MomentumGrid, axis: usize) -> Vec<usize> {
    let n = grid.n();
    let mut bases = Vec::with_capacity(grid.len() / n[axis]);
    for i in 0..n[0] {
        for j in 0..n[1] {
            for k in 0..n[2] {
                let m = [i, j, k];
                if m[axis] == 0 {
                    bases.push(grid.index(m));
                }
            }
        }
    }
    bases
}

struct AxisPlan {
    fft: Arc<dyn Fft<f64>>,
    n: usize,
    stride: usize,
    pre: Vec<f64>,
    post: Vec<f64>,
}

impl AxisPlan {
    fn new(grid: &MomentumGrid, axis: usize, target: Representation) -> Self {
        let n = grid.n()[axis];
        let mut planner = FftPlanner::new();
        let (fft, scale) = match target {
            Representation::Position => (planner.plan_fft_inverse(n), grid.dp(axis) / (2.0 * PI).sqrt()),
            Representation::Momentum => (planner.plan_fft_forward(n), grid.dx(axis) / (2.0 * PI).sqrt()),
        };
        let half = sign(n / 2);
        AxisPlan {
            fft,
            n,
            stride: grid.stride(axis),
            pre: (0..n).map(sign).collect(),
            post: (0..n).map(|k| sign(k) * half * scale).collect(),
        }
    }

    /// Transforms one line, then multiplies node `l` of the result by
    /// `weight(l)` when given.
    fn run(
        &self,
        data: &[Spinor4],
        base: usize,
        stride: usize,
        weight: Option<&(dyn Fn(usize) -> C64 + Sync)>,
    ) -> Vec<Spinor4> {
        let n = self.n;
        let mut buf = vec![ZERO; n];
        let mut scratch = vec![ZERO; self.fft.get_inplace_scratch_len()];
        let mut out = vec![[ZERO; 4]; n];
        for c in 0..4 {
            for l in 0..n {
                buf[l] = data[base + l * stride][c] * self.pre[l];
            }
            self.fft.process_with_scratch(&mut buf, &mut scratch);
            for l in 0..n {
                let mut v = buf[l] * self.post[l];
                if let Some(w) = weight {
                    v *= w(l);
                }
                out[l][c] = v;
            }
        }
        out
    }
}

fn scatter(data: &mut [Spinor4], stride: usize, lines: Vec<(usize, Vec<Spinor4>)>) {
    for (base, line) in lines {
        for (l, v) in line.into_iter().enumerate() {
            data[base + l * stride] = v;
        }
    }
}

/// Transforms `data` along `axis` from the representation conjugate to
/// `target` into `target`.
pub(crate) fn transform_axis(data: &mut [Spinor4], grid: &MomentumGrid, axis: usize, target: Representation) {
    let plan = AxisPlan::new(grid, axis, target);
    let lines: Vec<(usize, Vec<Spinor4>)> = line_bases(grid, axis)
        .into_par_iter()
        .map(|b| (b, plan.run(data, b, plan.stride, None)))
        .collect();
    scatter(data, plan.stride, lines);
}

/// Transforms all three axes.
pub(crate) fn transform(data: &mut [Spinor4], grid: &MomentumGrid, target: Representation) {
    for axis in 0..3 {
        transform_axis(data, grid, axis, target);
    }
}

/// Applies a multiplication operator that is diagonal in the representation
/// conjugate to `current` along one axis: transform along `axis`, multiply node
/// `l` by `weight(coordinate_l)`, transform back.
///
/// With `current = Momentum` and `weight(x) = x` this is the spectral form of
/// `i ∂/∂p` along `axis`.
pub(crate) fn conjugate_multiply(
    data: &[Spinor4],
    grid: &MomentumGrid,
    axis: usize,
    current: Representation,
    weight: impl Fn(f64) -> C64 + Sync,
) -> Vec<Spinor4> {
    let conj = current.conjugate();
    let forward = AxisPlan::new(grid, axis, conj);
    let backward = AxisPlan::new(grid, axis, current);
    let w = |l: usize| weight(grid.coordinate(axis, l, conj));
    let bases = line_bases(grid, axis);
    let lines: Vec<(usize, Vec<Spinor4>)> = bases
        .into_par_iter()
        .map(|b| {
            let mid = forward.run(data, b, forward.stride, Some(&w));
            (b, backward.run(&mid, 0, 1, None))
        })
        .collect();
    let mut out = vec![[ZERO; 4]; data.len()];
    for (base, line) in lines {
        for (l, v) in line.into_iter().enumerate() {
            out[base + l * forward.stride] = v;
        }
    }
    out
}

/// Fourth-order central difference `∂/∂q` along `axis`, periodic.
pub(crate) fn central_difference4(data: &[Spinor4], grid: &MomentumGrid, axis: usize, h: f64) -> Vec<Spinor4> {
    let n = grid.n()[axis];
    let stride = grid.stride(axis);
    let inv = 1.0 / (12.0 * h);
    (0..data.len())
        .into_par_iter()
        .map(|idx| {
            let l = grid.multi_index(idx)[axis];
            let at = |shift: isize| {
                let ll = (l as isize + shift).rem_euclid(n as isize) as usize;
                data[idx - l * stride + ll * stride]
            };
            let (m2, m1, p1, p2) = (at(-2), at(-1), at(1), at(2));
            let mut out = [ZERO; 4];
            for c in 0..4 {
                out[c] = (m2[c] - p2[c] + (p1[c] - m1[c]) * 8.0) * inv;
            }
            out
        })
        .collect()
}
