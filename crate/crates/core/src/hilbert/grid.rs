use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Momentum,
    Position,
}

impl Representation {
    pub fn conjugate(self) -> Self {
        match self {
            Representation::Momentum => Representation::Position,
            Representation::Position => Representation::Momentum,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Representation::Momentum => "momentum",
            Representation::Position => "position",
        }
    }
}

/// Uniform 3D momentum grid, symmetric about the origin, with its implied
/// conjugate position grid.
///
/// Axis `a` has `n[a]` nodes at `p = (k − n/2)·dp`, `dp = 2 p_max / n`; the
/// position nodes are `x = (l − n/2)·dx` with `dx = 2π / (n·dp)` (ħ = 1). Both
/// grids contain their origin. Storage is row-major with z fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumGrid {
    n: [usize; 3],
    p_max: [f64; 3],
}

impl MomentumGrid {
    /// Cubic grid with `n` points per axis.
    pub fn new(n: usize, p_max: f64) -> Result<Self> {
        Self::anisotropic([n; 3], [p_max; 3])
    }

    pub fn anisotropic(n: [usize; 3], p_max: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if n[a] < 2 || !n[a].is_power_of_two() {
                return Err(Error::validation(format!(
                    "grid size {} on axis {a} is not a power of two >= 2",
                    n[a]
                )));
            }
            if !(p_max[a].is_finite() && p_max[a] > 0.0) {
                return Err(Error::validation(format!(
                    "p_max {} on axis {a} must be positive and finite",
                    p_max[a]
                )));
            }
        }
        Ok(MomentumGrid { n, p_max })
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    pub fn p_max(&self) -> [f64; 3] {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dp(&self, axis: usize) -> f64 {
        2.0 * self.p_max[axis] / self.n[axis] as f64
    }

    pub fn dx(&self, axis: usize) -> f64 {
        2.0 * PI / (self.n[axis] as f64 * self.dp(axis))
    }

    /// Half-length of the periodic position box along `axis`.
    pub fn x_max(&self, axis: usize) -> f64 {
        0.5 * self.n[axis] as f64 * self.dx(axis)
    }

    pub fn spacing(&self, axis: usize, repr: Representation) -> f64 {
        match repr {
            Representation::Momentum => self.dp(axis),
            Representation::Position => self.dx(axis),
        }
    }

    pub fn cell_volume(&self, repr: Representation) -> f64 {
        (0..3).map(|a| self.spacing(a, repr)).product()
    }

    pub fn coordinate(&self, axis: usize, k: usize, repr: Representation) -> f64 {
        (k as f64 - (self.n[axis] / 2) as f64) * self.spacing(axis, repr)
    }

    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => self.n[1] * self.n[2],
            1 => self.n[2],
            _ => 1,
        }
    }

    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n[1] + i[1]) * self.n[2] + i[2]
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.n[2];
        let j = (idx / self.n[2]) % self.n[1];
        let i = idx / (self.n[1] * self.n[2]);
        [i, j, k]
    }

    pub fn node(&self, idx: usize, repr: Representation) -> [f64; 3] {
        let m = self.multi_index(idx);
        [0, 1, 2].map(|a| self.coordinate(a, m[a], repr))
    }

    pub fn node_momentum(&self, idx: usize) -> [f64; 3] {
        self.node(idx, Representation::Momentum)
    }

    pub fn node_position(&self, idx: usize) -> [f64; 3] {
        self.node(idx, Representation::Position)
    }

    /// Index of the node closest to the given coordinate, if inside the grid.
    pub fn nearest_node(&self, x: [f64; 3], repr: Representation) -> Option<usize> {
        let mut m = [0usize; 3];
        for a in 0..3 {
            let k = (x[a] / self.spacing(a, repr)).round() + (self.n[a] / 2) as f64;
            if k < 0.0 || k >= self.n[a] as f64 {
                return None;
            }
            m[a] = k as usize;
        }
        Some(self.index(m))
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let m = self.multi_index(idx);
        (0..3).any(|a| m[a] == 0 || m[a] == self.n[a] - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacings() {
        let g = MomentumGrid::new(16, 4.0).unwrap();
        assert_eq!(g.dp(0), 0.5);
        assert!((g.dx(1) - 2.0 * PI / (16.0 * 0.5)).abs() < 1e-15);
        assert!((g.dx(2) - 0.785_398_163_397_448_3).abs() < 1e-15);
        // dx·dp·n = 2πħ
        assert!((g.dx(0) * g.dp(0) * 16.0 - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(MomentumGrid::new(7, 4.0), Err(Error::Validation(_))));
        assert!(MomentumGrid::new(16, 0.0).is_err());
        assert!(MomentumGrid::new(16, f64::NAN).is_err());
        assert!(MomentumGrid::anisotropic([16, 1, 16], [1.0; 3]).is_err());
    }

    #[test]
    fn symmetric_about_origin() {
        let g = MomentumGrid::anisotropic([8, 16, 32], [2.0, 1.0, 3.0]).unwrap();
        for a in 0..3 {
            let n = g.n()[a];
            assert_eq!(g.coordinate(a, n / 2, Representation::Momentum), 0.0);
            assert_eq!(g.coordinate(a, 0, Representation::Momentum), -g.p_max()[a]);
            assert_eq!(g.coordinate(a, n / 2, Representation::Position), 0.0);
        }
        let idx = g.index([3, 7, 30]);
        assert_eq!(g.multi_index(idx), [3, 7, 30]);
        assert_eq!(g.nearest_node([0.0; 3], Representation::Momentum), Some(g.index([4, 8, 16])));
    }
}
