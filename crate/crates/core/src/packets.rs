//! Gaussian spinor wave packets of definite spin and energy branch, and a grid
//! planner that sizes the momentum grid so a packet stays localized.

use rayon::prelude::*;

use crate::algebra::{spinor_norm_sqr, Spinor4, C64, ZERO};
use crate::error::{Error, Result};
use crate::hilbert::{expectation, MomentumGrid, Representation, SpinorField, LOCALIZATION_THRESHOLD};
use crate::operators::{energy, energy_projector, energy_projector_field, Branch, ModelParams};

/// Energy content of a packet. `Mixed(w)` puts amplitude weight `√(1−w)` on
/// the positive branch and `√w` on the negative one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BranchMix {
    Plus,
    Minus,
    Mixed(f64),
}

impl BranchMix {
    /// Amplitude weights on the (positive, negative) branches.
    pub fn weights(self) -> (f64, f64) {
        match self {
            BranchMix::Plus => (1.0, 0.0),
            BranchMix::Minus => (0.0, 1.0),
            BranchMix::Mixed(w) => ((1.0 - w).sqrt(), w.sqrt()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketSpec {
    pub p_center: [f64; 3],
    pub sigma_p: [f64; 3],
    /// Position centre, applied as the phase `exp(−i p·R)`.
    pub r_center: [f64; 3],
    pub branch: BranchMix,
    pub spin_axis: [f64; 3],
    pub spin_sign: f64,
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec {
            p_center: [0.0; 3],
            sigma_p: [0.1; 3],
            r_center: [0.0; 3],
            branch: BranchMix::Plus,
            spin_axis: [0.0, 0.0, 1.0],
            spin_sign: 1.0,
        }
    }
}

impl PacketSpec {
    pub fn new(p_center: [f64; 3], sigma_p: [f64; 3], branch: BranchMix) -> Self {
        PacketSpec {
            p_center,
            sigma_p,
            branch,
            ..Default::default()
        }
    }

    pub fn with_r_center(mut self, r: [f64; 3]) -> Self {
        self.r_center = r;
        self
    }

    pub fn with_spin(mut self, axis: [f64; 3], sign: f64) -> Self {
        self.spin_axis = axis;
        self.spin_sign = sign;
        self
    }

    /// Spin quantized along the packet momentum (helicity).
    pub fn with_helicity(self, sign: f64) -> Self {
        let axis = if self.p_center.iter().all(|&c| c == 0.0) {
            [0.0, 0.0, 1.0]
        } else {
            self.p_center
        };
        self.with_spin(axis, sign)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: [f64; 3]| v.iter().all(|c| c.is_finite());
        if !(finite(self.p_center) && finite(self.r_center) && finite(self.spin_axis)) {
            return Err(Error::validation("packet vectors must be finite"));
        }
        if self.sigma_p.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::validation(format!("sigma_p {:?} must be positive", self.sigma_p)));
        }
        if let BranchMix::Mixed(w) = self.branch {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::validation(format!("mixing weight {w} outside [0, 1]")));
            }
        }
        if self.spin_axis.iter().map(|c| c * c).sum::<f64>() == 0.0 {
            return Err(Error::validation("spin axis must be non-zero"));
        }
        if self.spin_sign != 1.0 && self.spin_sign != -1.0 {
            return Err(Error::validation(format!("spin sign {} must be +1 or -1", self.spin_sign)));
        }
        Ok(())
    }

    fn check_containment(&self, grid: &MomentumGrid) -> Result<()> {
        for a in 0..3 {
            let reach = self.p_center[a].abs() + 4.0 * self.sigma_p[a];
            if reach >= grid.p_max()[a] {
                return Err(Error::validation(format!(
                    "packet reaches |p| = {reach:.4} on axis {a}, beyond p_max = {:.4}",
                    grid.p_max()[a]
                )));
            }
        }
        Ok(())
    }

    /// `exp(−(p−P)²/4σ²) · exp(−i p·R)` (unnormalized).
    pub fn envelope(&self, p: [f64; 3]) -> C64 {
        let mut q = 0.0;
        let mut phase = 0.0;
        for a in 0..3 {
            q += (p[a] - self.p_center[a]).powi(2) / (4.0 * self.sigma_p[a] * self.sigma_p[a]);
            phase -= p[a] * self.r_center[a];
        }
        C64::from_polar((-q).exp(), phase)
    }
}

/// Two-component eigenvector of `σ·n` with eigenvalue `sign`.
pub fn pauli_eigenspinor(axis: [f64; 3], sign: f64) -> [C64; 2] {
    let len = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    let [x, y, z] = axis.map(|c| c / len);
    let (a, b) = if sign > 0.0 {
        if z > -0.5 {
            (C64::new(1.0 + z, 0.0), C64::new(x, y))
        } else {
            (C64::new(x, -y), C64::new(1.0 - z, 0.0))
        }
    } else if z > -0.5 {
        (C64::new(x, -y), C64::new(-(1.0 + z), 0.0))
    } else {
        (C64::new(-(1.0 - z), 0.0), C64::new(x, y))
    };
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

/// Rest-frame spinor of the given branch: spin in the upper components for
/// the positive branch, in the lower ones for the negative branch.
pub fn rest_spinor(axis: [f64; 3], sign: f64, branch: Branch) -> Spinor4 {
    let [a, b] = pauli_eigenspinor(axis, sign);
    match branch {
        Branch::Plus => [a, b, ZERO, ZERO],
        Branch::Minus => [ZERO, ZERO, a, b],
    }
}

/// `Λ_b(p) χ_b / |Λ_b(p) χ_b|`.
fn boosted(p: [f64; 3], spec: &PacketSpec, branch: Branch, params: &ModelParams) -> Result<Spinor4> {
    let chi = rest_spinor(spec.spin_axis, spec.spin_sign, branch);
    let u = energy_projector(p, branch, params)?.apply(&chi);
    let n = spinor_norm_sqr(&u).sqrt();
    if n < 1e-300 {
        return Err(Error::SingularProjector { p });
    }
    Ok(u.map(|c| c / n))
}

/// Normalized momentum-space Gaussian packet whose spinor at each node is the
/// rest-frame spin state projected onto the requested branch (or the
/// amplitude mixture of both).
pub fn build_gaussian(spec: &PacketSpec, grid: &MomentumGrid, params: &ModelParams) -> Result<SpinorField> {
    spec.validate()?;
    params.validate()?;
    spec.check_containment(grid)?;
    let (wp, wm) = spec.branch.weights();
    // Massless grids contain E = 0 at the origin; it may be skipped only
    // when the envelope is negligible there.
    let peak = spec.envelope(spec.p_center).norm();
    let data = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let p = grid.node_momentum(i);
            let env = spec.envelope(p);
            if energy(p, params.m0) == 0.0 {
                if env.norm() > LOCALIZATION_THRESHOLD * peak {
                    return Err(Error::SingularProjector { p });
                }
                return Ok([ZERO; 4]);
            }
            let mut v = [ZERO; 4];
            for (w, b) in [(wp, Branch::Plus), (wm, Branch::Minus)] {
                if w > 0.0 {
                    let u = boosted(p, spec, b, params)?;
                    for c in 0..4 {
                        v[c] += u[c] * (env * w);
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<Vec<Spinor4>>>()?;
    SpinorField::new(*grid, Representation::Momentum, data)?.normalized()
}

/// Gaussian packet with the same constant spinor at every node (for instance
/// an eigenspinor of `α_z`). Branch and spin fields of `spec` are ignored.
pub fn build_constant_spinor(spec: &PacketSpec, spinor: Spinor4, grid: &MomentumGrid) -> Result<SpinorField> {
    spec.validate()?;
    spec.check_containment(grid)?;
    if spinor_norm_sqr(&spinor) == 0.0 {
        return Err(Error::validation("spinor must be non-zero"));
    }
    SpinorField::from_fn(*grid, Representation::Momentum, |p| {
        let e = spec.envelope(p);
        spinor.map(|c| c * e)
    })
    .normalized()
}

/// Normalized eigenvector of `α_axis` with eigenvalue `sign` and spin up
/// along the same axis in the upper block.
pub fn alpha_eigenspinor(axis: usize, sign: f64) -> Spinor4 {
    let mut dir = [0.0; 3];
    dir[axis] = 1.0;
    let [a, b] = pauli_eigenspinor(dir, 1.0);
    // α_k (χ, sχ') = s (χ, sχ') requires χ' = σ_k χ.
    let s2 = crate::algebra::pauli()[axis];
    let lower = [s2[0][0] * a + s2[0][1] * b, s2[1][0] * a + s2[1][1] * b];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [a * r, b * r, lower[0] * (sign * r), lower[1] * (sign * r)]
}

/// `⟨Λ₊⟩`: 1 for a pure positive-branch field, 0 for a pure negative one.
pub fn branch_purity(field: &SpinorField, params: &ModelParams) -> Result<f64> {
    let norm = field.norm_sqr();
    if norm == 0.0 {
        return Err(Error::validation("branch purity of a zero field"));
    }
    let lp = energy_projector_field(Branch::Plus, params);
    Ok((expectation(field, &lp)?.re / norm).clamp(0.0, 1.0))
}

/// Relative safety factors on the planned tail widths and extents. Sampled
/// Gaussians transform to Gaussians almost exactly, so small margins suffice.
const TAIL_MARGIN: f64 = 1.01;
const EXTENT_MARGIN: f64 = 1.02;
const PLAN_MAX_NODES: usize = 1 << 23;

/// Distance, in Gaussian widths of the amplitude `exp(−u²/4)`, at which the
/// amplitude drops to the localization threshold.
fn tail_width() -> f64 {
    2.0 * (-LOCALIZATION_THRESHOLD.ln()).sqrt()
}

/// Chooses per-axis node counts and extents so that `spec` stays localized in
/// both representations over `0 ≤ t ≤ t_max` of free evolution. `min_n` sets
/// a floor on every axis.
pub fn plan_grid(spec: &PacketSpec, params: &ModelParams, t_max: f64, min_n: usize) -> Result<MomentumGrid> {
    spec.validate()?;
    if !t_max.is_finite() {
        return Err(Error::validation("planning horizon must be finite"));
    }
    let w = tail_width() * TAIL_MARGIN;
    let e0 = energy(spec.p_center, params.m0);
    let zbw = if matches!(spec.branch, BranchMix::Plus | BranchMix::Minus) || params.m0 == 0.0 {
        0.0
    } else {
        1.0 / params.m0
    };
    // ln(1/threshold) plus one decade for the kernel prefactor
    let proj_log = -LOCALIZATION_THRESHOLD.ln() + 10f64.ln();
    let p_len = spec.p_center.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut n = [0usize; 3];
    let mut p_max = [0.0; 3];
    for a in 0..3 {
        let s = spec.sigma_p[a];
        let p_need = spec.p_center[a].abs() + w * s;
        // group-velocity spread: |∂v/∂p| ≤ 1/E over the packet
        let p_low = (p_len - w * spec.sigma_p.iter().cloned().fold(0.0, f64::max)).max(0.0);
        let e_low = (p_low * p_low + params.m0 * params.m0).sqrt();
        let sigma_v = if e_low > 0.0 { (s / e_low).min(1.0) } else { 1.0 };
        let v = if e0 > 0.0 { (spec.p_center[a] / e0).abs() } else { 1.0 };
        let sx0 = 1.0 / (2.0 * s);
        let sx = (sx0 * sx0 + (sigma_v * t_max).powi(2)).sqrt();
        let mut x_need = spec.r_center[a].abs() + v * t_max.abs() + zbw + w * sx;
        // The branch projector is analytic only for |Im p| < m, so projected
        // packets carry an exp(−m|x|) tail; convolved with the Gaussian it sits
        // at exp(−m x + m²/4σ²) and beats the Gaussian once σ > m/(2√L).
        if params.m0 > 0.0 && s * s * 4.0 * proj_log > params.m0 * params.m0 {
            let m = params.m0;
            x_need = x_need.max(spec.r_center[a].abs() + t_max.abs() + proj_log / m + m / (4.0 * s * s));
        }
        let x_need = x_need * EXTENT_MARGIN;
        let mut k = min_n.max(16).next_power_of_two();
        loop {
            // the last positive node sits one spacing below the extent
            let pm = p_need * k as f64 / (k - 2) as f64;
            let dp = 2.0 * pm / k as f64;
            let xm = std::f64::consts::PI / dp;
            if xm * (1.0 - 2.0 / k as f64) >= x_need {
                p_max[a] = pm;
                break;
            }
            k *= 2;
            if k > PLAN_MAX_NODES {
                return Err(Error::validation(format!("packet needs more than {PLAN_MAX_NODES} nodes on axis {a}")));
            }
        }
        n[a] = k;
    }
    if n.iter().product::<usize>() > PLAN_MAX_NODES {
        return Err(Error::validation(format!(
            "planned grid {}x{}x{} exceeds {PLAN_MAX_NODES} nodes",
            n[0], n[1], n[2]
        )));
    }
    MomentumGrid::anisotropic(n, p_max)
}

/// Single-node field carrying the spinor `u` at the node nearest to `p`.
pub fn plane_wave(grid: &MomentumGrid, p: [f64; 3], u: Spinor4) -> Result<SpinorField> {
    let idx = grid
        .nearest_node(p, Representation::Momentum)
        .ok_or_else(|| Error::validation(format!("momentum {p:?} is outside the grid")))?;
    let mut f = SpinorField::zeros(*grid, Representation::Momentum);
    f.data_mut()[idx] = u;
    f.normalized()
}

/// Positive-branch plane-wave spinor of definite spin at momentum `p`.
pub fn plane_wave_spinor(p: [f64; 3], axis: [f64; 3], sign: f64, branch: Branch, params: &ModelParams) -> Result<Spinor4> {
    let spec = PacketSpec::default().with_spin(axis, sign);
    boosted(p, &spec, branch, params)
}
