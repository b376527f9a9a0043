use crate::algebra::{dirac, hermitian_eigensystem, spinor_dot, Matrix4, Spinor4, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::operators::{time_operator_at, ModelParams};

/// Eigen-system of `T = α_z r + βτ₀` at a point `r ẑ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeEigensystem {
    pub r: f64,
    pub tau0: f64,
    pub tau_r: f64,
    /// `(τ, spin)` for each spinor, in the order (+τ_r, +½), (+τ_r, −½),
    /// (−τ_r, +½), (−τ_r, −½).
    pub labels: [(f64, f64); 4],
    pub spinors: [Spinor4; 4],
    pub normalization: f64,
}

impl TimeEigensystem {
    pub fn operator(&self) -> Matrix4 {
        let params = ModelParams {
            tau0: self.tau0,
            ..Default::default()
        };
        time_operator_at([0.0, 0.0, self.r], &params)
    }

    /// `max_k ‖T u_k − τ_k u_k‖`.
    pub fn residual(&self) -> f64 {
        let t = self.operator();
        (0..4)
            .map(|k| {
                let tu = t.apply(&self.spinors[k]);
                (0..4)
                    .map(|c| (tu[c] - self.spinors[k][c] * self.labels[k].0).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |⟨u_j|u_k⟩ − δ_jk|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                let want = if j == k { ONE } else { ZERO };
                worst = worst.max((spinor_dot(&self.spinors[j], &self.spinors[k]) - want).norm());
            }
        }
        worst
    }

    /// Compares the table with an independent numerical diagonalization:
    /// the projector onto each eigenvalue's two-dimensional eigenspace, and
    /// within it the `Σ_z` labels. Returns the largest discrepancy.
    pub fn numeric_mismatch(&self) -> Result<f64> {
        let es = hermitian_eigensystem(&self.operator())?;
        let mut worst: f64 = 0.0;
        for (k, &(tau, _)) in self.labels.iter().enumerate().step_by(2) {
            worst = worst.max((es.values[if tau > 0.0 { 3 } else { 0 }] - tau).abs());
            let numeric = es.projector(|v| (v - tau).abs() < 1e-8 * (1.0 + tau.abs()));
            let table = Matrix4::outer(&self.spinors[k], &self.spinors[k])
                + Matrix4::outer(&self.spinors[k + 1], &self.spinors[k + 1]);
            // Degenerate eigenvalues (τ_r = 0) make both projectors span all four
            // dimensions; compare against the full identity in that case.
            let table = if self.tau_r == 0.0 { Matrix4::identity() } else { table };
            worst = worst.max((numeric - table).max_norm());
        }
        let sz = dirac().sigma[2];
        for k in 0..4 {
            let s = spinor_dot(&self.spinors[k], &sz.apply(&self.spinors[k])).re;
            worst = worst.max((s - 2.0 * self.labels[k].1).abs());
        }
        Ok(worst)
    }
}

/// Closed-form table of the four orthonormal eigenspinors of `T` for
/// `r = r_z ẑ`, with `ρ = r/(τ_r + τ₀)` and normalization
/// `{2τ_r/(τ_r + τ₀)}^{−1/2}`.
pub fn time_eigensystem(r_z: f64, params: &ModelParams) -> Result<TimeEigensystem> {
    if !(r_z.is_finite() && r_z >= 0.0) {
        return Err(Error::validation(format!("radius {r_z} must be finite and >= 0")));
    }
    params.validate()?;
    let tau0 = params.tau0;
    let tau_r = (r_z * r_z + tau0 * tau0).sqrt();
    let (rho, n) = if tau_r + tau0 == 0.0 {
        (0.0, 1.0)
    } else {
        (r_z / (tau_r + tau0), (2.0 * tau_r / (tau_r + tau0)).powf(-0.5))
    };
    let c = |v: f64| C64::new(v * n, 0.0);
    Ok(TimeEigensystem {
        r: r_z,
        tau0,
        tau_r,
        labels: [(tau_r, 0.5), (tau_r, -0.5), (-tau_r, 0.5), (-tau_r, -0.5)],
        spinors: [
            [c(1.0), c(0.0), c(rho), c(0.0)],
            [c(0.0), c(1.0), c(0.0), c(-rho)],
            [c(-rho), c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(rho), c(0.0), c(1.0)],
        ],
        normalization: n,
    })
}

/// Smallest distance between the positive and negative parts of the
/// spectrum of `T(r ẑ)` over the given radii, from numerical eigenvalues.
pub fn spectrum_gap(params: &ModelParams, radii: &[f64]) -> Result<f64> {
    let mut gap = f64::INFINITY;
    for &r in radii {
        let es = hermitian_eigensystem(&time_operator_at([0.0, 0.0, r], params))?;
        gap = gap.min(es.values[2] - es.values[1]);
    }
    Ok(gap)
}
