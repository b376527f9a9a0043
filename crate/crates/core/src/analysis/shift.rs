use crate::algebra::scalar_square_exponential;
use crate::error::{Error, Result};
use crate::hilbert::{Representation, SpinorField};
use crate::operators::{time_operator_at, ModelParams};

/// `U(ε)ψ` with `U(ε) = exp(iεT)`, applied node-wise in position space where
/// `T(r)` is a 4×4 matrix with `T² = r² + τ₀²`. Returns a momentum field.
pub fn momentum_shift(field: &SpinorField, epsilon: f64, params: &ModelParams) -> Result<SpinorField> {
    params.validate()?;
    field.require_normalized()?;
    if !epsilon.is_finite() {
        return Err(Error::validation("shift parameter must be finite"));
    }
    let g = *field.grid();
    for a in 0..3 {
        let limit = g.dp(a) * g.n()[a] as f64 / 8.0;
        if epsilon.abs() > limit {
            return Err(Error::validation(format!(
                "shift {epsilon} is not representable on axis {a} (limit {limit})"
            )));
        }
    }
    if epsilon == 0.0 {
        return Ok(field.to_representation(Representation::Momentum));
    }
    let p = *params;
    let x = field.to_representation(Representation::Position);
    let shifted = x.map_nodes(move |r| {
        let tau = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + p.tau0 * p.tau0).sqrt();
        scalar_square_exponential(&time_operator_at(r, &p), epsilon, tau)
    });
    Ok(shifted.to_representation(Representation::Momentum))
}

/// Exact `⟨p_z⟩` displacement for a field whose spinor is a constant `α_z`
/// eigenvector with eigenvalue `sign` and `τ₀ = 0`, from the position density:
/// `ε·sign·⟨n_z² + (1 − n_z²) sin(2εr)/(2εr)⟩`. Tends to `±ε` for packets
/// narrow compared to `1/ε`.
pub fn alpha_eigen_shift_oracle(field: &SpinorField, epsilon: f64, sign: f64) -> f64 {
    let x = field.to_representation(Representation::Position);
    let g = *x.grid();
    let dv = g.cell_volume(Representation::Position);
    let mut sum = 0.0;
    for (i, v) in x.data().iter().enumerate() {
        let r = g.node_position(i);
        let rr = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let w: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let (nz2, sinc) = if rr == 0.0 {
            (1.0, 1.0)
        } else {
            let u = 2.0 * epsilon * rr;
            ((r[2] / rr).powi(2), if u == 0.0 { 1.0 } else { u.sin() / u })
        };
        sum += w * (nz2 + (1.0 - nz2) * sinc);
    }
    epsilon * sign * sum * dv / x.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expect_observable, Momentum};
    use crate::packets::{alpha_eigenspinor, build_constant_spinor, PacketSpec, BranchMix};

    fn params() -> ModelParams {
        ModelParams::new(1.0, 0.0, 1.0).unwrap()
    }

    fn packet(sign: f64) -> SpinorField {
        let spec = PacketSpec::new([0.0, 0.0, 0.3], [0.6; 3], BranchMix::Plus);
        let g = crate::packets::plan_grid(&spec, &params(), 0.0, 32).unwrap();
        build_constant_spinor(&spec, alpha_eigenspinor(2, sign), &g).unwrap()
    }

    #[test]
    fn zero_shift_is_identity() {
        let f = packet(1.0);
        let s = momentum_shift(&f, 0.0, &params()).unwrap();
        assert_eq!(s.max_difference(&f).unwrap(), 0.0);
    }

    #[test]
    fn finite_shift_matches_quadrature_oracle() {
        for sign in [1.0, -1.0] {
            let f = packet(sign);
            let p0 = expect_observable(&f, &Momentum::new(2)).unwrap();
            let s = momentum_shift(&f, 0.1, &params()).unwrap();
            let p1 = expect_observable(&s, &Momentum::new(2)).unwrap();
            let want = alpha_eigen_shift_oracle(&f, 0.1, sign);
            assert!((p1 - p0 - want).abs() < 1e-9, "{} vs {want}", p1 - p0);
            assert!((want - 0.1 * sign).abs() < 0.01);
        }
    }

    #[test]
    fn group_law() {
        let f = packet(1.0);
        let pr = ModelParams::new(1.0, 0.4, 1.0).unwrap();
        let ab = momentum_shift(&momentum_shift(&f, 0.05, &pr).unwrap(), 0.07, &pr).unwrap();
        let c = momentum_shift(&f, 0.12, &pr).unwrap();
        assert!(ab.max_difference(&c).unwrap() < 1e-10);
        assert!((ab.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unrepresentable_shift_rejected() {
        let f = packet(1.0);
        let limit = f.grid().dp(0) * f.grid().n()[0] as f64 / 8.0;
        assert!(momentum_shift(&f, 1.01 * limit, &params()).is_err());
    }
}
