use crate::algebra::{dirac, spinor_dot, Spinor4, C64};
use crate::error::Result;
use crate::hilbert::{expectation, SpinorField};
use crate::operators::{beta_alpha_dot_p, beta_alpha_dot_r, ModelParams};

/// `(⟨βα·p⟩, ⟨βα·r⟩)`. Both operators are anti-Hermitian, so the values
/// are imaginary up to rounding.
pub fn definite_spin_vanishing_check(field: &SpinorField, params: &ModelParams) -> Result<(C64, C64)> {
    params.validate()?;
    field.require_normalized()?;
    Ok((
        expectation(field, &beta_alpha_dot_p())?,
        expectation(field, &beta_alpha_dot_r())?,
    ))
}

/// `u†βα·p u` for a single spinor at momentum `p`.
pub fn plane_wave_beta_alpha_p(u: &Spinor4, p: [f64; 3]) -> C64 {
    let d = dirac();
    spinor_dot(u, &(d.beta * d.alpha_dot(p)).apply(u))
}
