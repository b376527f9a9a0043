use crate::algebra::C64;
use crate::error::Result;
use crate::hilbert::{commutator_expectation, expectation, variance, SpinorField};
use crate::operators::{hamiltonian_field, time_operator_field, ModelParams, ParityWeightedK};

/// Slack allowed when deciding whether a bound holds.
pub const BOUND_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintyReport {
    pub delta_t: f64,
    pub delta_h: f64,
    pub product: f64,
    /// `⟨[T, H]⟩`, purely imaginary up to rounding.
    pub commutator: C64,
    /// `½|⟨[T, H]⟩|`.
    pub robertson_bound: f64,
    /// `½|⟨I + 2βK⟩|`, the bound without the `β(τ₀α·p − mα·r)` term.
    pub spin_orbit_bound: f64,
    pub robertson_ok: bool,
    pub spin_orbit_ok: bool,
}

/// `ΔT ΔH` and both lower bounds for a normalized, localized field.
pub fn uncertainty_product(field: &SpinorField, params: &ModelParams) -> Result<UncertaintyReport> {
    params.validate()?;
    field.require_normalized()?;
    field.require_localized()?;
    let t = time_operator_field(params);
    let h = hamiltonian_field(params);
    let delta_t = variance(field, &t)?.sqrt();
    let delta_h = variance(field, &h)?.sqrt();
    let commutator = commutator_expectation(field, &t, &h)?;
    let k = expectation(field, &ParityWeightedK)?;
    let product = delta_t * delta_h;
    let robertson_bound = 0.5 * commutator.norm();
    let spin_orbit_bound = 0.5 * k.norm();
    Ok(UncertaintyReport {
        delta_t,
        delta_h,
        product,
        commutator,
        robertson_bound,
        spin_orbit_bound,
        robertson_ok: product >= robertson_bound - BOUND_SLACK,
        spin_orbit_ok: product >= spin_orbit_bound - BOUND_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::{build_gaussian, plan_grid, BranchMix, PacketSpec};

    #[test]
    fn robertson_holds_and_commutator_is_imaginary() {
        let pr = ModelParams::new(1.0, 0.5, 1.0).unwrap();
        for branch in [BranchMix::Plus, BranchMix::Mixed(0.4)] {
            let spec = PacketSpec::new([0.2, 0.0, 0.3], [0.3; 3], branch).with_r_center([0.0, 0.5, 0.0]);
            let g = plan_grid(&spec, &pr, 0.0, 16).unwrap();
            let f = build_gaussian(&spec, &g, &pr).unwrap();
            let u = uncertainty_product(&f, &pr).unwrap();
            assert!(u.robertson_ok, "{u:?}");
            assert!(u.commutator.re.abs() < 1e-10);
            assert!(u.delta_t > 0.0 && u.delta_h > 0.0);
        }
    }
}
