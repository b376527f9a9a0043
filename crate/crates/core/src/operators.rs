//! Physical operators: `H(p)`, `T(r)`, the energy projectors, `K`, and the
//! Heisenberg-picture closed form of `T(t)` for the free particle.
//!
//! Natural units throughout (ħ = c = 1).

use crate::algebra::{dirac, scalar_square_exponential, spinor_add, spinor_dot, spinor_scale, Matrix4, Spinor4, C64};
use crate::error::{Error, Result};
use crate::hilbert::{Derivative, KOperator, MatrixField, Operator, Position, Representation, SpinorField};
use crate::par;

/// Rest mass `m0`, rest-time constant `tau0` and charge `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub m0: f64,
    pub tau0: f64,
    pub q: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            m0: 1.0,
            tau0: 0.0,
            q: 1.0,
        }
    }
}

impl ModelParams {
    pub fn new(m0: f64, tau0: f64, q: f64) -> Result<Self> {
        let p = ModelParams { m0, tau0, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m0.is_finite() && self.m0 >= 0.0) {
            return Err(Error::validation(format!("m0 = {} must be finite and >= 0", self.m0)));
        }
        if !(self.tau0.is_finite() && self.tau0 >= 0.0) {
            return Err(Error::validation(format!("tau0 = {} must be finite and >= 0", self.tau0)));
        }
        if !self.q.is_finite() {
            return Err(Error::validation("charge q must be finite"));
        }
        Ok(())
    }

    pub fn energy(&self, p: [f64; 3]) -> f64 {
        energy(p, self.m0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

pub fn energy(p: [f64; 3], m0: f64) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m0 * m0).sqrt()
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `α·p + βm₀`
pub fn hamiltonian_at(p: [f64; 3], params: &ModelParams) -> Matrix4 {
    let d = dirac();
    d.alpha_dot(p) + d.beta * params.m0
}

/// Minimally coupled `α·(p − qA) + βm₀` for a spatially uniform `A`.
pub fn coupled_hamiltonian_at(p: [f64; 3], a: [f64; 3], params: &ModelParams) -> Matrix4 {
    hamiltonian_at(sub(p, scale3(a, params.q)), params)
}

/// `α·r + βτ₀`
pub fn time_operator_at(r: [f64; 3], params: &ModelParams) -> Matrix4 {
    let d = dirac();
    d.alpha_dot(r) + d.beta * params.tau0
}

/// `Λ± = (E ± H)/2E`
pub fn energy_projector(p: [f64; 3], branch: Branch, params: &ModelParams) -> Result<Matrix4> {
    let e = params.energy(p);
    if e == 0.0 {
        return Err(Error::SingularProjector { p });
    }
    let h = hamiltonian_at(p, params);
    Ok((Matrix4::identity() * e + h * branch.sign()) * (0.5 / e))
}

/// `exp(−iHt)` at one momentum node, with `A` the uniform vector potential.
pub fn propagator_at(p: [f64; 3], t: f64, a: [f64; 3], params: &ModelParams) -> Matrix4 {
    let kin = sub(p, scale3(a, params.q));
    let h = hamiltonian_at(kin, params);
    scalar_square_exponential(&h, -t, energy(kin, params.m0))
}

pub fn hamiltonian_field(params: &ModelParams) -> MatrixField {
    let p = *params;
    MatrixField::new(Representation::Momentum, true, move |q| hamiltonian_at(q, &p))
}

pub fn coupled_hamiltonian_field(a: [f64; 3], params: &ModelParams) -> MatrixField {
    let p = *params;
    MatrixField::new(Representation::Momentum, true, move |q| coupled_hamiltonian_at(q, a, &p))
}

pub fn time_operator_field(params: &ModelParams) -> MatrixField {
    let p = *params;
    MatrixField::new(Representation::Position, true, move |r| time_operator_at(r, &p))
}

/// `α·r` as a position-local field.
pub fn alpha_dot_r() -> MatrixField {
    MatrixField::new(Representation::Position, true, |r| dirac().alpha_dot(r))
}

/// `α·p` as a momentum-local field.
pub fn alpha_dot_p() -> MatrixField {
    MatrixField::new(Representation::Momentum, true, |p| dirac().alpha_dot(p))
}

/// `βα·r` (anti-Hermitian).
pub fn beta_alpha_dot_r() -> MatrixField {
    MatrixField::new(Representation::Position, false, |r| dirac().beta * dirac().alpha_dot(r))
}

/// `βα·p` (anti-Hermitian).
pub fn beta_alpha_dot_p() -> MatrixField {
    MatrixField::new(Representation::Momentum, false, |p| dirac().beta * dirac().alpha_dot(p))
}

pub fn energy_projector_field(branch: Branch, params: &ModelParams) -> MatrixField {
    let p = *params;
    MatrixField::new(Representation::Momentum, true, move |q| {
        // E = 0 only at the origin of a massless grid, where ½I is the
        // unbiased choice.
        energy_projector(q, branch, &p).unwrap_or_else(|_| Matrix4::identity() * 0.5)
    })
}

/// `Kψ` with `K = β(Σ·L + 1)`; requires a localized momentum-space field.
pub fn apply_k(field: &SpinorField) -> Result<SpinorField> {
    apply_k_with(field, Derivative::Spectral)
}

pub fn apply_k_with(field: &SpinorField, derivative: Derivative) -> Result<SpinorField> {
    if field.representation() != Representation::Momentum {
        return Err(Error::validation("K acts on momentum-representation fields"));
    }
    field.require_localized()?;
    KOperator { derivative }.apply(field)
}

/// Operator ordering used when evaluating the closed-form `T(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeisenbergForm {
    /// Operator products in the order that follows from `T(t) = α(t)·r(t) + β(t)τ₀`
    /// with `α(t) = P + F e^{−2iHt}` and
    /// `r(t) = r + Pt + (i/2) F H⁻¹ (e^{−2iHt} − 1)`.
    Reordered,
    /// The closed form with its factors kept in the order written,
    /// left to right.
    LiteralOrder,
}

/// `T(t)ψ` at one node, written as `Σ_k A_k (x_k ψ) + Bψ` with node-local
/// `A_k`, `B`. `xs[k]` is `x_k ψ` at the node. Factors are applied to spinors
/// right to left.
fn heisenberg_node(
    p: [f64; 3],
    t: f64,
    params: &ModelParams,
    form: HeisenbergForm,
    psi: &Spinor4,
    xs: [&Spinor4; 3],
) -> Option<Spinor4> {
    let d = dirac();
    let e = params.energy(p);
    if e == 0.0 {
        return None;
    }
    let h = hamiltonian_at(p, params);
    let hinv = h * (1.0 / (e * e));
    let u2 = scalar_square_exponential(&h, -2.0 * t, e);
    let pk: [Matrix4; 3] = std::array::from_fn(|k| hinv * p[k]);
    let fk: [Matrix4; 3] = std::array::from_fn(|k| d.alpha[k] - pk[k]);
    let g = d.beta - hinv * params.m0;
    let p2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (e * e);
    let half_i = C64::new(0.0, 0.5);
    let tau0 = params.tau0;

    let mut out = spinor_scale(psi, C64::new(p2 * t, 0.0));
    let mut add = |v: Spinor4, w: C64| {
        for c in 0..4 {
            out[c] += v[c] * w;
        }
    };
    let one = C64::new(1.0, 0.0);
    match form {
        HeisenbergForm::Reordered => {
            let u2c = scalar_square_exponential(&h, 2.0 * t, e);
            let u2psi = u2.apply(psi);
            let w1 = hinv.apply(&spinor_add(&u2psi, &spinor_scale(psi, -one)));
            let w3 = hinv.apply(&spinor_add(psi, &spinor_scale(&u2c.apply(psi), -one)));
            for k in 0..3 {
                add(pk[k].apply(xs[k]), one);
                add(fk[k].apply(&u2.apply(xs[k])), one);
                add(pk[k].apply(&fk[k].apply(&w1)), half_i);
                add(fk[k].apply(&pk[k].apply(&u2psi)), C64::new(t, 0.0));
                add(fk[k].apply(&fk[k].apply(&w3)), half_i);
            }
            add(hinv.apply(psi), C64::new(params.m0 * tau0, 0.0));
            add(g.apply(&u2psi), C64::new(tau0, 0.0));
        }
        HeisenbergForm::LiteralOrder => {
            let u1 = scalar_square_exponential(&h, -t, e);
            let u1c = scalar_square_exponential(&h, t, e);
            // H⁻¹ sin(−Ht) = −sin(Et)/E, a scalar because H² = E².
            let s = -(e * t).sin() / e;
            let u1psi = u1.apply(psi);
            let u1cpsi = u1c.apply(psi);
            for k in 0..3 {
                add(pk[k].apply(xs[k]), one);
                add(u2.apply(&fk[k].apply(xs[k])), one);
                let inner = spinor_add(
                    &spinor_scale(&pk[k].apply(psi), C64::new(t, 0.0)),
                    &spinor_scale(&spinor_add(&pk[k].apply(&u1cpsi), &fk[k].apply(&u1psi)), C64::new(s, 0.0)),
                );
                add(u2.apply(&fk[k].apply(&inner)), one);
            }
            add(hinv.apply(psi), C64::new(params.m0 * tau0, 0.0));
            add(u2.apply(&g.apply(psi)), C64::new(tau0, 0.0));
        }
    }
    Some(out)
}

/// `⟨ψ₀|T(t)|ψ₀⟩` from the Heisenberg closed form, using the reordered
/// operator products. The `r(0)`-dependent terms use the spectral momentum
/// gradient of the field.
pub fn heisenberg_t_expectation(field0: &SpinorField, t: f64, params: &ModelParams) -> Result<f64> {
    Ok(heisenberg_t_expectation_form(field0, t, params, HeisenbergForm::Reordered)?.re)
}

/// Complex `⟨ψ₀|T(t)|ψ₀⟩` for the chosen form. The imaginary part is zero for
/// a Hermitian expression and is returned so that an incorrect ordering shows
/// up.
pub fn heisenberg_t_expectation_form(
    field0: &SpinorField,
    t: f64,
    params: &ModelParams,
    form: HeisenbergForm,
) -> Result<C64> {
    if field0.representation() != Representation::Momentum {
        return Err(Error::validation("heisenberg T(t) needs a momentum-representation field"));
    }
    field0.require_normalized()?;
    field0.require_localized()?;
    let xs: Vec<SpinorField> = (0..3)
        .map(|a| Position::new(a).apply(field0))
        .collect::<Result<_>>()?;
    let g = *field0.grid();
    let psi = field0.data();
    let peak = field0.peak_amplitude();
    let singular = std::sync::atomic::AtomicBool::new(false);
    let sum = par::sum_c64(g.len(), |i| {
        let p = g.node_momentum(i);
        let xk = [&xs[0].data()[i], &xs[1].data()[i], &xs[2].data()[i]];
        match heisenberg_node(p, t, params, form, &psi[i], xk) {
            Some(v) => spinor_dot(&psi[i], &v),
            None => {
                let amp: f64 = psi[i].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if amp > crate::hilbert::LOCALIZATION_THRESHOLD * peak {
                    singular.store(true, std::sync::atomic::Ordering::Relaxed);
                }
                C64::new(0.0, 0.0)
            }
        }
    });
    if singular.into_inner() {
        return Err(Error::SingularProjector { p: [0.0; 3] });
    }
    Ok(sum * g.cell_volume(Representation::Momentum))
}

/// `I + 2βK = 3 + 2Σ·L` as an operator.
pub struct ParityWeightedK;

impl Operator for ParityWeightedK {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        let sl = crate::hilbert::SpinOrbit::default().apply(field)?;
        field.combine(C64::new(3.0, 0.0), &sl, C64::new(2.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hermitian_eigensystem, unitary_exponential};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(m0: f64, tau0: f64) -> ModelParams {
        ModelParams::new(m0, tau0, 1.0).unwrap()
    }

    #[test]
    fn rest_frame_hamiltonian_is_beta() {
        let h = hamiltonian_at([0.0; 3], &params(1.0, 0.0));
        assert!((h - dirac().beta).max_norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_spectra() {
        let es = hermitian_eigensystem(&hamiltonian_at([0.0, 0.0, 0.75], &params(1.0, 0.0))).unwrap();
        for (v, w) in es.values.iter().zip([-1.25, -1.25, 1.25, 1.25]) {
            assert!((v - w).abs() < 1e-12);
        }
        let es = hermitian_eigensystem(&hamiltonian_at([0.0, 0.0, 1.0], &params(0.0, 0.0))).unwrap();
        for (v, w) in es.values.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn squares_are_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let pr = params(rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
            let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
            let h = hamiltonian_at(v, &pr);
            let e2 = pr.energy(v).powi(2);
            assert!((h * h - Matrix4::identity() * e2).max_norm() < 1e-12);
            let t = time_operator_at(v, &pr);
            let r2 = v.iter().map(|c| c * c).sum::<f64>() + pr.tau0 * pr.tau0;
            assert!((t * t - Matrix4::identity() * r2).max_norm() < 1e-12);
        }
    }

    #[test]
    fn time_operator_examples() {
        let pr = params(1.0, 4.0);
        let t = time_operator_at([0.0, 0.0, 3.0], &pr);
        assert!((t * t - Matrix4::identity() * 25.0).max_norm() < 1e-12);
        let es = hermitian_eigensystem(&t).unwrap();
        for (v, w) in es.values.iter().zip([-5.0, -5.0, 5.0, 5.0]) {
            assert!((v - w).abs() < 1e-12);
        }
        let t0 = time_operator_at([0.0; 3], &pr);
        assert!((t0 - dirac().beta * 4.0).max_norm() < 1e-15);
    }

    #[test]
    fn projectors() {
        let pr = params(1.0, 0.0);
        let lp = energy_projector([0.0; 3], Branch::Plus, &pr).unwrap();
        assert!((lp - Matrix4::diag([1.0, 1.0, 0.0, 0.0])).max_norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
            let lp = energy_projector(p, Branch::Plus, &pr).unwrap();
            let lm = energy_projector(p, Branch::Minus, &pr).unwrap();
            assert!((lp * lp - lp).max_norm() < 1e-12);
            assert!((lp * lm).max_norm() < 1e-12);
            assert!((lp + lm - Matrix4::identity()).max_norm() < 1e-12);
            assert!(lp.is_hermitian(1e-12));
            assert!((lp.trace() - C64::new(2.0, 0.0)).norm() < 1e-12);
        }
        assert!(matches!(
            energy_projector([0.0; 3], Branch::Plus, &params(0.0, 0.0)),
            Err(Error::SingularProjector { .. })
        ));
    }

    #[test]
    fn propagator_matches_generic_exponential() {
        let pr = params(1.0, 0.0);
        let p = [0.3, -0.2, 0.75];
        let h = hamiltonian_at(p, &pr);
        for t in [0.0, 0.7, 3.1] {
            let fast = propagator_at(p, t, [0.0; 3], &pr);
            let slow = unitary_exponential(&h, -t).unwrap();
            assert!((fast - slow).max_norm() < 1e-12);
        }
    }

    #[test]
    fn negative_parameters_rejected() {
        assert!(ModelParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -0.5, 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_direct_evolution() {
        use crate::dynamics::evolve_free;
        use crate::hilbert::expect_observable;
        use crate::packets::{build_gaussian, plan_grid, BranchMix, PacketSpec};
        let pr = params(1.0, 0.5);
        let spec = PacketSpec::new([0.1, 0.0, 0.4], [0.25; 3], BranchMix::Mixed(0.3)).with_r_center([0.2, -0.1, 0.3]);
        let g = plan_grid(&spec, &pr, 2.0, 16).unwrap();
        let f = build_gaussian(&spec, &g, &pr).unwrap();
        let t_op = time_operator_field(&pr);
        for t in [0.0, 0.7, 2.0] {
            let direct = expect_observable(&evolve_free(&f, t, &pr).unwrap(), &t_op).unwrap();
            let closed = heisenberg_t_expectation_form(&f, t, &pr, HeisenbergForm::Reordered).unwrap();
            assert!((closed.re - direct).abs() < 1e-8, "t={t}: {closed} vs {direct}");
            assert!(closed.im.abs() < 1e-8);
            let printed = heisenberg_t_expectation_form(&f, t, &pr, HeisenbergForm::LiteralOrder).unwrap();
            if t == 0.0 {
                assert!((printed.re - direct).abs() < 1e-8);
            }
        }
    }
}
