use crate::algebra::{dirac, spinor_dot, Matrix4, C64, I};
use crate::error::{Error, Result};
use crate::hilbert::{commutator_expectation, expectation, MatrixField, Operator, Representation, SpinorField};
use crate::operators::{beta_alpha_dot_p, beta_alpha_dot_r, hamiltonian_field, time_operator_field, ModelParams, ParityWeightedK};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VectorPotential {
    Zero,
    Constant([f64; 3]),
    /// `A_i = Σ_j G_ij x_j`.
    Linear([[f64; 3]; 3]),
    /// `A = ½ B × r`, a uniform magnetic field `B`.
    Circular([f64; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarPotential {
    Zero,
    Constant(f64),
    /// `Φ = E·r` with the given gradient.
    Linear([f64; 3]),
    /// `Φ = ½ k r²`.
    Harmonic(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EMFieldSpec {
    pub a: VectorPotential,
    pub phi: ScalarPotential,
    pub q: f64,
}

impl Default for EMFieldSpec {
    fn default() -> Self {
        EMFieldSpec {
            a: VectorPotential::Zero,
            phi: ScalarPotential::Zero,
            q: 1.0,
        }
    }
}

impl EMFieldSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        let ok = self.q.is_finite()
            && match self.a {
                VectorPotential::Zero => true,
                VectorPotential::Constant(a) | VectorPotential::Circular(a) => finite(&a),
                VectorPotential::Linear(g) => g.iter().all(|row| finite(row)),
            }
            && match self.phi {
                ScalarPotential::Zero => true,
                ScalarPotential::Constant(v) | ScalarPotential::Harmonic(v) => v.is_finite(),
                ScalarPotential::Linear(e) => finite(&e),
            };
        if ok {
            Ok(())
        } else {
            Err(Error::validation("electromagnetic field parameters must be finite"))
        }
    }

    pub fn a_at(&self, r: [f64; 3]) -> [f64; 3] {
        match self.a {
            VectorPotential::Zero => [0.0; 3],
            VectorPotential::Constant(a) => a,
            VectorPotential::Linear(g) => std::array::from_fn(|i| (0..3).map(|j| g[i][j] * r[j]).sum()),
            VectorPotential::Circular(b) => [
                0.5 * (b[1] * r[2] - b[2] * r[1]),
                0.5 * (b[2] * r[0] - b[0] * r[2]),
                0.5 * (b[0] * r[1] - b[1] * r[0]),
            ],
        }
    }

    pub fn phi_at(&self, r: [f64; 3]) -> f64 {
        match self.phi {
            ScalarPotential::Zero => 0.0,
            ScalarPotential::Constant(v) => v,
            ScalarPotential::Linear(e) => e[0] * r[0] + e[1] * r[1] + e[2] * r[2],
            ScalarPotential::Harmonic(k) => 0.5 * k * (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]),
        }
    }
}

/// `H = α·(p − qA(r)) + βm₀ + qΦ(r)`: a momentum-local part plus a
/// position-local part.
pub struct CoupledHamiltonian {
    free: MatrixField,
    local: MatrixField,
}

impl CoupledHamiltonian {
    pub fn new(em: &EMFieldSpec, params: &ModelParams) -> Self {
        let e = *em;
        CoupledHamiltonian {
            free: hamiltonian_field(params),
            local: MatrixField::new(Representation::Position, true, move |r| {
                let a = e.a_at(r).map(|c| -e.q * c);
                dirac().alpha_dot(a) + Matrix4::identity() * (e.q * e.phi_at(r))
            }),
        }
    }
}

impl Operator for CoupledHamiltonian {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        let a = self.free.apply(field)?;
        let b = self.local.apply(field)?;
        a.combine(C64::new(1.0, 0.0), &b, C64::new(1.0, 0.0))
    }
}

/// Term-wise instantaneous `d⟨T⟩/dt` under minimal coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmRateReport {
    /// `base + spin_term + gamma_term`.
    pub rate: f64,
    /// `⟨I + 2βK⟩ = 3 + 2⟨Σ·L⟩`.
    pub base: f64,
    /// `−2q⟨Σ·(r × A)⟩`.
    pub spin_term: f64,
    /// `−2i⟨β(τ₀α·π − m₀α·r)⟩` with the kinetic momentum `π = p − qA`.
    pub gamma_term: f64,
    /// The same term with the canonical momentum `p` in place of `π`.
    pub gamma_term_canonical: f64,
    /// `base + spin_term + gamma_term_canonical`.
    pub rate_canonical: f64,
    /// `−i⟨[T, H]⟩` evaluated directly with the coupled Hamiltonian.
    pub commutator_rate: f64,
}

pub fn em_t_rate(field: &SpinorField, em: &EMFieldSpec, params: &ModelParams) -> Result<EmRateReport> {
    params.validate()?;
    em.validate()?;
    field.require_normalized()?;
    field.require_localized()?;
    let d = dirac();
    let base = expectation(field, &ParityWeightedK)?.re;

    let x = field.to_representation(Representation::Position);
    let g = *x.grid();
    let xs = x.data();
    let dvx = g.cell_volume(Representation::Position);
    let spin = par::sum_f64(g.len(), |i| {
        let r = g.node_position(i);
        let a = em.a_at(r);
        let rxa = [
            r[1] * a[2] - r[2] * a[1],
            r[2] * a[0] - r[0] * a[2],
            r[0] * a[1] - r[1] * a[0],
        ];
        spinor_dot(&xs[i], &d.sigma_dot(rxa).apply(&xs[i])).re
    }) * dvx;
    let beta_alpha_a = par::sum_c64(g.len(), |i| {
        let a = em.a_at(g.node_position(i));
        spinor_dot(&xs[i], &(d.beta * d.alpha_dot(a)).apply(&xs[i]))
    }) * dvx;

    let bap = expectation(field, &beta_alpha_dot_p())?;
    let bar = expectation(field, &beta_alpha_dot_r())?;
    let gamma_canonical = -2.0 * I * (bap * params.tau0 - bar * params.m0);
    let gamma = gamma_canonical - 2.0 * I * (beta_alpha_a * (-em.q * params.tau0));

    let c = commutator_expectation(field, &time_operator_field(params), &CoupledHamiltonian::new(em, params))?;
    let spin_term = -2.0 * em.q * spin;
    Ok(EmRateReport {
        rate: base + spin_term + gamma.re,
        base,
        spin_term,
        gamma_term: gamma.re,
        gamma_term_canonical: gamma_canonical.re,
        rate_canonical: base + spin_term + gamma_canonical.re,
        commutator_rate: (-I * c).re,
    })
}
