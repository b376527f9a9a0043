//! Operators acting on whole spinor fields and the expectation engine.
//!
//! Every operator maps a field to a field in the *same* representation,
//! switching internally where its natural action lives elsewhere. Expectation
//! values, variances and commutators are then inner products.

use std::sync::Arc;

use rayon::prelude::*;

use super::field::SpinorField;
use super::fourier;
use super::grid::Representation;
use crate::algebra::{dirac, Matrix4, Spinor4, C64, I, ZERO};
use crate::error::Result;

/// How `x = i∂/∂p` (or `p = −i∂/∂x`) acts on a field held in the conjugate
/// representation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Derivative {
    /// Exact on the discrete grid: transform along the axis, multiply, return.
    #[default]
    Spectral,
    /// Periodic fourth-order central differences.
    FiniteDifference4,
}

pub trait Operator: Send + Sync {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField>;

    fn is_hermitian(&self) -> bool {
        true
    }
}

/// A 4×4 matrix that is diagonal (node-local) in one representation.
#[derive(Clone)]
pub struct MatrixField {
    pub repr: Representation,
    pub hermitian: bool,
    eval: Arc<dyn Fn([f64; 3]) -> Matrix4 + Send + Sync>,
}

impl MatrixField {
    pub fn new(repr: Representation, hermitian: bool, eval: impl Fn([f64; 3]) -> Matrix4 + Send + Sync + 'static) -> Self {
        MatrixField {
            repr,
            hermitian,
            eval: Arc::new(eval),
        }
    }

    pub fn constant(m: Matrix4) -> Self {
        let h = m.is_hermitian(1e-12);
        MatrixField::new(Representation::Momentum, h, move |_| m)
    }

    pub fn at(&self, q: [f64; 3]) -> Matrix4 {
        (self.eval)(q)
    }
}

impl std::fmt::Debug for MatrixField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixField")
            .field("repr", &self.repr)
            .field("hermitian", &self.hermitian)
            .finish_non_exhaustive()
    }
}

impl Operator for MatrixField {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        if field.representation() == self.repr {
            return Ok(field.map_nodes(|q| self.at(q)));
        }
        let native = field.to_representation(self.repr);
        Ok(native.map_nodes(|q| self.at(q)).to_representation(field.representation()))
    }

    fn is_hermitian(&self) -> bool {
        self.hermitian
    }
}

/// Applies the coordinate of `axis` in representation `coord` to a field held
/// in either representation.
fn coordinate_along(field: &SpinorField, axis: usize, coord: Representation, derivative: Derivative) -> SpinorField {
    let g = *field.grid();
    if field.representation() == coord {
        return field.map_spinors(|q, v| v.map(|c| c * q[axis]));
    }
    let current = field.representation();
    match derivative {
        Derivative::Spectral => {
            let data = fourier::conjugate_multiply(field.data(), &g, axis, current, |q| C64::new(q, 0.0));
            SpinorField::from_parts(g, current, data)
        }
        Derivative::FiniteDifference4 => {
            // x = i∂/∂p in momentum space, p = −i∂/∂x in position space.
            let h = g.spacing(axis, current);
            let factor = match coord {
                Representation::Position => I,
                Representation::Momentum => -I,
            };
            let d = fourier::central_difference4(field.data(), &g, axis, h);
            SpinorField::from_parts(g, current, d.into_iter().map(|v| v.map(|c| c * factor)).collect())
        }
    }
}

/// Position component `x_axis` (ħ = 1).
#[derive(Clone, Copy, Debug)]
pub struct Position {
    pub axis: usize,
    pub derivative: Derivative,
}

impl Position {
    pub fn new(axis: usize) -> Self {
        Position {
            axis,
            derivative: Derivative::Spectral,
        }
    }
}

impl Operator for Position {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        Ok(coordinate_along(field, self.axis, Representation::Position, self.derivative))
    }
}

/// Momentum component `p_axis`.
#[derive(Clone, Copy, Debug)]
pub struct Momentum {
    pub axis: usize,
    pub derivative: Derivative,
}

impl Momentum {
    pub fn new(axis: usize) -> Self {
        Momentum {
            axis,
            derivative: Derivative::Spectral,
        }
    }
}

impl Operator for Momentum {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        Ok(coordinate_along(field, self.axis, Representation::Momentum, self.derivative))
    }
}

/// `Σ·L` with `L_k = ε_ijk x_i p_j` (ħ = 1). Equal to `2S·L`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpinOrbit {
    pub derivative: Derivative,
}

const LEVI_CIVITA: [(usize, usize, usize, f64); 6] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (1, 0, 2, -1.0),
    (2, 1, 0, -1.0),
    (0, 2, 1, -1.0),
];

impl Operator for SpinOrbit {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        // x_i and p_j commute for i ≠ j, so L_k ψ = ε_ijk p_j (x_i ψ) and only
        // three transforms are needed. The multiplication is done in the
        // representation where p is local, i.e. momentum space.
        let repr = field.representation();
        let mom = field.to_representation(Representation::Momentum);
        let xs: Vec<SpinorField> = (0..3)
            .map(|a| coordinate_along(&mom, a, Representation::Position, self.derivative))
            .collect();
        let d = dirac();
        let g = *mom.grid();
        let data: Vec<Spinor4> = (0..g.len())
            .into_par_iter()
            .map(|idx| {
                let p = g.node_momentum(idx);
                let mut l: [Spinor4; 3] = [[ZERO; 4]; 3];
                for &(i, j, k, s) in &LEVI_CIVITA {
                    let xi = &xs[i].data()[idx];
                    for c in 0..4 {
                        l[k][c] += xi[c] * (s * p[j]);
                    }
                }
                let mut acc = [ZERO; 4];
                for k in 0..3 {
                    let v = d.sigma[k].apply(&l[k]);
                    for c in 0..4 {
                        acc[c] += v[c];
                    }
                }
                acc
            })
            .collect();
        Ok(SpinorField::from_parts(g, Representation::Momentum, data).to_representation(repr))
    }
}

/// `K = β(Σ·L + 1)`, the spin-orbit constant of motion.
#[derive(Clone, Copy, Debug, Default)]
pub struct KOperator {
    pub derivative: Derivative,
}

impl Operator for KOperator {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        let sl = SpinOrbit {
            derivative: self.derivative,
        }
        .apply(field)?;
        let sum = sl.combine(C64::new(1.0, 0.0), field, C64::new(1.0, 0.0))?;
        let beta = dirac().beta;
        Ok(sum.map_nodes(|_| beta))
    }
}

/// `α·r + βτ₀` evaluated through the momentum-space gradient: each `x_a`
/// acts on the momentum field as `i∂/∂p_a` along its own axis, so the
/// position grid is never formed as a whole.
#[derive(Clone, Copy, Debug)]
pub struct TimeOperatorGradient {
    pub tau0: f64,
    pub derivative: Derivative,
}

impl Operator for TimeOperatorGradient {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        let d = dirac();
        let mut acc = field.map_nodes(|_| d.beta * self.tau0);
        for a in 0..3 {
            let xa = coordinate_along(field, a, Representation::Position, self.derivative);
            let ax = xa.map_nodes(|_| d.alpha[a]);
            acc = acc.combine(C64::new(1.0, 0.0), &ax, C64::new(1.0, 0.0))?;
        }
        Ok(acc)
    }
}

/// Sum of operators with real or complex weights.
pub struct Combination<'a> {
    pub terms: Vec<(C64, &'a dyn Operator)>,
}

impl Operator for Combination<'_> {
    fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        let mut acc = SpinorField::zeros(*field.grid(), field.representation());
        for (w, op) in &self.terms {
            let v = op.apply(field)?;
            acc = acc.combine(C64::new(1.0, 0.0), &v, *w)?;
        }
        Ok(acc)
    }

    fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(w, op)| w.im == 0.0 && op.is_hermitian())
    }
}

/// `⟨ψ|Aψ⟩` without any normalization requirement.
pub fn expectation(field: &SpinorField, op: &dyn Operator) -> Result<C64> {
    field.inner(&op.apply(field)?)
}

/// Real expectation value of a Hermitian observable on a normalized field.
pub fn expect_observable(field: &SpinorField, op: &dyn Operator) -> Result<f64> {
    field.require_normalized()?;
    Ok(expectation(field, op)?.re)
}

/// `⟨A²⟩ − ⟨A⟩²`, computed as `‖Aψ‖² − ⟨A⟩²` for Hermitian `A` and clipped at 0.
pub fn variance(field: &SpinorField, op: &dyn Operator) -> Result<f64> {
    field.require_normalized()?;
    let a = op.apply(field)?;
    let mean = field.inner(&a)?.re;
    let sq = if op.is_hermitian() {
        a.norm_sqr()
    } else {
        field.inner(&op.apply(&a)?)?.re
    };
    Ok((sq - mean * mean).max(0.0))
}

/// `⟨ψ|[A, B]ψ⟩`.
pub fn commutator_expectation(field: &SpinorField, a: &dyn Operator, b: &dyn Operator) -> Result<C64> {
    let aa = a.apply(field)?;
    let bb = b.apply(field)?;
    if a.is_hermitian() && b.is_hermitian() {
        // ⟨ψ|ABψ⟩ − ⟨ψ|BAψ⟩ = ⟨Aψ|Bψ⟩ − conj(⟨Aψ|Bψ⟩)
        let z = aa.inner(&bb)?;
        return Ok(C64::new(0.0, 2.0 * z.im));
    }
    Ok(field.inner(&a.apply(&bb)?)? - field.inner(&b.apply(&aa)?)?)
}
