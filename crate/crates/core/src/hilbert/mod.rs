//! Discretized state space: grids, spinor fields, Fourier switching and the
//! expectation engine.

mod field;
mod fourier;
mod grid;
mod observable;

pub use field::{inner_product, switch_representation, SpinorField, LOCALIZATION_THRESHOLD, NORMALIZATION_TOLERANCE};
pub use grid::{MomentumGrid, Representation};
pub use observable::{
    commutator_expectation, expect_observable, expectation, variance, Combination, Derivative, KOperator,
    MatrixField, Momentum, Operator, Position, SpinOrbit, TimeOperatorGradient,
};

/// Grid constructor with the validation of [`MomentumGrid::new`].
pub fn make_grid(n: usize, p_max: f64) -> crate::error::Result<MomentumGrid> {
    MomentumGrid::new(n, p_max)
}
