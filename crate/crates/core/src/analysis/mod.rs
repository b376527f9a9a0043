//! Checkable computations for the closed-form claims about `T`: eigen-system,
//! uncertainty bounds, velocities, limiting regimes, the momentum-shift
//! generator, Zitterbewegung, the electromagnetic rate and the vanishing
//! `βα` expectations.

mod eigen;
mod em;
mod limits;
mod shift;
mod uncertainty;
mod vanishing;
mod velocity;
mod zbw;

pub use eigen::{spectrum_gap, time_eigensystem, TimeEigensystem};
pub use em::{em_t_rate, CoupledHamiltonian, EMFieldSpec, EmRateReport, ScalarPotential, VectorPotential};
pub use limits::{measure_time_line, regime_expansion, Regime, RegimePrediction, NONREL_MAX, ULTRAREL_MIN};
pub use shift::{alpha_eigen_shift_oracle, momentum_shift};
pub use uncertainty::{uncertainty_product, UncertaintyReport, BOUND_SLACK};
pub use vanishing::{definite_spin_vanishing_check, plane_wave_beta_alpha_p};
pub use velocity::{velocity_extraction, VelocityReport};
pub use zbw::{zbw_spectrum, zbw_spectrum_axis, ZbwReport, ZBW_MIN_SAMPLES};
