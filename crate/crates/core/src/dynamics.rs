//! Exact Schrödinger-picture evolution and observable time series.
//!
//! The free Hamiltonian, and the minimally coupled one with a spatially
//! uniform vector potential, are both node-local in momentum space, so
//! `ψ(p, t) = exp(−iH(p)t) ψ(p, 0)` is exact for any `t`.

use crate::algebra::{dirac, spinor_dot, spinor_norm_sqr};
use crate::error::{Error, Result};
use crate::hilbert::{Operator, Position, Representation, SpinOrbit, SpinorField};
use crate::operators::{energy, energy_projector, hamiltonian_at, propagator_at, scale3, sub, Branch, ModelParams};
use crate::par;

fn require_momentum(field: &SpinorField) -> Result<()> {
    if field.representation() != Representation::Momentum {
        return Err(Error::validation("evolution needs a momentum-representation field"));
    }
    Ok(())
}

pub fn evolve_free(field: &SpinorField, t: f64, params: &ModelParams) -> Result<SpinorField> {
    evolve_uniform_a(field, t, [0.0; 3], params)
}

/// Evolution under `α·(p − qA) + βm₀` with constant `A` and no scalar potential.
pub fn evolve_uniform_a(field: &SpinorField, t: f64, a: [f64; 3], params: &ModelParams) -> Result<SpinorField> {
    require_momentum(field)?;
    params.validate()?;
    if !t.is_finite() || a.iter().any(|c| !c.is_finite()) {
        return Err(Error::validation("time and vector potential must be finite"));
    }
    if t == 0.0 {
        return Ok(field.clone());
    }
    let p = *params;
    Ok(field.map_nodes(move |q| propagator_at(q, t, a, &p)))
}

/// Instantaneous expectations recorded at one time stamp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    pub t: f64,
    pub r: [f64; 3],
    pub delta_r: f64,
    pub time_op: f64,
    pub delta_t: f64,
    pub h: f64,
    pub delta_h: f64,
    pub p: [f64; 3],
    pub beta_k: f64,
    pub purity: f64,
}

impl Record {
    pub const HEADER: [&'static str; 14] = [
        "t", "x", "y", "z", "delta_r", "T", "delta_T", "H", "delta_H", "px", "py", "pz", "beta_K", "purity",
    ];

    pub fn values(&self) -> [f64; 14] {
        [
            self.t,
            self.r[0],
            self.r[1],
            self.r[2],
            self.delta_r,
            self.time_op,
            self.delta_t,
            self.h,
            self.delta_h,
            self.p[0],
            self.p[1],
            self.p[2],
            self.beta_k,
            self.purity,
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub records: Vec<Record>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.column(|r| r.t)
    }

    pub fn column(&self, f: impl Fn(&Record) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }
}

/// `⟨r⟩`, `⟨r²⟩` and `⟨T⟩` from a single transform to position space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositionMoments {
    pub r: [f64; 3],
    pub r2: f64,
    pub time_op: f64,
    pub tau0: f64,
}

impl PositionMoments {
    pub fn delta_r(&self) -> f64 {
        let m: f64 = self.r.iter().map(|c| c * c).sum();
        (self.r2 - m).max(0.0).sqrt()
    }

    /// `ΔT`, using `T² = r² + τ₀²`.
    pub fn delta_t(&self) -> f64 {
        (self.r2 + self.tau0 * self.tau0 - self.time_op * self.time_op).max(0.0).sqrt()
    }
}

pub fn position_moments(field: &SpinorField, params: &ModelParams) -> Result<PositionMoments> {
    let g = *field.grid();
    let d = dirac();
    let x = field.to_representation(Representation::Position);
    let xs = x.data();
    let dvx = g.cell_volume(Representation::Position);
    let mut r = [0.0; 3];
    for (k, v) in r.iter_mut().enumerate() {
        *v = par::sum_f64(g.len(), |i| g.node_position(i)[k] * spinor_norm_sqr(&xs[i])) * dvx;
    }
    let r2 = par::sum_f64(g.len(), |i| {
        let q = g.node_position(i);
        (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]) * spinor_norm_sqr(&xs[i])
    }) * dvx;
    let time_op = par::sum_f64(g.len(), |i| {
        let q = g.node_position(i);
        let m = d.alpha_dot(q) + d.beta * params.tau0;
        spinor_dot(&xs[i], &m.apply(&xs[i])).re
    }) * dvx;
    Ok(PositionMoments {
        r,
        r2,
        time_op,
        tau0: params.tau0,
    })
}

/// Expectation values of the recorded observables for the state `field`
/// (momentum representation, normalized), with `a` the uniform vector
/// potential entering `H` and the branch projectors.
pub fn snapshot(field: &SpinorField, t: f64, a: [f64; 3], params: &ModelParams) -> Result<Record> {
    snapshot_with(field, t, a, params, true)
}

/// As [`snapshot`]; with `spin_orbit = false` the comparatively expensive
/// `⟨βK⟩` is skipped and recorded as NaN.
pub fn snapshot_with(field: &SpinorField, t: f64, a: [f64; 3], params: &ModelParams, spin_orbit: bool) -> Result<Record> {
    require_momentum(field)?;
    field.require_normalized()?;
    let g = *field.grid();
    let psi = field.data();
    let dvp = g.cell_volume(Representation::Momentum);

    // Momentum-local observables.
    let qa = scale3(a, params.q);
    let mut pm = [0.0; 3];
    for (k, v) in pm.iter_mut().enumerate() {
        *v = par::sum_f64(g.len(), |i| g.node_momentum(i)[k] * spinor_norm_sqr(&psi[i])) * dvp;
    }
    let h = par::sum_f64(g.len(), |i| {
        let kin = sub(g.node_momentum(i), qa);
        spinor_dot(&psi[i], &hamiltonian_at(kin, params).apply(&psi[i])).re
    }) * dvp;
    let h2 = par::sum_f64(g.len(), |i| {
        let kin = sub(g.node_momentum(i), qa);
        energy(kin, params.m0).powi(2) * spinor_norm_sqr(&psi[i])
    }) * dvp;
    let purity = par::sum_f64(g.len(), |i| {
        let kin = sub(g.node_momentum(i), qa);
        match energy_projector(kin, Branch::Plus, params) {
            Ok(l) => spinor_dot(&psi[i], &l.apply(&psi[i])).re,
            Err(_) => 0.5 * spinor_norm_sqr(&psi[i]),
        }
    }) * dvp;

    let pos = position_moments(field, params)?;

    // β K = Σ·L + 1 since β² = 1.
    let beta_k = if spin_orbit {
        1.0 + field.inner(&SpinOrbit::default().apply(field)?)?.re
    } else {
        f64::NAN
    };

    Ok(Record {
        t,
        r: pos.r,
        delta_r: pos.delta_r(),
        time_op: pos.time_op,
        delta_t: pos.delta_t(),
        h,
        delta_h: (h2 - h * h).max(0.0).sqrt(),
        p: pm,
        beta_k,
        purity: purity.clamp(0.0, 1.0),
    })
}

/// Evolves `field0` independently to every time stamp and records the
/// observables. `a = None` means free evolution.
pub fn record_series(
    field0: &SpinorField,
    times: &[f64],
    params: &ModelParams,
    a: Option<[f64; 3]>,
) -> Result<ObservableSeries> {
    record_series_with(field0, times, params, a, true)
}

/// As [`record_series`], optionally without `⟨βK⟩` (see [`snapshot_with`]).
pub fn record_series_with(
    field0: &SpinorField,
    times: &[f64],
    params: &ModelParams,
    a: Option<[f64; 3]>,
    spin_orbit: bool,
) -> Result<ObservableSeries> {
    if times.is_empty() {
        return Err(Error::validation("at least one time stamp is required"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("time stamps must be strictly increasing"));
    }
    require_momentum(field0)?;
    field0.require_normalized()?;
    let a = a.unwrap_or([0.0; 3]);
    let records = times
        .iter()
        .map(|&t| snapshot_with(&evolve_uniform_a(field0, t, a, params)?, t, a, params, spin_orbit))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries { records })
}

/// `n` uniformly spaced times from `t0` to `t1` inclusive.
pub fn uniform_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t0],
        _ => (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Ordinary least-squares `y ≈ slope·x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::validation("line fit needs at least two paired samples"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::validation("line fit over a zero-width abscissa"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// `⟨z⟩` (or any position component) of a momentum field through the spectral
/// position operator; cheaper than a full snapshot.
pub fn mean_position(field: &SpinorField, axis: usize) -> Result<f64> {
    Ok(field.inner(&Position::new(axis).apply(field)?)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expect_observable, MomentumGrid};
    use crate::operators::{hamiltonian_field, time_operator_field};
    use crate::packets::{build_gaussian, plan_grid, BranchMix, PacketSpec};

    fn params() -> ModelParams {
        ModelParams::new(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let g = MomentumGrid::new(16, 2.0).unwrap();
        let f = build_gaussian(&PacketSpec::default(), &g, &params()).unwrap();
        let e = evolve_free(&f, 0.0, &params()).unwrap();
        assert_eq!(e.max_difference(&f).unwrap(), 0.0);
    }

    #[test]
    fn conserves_norm_energy_momentum() {
        let pr = params();
        let spec = PacketSpec::new([0.1, 0.0, 0.5], [0.2; 3], BranchMix::Mixed(0.3));
        let g = plan_grid(&spec, &pr, 3.0, 16).unwrap();
        let f = build_gaussian(&spec, &g, &pr).unwrap();
        let s0 = snapshot(&f, 0.0, [0.0; 3], &pr).unwrap();
        let later = evolve_free(&f, 3.0, &pr).unwrap();
        assert!((later.norm_sqr() - 1.0).abs() < 1e-12);
        let s1 = snapshot(&later, 3.0, [0.0; 3], &pr).unwrap();
        assert!((s1.h - s0.h).abs() < 1e-12);
        assert!((s1.delta_h - s0.delta_h).abs() < 1e-10);
        for k in 0..3 {
            assert!((s1.p[k] - s0.p[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn snapshot_matches_generic_engine() {
        let pr = ModelParams::new(1.0, 0.7, 1.0).unwrap();
        let spec = PacketSpec::new([0.0, 0.2, 0.4], [0.2; 3], BranchMix::Plus).with_r_center([0.3, 0.0, -0.2]);
        let g = plan_grid(&spec, &pr, 0.0, 16).unwrap();
        let f = build_gaussian(&spec, &g, &pr).unwrap();
        let s = snapshot(&f, 0.0, [0.0; 3], &pr).unwrap();
        let t = expect_observable(&f, &time_operator_field(&pr)).unwrap();
        let h = expect_observable(&f, &hamiltonian_field(&pr)).unwrap();
        assert!((s.time_op - t).abs() < 1e-12, "{} {t}", s.time_op);
        assert!((s.h - h).abs() < 1e-12);
        let dt = crate::hilbert::variance(&f, &time_operator_field(&pr)).unwrap().sqrt();
        assert!((s.delta_t - dt).abs() < 1e-9);
        assert!((s.r[0] - mean_position(&f, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn line_fit() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = x.map(|v| 2.5 * v - 1.0);
        let (m, b) = fit_line(&x, &y).unwrap();
        assert!((m - 2.5).abs() < 1e-14 && (b + 1.0).abs() < 1e-14);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn series_validates_times() {
        let g = MomentumGrid::new(16, 2.0).unwrap();
        let f = build_gaussian(&PacketSpec::default(), &g, &params()).unwrap();
        assert!(record_series(&f, &[0.0, 0.0], &params(), None).is_err());
        assert!(record_series(&f, &[], &params(), None).is_err());
        let one = record_series(&f, &[0.0], &params(), None).unwrap();
        assert_eq!(one.len(), 1);
    }
}
