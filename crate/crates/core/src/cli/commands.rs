use super::config::RunConfig;
use super::csv::{Cell, CsvTable};
use crate::analysis::{
    alpha_eigen_shift_oracle, em_t_rate, measure_time_line, momentum_shift, regime_expansion, time_eigensystem,
    uncertainty_product, velocity_extraction, zbw_spectrum, EMFieldSpec, ScalarPotential, VectorPotential,
};
use crate::dynamics::{record_series, record_series_with, Record};
use crate::error::{Error, Result};
use crate::hilbert::{expect_observable, Momentum, SpinorField};
use crate::operators::ModelParams;
use crate::packets::{alpha_eigenspinor, branch_purity, build_constant_spinor, build_gaussian, plan_grid, BranchMix, PacketSpec};
use crate::units::UnitSystem;

/// Result of one subcommand: a CSV table plus human-readable report lines.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub table: CsvTable,
    pub report: Vec<String>,
    /// Set when an invariant failed (the run itself completed).
    pub failed: bool,
}

struct Setup {
    units: UnitSystem,
    params: ModelParams,
    spec: PacketSpec,
    field: SpinorField,
}

fn setup(cfg: &RunConfig) -> Result<Setup> {
    let units = cfg.units()?;
    let params = cfg.model_params()?;
    let spec = cfg.packet_spec()?;
    let grid = cfg.grid(&spec, &params)?;
    let field = build_gaussian(&spec, &grid, &params)?;
    field.require_localized()?;
    Ok(Setup {
        units,
        params,
        spec,
        field,
    })
}

fn grid_line(field: &SpinorField) -> String {
    let g = field.grid();
    let n = g.n();
    format!("grid {}x{}x{}, p_max = {:?}", n[0], n[1], n[2], g.p_max())
}

pub fn eigen(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.units()?;
    let params = cfg.model_params()?;
    let es = time_eigensystem(u.length_in(cfg.eigen_r), &params)?;
    let mut table = CsvTable::new(&[
        "tau", "spin", "u1_re", "u1_im", "u2_re", "u2_im", "u3_re", "u3_im", "u4_re", "u4_im",
    ]);
    for (label, s) in es.labels.iter().zip(&es.spinors) {
        let mut row: Vec<Cell> = vec![u.time_out(label.0).into(), label.1.into()];
        for c in s {
            row.push(c.re.into());
            row.push(c.im.into());
        }
        table.push(row);
    }
    let report = vec![
        format!("tau_r = {}", u.time_out(es.tau_r)),
        format!("normalization = {}", es.normalization),
        format!("max |T u - tau u| = {:.3e}", es.residual()),
        format!("max orthonormality error = {:.3e}", es.orthonormality_error()),
        format!("mismatch against numerical diagonalization = {:.3e}", es.numeric_mismatch()?),
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}

fn uniform_a(cfg: &RunConfig) -> Result<Option<[f64; 3]>> {
    let em = cfg.em_spec()?;
    if em.phi != ScalarPotential::Zero {
        return Err(Error::validation("evolution supports no scalar potential"));
    }
    match em.a {
        VectorPotential::Zero => Ok(None),
        VectorPotential::Constant(a) => Ok(Some(a)),
        _ => Err(Error::validation("evolution supports only a constant vector potential")),
    }
}

fn record_row(r: &Record, u: &UnitSystem) -> Vec<Cell> {
    let v = [
        u.time_out(r.t),
        u.length_out(r.r[0]),
        u.length_out(r.r[1]),
        u.length_out(r.r[2]),
        u.length_out(r.delta_r),
        u.time_out(r.time_op),
        u.time_out(r.delta_t),
        r.h,
        r.delta_h,
        u.momentum_out(r.p[0]),
        u.momentum_out(r.p[1]),
        u.momentum_out(r.p[2]),
        r.beta_k,
        r.purity,
    ];
    v.into_iter().map(Cell::Num).collect()
}

pub fn evolve(cfg: &RunConfig) -> Result<Output> {
    let s = setup(cfg)?;
    let a = uniform_a(cfg)?;
    let series = record_series(&s.field, &cfg.times()?, &s.params, a)?;
    let mut table = CsvTable::new(&Record::HEADER);
    for r in &series.records {
        table.push(record_row(r, &s.units));
    }
    Ok(Output {
        table,
        report: vec![grid_line(&s.field), format!("{} samples", series.len())],
        failed: false,
    })
}

pub fn uncertainty(cfg: &RunConfig) -> Result<Output> {
    let s = setup(cfg)?;
    let r = uncertainty_product(&s.field, &s.params)?;
    let h = s.units.hbar;
    let mut table = CsvTable::new(&[
        "delta_T",
        "delta_H",
        "product",
        "robertson_bound",
        "spin_orbit_bound",
        "robertson_ok",
        "spin_orbit_ok",
    ]);
    table.push(vec![
        s.units.time_out(r.delta_t).into(),
        r.delta_h.into(),
        (r.product * h).into(),
        (r.robertson_bound * h).into(),
        (r.spin_orbit_bound * h).into(),
        r.robertson_ok.into(),
        r.spin_orbit_ok.into(),
    ]);
    let report = vec![
        grid_line(&s.field),
        format!("dT*dH = {:.6e}", r.product * h),
        format!(
            "Robertson bound |<[T,H]>|/2 = {:.6e} ({})",
            r.robertson_bound * h,
            if r.robertson_ok { "holds" } else { "VIOLATED" }
        ),
        format!(
            "bound |<I+2bK>|/2 = {:.6e} ({})",
            r.spin_orbit_bound * h,
            if r.spin_orbit_ok { "holds" } else { "violated" }
        ),
    ];
    Ok(Output {
        table,
        report,
        failed: !r.robertson_ok,
    })
}

pub fn velocities(cfg: &RunConfig) -> Result<Output> {
    let s = setup(cfg)?;
    if matches!(s.spec.branch, BranchMix::Mixed(_)) {
        return Err(Error::validation("velocity extraction needs a single-branch packet"));
    }
    let series = record_series_with(&s.field, &cfg.times()?, &s.params, None, false)?;
    let v = velocity_extraction(&series)?;
    let u = s.units;
    let mut table = CsvTable::new(&["v_gp_x", "v_gp_y", "v_gp_z", "t_rate", "v_ph", "product"]);
    table.push(vec![
        u.velocity_out(v.v_gp[0]).into(),
        u.velocity_out(v.v_gp[1]).into(),
        u.velocity_out(v.v_gp[2]).into(),
        v.t_rate.into(),
        u.velocity_out(v.v_ph).into(),
        (v.product * u.c * u.c).into(),
    ]);
    let report = vec![
        grid_line(&s.field),
        format!("v_gp = ({:.6}, {:.6}, {:.6})", u.velocity_out(v.v_gp[0]), u.velocity_out(v.v_gp[1]), u.velocity_out(v.v_gp[2])),
        format!("v_ph = {:.6}", u.velocity_out(v.v_ph)),
        if u.c == 1.0 {
            format!("v_ph*v_gp = {:.3}", v.product)
        } else {
            format!("v_ph*v_gp = {:.3} c^2", v.product)
        },
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}

pub fn limits(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.units()?;
    let params = cfg.model_params()?;
    let p = u.momentum_in(cfg.limits_p);
    let pred = regime_expansion(&params, p, cfg.regime)?;
    let base = cfg.packet_spec()?;
    let spec = PacketSpec {
        p_center: [0.0, 0.0, p],
        branch: BranchMix::Plus,
        ..base
    };
    let times = cfg.times()?;
    let t_max = times.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let grid = plan_grid(&spec, &params, t_max, cfg.grid_min_n)?;
    let field = build_gaussian(&spec, &grid, &params)?;
    let meas = measure_time_line(&field, &times, &params)?;
    let mut table = CsvTable::new(&[
        "regime",
        "p",
        "predicted_slope",
        "predicted_offset",
        "measured_slope",
        "measured_offset",
    ]);
    table.push(vec![
        cfg.regime.to_string().into(),
        cfg.limits_p.into(),
        pred.slope.into(),
        u.time_out(pred.offset).into(),
        meas.slope.into(),
        u.time_out(meas.offset).into(),
    ]);
    let report = vec![
        grid_line(&field),
        format!("predicted <T> = {:.6} t + {:.6}", pred.slope, u.time_out(pred.offset)),
        format!("measured  <T> = {:.6} t + {:.6}", meas.slope, u.time_out(meas.offset)),
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}

/// Shifts an `α_z = ±1` eigenspinor packet (sign from `[packet] spin_sign`)
/// and compares the `⟨p_z⟩` displacement with `±ε`.
pub fn shift(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.units()?;
    let params = cfg.model_params()?;
    let base = cfg.packet_spec()?;
    let eps = cfg.epsilon;
    let sign = base.spin_sign;
    // plan for the shifted centre as well
    let mut reach = base;
    reach.p_center[2] = base.p_center[2].abs() + eps.abs();
    let grid = plan_grid(&reach, &params, 0.0, cfg.grid_min_n)?;
    let field = build_constant_spinor(&base, alpha_eigenspinor(2, sign), &grid)?;
    let pz = Momentum::new(2);
    let before = expect_observable(&field, &pz)?;
    let shifted = momentum_shift(&field, eps, &params)?;
    let after = expect_observable(&shifted, &pz)?;
    let oracle = if params.tau0 == 0.0 {
        alpha_eigen_shift_oracle(&field, eps, sign)
    } else {
        f64::NAN
    };
    let purity0 = branch_purity(&field, &params)?;
    let purity1 = branch_purity(&shifted, &params)?;
    let mut table = CsvTable::new(&[
        "epsilon",
        "pz_before",
        "pz_after",
        "delta_pz",
        "nominal_delta_pz",
        "exact_delta_pz",
        "purity_before",
        "purity_after",
    ]);
    let m = |p: f64| u.momentum_out(p);
    table.push(vec![
        eps.into(),
        m(before).into(),
        m(after).into(),
        m(after - before).into(),
        m(sign * eps).into(),
        m(oracle).into(),
        purity0.into(),
        purity1.into(),
    ]);
    let report = vec![
        grid_line(&field),
        format!("delta p_z = {:.12e} (nominal {:.12e})", m(after - before), m(sign * eps)),
        format!("branch purity {:.12} -> {:.12}", purity0, purity1),
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}

pub fn zbw(cfg: &RunConfig) -> Result<Output> {
    let s = setup(cfg)?;
    let series = record_series_with(&s.field, &cfg.times()?, &s.params, None, false)?;
    let z = zbw_spectrum(&series)?;
    let e_mean = series.records[0].h.abs();
    let u = s.units;
    let mut table = CsvTable::new(&["omega", "omega_bin", "bin_width", "amplitude", "two_E_over_hbar"]);
    table.push(vec![
        u.angular_frequency_out(z.omega).into(),
        u.angular_frequency_out(z.omega_bin).into(),
        u.angular_frequency_out(z.bin_width).into(),
        u.length_out(z.amplitude).into(),
        u.angular_frequency_out(2.0 * e_mean).into(),
    ]);
    let report = vec![
        grid_line(&s.field),
        format!(
            "omega = {:.6} (bin {:.6} +- {:.6}), amplitude = {:.6e}",
            u.angular_frequency_out(z.omega),
            u.angular_frequency_out(z.omega_bin),
            u.angular_frequency_out(z.bin_width),
            u.length_out(z.amplitude)
        ),
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}

pub fn emrate(cfg: &RunConfig) -> Result<Output> {
    let s = setup(cfg)?;
    let em: EMFieldSpec = cfg.em_spec()?;
    let r = em_t_rate(&s.field, &em, &s.params)?;
    let mut table = CsvTable::new(&[
        "rate",
        "base",
        "spin_term",
        "gamma_term",
        "gamma_term_canonical",
        "rate_canonical",
        "commutator_rate",
    ]);
    table.push(
        [r.rate, r.base, r.spin_term, r.gamma_term, r.gamma_term_canonical, r.rate_canonical, r.commutator_rate]
            .into_iter()
            .map(Cell::Num)
            .collect(),
    );
    let report = vec![
        grid_line(&s.field),
        format!("d<T>/dt = {:.12e} (term-wise), {:.12e} (commutator)", r.rate, r.commutator_rate),
        format!("gamma term = {:.6e} (with canonical p: {:.6e})", r.gamma_term, r.gamma_term_canonical),
    ];
    Ok(Output {
        table,
        report,
        failed: false,
    })
}
