use crate::dynamics::{fit_line, ObservableSeries};
use crate::error::{Error, Result};

/// Velocities read off a recorded trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VelocityReport {
    /// `d⟨r⟩/dt`.
    pub v_gp: [f64; 3],
    /// `d⟨T⟩/dt`.
    pub t_rate: f64,
    /// `|d⟨r⟩/d⟨T⟩| = |v_gp| / (d⟨T⟩/dt)`.
    pub v_ph: f64,
    /// `v_ph · |v_gp|`, which is 1 (c²) for a sharp packet.
    pub product: f64,
}

impl VelocityReport {
    pub fn speed(&self) -> f64 {
        self.v_gp.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Least-squares slopes of `⟨r⟩(t)` and `⟨T⟩(t)`. Needs at least two samples
/// and a non-zero `⟨T⟩` rate.
pub fn velocity_extraction(series: &ObservableSeries) -> Result<VelocityReport> {
    if series.len() < 2 {
        return Err(Error::validation("velocity extraction needs at least two samples"));
    }
    let t = series.times();
    let mut v_gp = [0.0; 3];
    for (k, v) in v_gp.iter_mut().enumerate() {
        *v = fit_line(&t, &series.column(|r| r.r[k]))?.0;
    }
    let t_rate = fit_line(&t, &series.column(|r| r.time_op))?.0;
    if t_rate.abs() < 1e-300 {
        return Err(Error::validation("<T> does not advance; phase velocity undefined"));
    }
    let speed = v_gp.iter().map(|c| c * c).sum::<f64>().sqrt();
    let v_ph = speed / t_rate.abs();
    Ok(VelocityReport {
        v_gp,
        t_rate,
        v_ph,
        product: v_ph * speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Record;

    fn rec(t: f64, z: f64, tt: f64) -> Record {
        Record {
            t,
            r: [0.0, 0.0, z],
            delta_r: 0.0,
            time_op: tt,
            delta_t: 0.0,
            h: 0.0,
            delta_h: 0.0,
            p: [0.0; 3],
            beta_k: 0.0,
            purity: 1.0,
        }
    }

    #[test]
    fn synthetic_trajectory() {
        let records = (0..5).map(|k| {
            let t = k as f64;
            rec(t, 0.5 * t + 1.0, 0.25 * t + 2.0)
        });
        let s = ObservableSeries {
            records: records.collect(),
        };
        let v = velocity_extraction(&s).unwrap();
        assert!((v.v_gp[2] - 0.5).abs() < 1e-14);
        assert!((v.v_ph - 2.0).abs() < 1e-14);
        assert!((v.product - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frozen_time_rejected() {
        let s = ObservableSeries {
            records: vec![rec(0.0, 0.0, 1.0), rec(1.0, 0.0, 1.0)],
        };
        assert!(velocity_extraction(&s).is_err());
    }
}
