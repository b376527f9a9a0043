use std::fmt;
use std::str::FromStr;

use crate::dynamics::{evolve_free, fit_line, position_moments};
use crate::error::{Error, Result};
use crate::hilbert::SpinorField;
use crate::operators::ModelParams;

/// Largest `p/m₀` accepted as nonrelativistic and smallest accepted as
/// ultrarelativistic.
pub const NONREL_MAX: f64 = 0.2;
pub const ULTRAREL_MIN: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    NonRelativistic,
    UltraRelativistic,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonrel" => Ok(Regime::NonRelativistic),
            "ultrarel" => Ok(Regime::UltraRelativistic),
            _ => Err(Error::validation(format!("unknown regime '{s}' (expected nonrel or ultrarel)"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::NonRelativistic => "nonrel",
            Regime::UltraRelativistic => "ultrarel",
        })
    }
}

/// Leading-order `⟨T⟩(t) ≈ slope·t + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimePrediction {
    pub slope: f64,
    pub offset: f64,
}

pub fn regime_expansion(params: &ModelParams, p: f64, regime: Regime) -> Result<RegimePrediction> {
    params.validate()?;
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::validation(format!("momentum magnitude {p} must be finite and >= 0")));
    }
    let m = params.m0;
    match regime {
        Regime::NonRelativistic => {
            if !(p < NONREL_MAX * m) {
                return Err(Error::validation(format!(
                    "p = {p} is not nonrelativistic (needs p < {NONREL_MAX} m0)"
                )));
            }
            Ok(RegimePrediction {
                slope: (p / m).powi(2),
                offset: params.tau0,
            })
        }
        Regime::UltraRelativistic => {
            if !(p > ULTRAREL_MIN * m) {
                return Err(Error::validation(format!(
                    "p = {p} is not ultrarelativistic (needs p > {ULTRAREL_MIN} m0)"
                )));
            }
            Ok(RegimePrediction {
                slope: 1.0,
                offset: m / p * params.tau0,
            })
        }
    }
}

/// Least-squares line through `⟨T⟩` of the freely evolved `field0` at `times`.
pub fn measure_time_line(field0: &SpinorField, times: &[f64], params: &ModelParams) -> Result<RegimePrediction> {
    let mut t_vals = Vec::with_capacity(times.len());
    for &t in times {
        t_vals.push(position_moments(&evolve_free(field0, t, params)?, params)?.time_op);
    }
    let (slope, offset) = fit_line(times, &t_vals)?;
    Ok(RegimePrediction { slope, offset })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictions() {
        let pr = ModelParams::new(1.0, 1.0, 1.0).unwrap();
        let nr = regime_expansion(&pr, 0.1, Regime::NonRelativistic).unwrap();
        assert!((nr.slope - 0.01).abs() < 1e-15 && nr.offset == 1.0);
        let ur = regime_expansion(&pr, 10.0, Regime::UltraRelativistic).unwrap();
        assert!(ur.slope == 1.0 && (ur.offset - 0.1).abs() < 1e-15);
        assert_eq!(regime_expansion(&pr, 0.0, Regime::NonRelativistic).unwrap().slope, 0.0);
    }

    #[test]
    fn regime_violations() {
        let pr = ModelParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(regime_expansion(&pr, 1.0, Regime::NonRelativistic).is_err());
        assert!(regime_expansion(&pr, 1.0, Regime::UltraRelativistic).is_err());
        assert!("relativistic".parse::<Regime>().is_err());
        assert_eq!("ultrarel".parse::<Regime>().unwrap(), Regime::UltraRelativistic);
    }
}
