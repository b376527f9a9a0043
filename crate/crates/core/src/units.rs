//! Conversion between a user unit system `(ħ, c)` and the internal natural
//! units `ħ = c = 1`.
//!
//! Energies (`m₀c²`, `⟨H⟩`, `qΦ`, `qA`) pass through unchanged; a time `t`
//! becomes `t/ħ`, a length `x` becomes `x/(ħc)` and a momentum `p` becomes
//! `pc`. With these rules `H = cα·p + βm₀c²` and `T/ħ = α·r/(cħ) + βτ₀/ħ`
//! take their natural-unit forms.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem { hbar: 1.0, c: 1.0 }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        let u = UnitSystem { hbar, c };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0 && self.c.is_finite() && self.c > 0.0) {
            return Err(Error::validation(format!(
                "hbar = {} and c = {} must be finite and positive",
                self.hbar, self.c
            )));
        }
        Ok(())
    }

    pub fn is_natural(&self) -> bool {
        self.hbar == 1.0 && self.c == 1.0
    }

    pub fn time_in(&self, t: f64) -> f64 {
        t / self.hbar
    }

    pub fn time_out(&self, t: f64) -> f64 {
        t * self.hbar
    }

    pub fn length_in(&self, x: f64) -> f64 {
        x / (self.hbar * self.c)
    }

    pub fn length_out(&self, x: f64) -> f64 {
        x * self.hbar * self.c
    }

    pub fn momentum_in(&self, p: f64) -> f64 {
        p * self.c
    }

    pub fn momentum_out(&self, p: f64) -> f64 {
        p / self.c
    }

    /// Velocities are `c` times their natural-unit value.
    pub fn velocity_out(&self, v: f64) -> f64 {
        v * self.c
    }

    pub fn angular_frequency_out(&self, w: f64) -> f64 {
        w / self.hbar
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let u = UnitSystem::new(0.6582, 299.79).unwrap();
        for v in [0.0, 1.5, -3.25e4] {
            assert!((u.time_out(u.time_in(v)) - v).abs() <= 1e-12 * v.abs());
            assert!((u.length_out(u.length_in(v)) - v).abs() <= 1e-12 * v.abs());
            assert!((u.momentum_out(u.momentum_in(v)) - v).abs() <= 1e-12 * v.abs());
        }
        assert!(UnitSystem::new(0.0, 1.0).is_err());
        assert!(UnitSystem::default().is_natural());
    }

    #[test]
    fn time_operator_scaling() {
        // τ_r = √(r²/c² + τ₀²) in user units equals ħ·√(x² + τ²) internally.
        let u = UnitSystem::new(2.0, 3.0).unwrap();
        let (r, tau0) = (6.0, 1.5);
        let user = ((r / u.c).powi(2) + tau0 * tau0).sqrt();
        let internal = (u.length_in(r).powi(2) + u.time_in(tau0).powi(2)).sqrt();
        assert!((u.time_out(internal) - user).abs() < 1e-14);
    }
}
