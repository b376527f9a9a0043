use rustfft::FftPlanner;

use crate::algebra::C64;
use crate::dynamics::{fit_line, ObservableSeries};
use crate::error::{Error, Result};

pub const ZBW_MIN_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZbwReport {
    /// Refined angular frequency of the dominant oscillation.
    pub omega: f64,
    /// Angular frequency of the peak DFT bin.
    pub omega_bin: f64,
    /// Angular width of one DFT bin, `2π / (N Δt)`.
    pub bin_width: f64,
    /// Amplitude of the fitted sinusoid.
    pub amplitude: f64,
}

/// Dominant oscillation of the detrended `⟨z⟩(t)`.
pub fn zbw_spectrum(series: &ObservableSeries) -> Result<ZbwReport> {
    zbw_spectrum_axis(series, 2)
}

pub fn zbw_spectrum_axis(series: &ObservableSeries, axis: usize) -> Result<ZbwReport> {
    if axis > 2 {
        return Err(Error::validation(format!("axis {axis} out of range")));
    }
    let n = series.len();
    if n < ZBW_MIN_SAMPLES {
        return Err(Error::validation(format!(
            "spectrum needs at least {ZBW_MIN_SAMPLES} samples, got {n}"
        )));
    }
    let t = series.times();
    let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
    if !(dt > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1.0)) {
        return Err(Error::validation("spectrum needs uniformly spaced samples"));
    }
    let z = series.column(|r| r.r[axis]);
    let (slope, icept) = fit_line(&t, &z)?;
    let resid: Vec<f64> = t.iter().zip(&z).map(|(ti, zi)| zi - slope * ti - icept).collect();

    let mut buf: Vec<C64> = resid.iter().map(|&v| C64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let peak = (1..=n / 2)
        .max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm()))
        .unwrap_or(1);
    let bin_width = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    let omega_bin = peak as f64 * bin_width;

    // Refine the frequency within ±1 bin by minimizing the residual of a
    // line-plus-sinusoid least-squares fit.
    let residual = |w: f64| sinusoid_fit(&t, &z, w).map(|f| f.1).unwrap_or(f64::INFINITY);
    let (mut lo, mut hi) = ((omega_bin - bin_width).max(0.5 * bin_width), omega_bin + bin_width);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (residual(a), residual(b));
    for _ in 0..100 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = residual(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = residual(b);
        }
        if hi - lo < 1e-12 * omega_bin.max(1.0) {
            break;
        }
    }
    let omega = 0.5 * (lo + hi);
    let (amplitude, _) = sinusoid_fit(&t, &z, omega)?;
    Ok(ZbwReport {
        omega,
        omega_bin,
        bin_width,
        amplitude,
    })
}

/// Fits `c₀ + c₁t + a cos ωt + b sin ωt`; returns `(√(a² + b²), Σ residual²)`.
fn sinusoid_fit(t: &[f64], y: &[f64], omega: f64) -> Result<(f64, f64)> {
    let basis = |ti: f64| [1.0, ti, (omega * ti).cos(), (omega * ti).sin()];
    let mut m = [[0.0; 5]; 4];
    for (&ti, &yi) in t.iter().zip(y) {
        let f = basis(ti);
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] += f[r] * f[c];
            }
            m[r][4] += f[r] * yi;
        }
    }
    let c = solve4(m).ok_or_else(|| Error::runtime("singular sinusoid fit"))?;
    let rss = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| {
            let f = basis(ti);
            (yi - (0..4).map(|k| c[k] * f[k]).sum::<f64>()).powi(2)
        })
        .sum();
    Ok((c[2].hypot(c[3]), rss))
}

fn solve4(mut m: [[f64; 5]; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..5 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some(std::array::from_fn(|k| m[k][4] / m[k][k]))
}
