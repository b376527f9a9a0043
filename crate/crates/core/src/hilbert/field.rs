use rayon::prelude::*;

use super::fourier;
use super::grid::{MomentumGrid, Representation};
use crate::algebra::{spinor_dot, spinor_norm_sqr, Matrix4, Spinor4, C64, ZERO};
use crate::error::{Error, Result};
use crate::par;

/// Largest boundary amplitude, relative to the peak amplitude, for which a
/// field counts as localized.
pub const LOCALIZATION_THRESHOLD: f64 = 1e-10;

/// Tolerance on `|⟨ψ|ψ⟩ − 1|` for a field to count as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Four complex amplitudes per grid node, in either representation.
#[derive(Clone, Debug)]
pub struct SpinorField {
    grid: MomentumGrid,
    repr: Representation,
    data: Vec<Spinor4>,
}

impl SpinorField {
    pub fn new(grid: MomentumGrid, repr: Representation, data: Vec<Spinor4>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::validation(format!(
                "field has {} nodes but the grid has {}",
                data.len(),
                grid.len()
            )));
        }
        if data.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::validation("field contains non-finite amplitudes"));
        }
        Ok(SpinorField { grid, repr, data })
    }

    pub fn zeros(grid: MomentumGrid, repr: Representation) -> Self {
        SpinorField {
            grid,
            repr,
            data: vec![[ZERO; 4]; grid.len()],
        }
    }

    /// Builds a field from a function of the node coordinates in `repr`.
    pub fn from_fn(grid: MomentumGrid, repr: Representation, f: impl Fn([f64; 3]) -> Spinor4 + Sync) -> Self {
        let data = (0..grid.len()).into_par_iter().map(|i| f(grid.node(i, repr))).collect();
        SpinorField { grid, repr, data }
    }

    pub(crate) fn from_parts(grid: MomentumGrid, repr: Representation, data: Vec<Spinor4>) -> Self {
        debug_assert_eq!(data.len(), grid.len());
        SpinorField { grid, repr, data }
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn data(&self) -> &[Spinor4] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Spinor4] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Spinor4> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().flatten().all(|c| c.is_finite())
    }

    fn check_compatible(&self, other: &SpinorField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::validation("fields live on different grids"));
        }
        if self.repr != other.repr {
            return Err(Error::validation(format!(
                "fields are in different representations ({} vs {})",
                self.repr.name(),
                other.repr.name()
            )));
        }
        Ok(())
    }

    /// `⟨self|other⟩` as a Riemann sum over the grid.
    pub fn inner(&self, other: &SpinorField) -> Result<C64> {
        self.check_compatible(other)?;
        let dv = self.grid.cell_volume(self.repr);
        Ok(par::sum_c64(self.len(), |i| spinor_dot(&self.data[i], &other.data[i])) * dv)
    }

    pub fn norm_sqr(&self) -> f64 {
        let dv = self.grid.cell_volume(self.repr);
        par::sum_f64(self.len(), |i| spinor_norm_sqr(&self.data[i])) * dv
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::validation("cannot normalize a zero or non-finite field"));
        }
        let s = 1.0 / n.sqrt();
        self.data.par_iter_mut().flatten().for_each(|c| *c *= s);
        Ok(self)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    pub fn require_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::validation(format!("field is not normalized (norm² = {n:.12})")));
        }
        Ok(())
    }

    /// The same state in `target` representation.
    pub fn to_representation(&self, target: Representation) -> SpinorField {
        if target == self.repr {
            return self.clone();
        }
        let mut data = self.data.clone();
        fourier::transform(&mut data, &self.grid, target);
        SpinorField {
            grid: self.grid,
            repr: target,
            data,
        }
    }

    /// The same state in the other representation.
    pub fn switch_representation(&self) -> SpinorField {
        self.to_representation(self.repr.conjugate())
    }

    pub fn peak_amplitude(&self) -> f64 {
        par::max_f64(self.len(), |i| spinor_norm_sqr(&self.data[i])).sqrt()
    }

    /// Largest amplitude on the outer faces of the grid divided by the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.peak_amplitude();
        if peak == 0.0 {
            return 0.0;
        }
        let g = self.grid;
        par::max_f64(self.len(), |i| {
            if g.is_boundary(i) {
                spinor_norm_sqr(&self.data[i])
            } else {
                0.0
            }
        })
        .sqrt()
            / peak
    }

    /// Errors unless the field is negligible at the edges of both the
    /// momentum and the position grid.
    pub fn require_localized(&self) -> Result<()> {
        let check = |f: &SpinorField| {
            let amplitude = f.boundary_ratio();
            if amplitude > LOCALIZATION_THRESHOLD {
                Err(Error::Localization {
                    amplitude,
                    threshold: LOCALIZATION_THRESHOLD,
                    representation: f.repr.name(),
                })
            } else {
                Ok(())
            }
        };
        check(self)?;
        check(&self.switch_representation())
    }

    /// Node-wise `M(q) ψ(q)` with `q` the node coordinate in the field's own
    /// representation.
    pub fn map_nodes(&self, m: impl Fn([f64; 3]) -> Matrix4 + Sync) -> SpinorField {
        let g = self.grid;
        let repr = self.repr;
        let data = self
            .data
            .par_iter()
            .enumerate()
            .map(|(i, v)| m(g.node(i, repr)).apply(v))
            .collect();
        SpinorField { grid: g, repr, data }
    }

    /// Node-wise map with access to the node coordinate and the spinor.
    pub fn map_spinors(&self, f: impl Fn([f64; 3], &Spinor4) -> Spinor4 + Sync) -> SpinorField {
        let g = self.grid;
        let repr = self.repr;
        let data = self
            .data
            .par_iter()
            .enumerate()
            .map(|(i, v)| f(g.node(i, repr), v))
            .collect();
        SpinorField { grid: g, repr, data }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &SpinorField, b: C64) -> Result<SpinorField> {
        self.check_compatible(other)?;
        let data = self
            .data
            .par_iter()
            .zip(other.data.par_iter())
            .map(|(u, v)| std::array::from_fn(|c| u[c] * a + v[c] * b))
            .collect();
        Ok(SpinorField::from_parts(self.grid, self.repr, data))
    }

    pub fn scaled(&self, s: C64) -> SpinorField {
        let data = self.data.par_iter().map(|u| u.map(|c| c * s)).collect();
        SpinorField::from_parts(self.grid, self.repr, data)
    }

    /// Largest node-wise difference `|self − other|`, ignoring normalization
    /// conventions (both must share grid and representation).
    pub fn max_difference(&self, other: &SpinorField) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(par::max_f64(self.len(), |i| {
            let d: Spinor4 = std::array::from_fn(|c| self.data[i][c] - other.data[i][c]);
            spinor_norm_sqr(&d)
        })
        .sqrt())
    }
}

/// `⟨a|b⟩`; both fields must share grid and representation.
pub fn inner_product(a: &SpinorField, b: &SpinorField) -> Result<C64> {
    a.inner(b)
}

pub fn switch_representation(field: &SpinorField) -> SpinorField {
    field.switch_representation()
}
