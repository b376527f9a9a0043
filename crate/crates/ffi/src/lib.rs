//! C ABI over `dirac_time`.
//!
//! Grids and fields cross the boundary as opaque handles created by a
//! `dt_*_new`/builder call and released with the matching `dt_*_free`.
//! Every fallible function returns a [`DtStatus`]; on failure the message is
//! kept per thread and can be read with [`dt_last_error_message`].
//!
//! All quantities are in natural units (ħ = c = 1).

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirac_time::analysis::{momentum_shift, time_eigensystem, uncertainty_product};
use dirac_time::dynamics::{evolve_free, position_moments};
use dirac_time::hilbert::{expect_observable, MomentumGrid, Representation, SpinorField};
use dirac_time::operators::{hamiltonian_field, heisenberg_t_expectation, ModelParams};
use dirac_time::packets::{branch_purity, build_gaussian, plan_grid, BranchMix, PacketSpec};
use dirac_time::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Localization = 3,
    SingularProjector = 4,
    Runtime = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtBranch {
    Plus = 0,
    Minus = 1,
    /// Both branches; the negative one carries weight `mix_weight`.
    Mixed = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtModelParams {
    pub m0: f64,
    pub tau0: f64,
    pub q: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtPacketSpec {
    pub p_center: [f64; 3],
    pub sigma_p: [f64; 3],
    pub r_center: [f64; 3],
    pub branch: DtBranch,
    pub mix_weight: f64,
    pub spin_axis: [f64; 3],
    /// +1 or −1.
    pub spin_sign: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtUncertainty {
    pub delta_t: f64,
    pub delta_h: f64,
    pub product: f64,
    /// `½|⟨[T, H]⟩|`
    pub robertson_bound: f64,
    /// `½|⟨3 + 2Σ·L⟩|`
    pub spin_orbit_bound: f64,
    pub robertson_ok: bool,
    pub spin_orbit_ok: bool,
}

/// Eigen-system of `T` at the point `r ẑ`. Row `k` of `spinor_re`/`spinor_im`
/// is the eigenvector with eigenvalue `tau[k]` and `Σ_z/2` value `spin[k]`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtTimeEigensystem {
    pub tau_r: f64,
    pub normalization: f64,
    pub tau: [f64; 4],
    pub spin: [f64; 4],
    pub spinor_re: [[f64; 4]; 4],
    pub spinor_im: [[f64; 4]; 4],
}

/// Opaque momentum grid.
pub struct DtGrid {
    inner: MomentumGrid,
}

/// Opaque spinor field in the momentum representation.
pub struct DtField {
    inner: SpinorField,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DtStatus {
    match e {
        Error::Validation(_) | Error::Config { .. } => DtStatus::Validation,
        Error::Localization { .. } => DtStatus::Localization,
        Error::SingularProjector { .. } => DtStatus::SingularProjector,
        Error::Runtime(_) | Error::Io(_) => DtStatus::Runtime,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), DtStatus>) -> DtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DtStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DtStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DtStatus>;
}

impl<T> OrStatus<T> for dirac_time::Result<T> {
    fn or_status(self) -> Result<T, DtStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, DtStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(format!("{name} is null"));
        DtStatus::NullPointer
    })
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, DtStatus> {
    p.as_mut().ok_or_else(|| {
        set_error(format!("{name} is null"));
        DtStatus::NullPointer
    })
}

fn params_of(p: &DtModelParams) -> Result<ModelParams, DtStatus> {
    ModelParams::new(p.m0, p.tau0, p.q).or_status()
}

fn spec_of(s: &DtPacketSpec) -> Result<PacketSpec, DtStatus> {
    let branch = match s.branch {
        DtBranch::Plus => BranchMix::Plus,
        DtBranch::Minus => BranchMix::Minus,
        DtBranch::Mixed => BranchMix::Mixed(s.mix_weight),
    };
    let spec = PacketSpec::new(s.p_center, s.sigma_p, branch)
        .with_r_center(s.r_center)
        .with_spin(s.spin_axis, s.spin_sign);
    spec.validate().or_status()?;
    Ok(spec)
}

fn momentum_field(f: SpinorField) -> *mut DtField {
    let inner = f.to_representation(Representation::Momentum);
    Box::into_raw(Box::new(DtField { inner }))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL,
/// or 0 if no error has been recorded.
#[no_mangle]
pub unsafe extern "C" fn dt_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn dt_clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Cubic grid with `n` nodes per axis covering `[-p_max, p_max)`.
#[no_mangle]
pub unsafe extern "C" fn dt_grid_new(n: usize, p_max: f64, out_grid: *mut *mut DtGrid) -> DtStatus {
    guard(|| {
        let o = out(out_grid, "out_grid")?;
        *o = ptr::null_mut();
        let inner = MomentumGrid::new(n, p_max).or_status()?;
        *o = Box::into_raw(Box::new(DtGrid { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_grid_new_anisotropic(
    n: *const usize,
    p_max: *const f64,
    out_grid: *mut *mut DtGrid,
) -> DtStatus {
    guard(|| {
        let o = out(out_grid, "out_grid")?;
        *o = ptr::null_mut();
        let n = *arg(n as *const [usize; 3], "n")?;
        let p_max = *arg(p_max as *const [f64; 3], "p_max")?;
        let inner = MomentumGrid::anisotropic(n, p_max).or_status()?;
        *o = Box::into_raw(Box::new(DtGrid { inner }));
        Ok(())
    })
}

/// Smallest power-of-two grid on which the packet stays localized up to
/// time `t_max`.
#[no_mangle]
pub unsafe extern "C" fn dt_grid_plan(
    spec: *const DtPacketSpec,
    params: *const DtModelParams,
    t_max: f64,
    min_n: usize,
    out_grid: *mut *mut DtGrid,
) -> DtStatus {
    guard(|| {
        let o = out(out_grid, "out_grid")?;
        *o = ptr::null_mut();
        let spec = spec_of(arg(spec, "spec")?)?;
        let params = params_of(arg(params, "params")?)?;
        let inner = plan_grid(&spec, &params, t_max, min_n).or_status()?;
        *o = Box::into_raw(Box::new(DtGrid { inner }));
        Ok(())
    })
}

/// Writes nodes per axis and the momentum half-extent per axis.
#[no_mangle]
pub unsafe extern "C" fn dt_grid_shape(grid: *const DtGrid, n: *mut usize, p_max: *mut f64) -> DtStatus {
    guard(|| {
        let g = &arg(grid, "grid")?.inner;
        let n = out(n as *mut [usize; 3], "n")?;
        let p_max = out(p_max as *mut [f64; 3], "p_max")?;
        *n = g.n();
        *p_max = g.p_max();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_grid_free(grid: *mut DtGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Gaussian packet projected onto the requested energy branch(es),
/// normalized.
#[no_mangle]
pub unsafe extern "C" fn dt_field_gaussian(
    grid: *const DtGrid,
    spec: *const DtPacketSpec,
    params: *const DtModelParams,
    out_field: *mut *mut DtField,
) -> DtStatus {
    guard(|| {
        let o = out(out_field, "out_field")?;
        *o = ptr::null_mut();
        let g = &arg(grid, "grid")?.inner;
        let spec = spec_of(arg(spec, "spec")?)?;
        let params = params_of(arg(params, "params")?)?;
        *o = momentum_field(build_gaussian(&spec, g, &params).or_status()?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_field_clone(field: *const DtField, out_field: *mut *mut DtField) -> DtStatus {
    guard(|| {
        let o = out(out_field, "out_field")?;
        let f = &arg(field, "field")?.inner;
        *o = Box::into_raw(Box::new(DtField { inner: f.clone() }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_field_free(field: *mut DtField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of grid nodes; the field holds four complex components per node.
#[no_mangle]
pub unsafe extern "C" fn dt_field_len(field: *const DtField) -> usize {
    field.as_ref().map_or(0, |f| f.inner.len())
}

#[no_mangle]
pub unsafe extern "C" fn dt_field_norm_sqr(field: *const DtField, out_value: *mut f64) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        *out(out_value, "out_value")? = f.norm_sqr();
        Ok(())
    })
}

/// Copies the momentum amplitudes into `re`/`im`, each of length
/// `4 * dt_field_len`, node-major with the spinor component fastest.
#[no_mangle]
pub unsafe extern "C" fn dt_field_copy_amplitudes(
    field: *const DtField,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        if re.is_null() || im.is_null() {
            set_error("re/im buffers are null".into());
            return Err(DtStatus::NullPointer);
        }
        let need = 4 * f.len();
        if len < need {
            set_error(format!("buffer holds {len} values, {need} needed"));
            return Err(DtStatus::BufferTooSmall);
        }
        let re = std::slice::from_raw_parts_mut(re, need);
        let im = std::slice::from_raw_parts_mut(im, need);
        for (k, c) in f.data().iter().flatten().enumerate() {
            re[k] = c.re;
            im[k] = c.im;
        }
        Ok(())
    })
}

/// Free evolution by time `t` into a new field.
#[no_mangle]
pub unsafe extern "C" fn dt_evolve_free(
    field: *const DtField,
    t: f64,
    params: *const DtModelParams,
    out_field: *mut *mut DtField,
) -> DtStatus {
    guard(|| {
        let o = out(out_field, "out_field")?;
        *o = ptr::null_mut();
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        *o = momentum_field(evolve_free(f, t, &params).or_status()?);
        Ok(())
    })
}

/// `⟨T⟩` for the current state.
#[no_mangle]
pub unsafe extern "C" fn dt_expect_time_operator(
    field: *const DtField,
    params: *const DtModelParams,
    out_value: *mut f64,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        let o = out(out_value, "out_value")?;
        f.require_normalized().or_status()?;
        f.require_localized().or_status()?;
        *o = position_moments(f, &params).or_status()?.time_op;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_expect_hamiltonian(
    field: *const DtField,
    params: *const DtModelParams,
    out_value: *mut f64,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        let o = out(out_value, "out_value")?;
        *o = expect_observable(f, &hamiltonian_field(&params)).or_status()?;
        Ok(())
    })
}

/// `⟨ψ₀|T(t)|ψ₀⟩` from the closed-form Heisenberg operator.
#[no_mangle]
pub unsafe extern "C" fn dt_heisenberg_time(
    field: *const DtField,
    t: f64,
    params: *const DtModelParams,
    out_value: *mut f64,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        let o = out(out_value, "out_value")?;
        *o = heisenberg_t_expectation(f, t, &params).or_status()?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_uncertainty(
    field: *const DtField,
    params: *const DtModelParams,
    out_report: *mut DtUncertainty,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        let o = out(out_report, "out_report")?;
        let r = uncertainty_product(f, &params).or_status()?;
        *o = DtUncertainty {
            delta_t: r.delta_t,
            delta_h: r.delta_h,
            product: r.product,
            robertson_bound: r.robertson_bound,
            spin_orbit_bound: r.spin_orbit_bound,
            robertson_ok: r.robertson_ok,
            spin_orbit_ok: r.spin_orbit_ok,
        };
        Ok(())
    })
}

/// Weight of the positive-energy branch, in `[0, 1]`.
#[no_mangle]
pub unsafe extern "C" fn dt_branch_purity(
    field: *const DtField,
    params: *const DtModelParams,
    out_value: *mut f64,
) -> DtStatus {
    guard(|| {
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        *out(out_value, "out_value")? = branch_purity(f, &params).or_status()?;
        Ok(())
    })
}

/// Applies `exp(−iεT)` into a new field.
#[no_mangle]
pub unsafe extern "C" fn dt_momentum_shift(
    field: *const DtField,
    epsilon: f64,
    params: *const DtModelParams,
    out_field: *mut *mut DtField,
) -> DtStatus {
    guard(|| {
        let o = out(out_field, "out_field")?;
        *o = ptr::null_mut();
        let f = &arg(field, "field")?.inner;
        let params = params_of(arg(params, "params")?)?;
        *o = momentum_field(momentum_shift(f, epsilon, &params).or_status()?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dt_time_eigensystem(
    r: f64,
    params: *const DtModelParams,
    out_system: *mut DtTimeEigensystem,
) -> DtStatus {
    guard(|| {
        let params = params_of(arg(params, "params")?)?;
        let o = out(out_system, "out_system")?;
        let es = time_eigensystem(r, &params).or_status()?;
        *o = DtTimeEigensystem {
            tau_r: es.tau_r,
            normalization: es.normalization,
            tau: es.labels.map(|l| l.0),
            spin: es.labels.map(|l| l.1),
            spinor_re: es.spinors.map(|u| u.map(|c| c.re)),
            spinor_im: es.spinors.map(|u| u.map(|c| c.im)),
        };
        Ok(())
    })
}
