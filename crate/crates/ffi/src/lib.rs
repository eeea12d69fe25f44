//! C ABI over `cone_spectra`.
//!
//! Every entry point returns a [`CsStatus`] and writes results through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. After a failure, [`cs_last_error`] copies the message of the most
//! recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use cone_spectra::asymptotics::{counting_sweep, fiber_count, CountingCurve, SweepPolicy, ThresholdReference};
use cone_spectra::discretize::TruncatedDomain;
use cone_spectra::fibers::ConeConfig;
use cone_spectra::model1d::{
    delta_interval_ground, inverse_square_count, tensor_lower_bound_count, BoundaryCondition, IntervalDeltaProblem,
    InverseSquareProblem,
};
use cone_spectra::Error;

/// Result codes. The nonzero values 1 to 3 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    /// A mathematical invariant failed to hold.
    Invariant = 1,
    /// Invalid parameter or configuration.
    InvalidInput = 2,
    /// Factorization, convergence or fitting failure.
    Numerical = 3,
    NullPointer = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsBoundary {
    Dirichlet = 0,
    Neumann = 1,
}

impl From<CsBoundary> for BoundaryCondition {
    fn from(b: CsBoundary) -> Self {
        match b {
            CsBoundary::Dirichlet => BoundaryCondition::Dirichlet,
            CsBoundary::Neumann => BoundaryCondition::Neumann,
        }
    }
}

/// Opaque cone parameters.
pub struct CsCone(ConeConfig);

/// Opaque counting curve.
pub struct CsCurve(CountingCurve);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsFiber {
    pub l: u32,
    pub angular_ev: f64,
    pub gamma: f64,
    pub multiplicity: u64,
    pub threshold: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsSample {
    pub e: f64,
    pub ln_inv: f64,
    pub count: usize,
    pub lower: usize,
    pub extent_s: f64,
    pub h: f64,
    pub nodes: usize,
    pub threshold: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CsFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
    pub predicted: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CsStatus {
    match e.exit_code() {
        1 => CsStatus::Invariant,
        2 => CsStatus::InvalidInput,
        _ => CsStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CsStatus>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            CsStatus::Internal
        }
    }
}

fn lift<T>(r: cone_spectra::Result<T>) -> Result<T, CsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), CsStatus> {
    if p.is_null() {
        set_error(format!("null pointer `{name}`"));
        return Err(CsStatus::NullPointer);
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncated to `len` bytes. Returns the full
/// message length without the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cs_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Validates the parameters and allocates a cone handle.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cs_cone_new(d: u32, theta: f64, alpha: f64, out: *mut *mut CsCone) -> CsStatus {
    guard(|| {
        non_null(out, "out")?;
        let cfg = lift(ConeConfig::new(d, theta, alpha))?;
        *out = Box::into_raw(Box::new(CsCone(cfg)));
        Ok(())
    })
}

/// # Safety
/// `cone` must be null or a handle from [`cs_cone_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_cone_free(cone: *mut CsCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// Coefficients of fiber `l`.
///
/// # Safety
/// `cone` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_fiber(cone: *const CsCone, l: u32, out: *mut CsFiber) -> CsStatus {
    guard(|| {
        non_null(cone, "cone")?;
        non_null(out, "out")?;
        let f = (*cone).0.fiber(l);
        *out = CsFiber {
            l: f.l,
            angular_ev: f.angular_ev,
            gamma: f.gamma,
            multiplicity: f.multiplicity,
            threshold: f.threshold,
        };
        Ok(())
    })
}

/// Ground state of the interval δ-problem. `*found` is 0 when the interval
/// carries no negative eigenvalue; the energies are then left untouched.
///
/// # Safety
/// The out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_interval_ground(
    alpha: f64,
    half_length: f64,
    bc: CsBoundary,
    found: *mut i32,
    energy: *mut f64,
    gap: *mut f64,
) -> CsStatus {
    guard(|| {
        non_null(found, "found")?;
        non_null(energy, "energy")?;
        non_null(gap, "gap")?;
        let p = lift(IntervalDeltaProblem::new(alpha, half_length, bc.into()))?;
        match delta_interval_ground(&p) {
            Some(s) => {
                *found = 1;
                *energy = s.energy;
                *gap = s.gap;
            }
            None => *found = 0,
        }
        Ok(())
    })
}

/// Eigenvalues of `-d²/dx² - c/x²` on the half-line below `-e`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_inverse_square_count(c: f64, bc: CsBoundary, e: f64, out: *mut usize) -> CsStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = lift(InverseSquareProblem::new(c, bc.into()))?;
        *out = lift(inverse_square_count(&p, e))?;
        Ok(())
    })
}

/// Tensor-product lower bound for the axisymmetric count at depth `e` and
/// length `r`.
///
/// # Safety
/// `cone` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_lower_bound(cone: *const CsCone, r: f64, e: f64, out: *mut usize) -> CsStatus {
    guard(|| {
        non_null(cone, "cone")?;
        non_null(out, "out")?;
        *out = lift(tensor_lower_bound_count(&(*cone).0, r, e))?.count;
        Ok(())
    })
}

/// Axisymmetric eigenvalues below the mesh threshold minus `e`, on the
/// wedge truncated at length `extent_s` with spacing `h`.
///
/// # Safety
/// `cone` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_fiber_count(
    cone: *const CsCone,
    extent_s: f64,
    h: f64,
    e: f64,
    out: *mut usize,
) -> CsStatus {
    guard(|| {
        non_null(cone, "cone")?;
        non_null(out, "out")?;
        let cfg = &(*cone).0;
        let dom = lift(TruncatedDomain::with_radius(cfg, extent_s))?;
        *out = lift(fiber_count(cfg, 0, &dom, h, e, ThresholdReference::Mesh))?.count;
        Ok(())
    })
}

/// Counting sweep over `n` log-spaced depths from `e_max` down to `e_min`
/// with default truncation and spacing.
///
/// # Safety
/// `cone` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cs_sweep(
    cone: *const CsCone,
    e_max: f64,
    e_min: f64,
    n: usize,
    jobs: usize,
    out: *mut *mut CsCurve,
) -> CsStatus {
    guard(|| {
        non_null(cone, "cone")?;
        non_null(out, "out")?;
        let cfg = &(*cone).0;
        let pol = lift(SweepPolicy::new(cfg.alpha, e_max, e_min, n))?;
        let curve = lift(counting_sweep(cfg, &pol, jobs.max(1)))?;
        *out = Box::into_raw(Box::new(CsCurve(curve)));
        Ok(())
    })
}

/// # Safety
/// `curve` must be null or a handle from [`cs_sweep`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_curve_free(curve: *mut CsCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of samples, 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_curve_len(curve: *const CsCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.0.samples.len())
}

/// Sample `i`, in order of decreasing depth.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_curve_sample(curve: *const CsCurve, i: usize, out: *mut CsSample) -> CsStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        let c = &(*curve).0;
        let Some(s) = c.samples.get(i) else {
            set_error(format!("sample index {i} out of range"));
            return Err(CsStatus::InvalidInput);
        };
        *out = CsSample {
            e: s.e,
            ln_inv: s.ln_inv,
            count: s.count,
            lower: s.lower,
            extent_s: s.extent_s,
            h: s.h,
            nodes: s.nodes,
            threshold: s.threshold,
        };
        Ok(())
    })
}

/// Log-slope fit of the curve and the predicted slope.
///
/// # Safety
/// `curve` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cs_curve_fit(curve: *const CsCurve, out: *mut CsFit) -> CsStatus {
    guard(|| {
        non_null(curve, "curve")?;
        non_null(out, "out")?;
        let c = &(*curve).0;
        *out = CsFit {
            slope: c.slope,
            intercept: c.intercept,
            r_squared: c.r_squared,
            slope_stderr: c.slope_stderr,
            predicted: c.predicted,
        };
        Ok(())
    })
}
