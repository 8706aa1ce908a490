//! C ABI over the `sc-tdr` simulator.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `*_free`. Every fallible call returns an [`ScTdrStatus`]; on
//! failure [`sc_tdr_last_error`] describes the most recent error on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sc_tdr::readout::{nmse, train_readout, ReadoutModel};
use sc_tdr::reservoir::{EngineKind, EsnConfig, Reservoir, StateMatrix, TdrConfig};
use sc_tdr::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScTdrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScTdrEngine {
    Float = 0,
    Stochastic = 1,
    Fixed = 2,
    Esn = 3,
}

/// Reservoir parameters. The ESN engine reads `nodes` and `seed` only.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScTdrParams {
    pub engine: ScTdrEngine,
    pub nodes: usize,
    pub stream_len: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
    /// Bernstein order.
    pub order: usize,
    pub seed: u64,
    pub reseed: bool,
    pub copy_delay: usize,
}

/// Opaque reservoir handle.
pub struct ScTdrReservoir {
    inner: Reservoir,
}

/// Opaque trained readout handle.
pub struct ScTdrReadout {
    model: ReadoutModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> ScTdrStatus {
    match err {
        Error::OutOfRange { .. } | Error::LengthMismatch { .. } | Error::InvalidArgument(_) => {
            ScTdrStatus::InvalidArgument
        }
        Error::Config(_) | Error::Dataset(_) => ScTdrStatus::Config,
        Error::Numerical(_) => ScTdrStatus::Numerical,
        _ => ScTdrStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> ScTdrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScTdrStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            ScTdrStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            ScTdrStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &'static str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn mismatch(what: &'static str, expected: usize, actual: usize) -> Failure {
    Failure::Core(Error::LengthMismatch { what, expected, actual })
}

/// Defaults for an `nodes`-node float reservoir seeded with `seed`.
#[no_mangle]
pub extern "C" fn sc_tdr_params_default(nodes: usize, seed: u64) -> ScTdrParams {
    let c = TdrConfig::new(nodes.max(1), seed);
    ScTdrParams {
        engine: ScTdrEngine::Float,
        nodes,
        stream_len: c.stream_len,
        alpha: c.alpha,
        gamma: c.gamma,
        theta: c.theta,
        order: c.order,
        seed,
        reseed: c.reseed,
        copy_delay: c.copy_delay,
    }
}

fn build(p: &ScTdrParams) -> Result<Reservoir, Error> {
    let engine = match p.engine {
        ScTdrEngine::Float => EngineKind::Float,
        ScTdrEngine::Stochastic => EngineKind::Stochastic,
        ScTdrEngine::Fixed => EngineKind::Fixed,
        ScTdrEngine::Esn => return Reservoir::from_esn(&EsnConfig::new(p.nodes, p.seed)),
    };
    if p.nodes == 0 {
        return Err(Error::Config("reservoir needs at least one node".into()));
    }
    let mut c = TdrConfig::new(p.nodes, p.seed).with_engine(engine);
    c.stream_len = p.stream_len;
    c.alpha = p.alpha;
    c.gamma = p.gamma;
    c.theta = p.theta;
    c.order = p.order;
    c.reseed = p.reseed;
    c.copy_delay = p.copy_delay;
    Reservoir::from_config(&c)
}

/// Build a reservoir; on success `*out` owns a new handle.
///
/// # Safety
/// `params` must point to a valid `ScTdrParams` and `out` to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_new(
    params: *const ScTdrParams,
    out: *mut *mut ScTdrReservoir,
) -> ScTdrStatus {
    guard(|| {
        let p = params.as_ref().ok_or(Failure::Null("params"))?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let inner = build(p)?;
        *out = Box::into_raw(Box::new(ScTdrReservoir { inner }));
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a handle from [`sc_tdr_reservoir_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_free(res: *mut ScTdrReservoir) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_nodes(res: *const ScTdrReservoir) -> usize {
    res.as_ref().map_or(0, |r| r.inner.nodes())
}

/// Zero the reservoir state.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_reset(res: *mut ScTdrReservoir) -> ScTdrStatus {
    guard(|| {
        res.as_mut().ok_or(Failure::Null("reservoir"))?.inner.reset_state();
        Ok(())
    })
}

/// Feed one input sample and copy the node values into `out`, which must hold
/// exactly `nodes` doubles.
///
/// # Safety
/// `res` must be a live handle and `out` valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_step(
    res: *mut ScTdrReservoir,
    u: f64,
    out: *mut f64,
    out_len: usize,
) -> ScTdrStatus {
    guard(|| {
        let r = res.as_mut().ok_or(Failure::Null("reservoir"))?;
        let n = r.inner.nodes();
        if out_len != n {
            return Err(mismatch("step output", n, out_len));
        }
        let out = slice_mut(out, out_len, "out")?;
        out.copy_from_slice(r.inner.step(u)?);
        Ok(())
    })
}

/// Drive the reservoir over `inputs` and write the rows after `washout`,
/// row-major, into `out` (`(len - washout) * nodes` doubles).
///
/// # Safety
/// `res` must be a live handle, `inputs` valid for `len` reads and `out`
/// valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_reservoir_run(
    res: *mut ScTdrReservoir,
    inputs: *const f64,
    len: usize,
    washout: usize,
    out: *mut f64,
    out_len: usize,
) -> ScTdrStatus {
    guard(|| {
        let r = res.as_mut().ok_or(Failure::Null("reservoir"))?;
        let inputs = slice(inputs, len, "inputs")?;
        let expected = len.saturating_sub(washout) * r.inner.nodes();
        if out_len != expected {
            return Err(mismatch("run output", expected, out_len));
        }
        let m = r.inner.run(inputs, washout, "")?;
        let out = slice_mut(out, out_len, "out")?;
        for row in 0..m.rows() {
            out[row * m.cols()..(row + 1) * m.cols()].copy_from_slice(m.row(row));
        }
        Ok(())
    })
}

fn feature_matrix(data: &[f64], rows: usize, cols: usize) -> Result<StateMatrix, Error> {
    // External features only need to be finite, which is the ESN row check.
    let mut m = StateMatrix::with_capacity(cols, rows, EngineKind::Esn, String::new());
    for r in 0..rows {
        m.push_row(&data[r * cols..(r + 1) * cols])?;
    }
    Ok(m)
}

/// Ridge-regression readout on row-major `states` (`rows * cols`) with a
/// bias term.
///
/// # Safety
/// `states` must be valid for `rows * cols` reads, `targets` for `rows`
/// reads and `out` writable for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_readout_train(
    states: *const f64,
    rows: usize,
    cols: usize,
    targets: *const f64,
    ridge: f64,
    out: *mut *mut ScTdrReadout,
) -> ScTdrStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let total = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::InvalidArgument("rows * cols overflows".into()))?;
        let m = feature_matrix(slice(states, total, "states")?, rows, cols)?;
        let model = train_readout(&m, slice(targets, rows, "targets")?, ridge)?;
        *out = Box::into_raw(Box::new(ScTdrReadout { model }));
        Ok(())
    })
}

/// # Safety
/// `ro` must be null or a handle from [`sc_tdr_readout_train`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_readout_free(ro: *mut ScTdrReadout) {
    if !ro.is_null() {
        drop(Box::from_raw(ro));
    }
}

/// Predictions for `rows` row-major feature rows written to `out`.
///
/// # Safety
/// `ro` must be a live handle, `states` valid for `rows * cols` reads and
/// `out` valid for `rows` writes.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_readout_predict(
    ro: *const ScTdrReadout,
    states: *const f64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> ScTdrStatus {
    guard(|| {
        let ro = ro.as_ref().ok_or(Failure::Null("readout"))?;
        if cols != ro.model.inputs() {
            return Err(mismatch("feature columns", ro.model.inputs(), cols));
        }
        let total = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::InvalidArgument("rows * cols overflows".into()))?;
        let states = slice(states, total, "states")?;
        let out = slice_mut(out, rows, "out")?;
        for (r, y) in out.iter_mut().enumerate() {
            *y = ro.model.predict_row(&states[r * cols..(r + 1) * cols]);
        }
        Ok(())
    })
}

/// Copy the `cols + 1` weights (bias last) into `out`.
///
/// # Safety
/// `ro` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_readout_weights(ro: *const ScTdrReadout, out: *mut f64, len: usize) -> ScTdrStatus {
    guard(|| {
        let ro = ro.as_ref().ok_or(Failure::Null("readout"))?;
        let w = ro.model.weights();
        if len != w.len() {
            return Err(mismatch("weights", w.len(), len));
        }
        slice_mut(out, len, "out")?.copy_from_slice(w);
        Ok(())
    })
}

/// Normalized mean squared error of `yhat` against `y`.
///
/// # Safety
/// `y` and `yhat` must be valid for `len` reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn sc_tdr_nmse(y: *const f64, yhat: *const f64, len: usize, out: *mut f64) -> ScTdrStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = nmse(slice(y, len, "y")?, slice(yhat, len, "yhat")?)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sc_tdr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_tdr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
