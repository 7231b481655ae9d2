//! C ABI over the `sasc` library.
//!
//! Models live behind an opaque `SascModel` handle. Every fallible call
//! returns a `SascStatus`; on failure `sasc_last_error` gives a message for
//! the calling thread. Constructors return null on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sasc::chain::end_to_end_gain;
use sasc::model::{check_stability, drift_matrix, CouplingParams, ModeParams, SystemModel, Topology};
use sasc::spectra::{
    output_spectrum_point, port_transmission, snr_point, thermal_occupation, transmission_du,
    transmission_three, Convention, SpectrumOptions, TransferEngine,
};
use sasc::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SascStatus {
    Ok = 0,
    /// Null pointer, wrong buffer length or out-of-range index.
    InvalidArgument = 1,
    InvalidParameter = 2,
    Unstable = 3,
    /// Asymmetry requested where both transmissions vanish.
    Undefined = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SascConvention {
    Alternating = 0,
    Physical = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SascAsymmetry {
    /// Two-mode models only.
    Ab = 0,
    /// Three-mode models only.
    Mb = 1,
    Bc = 2,
}

/// Mode parameters in units of the low-mode frequency, except
/// `absolute_frequency` (rad/s), which only enters thermal occupations.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SascMode {
    pub absolute_frequency: f64,
    pub kappa: f64,
    pub detuning: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SascCoupling {
    pub magnitude: f64,
    pub phase: f64,
}

/// Opaque model handle.
pub struct SascModel {
    model: SystemModel,
    options: SpectrumOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SascStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter(_) => SascStatus::InvalidParameter,
            Error::Unstable { .. } => SascStatus::Unstable,
            Error::UndefinedAsymmetry => SascStatus::Undefined,
            _ => SascStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn bad_arg(msg: impl Into<String>) -> Failure {
    Failure(SascStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records its error and converts panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SascStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SascStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SascStatus::Panic
        }
    }
}

fn new_handle(f: impl FnOnce() -> Result<SystemModel, Failure>) -> *mut SascModel {
    let mut out = ptr::null_mut();
    guard(|| {
        let model = f()?;
        out = Box::into_raw(Box::new(SascModel {
            model,
            options: SpectrumOptions::default(),
        }));
        Ok(())
    });
    out
}

fn mode(label: String, m: &SascMode) -> ModeParams {
    ModeParams::new(label, m.absolute_frequency, m.kappa, m.detuning)
}

fn coupling(g: &SascCoupling) -> CouplingParams {
    CouplingParams::new(g.magnitude, g.phase)
}

unsafe fn handle<'a>(h: *const SascModel) -> Result<&'a SascModel, Failure> {
    h.as_ref().ok_or_else(|| bad_arg("null model handle"))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| bad_arg(format!("null output pointer `{name}`")))
}

fn check_port(h: &SascModel, port: usize) -> Result<(), Failure> {
    if port < h.model.mode_count() {
        Ok(())
    } else {
        Err(bad_arg(format!("port {port} out of range for {} modes", h.model.mode_count())))
    }
}

/// Last error message on this thread, or null. Valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn sasc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Two-mode unit: high mode `a`, low mode `b`.
///
/// # Safety
/// `a` and `b` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_du(
    a: *const SascMode,
    b: *const SascMode,
    g: SascCoupling,
    temperature: f64,
) -> *mut SascModel {
    new_handle(|| {
        let (a, b) = (a.as_ref(), b.as_ref());
        let (Some(a), Some(b)) = (a, b) else {
            return Err(bad_arg("null mode pointer"));
        };
        Ok(SystemModel::du(mode("a".into(), a), mode("b".into(), b), coupling(&g), temperature)?)
    })
}

/// Three-mode system `m`-`b`-`c`.
///
/// # Safety
/// `m`, `b` and `c` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_three_mode(
    m: *const SascMode,
    b: *const SascMode,
    c: *const SascMode,
    g_m: SascCoupling,
    g_c: SascCoupling,
    temperature: f64,
) -> *mut SascModel {
    new_handle(|| {
        let (Some(m), Some(b), Some(c)) = (m.as_ref(), b.as_ref(), c.as_ref()) else {
            return Err(bad_arg("null mode pointer"));
        };
        Ok(SystemModel::three_mode(
            mode("m".into(), m),
            mode("b".into(), b),
            mode("c".into(), c),
            coupling(&g_m),
            coupling(&g_c),
            temperature,
        )?)
    })
}

/// Chain of `n_modes` modes alternating high/low, with `n_modes - 1`
/// couplings.
///
/// # Safety
/// `modes` must point to `n_modes` values and `couplings` to `n_modes - 1`.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_chain(
    modes: *const SascMode,
    n_modes: usize,
    couplings: *const SascCoupling,
    temperature: f64,
) -> *mut SascModel {
    new_handle(|| {
        if modes.is_null() || couplings.is_null() || n_modes < 2 {
            return Err(bad_arg("chain needs at least 2 modes and non-null arrays"));
        }
        let ms = std::slice::from_raw_parts(modes, n_modes);
        let gs = std::slice::from_raw_parts(couplings, n_modes - 1);
        let ms = ms.iter().enumerate().map(|(i, m)| mode(format!("q{i}"), m)).collect();
        Ok(SystemModel::chain(ms, gs.iter().map(coupling).collect(), temperature)?)
    })
}

/// # Safety
/// `model` must be null or a handle from a `sasc_model_*` constructor not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_free(model: *mut SascModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_mode_count(model: *const SascModel) -> usize {
    model.as_ref().map_or(0, |h| h.model.mode_count())
}

/// # Safety
/// `model` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_set_convention(model: *mut SascModel, convention: SascConvention) -> SascStatus {
    guard(|| {
        let h = out_ref(model, "model")?;
        h.options.convention = match convention {
            SascConvention::Alternating => Convention::Alternating,
            SascConvention::Physical => Convention::Physical,
        };
        Ok(())
    })
}

/// Homodyne phase ψ in rad.
///
/// # Safety
/// `model` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn sasc_model_set_psi(model: *mut SascModel, psi: f64) -> SascStatus {
    guard(|| {
        if !psi.is_finite() {
            return Err(Failure(SascStatus::InvalidParameter, format!("psi must be finite, got {psi}")));
        }
        out_ref(model, "model")?.options.psi = psi;
        Ok(())
    })
}

/// Writes 1 to `stable` if every drift eigenvalue lies in the open left
/// half-plane, and the spectral abscissa to `abscissa`.
///
/// # Safety
/// `model` must be a valid handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sasc_stability(model: *const SascModel, stable: *mut i32, abscissa: *mut f64) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        let v = check_stability(&drift_matrix(&h.model))?;
        *out_ref(stable, "stable")? = i32::from(v.stable);
        *out_ref(abscissa, "abscissa")? = v.spectral_abscissa;
        Ok(())
    })
}

fn engine(h: &SascModel) -> Result<TransferEngine, Failure> {
    Ok(TransferEngine::new(&h.model, h.options.convention)?)
}

/// `Γ(ω)` as row-major real and imaginary parts; `len` must equal
/// `(2 n_modes)²`.
///
/// # Safety
/// `re` and `im` must each point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sasc_transfer_matrix(
    model: *const SascModel,
    omega: f64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        let n = 2 * h.model.mode_count();
        if len != n * n || re.is_null() || im.is_null() {
            return Err(bad_arg(format!("expected two buffers of {} doubles", n * n)));
        }
        let tr = engine(h)?.at(omega)?;
        let (re, im) = (std::slice::from_raw_parts_mut(re, len), std::slice::from_raw_parts_mut(im, len));
        for (k, z) in tr.gamma.as_slice().iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// `|Γ_{2p,k} + Γ_{2p+1,k}|²` for zero-based mode `port` and channel `channel`.
///
/// # Safety
/// `model` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sasc_transmission(
    model: *const SascModel,
    omega: f64,
    port: usize,
    channel: usize,
    out: *mut f64,
) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        check_port(h, port)?;
        if channel >= 2 * h.model.mode_count() {
            return Err(bad_arg(format!("channel {channel} out of range")));
        }
        let tr = engine(h)?.at(omega)?;
        *out_ref(out, "out")? = port_transmission(&tr, port, channel);
        Ok(())
    })
}

/// Asymmetry factor at `ω`.
///
/// # Safety
/// `model` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sasc_asymmetry(
    model: *const SascModel,
    omega: f64,
    which: SascAsymmetry,
    out: *mut f64,
) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        let out = out_ref(out, "out")?;
        let tr = engine(h)?.at(omega)?;
        *out = match (which, h.model.topology) {
            (SascAsymmetry::Ab, Topology::Du) => transmission_du(&tr)?.r_ab()?,
            (SascAsymmetry::Mb, Topology::ThreeMode) => transmission_three(&tr)?.r_mb()?,
            (SascAsymmetry::Bc, Topology::ThreeMode) => transmission_three(&tr)?.r_bc()?,
            (w, t) => return Err(bad_arg(format!("asymmetry {w:?} not defined for {t:?}"))),
        };
        Ok(())
    })
}

/// Bose–Einstein occupation at angular frequency `omega` (rad/s) and
/// temperature `t` (K).
#[no_mangle]
pub extern "C" fn sasc_thermal_occupation(omega: f64, t: f64) -> f64 {
    thermal_occupation(omega, t)
}

/// Symmetrized homodyne output spectrum of `port` at each of `n` frequencies.
///
/// # Safety
/// `omega` and `out` must each point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sasc_output_spectrum(
    model: *const SascModel,
    omega: *const f64,
    n: usize,
    port: usize,
    out: *mut f64,
) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        check_port(h, port)?;
        if n > 0 && (omega.is_null() || out.is_null()) {
            return Err(bad_arg("null frequency or output array"));
        }
        let e = engine(h)?;
        let noise = sasc::spectra::input_noise(&h.model);
        let out = std::slice::from_raw_parts_mut(out, n);
        for (o, &w) in out.iter_mut().zip(std::slice::from_raw_parts(omega, n)) {
            *o = output_spectrum_point(&e, &noise, w, port, h.options.psi)?;
        }
        Ok(())
    })
}

/// Amplification `S_AP` and `S_SNR` for a Hermitian unit signal entering
/// `signal` and read out at `readout`.
///
/// # Safety
/// `model` must be a valid handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sasc_snr(
    model: *const SascModel,
    omega: f64,
    signal: usize,
    readout: usize,
    s_ap: *mut f64,
    snr: *mut f64,
) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        check_port(h, signal)?;
        check_port(h, readout)?;
        let noise = sasc::spectra::input_noise(&h.model);
        let (a, s) = snr_point(&engine(h)?, &noise, omega, signal, readout, h.options.psi)?;
        *out_ref(s_ap, "s_ap")? = a;
        *out_ref(snr, "snr")? = s;
        Ok(())
    })
}

/// First-to-last quadrature gain of the model at `ω`.
///
/// # Safety
/// `model` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sasc_chain_gain(model: *const SascModel, omega: f64, out: *mut f64) -> SascStatus {
    guard(|| {
        let h = handle(model)?;
        *out_ref(out, "out")? = end_to_end_gain(&h.model, omega, &h.options)?;
        Ok(())
    })
}
