//! C ABI over `pswf_recon`.
//!
//! Every function returns a [`PswfStatus`]; results go through out-pointers.
//! On failure a description is kept per thread and can be read with
//! `pswf_last_error_message`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pswf_recon::bandlimit::{n_star, solve_tau, truncated_inverse};
use pswf_recon::pswf::{Bandwidth, PswfBasis, DEFAULT_LAMBDA_FLOOR};
use pswf_recon::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PswfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Numerical = 4,
    Panic = 5,
}

/// Opaque PSWF basis; create with `pswf_basis_create`, release with
/// `pswf_basis_destroy`. Immutable, so one handle may be shared by threads.
pub struct PswfBasisHandle {
    inner: PswfBasis,
}

/// Regularization parameters for bandwidth c, alpha and delta.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PswfRegParams {
    pub c: f64,
    pub alpha: f64,
    pub delta: f64,
    pub rho: f64,
    pub tau: f64,
    pub n_star: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(PswfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::IndexOutOfRange { .. } | Error::PointOutsideInterval(_) => PswfStatus::OutOfRange,
            ref e if e.is_numerical() => PswfStatus::Numerical,
            _ => PswfStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> PswfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PswfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            PswfStatus::Panic
        }
    }
}

fn null(name: &str) -> Fail {
    Fail(PswfStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn handle<'a>(h: *const PswfBasisHandle) -> Result<&'a PswfBasis, Fail> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| null("basis"))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Fail> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null(name)),
        (false, _) => Ok(std::slice::from_raw_parts(p, len)),
    }
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, name: &str) -> Result<&'a mut [f64], Fail> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&mut []),
        (true, _) => Err(null(name)),
        (false, _) => Ok(std::slice::from_raw_parts_mut(p, len)),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pswf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pswf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the basis up to `n_request` modes. A `lambda_floor` of 0 selects
/// the default floor; the certified count may be smaller than requested,
/// see `pswf_basis_n_max`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_create(
    c: f64,
    n_request: usize,
    lambda_floor: f64,
    out: *mut *mut PswfBasisHandle,
) -> PswfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let floor = if lambda_floor == 0.0 { DEFAULT_LAMBDA_FLOOR } else { lambda_floor };
        let inner = PswfBasis::build(Bandwidth::new(c)?, n_request, floor)?;
        out.write(Box::into_raw(Box::new(PswfBasisHandle { inner })));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `basis` must come from `pswf_basis_create` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_destroy(basis: *mut PswfBasisHandle) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_c(basis: *const PswfBasisHandle, out: *mut f64) -> PswfStatus {
    guard(|| write(out, handle(basis)?.c(), "out"))
}

/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_n_max(basis: *const PswfBasisHandle, out: *mut usize) -> PswfStatus {
    guard(|| write(out, handle(basis)?.n_max(), "out"))
}

unsafe fn mode<'a>(basis: *const PswfBasisHandle, n: usize) -> Result<&'a PswfBasis, Fail> {
    let b: &'a PswfBasis = handle(basis)?;
    if n > b.n_max() {
        return Err(Error::IndexOutOfRange { n, n_max: b.n_max() }.into());
    }
    Ok(b)
}

/// Sturm–Liouville eigenvalue chi_n.
///
/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_chi(basis: *const PswfBasisHandle, n: usize, out: *mut f64) -> PswfStatus {
    guard(|| write(out, mode(basis, n)?.chi()[n], "out"))
}

/// lambda_n = c |mu_n|^2 / (2 pi).
///
/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_lambda(basis: *const PswfBasisHandle, n: usize, out: *mut f64) -> PswfStatus {
    guard(|| write(out, mode(basis, n)?.lambda()[n], "out"))
}

/// Eigenvalue mu_n of the finite Fourier operator.
///
/// # Safety
/// `basis` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_mu(
    basis: *const PswfBasisHandle,
    n: usize,
    re: *mut f64,
    im: *mut f64,
) -> PswfStatus {
    guard(|| {
        let mu = mode(basis, n)?.mu()[n];
        if im.is_null() {
            return Err(null("im"));
        }
        write(re, mu.re, "re")?;
        write(im, mu.im, "im")
    })
}

/// psi_n(x) for x in [-1, 1].
///
/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_eval_psi(
    basis: *const PswfBasisHandle,
    n: usize,
    x: f64,
    out: *mut f64,
) -> PswfStatus {
    guard(|| write(out, handle(basis)?.eval_psi(n, x)?, "out"))
}

/// Number of quadrature nodes; data passed to `pswf_truncated_inverse`
/// lives on these nodes.
///
/// # Safety
/// `basis` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_node_count(basis: *const PswfBasisHandle, out: *mut usize) -> PswfStatus {
    guard(|| write(out, handle(basis)?.nodes().len(), "out"))
}

/// Copies the quadrature nodes and weights; `len` must equal the node count.
/// Either output may be null to skip it.
///
/// # Safety
/// Non-null outputs must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_basis_nodes(
    basis: *const PswfBasisHandle,
    nodes: *mut f64,
    weights: *mut f64,
    len: usize,
) -> PswfStatus {
    guard(|| {
        let b = handle(basis)?;
        if len != b.nodes().len() {
            return Err(Error::LengthMismatch {
                expected: b.nodes().len(),
                found: len,
            }
            .into());
        }
        if !nodes.is_null() {
            slice_mut(nodes, len, "nodes")?.copy_from_slice(b.nodes());
        }
        if !weights.is_null() {
            slice_mut(weights, len, "weights")?.copy_from_slice(b.weights());
        }
        Ok(())
    })
}

/// F^{-1}_{n,c}[w] on `grid`, with w sampled on the quadrature nodes.
/// `w_im` may be null for real data.
///
/// # Safety
/// Inputs must be valid for `w_len` and `grid_len` reads, outputs for
/// `grid_len` writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_truncated_inverse(
    basis: *const PswfBasisHandle,
    w_re: *const f64,
    w_im: *const f64,
    w_len: usize,
    n: usize,
    grid: *const f64,
    grid_len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PswfStatus {
    guard(|| {
        let b = handle(basis)?;
        let re = slice(w_re, w_len, "w_re")?;
        let im = if w_im.is_null() { None } else { Some(slice(w_im, w_len, "w_im")?) };
        let w: Vec<Complex64> = re
            .iter()
            .enumerate()
            .map(|(i, &r)| Complex64::new(r, im.map_or(0.0, |v| v[i])))
            .collect();
        let grid = slice(grid, grid_len, "grid")?;
        let out_re = slice_mut(out_re, grid_len, "out_re")?;
        let out_im = slice_mut(out_im, grid_len, "out_im")?;
        let values = truncated_inverse(b, &w, n, grid)?;
        for ((v, r), i) in values.iter().zip(out_re.iter_mut()).zip(out_im.iter_mut()) {
            *r = v.re;
            *i = v.im;
        }
        Ok(())
    })
}

/// The unique tau > 1 with tau log tau = rho.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_solve_tau(rho: f64, out: *mut f64) -> PswfStatus {
    guard(|| write(out, solve_tau(rho)?, "out"))
}

/// Truncation rule: rho, tau and n* for bandwidth c.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pswf_regularization_params(
    c: f64,
    alpha: f64,
    delta: f64,
    out: *mut PswfRegParams,
) -> PswfStatus {
    guard(|| {
        let p = n_star(Bandwidth::new(c)?, alpha, delta)?;
        write(
            out,
            PswfRegParams {
                c: p.c,
                alpha: p.alpha,
                delta: p.delta,
                rho: p.rho,
                tau: p.tau,
                n_star: p.n_star,
            },
            "out",
        )
    })
}
