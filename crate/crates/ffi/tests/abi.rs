use std::ffi::CStr;
use std::ptr;

use pswf_recon_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pswf_last_error_message()) }.to_string_lossy().into_owned()
}

struct Basis(*mut PswfBasisHandle);

impl Basis {
    fn new(c: f64, n: usize) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { pswf_basis_create(c, n, 0.0, &mut h) }, PswfStatus::Ok);
        assert!(!h.is_null());
        Basis(h)
    }
}

impl Drop for Basis {
    fn drop(&mut self) {
        unsafe { pswf_basis_destroy(self.0) }
    }
}

#[test]
fn basis_queries_match_library() {
    let b = Basis::new(10.0, 15);
    let lib = pswf_recon::pswf::PswfBasis::with_default_floor(10.0, 15).unwrap();
    unsafe {
        let mut n_max = 0;
        assert_eq!(pswf_basis_n_max(b.0, &mut n_max), PswfStatus::Ok);
        assert_eq!(n_max, lib.n_max());
        let mut c = 0.0;
        assert_eq!(pswf_basis_c(b.0, &mut c), PswfStatus::Ok);
        assert_eq!(c, 10.0);
        for n in 0..=n_max {
            let (mut chi, mut lam, mut re, mut im, mut psi) = (0.0, 0.0, 0.0, 0.0, 0.0);
            assert_eq!(pswf_basis_chi(b.0, n, &mut chi), PswfStatus::Ok);
            assert_eq!(pswf_basis_lambda(b.0, n, &mut lam), PswfStatus::Ok);
            assert_eq!(pswf_basis_mu(b.0, n, &mut re, &mut im), PswfStatus::Ok);
            assert_eq!(pswf_basis_eval_psi(b.0, n, 0.37, &mut psi), PswfStatus::Ok);
            assert_eq!(chi, lib.chi()[n]);
            assert_eq!(lam, lib.lambda()[n]);
            assert_eq!((re, im), (lib.mu()[n].re, lib.mu()[n].im));
            assert_eq!(psi, lib.eval_psi(n, 0.37).unwrap());
        }
    }
}

#[test]
fn truncated_inverse_reproduces_a_mode() {
    // data c_3 * psi_3 on the nodes: F^{-1} of mu_3 psi_3 is psi_3 up to scale
    let b = Basis::new(8.0, 10);
    unsafe {
        let mut m = 0;
        assert_eq!(pswf_basis_node_count(b.0, &mut m), PswfStatus::Ok);
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        assert_eq!(pswf_basis_nodes(b.0, nodes.as_mut_ptr(), weights.as_mut_ptr(), m), PswfStatus::Ok);
        assert!((weights.iter().sum::<f64>() - 2.0).abs() < 1e-12);

        let lib = pswf_recon::pswf::PswfBasis::with_default_floor(8.0, 10).unwrap();
        let mu = lib.mu()[3];
        let psi: Vec<f64> = nodes.iter().map(|&x| lib.eval_psi(3, x).unwrap()).collect();
        let w_re: Vec<f64> = psi.iter().map(|p| p * mu.re).collect();
        let w_im: Vec<f64> = psi.iter().map(|p| p * mu.im).collect();
        let grid = [-0.8, -0.2, 0.0, 0.5, 0.9];
        let (mut out_re, mut out_im) = ([0.0; 5], [0.0; 5]);
        let st = pswf_truncated_inverse(
            b.0,
            w_re.as_ptr(),
            w_im.as_ptr(),
            m,
            6,
            grid.as_ptr(),
            grid.len(),
            out_re.as_mut_ptr(),
            out_im.as_mut_ptr(),
        );
        assert_eq!(st, PswfStatus::Ok, "{}", last_error());
        let want = pswf_recon::bandlimit::truncated_inverse(
            &lib,
            &w_re.iter().zip(&w_im).map(|(&r, &i)| pswf_recon::Complex64::new(r, i)).collect::<Vec<_>>(),
            6,
            &grid,
        )
        .unwrap();
        for k in 0..grid.len() {
            assert!((out_re[k] - want[k].re).abs() < 1e-14 && (out_im[k] - want[k].im).abs() < 1e-14);
        }
    }
}

#[test]
fn regularization_params() {
    unsafe {
        let mut tau = 0.0;
        assert_eq!(pswf_solve_tau(3.0, &mut tau), PswfStatus::Ok);
        assert!((tau * tau.ln() - 3.0).abs() < 1e-12);

        let mut p = PswfRegParams {
            c: 0.0,
            alpha: 0.0,
            delta: 0.0,
            rho: 0.0,
            tau: 0.0,
            n_star: 0,
        };
        assert_eq!(pswf_regularization_params(20.0, 0.3, 1e-2, &mut p), PswfStatus::Ok);
        assert_eq!(p.n_star, 17);
        assert!((p.tau * p.tau.ln() - p.rho).abs() < 1e-10 * p.rho);

        assert_eq!(pswf_regularization_params(20.0, 1.5, 1e-2, &mut p), PswfStatus::InvalidArgument);
        assert!(last_error().contains("alpha"));
        assert_eq!(pswf_solve_tau(-1.0, &mut tau), PswfStatus::InvalidArgument);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let b = Basis::new(10.0, 5);
    unsafe {
        let mut v = 0.0;
        assert_eq!(pswf_basis_chi(b.0, 6, &mut v), PswfStatus::OutOfRange);
        assert_eq!(pswf_basis_eval_psi(b.0, 1, 1.5, &mut v), PswfStatus::OutOfRange);
        assert!(last_error().contains("1.5"));
        assert_eq!(pswf_basis_nodes(b.0, ptr::null_mut(), ptr::null_mut(), 3), PswfStatus::InvalidArgument);

        let mut h = ptr::null_mut();
        assert_eq!(pswf_basis_create(-1.0, 5, 0.0, &mut h), PswfStatus::InvalidArgument);
        assert!(h.is_null());
        assert_eq!(pswf_basis_create(f64::NAN, 5, 0.0, &mut h), PswfStatus::InvalidArgument);
        // a floor above every eigenvalue leaves nothing certified
        assert_eq!(pswf_basis_create(2.0, 5, 0.99, &mut h), PswfStatus::Numerical);
        assert!(h.is_null());
    }
}

#[test]
fn null_pointers_are_rejected() {
    let b = Basis::new(5.0, 4);
    unsafe {
        assert_eq!(pswf_basis_create(5.0, 4, 0.0, ptr::null_mut()), PswfStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(pswf_basis_c(ptr::null(), &mut v), PswfStatus::NullPointer);
        assert!(last_error().contains("basis"));
        assert_eq!(pswf_basis_lambda(b.0, 0, ptr::null_mut()), PswfStatus::NullPointer);
        assert_eq!(pswf_basis_mu(b.0, 0, &mut v, ptr::null_mut()), PswfStatus::NullPointer);
        assert_eq!(pswf_solve_tau(1.0, ptr::null_mut()), PswfStatus::NullPointer);
        let grid = [0.0];
        let st = pswf_truncated_inverse(
            b.0,
            ptr::null(),
            ptr::null(),
            10,
            2,
            grid.as_ptr(),
            1,
            &mut v,
            &mut v,
        );
        assert_eq!(st, PswfStatus::NullPointer);
        assert!(last_error().contains("w_re"));
        pswf_basis_destroy(ptr::null_mut());
    }
}

#[test]
fn error_message_is_per_thread() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(pswf_solve_tau(-2.0, &mut v), PswfStatus::InvalidArgument);
    }
    let msg = last_error();
    assert!(!msg.is_empty());
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(pswf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
