use purity_ffi::*;
use std::ffi::{c_char, CStr};
use std::ptr;

fn bb84() -> *mut PurityEnsemble {
    let mut ens = ptr::null_mut();
    assert_eq!(unsafe { purity_ensemble_bb84(std::f64::consts::PI / 8.0, &mut ens) }, PurityStatus::Ok);
    ens
}

#[test]
fn ensemble_from_text_and_parts_agree() {
    let text = c"2 2\n0.5 1 0 0 0 0 0 0 0\n0.5 0 0 0 0 0 0 1 0\n";
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { purity_ensemble_parse(text.as_ptr(), &mut a) }, PurityStatus::Ok);

    let probs = [0.5, 0.5];
    let states = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { purity_ensemble_new(2, 2, probs.as_ptr(), states.as_ptr(), &mut b) }, PurityStatus::Ok);

    for e in [a, b] {
        assert_eq!(unsafe { purity_ensemble_labels(e) }, 2);
        assert_eq!(unsafe { purity_ensemble_dim(e) }, 2);
        let mut chi = 0.0;
        assert_eq!(unsafe { purity_ensemble_holevo(e, &mut chi) }, PurityStatus::Ok);
        assert!((chi - 1.0).abs() < 1e-12);
        unsafe { purity_ensemble_free(e) };
    }
}

#[test]
fn invalid_state_is_rejected() {
    let states = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0];
    let mut e = ptr::null_mut();
    let s = unsafe { purity_ensemble_new(1, 2, [1.0].as_ptr(), states.as_ptr(), &mut e) };
    assert_eq!(s, PurityStatus::InvalidArgument);
    assert!(e.is_null());
    assert!(unsafe { purity_last_error(ptr::null_mut(), 0) } > 0);
}

#[test]
fn channel_quantities() {
    let ens = bb84();
    let identity: Vec<f64> = (0..16).map(|i| if i % 5 == 0 { 1.0 } else { 0.0 }).collect();
    let (mut i_ybe, mut i_yx, mut obj) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { purity_cross_check(ens, identity.as_ptr(), 4, &mut i_ybe, &mut i_yx) }, PurityStatus::Ok);
    assert!((i_ybe - 2.0).abs() < 1e-9 && (i_yx - 2.0).abs() < 1e-12);
    assert_eq!(unsafe { purity_lagrangian_objective(ens, identity.as_ptr(), 4, 0.5, &mut obj) }, PurityStatus::Ok);
    // I(Y;B) = χ = 1 for the identity channel.
    assert!((obj - 0.0).abs() < 1e-9);
    let bad = [0.5; 16];
    assert_eq!(unsafe { purity_lagrangian_objective(ens, bad.as_ptr(), 4, 0.5, &mut obj) }, PurityStatus::InvalidArgument);
    unsafe { purity_ensemble_free(ens) };
}

#[test]
fn p_curve_through_handles() {
    let ens = bb84();
    let mus: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let opts = PurityOptions { restarts: 8, ..purity_options_default() };
    let mut curve = ptr::null_mut();
    let s = unsafe { purity_curve_compute(ens, 0, mus.as_ptr(), mus.len(), &opts, &mut curve) };
    assert_eq!(s, PurityStatus::Ok);
    assert_eq!(unsafe { purity_curve_len(curve) }, 11);

    let (mut mu, mut r, mut v) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { purity_curve_point(curve, 10, &mut mu, &mut r, &mut v) }, PurityStatus::Ok);
    assert!((r - 2.0).abs() < 1e-6 && (v - 1.0).abs() < 1e-6);
    assert_eq!(unsafe { purity_curve_point(curve, 11, &mut mu, &mut r, &mut v) }, PurityStatus::InvalidArgument);

    let mut at = 0.0;
    assert_eq!(unsafe { purity_curve_eval(curve, 2.5, &mut at) }, PurityStatus::Ok);
    assert!((at - 1.0).abs() < 1e-6);
    assert_eq!(unsafe { purity_curve_eval(curve, f64::NAN, &mut at) }, PurityStatus::InvalidArgument);

    let (mut arrow, mut local) = (0.0, 0.0);
    assert_eq!(unsafe { purity_kappa_arrow(ens, curve, 2.0, &mut arrow) }, PurityStatus::Ok);
    assert_eq!(unsafe { purity_ensemble_local_purity(ens, &mut local) }, PurityStatus::Ok);
    assert!((arrow - local - 1.0).abs() < 1e-6);

    let mut len = 0;
    assert_eq!(unsafe { purity_curve_csv(curve, ptr::null_mut(), 0, &mut len) }, PurityStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; len + 1];
    assert_eq!(unsafe { purity_curve_csv(curve, buf.as_mut_ptr(), buf.len(), &mut len) }, PurityStatus::Ok);
    let csv = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(csv.starts_with("mu,R_bits,P_bits\n"));
    assert_eq!(csv.lines().count(), 12);

    unsafe { purity_curve_free(curve) };
    unsafe { purity_ensemble_free(ens) };
}

#[test]
fn d_curve_is_not_a_p_curve() {
    let ens = bb84();
    let mus = [0.0, 1.0, 10.0];
    let mut curve = ptr::null_mut();
    assert_eq!(unsafe { purity_curve_compute(ens, 1, mus.as_ptr(), 3, ptr::null(), &mut curve) }, PurityStatus::Ok);
    let mut out = 0.0;
    assert_eq!(unsafe { purity_kappa_arrow(ens, curve, 1.0, &mut out) }, PurityStatus::InvalidArgument);
    let mut other = ptr::null_mut();
    assert_eq!(unsafe { purity_curve_compute(ens, 2, mus.as_ptr(), 3, ptr::null(), &mut other) }, PurityStatus::InvalidArgument);
    unsafe { purity_curve_free(curve) };
    unsafe { purity_ensemble_free(ens) };
}

#[test]
fn asymptotic_helpers() {
    let mut p = 0.0;
    assert_eq!(unsafe { purity_typical_probability([0.3, 0.7].as_ptr(), 2, 1000, 0.05, &mut p) }, PurityStatus::Ok);
    assert!(p >= 0.999);

    let rho = [0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0];
    let (mut rate, mut mass) = (0.0, 0.0);
    assert_eq!(unsafe { purity_typical_subspace(rho.as_ptr(), 2, 200, 0.05, &mut rate, &mut mass) }, PurityStatus::Ok);
    assert!((rate - 0.59289).abs() < 1e-5 && (mass - 0.98696).abs() < 1e-5);

    let big = [0.1; 10];
    assert_eq!(unsafe { purity_typical_probability(big.as_ptr(), 10, 100, 0.05, &mut p) }, PurityStatus::Guard);

    let (mut r, mut v) = (0.0, 0.0);
    assert_eq!(unsafe { purity_uniform_curve_point(1.0, &mut r, &mut v) }, PurityStatus::Ok);
    assert!((r - 0.058_648_225_653_271_19).abs() < 1e-12 && (v - 0.019_478_160_881_633_23).abs() < 1e-12);
    assert_eq!(unsafe { purity_uniform_curve_point(-1.0, &mut r, &mut v) }, PurityStatus::InvalidArgument);
}

#[test]
fn sphere_and_oracle() {
    let mut ens = ptr::null_mut();
    assert_eq!(unsafe { purity_ensemble_sphere(6, &mut ens) }, PurityStatus::Ok);
    assert_eq!(unsafe { purity_ensemble_labels(ens) }, 6);
    unsafe { purity_ensemble_free(ens) };

    let text = c"2 2\n0.5 1 0 0 0 0 0 0 0\n0.5 0 0 0 0 0 0 1 0\n";
    assert_eq!(unsafe { purity_ensemble_parse(text.as_ptr(), &mut ens) }, PurityStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { purity_oracle(ens, 1.0, 2, 0.05, &mut v) }, PurityStatus::Ok);
    assert!((v - 1.0).abs() < 1e-9);
    unsafe { purity_ensemble_free(ens) };
}

#[test]
fn version_is_static_string() {
    let v = unsafe { CStr::from_ptr(purity_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
