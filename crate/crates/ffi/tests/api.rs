use std::ffi::{CStr, CString};
use std::ptr;

use poset_secretary_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        ps_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn family(desc: &str) -> *mut PsPoset {
    let c = CString::new(desc).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { ps_poset_family(c.as_ptr(), &mut out) };
    assert_eq!(status, PsStatus::Ok, "{}", last_error());
    out
}

#[test]
fn handle_lifecycle_and_queries() {
    let p = family("binary_tree(depth=3)");
    unsafe {
        assert_eq!(ps_poset_len(p), 7);
        assert_eq!(ps_poset_maximal_count(p), 1);
        assert_eq!(ps_poset_width(p), 4);
        assert!(ps_poset_less(p, 3, 0));
        assert!(!ps_poset_less(p, 0, 3));
        assert!(!ps_poset_less(p, 0, 99));
        ps_poset_free(p);
        ps_poset_free(ptr::null_mut());
        assert_eq!(ps_poset_len(ptr::null()), 0);
    }
}

#[test]
fn relations_and_errors() {
    let mut out = ptr::null_mut();
    let pairs = [0usize, 1, 1, 2];
    unsafe {
        assert_eq!(ps_poset_from_relations(3, pairs.as_ptr(), 2, &mut out), PsStatus::Ok);
        assert!(ps_poset_less(out, 0, 2));
        ps_poset_free(out);

        let cyc = [0usize, 1, 1, 0];
        assert_eq!(ps_poset_from_relations(2, cyc.as_ptr(), 2, &mut out), PsStatus::Cycle);
        assert!(last_error().contains("cycle"));

        let bad = [0usize, 5];
        assert_eq!(ps_poset_from_relations(2, bad.as_ptr(), 1, &mut out), PsStatus::OutOfRange);
        assert_eq!(ps_poset_from_relations(2, ptr::null(), 1, &mut out), PsStatus::NullPointer);

        let text = CString::new("poset 2\n0 <\n").unwrap();
        assert_eq!(ps_poset_parse(text.as_ptr(), &mut out), PsStatus::Parse);

        let desc = CString::new("no_such_family(n=3)").unwrap();
        assert_eq!(ps_poset_family(desc.as_ptr(), &mut out), PsStatus::InvalidArgument);

        let mut v = 0.0;
        assert_eq!(ps_exact_tau(ptr::null(), 1, 0.5, &mut v), PsStatus::NullPointer);
        assert_eq!(ps_chain_lower_bound(0, 0.5, &mut v), PsStatus::InvalidArgument);
        assert!(ps_p_star(0).is_nan());
    }
}

#[test]
fn message_buffer_truncation() {
    let mut out = ptr::null_mut();
    let cyc = [0usize, 1, 1, 0];
    unsafe {
        ps_poset_from_relations(2, cyc.as_ptr(), 2, &mut out);
        let full = ps_last_error_message(ptr::null_mut(), 0);
        let mut small = [0x7f as std::ffi::c_char; 4];
        assert_eq!(ps_last_error_message(small.as_mut_ptr(), small.len()), full);
        assert_eq!(small[3], 0);
    }
}

#[test]
fn exact_values_through_the_abi() {
    let chains = family("disjoint_chains(k=2,x=2)");
    let linear = family("linear(n=4)");
    let mut v = 0.0;
    unsafe {
        assert_eq!(ps_exact_tau(chains, 2, 0.5, &mut v), PsStatus::Ok);
        assert!((v - 7.0 / 12.0).abs() < 1e-12);
        // Classical four-candidate problem: skip one, value 11/24.
        assert_eq!(ps_exact_threshold(linear, 2, &mut v), PsStatus::Ok);
        assert!((v - 11.0 / 24.0).abs() < 1e-12);
        assert_eq!(ps_optimal_value(linear, &mut v), PsStatus::Ok);
        assert!((v - 11.0 / 24.0).abs() < 1e-12);
        assert_eq!(ps_exact_threshold(linear, 9, &mut v), PsStatus::InvalidArgument);

        let mut b = PsKnownMaxBound::default();
        assert_eq!(ps_known_max_lower_bound(1, 0.5, &mut b), PsStatus::Ok);
        assert!((b.bound - 0.5 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(ps_chain_lower_bound(2, 0.5, &mut v), PsStatus::Ok);
        assert!((v - 0.5).abs() < 1e-12);

        ps_poset_free(chains);
        ps_poset_free(linear);
    }
}

#[test]
fn estimate_independent_of_thread_count() {
    let p = family("twins(levels=3)");
    let mut a = PsReport::default();
    let mut b = PsReport::default();
    unsafe {
        assert_eq!(ps_estimate_tau(p, 2, 0.5, 5000, 11, 1, &mut a), PsStatus::Ok);
        assert_eq!(ps_estimate_tau(p, 2, 0.5, 5000, 11, 3, &mut b), PsStatus::Ok);
        ps_poset_free(p);
    }
    assert_eq!(a, b);
    assert!(a.ci_low <= a.estimate && a.estimate <= a.ci_high);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ps_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
