use std::ffi::{CStr, CString};
use std::ptr;

use limitper_ffi::*;

fn c(re: f64, im: f64) -> LpComplex {
    LpComplex { re, im }
}

fn last_error() -> String {
    let p = lp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn builtin_chair_window_round_trip() {
    unsafe {
        let mut sys = ptr::null_mut();
        let name = CString::new("chair").unwrap();
        assert_eq!(lp_system_builtin(name.as_ptr(), &mut sys), LpStatus::Ok);
        assert_eq!(lp_system_alphabet_size(sys), 4);
        assert_eq!(lp_system_dim(sys), 2);
        assert_eq!(lp_system_factor(sys), 2);

        let seed = [3u8, 0, 2, 1];
        let mut win = ptr::null_mut();
        assert_eq!(lp_fixed_point_window(sys, seed.as_ptr(), 4, 3, &mut win), LpStatus::Ok);
        let (mut origin, mut extent) = (0i64, 0usize);
        assert_eq!(lp_window_axis(win, 1, &mut origin, &mut extent), LpStatus::Ok);
        assert_eq!((origin, extent), (-8, 16));
        assert_eq!(lp_window_len(win), 256);

        let mut buf = vec![0u8; 256];
        assert_eq!(lp_window_labels(win, buf.as_mut_ptr(), buf.len()), LpStatus::Ok);
        for y in -8..8i64 {
            for x in -8..8i64 {
                let mut label = 9;
                assert_eq!(lp_window_get(win, x, y, &mut label), LpStatus::Ok);
                assert_eq!(label, lp_chair_label(x, y));
                assert_eq!(buf[((y + 8) * 16 + x + 8) as usize], label);
            }
        }
        let mut label = 0;
        assert_eq!(lp_window_get(win, 8, 0, &mut label), LpStatus::OutOfRange);
        assert_eq!(lp_window_labels(win, buf.as_mut_ptr(), 10), LpStatus::OutOfRange);
        lp_window_free(win);
        lp_system_free(sys);
    }
}

#[test]
fn parsed_system_and_default_seed() {
    unsafe {
        let text = CString::new(limitper::subst::builtin::PERIOD_DOUBLING_RULES).unwrap();
        let mut sys = ptr::null_mut();
        assert_eq!(lp_system_parse(text.as_ptr(), &mut sys), LpStatus::Ok);
        let mut win = ptr::null_mut();
        assert_eq!(lp_fixed_point_window(sys, ptr::null(), 0, 1, &mut win), LpStatus::Ok);
        assert_eq!(lp_window_dim(win), 1);
        assert!(lp_window_len(win) >= 4);
        lp_window_free(win);

        let illegal = [1u8, 1];
        let mut win = ptr::null_mut();
        assert_eq!(lp_fixed_point_window(sys, illegal.as_ptr(), 2, 1, &mut win), LpStatus::IllegalSeed);
        assert!(win.is_null());
        assert_eq!(lp_fixed_point_window(sys, illegal.as_ptr(), 3, 1, &mut win), LpStatus::InvalidArgument);
        let ok = [0u8, 0];
        assert_eq!(lp_fixed_point_window(sys, ok.as_ptr(), 2, 40, &mut win), LpStatus::OutOfRange);
        lp_system_free(sys);
    }
}

#[test]
fn parse_errors_are_reported() {
    unsafe {
        let text = CString::new("kind = word\nfactor = 2\nalphabet = a b\na -> a b\nb -> a\n").unwrap();
        let mut sys = ptr::null_mut();
        assert_eq!(lp_system_parse(text.as_ptr(), &mut sys), LpStatus::Parse);
        assert!(sys.is_null());
        assert!(last_error().contains("non-constant"), "{}", last_error());

        let name = CString::new("penrose").unwrap();
        assert_eq!(lp_system_builtin(name.as_ptr(), &mut sys), LpStatus::InvalidArgument);
        assert_eq!(lp_system_builtin(ptr::null(), &mut sys), LpStatus::NullPointer);
    }
}

#[test]
fn period_doubling_values() {
    unsafe {
        let (mut a, mut b) = (c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(lp_pd_amplitudes(1, 1, &mut a, &mut b), LpStatus::Ok);
        assert!((a.re - 1.0 / 3.0).abs() < 1e-15 && a.im.abs() < 1e-15);
        assert!((b.re + 1.0 / 3.0).abs() < 1e-15);

        let mut i = 0.0;
        assert_eq!(lp_pd_intensity(2, 2, c(1.0, 0.0), c(-1.0, 0.0), &mut i), LpStatus::Ok);
        assert!((i - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(lp_pd_intensity(1, 70, c(1.0, 0.0), c(0.0, 0.0), &mut i), LpStatus::OutOfRange);

        let mut eta = c(0.0, 0.0);
        assert_eq!(lp_pd_eta(3, c(1.0, 0.0), c(-1.0, 0.0), &mut eta), LpStatus::Ok);
        assert!((eta.re + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(lp_pd_eta(i64::MIN, c(1.0, 0.0), c(-1.0, 0.0), &mut eta), LpStatus::Ok);
        assert_eq!(lp_pd_eta(1 << 62, c(1.0, 0.0), c(-1.0, 0.0), &mut eta), LpStatus::Ok);
        assert!((eta.re - 1.0).abs() < 1e-15);
    }
}

#[test]
fn chair_values() {
    unsafe {
        let mut a = [c(0.0, 0.0); 4];
        assert_eq!(lp_chair_amplitudes(0, 0, 0, a.as_mut_ptr()), LpStatus::Ok);
        for z in a {
            assert!((z.re - 0.25).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
        let w = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let mut i = 1.0;
        assert_eq!(lp_chair_intensity(1, 1, 1, w.as_ptr(), &mut i), LpStatus::Ok);
        assert!(i.abs() < 1e-24);
        assert_eq!(lp_chair_intensity(1, 1, 1, ptr::null(), &mut i), LpStatus::NullPointer);
        assert_eq!(lp_chair_label(0, -1), 1);
        assert_eq!(lp_chair_label(-1, 0), 3);
    }
}

#[test]
fn dyadic_normal_form() {
    unsafe {
        let (mut num, mut exp) = (12i64, 5u32);
        assert_eq!(lp_dyadic_normalize(&mut num, &mut exp), LpStatus::Ok);
        assert_eq!((num, exp), (3, 3));
        let (mut num, mut exp) = (0i64, 9u32);
        assert_eq!(lp_dyadic_normalize(&mut num, &mut exp), LpStatus::Ok);
        assert_eq!((num, exp), (0, 0));
        assert_eq!(lp_dyadic_normalize(ptr::null_mut(), &mut exp), LpStatus::NullPointer);
    }
}

#[test]
fn free_accepts_null() {
    unsafe {
        lp_system_free(ptr::null_mut());
        lp_window_free(ptr::null_mut());
        assert_eq!(lp_system_dim(ptr::null()), 0);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/limitper.h")).unwrap();
    for name in [
        "typedef struct LpSystem LpSystem",
        "typedef struct LpWindow LpWindow",
        "LP_STATUS_ILLEGAL_SEED",
        "lp_system_parse",
        "lp_fixed_point_window",
        "lp_window_labels",
        "lp_pd_amplitudes",
        "lp_chair_intensity",
        "lp_dyadic_normalize",
        "lp_last_error_message",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
