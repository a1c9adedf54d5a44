use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ma_secrecy::channel::{evaluate_channel, sample_path_set, Position};
use ma_secrecy::harness::{run_trial, ExperimentConfig};
use ma_secrecy::rng::trial_seed;
use ma_secrecy_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mas_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn config_round_trip_and_errors() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let json = CString::new(r#"{"trials": 3}"#).unwrap();
        assert_eq!(mas_config_from_json(json.as_ptr(), &mut cfg), MasStatus::Ok);
        assert!(!cfg.is_null());
        assert_eq!(last_error(), "");
        mas_config_free(cfg);

        let bad = CString::new(r#"{"trials": 0}"#).unwrap();
        let mut cfg = ptr::null_mut();
        assert_eq!(mas_config_from_json(bad.as_ptr(), &mut cfg), MasStatus::Config);
        assert!(cfg.is_null());
        assert!(last_error().contains("trials"));

        assert_eq!(mas_config_from_json(ptr::null(), &mut cfg), MasStatus::NullPointer);
        mas_config_free(ptr::null_mut());
    }
}

#[test]
fn trial_matches_library() {
    unsafe {
        let cfg = mas_config_default();
        let mut out = MasTrialSummary::default();
        assert_eq!(mas_run_trial(cfg, 2, &mut out), MasStatus::Ok);
        mas_config_free(cfg);
        let want = run_trial(&ExperimentConfig::default(), trial_seed(1, 2)).unwrap();
        assert_eq!(out.seed, want.seed);
        assert_eq!(out.ma_rate, want.ma.rate);
        assert_eq!(out.fpa_channel_power, want.fpa.channel_power);
        assert_eq!(out.ma_feasible, want.ma.feasible);
        assert_eq!(out.iterations as usize, want.iterations);
    }
}

#[test]
fn path_set_and_optimizer() {
    unsafe {
        let mut paths = ptr::null_mut();
        assert_eq!(mas_path_set_sample(4, 4, -110.0, 0.1, &mut paths), MasStatus::Ok);
        let reference = sample_path_set(4, 4, -110.0, 0.1).unwrap();
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            mas_evaluate_channel(paths, 0.03, -0.02, &mut re, &mut im),
            MasStatus::Ok
        );
        let h = evaluate_channel(&reference, &Position::new(0.03, -0.02));
        assert_eq!((re, im), (h.re, h.im));

        let mut xy = [-0.1, -0.1, 0.1, -0.1, -0.1, 0.1, 0.1, 0.1];
        let mut before = 0.0;
        assert_eq!(mas_channel_power(paths, xy.as_ptr(), 4, &mut before), MasStatus::Ok);
        let mut after = 0.0;
        let mut iters = 0u32;
        let st = mas_optimize_positions(
            paths,
            xy.as_mut_ptr(),
            4,
            0.4,
            0.05,
            ptr::null(),
            &mut after,
            &mut iters,
        );
        assert_eq!(st, MasStatus::Ok);
        assert!(after >= before && iters >= 1);
        let mut check = 0.0;
        mas_channel_power(paths, xy.as_ptr(), 4, &mut check);
        assert_eq!(check, after);

        let mut clash = [0.0, 0.0, 0.001, 0.0];
        let st = mas_optimize_positions(
            paths,
            clash.as_mut_ptr(),
            2,
            0.4,
            0.05,
            ptr::null(),
            ptr::null_mut(),
            ptr::null_mut(),
        );
        assert_eq!(st, MasStatus::ConstraintViolation);

        mas_path_set_free(paths);
        assert_eq!(
            mas_path_set_sample(4, 0, 0.0, 0.1, &mut paths),
            MasStatus::InvalidArgument
        );
        assert!(paths.is_null());
    }
}

#[test]
fn closed_form_rate_and_infeasibility() {
    unsafe {
        let hb = [1.0, 0.0, 0.0, 0.0];
        let he = [0.0, 0.0, 0.4, 0.3];
        let mut r = 0.0;
        assert_eq!(
            mas_secrecy_rate_closed_form(hb.as_ptr(), he.as_ptr(), 2, 7.0, 7.0, 1.0, 1.0, &mut r),
            MasStatus::Ok
        );
        assert!((r - 3.0).abs() < 1e-12);
        assert_eq!(
            mas_secrecy_rate_closed_form(hb.as_ptr(), he.as_ptr(), 2, 7.0, 1.0, 1.0, 1.0, &mut r),
            MasStatus::Infeasible
        );
        assert_eq!(
            mas_secrecy_rate_closed_form(ptr::null(), he.as_ptr(), 2, 7.0, 1.0, 1.0, 1.0, &mut r),
            MasStatus::NullPointer
        );
    }
}

#[test]
fn sweep_rows() {
    unsafe {
        let json = CString::new(r#"{"trials": 5, "gamma_db": [0, 10]}"#).unwrap();
        let mut cfg = ptr::null_mut();
        assert_eq!(mas_config_from_json(json.as_ptr(), &mut cfg), MasStatus::Ok);
        let mut sweep = ptr::null_mut();
        assert_eq!(mas_sweep(cfg, MasAxis::Gamma, &mut sweep), MasStatus::Ok);
        assert_eq!(mas_sweep_len(sweep), 2);
        let mut row = MasSummaryRow::default();
        assert_eq!(mas_sweep_row(sweep, 1, &mut row), MasStatus::Ok);
        assert_eq!(row.axis_value, 10.0);
        assert_eq!(mas_sweep_row(sweep, 2, &mut row), MasStatus::InvalidArgument);
        assert_eq!(mas_sweep_len(ptr::null()), 0);
        mas_sweep_free(sweep);
        mas_config_free(cfg);
    }
}

/// Compile and run a C program against the generated header and the static
/// library when a C compiler is available.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("ma_secrecy.h").exists());
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libma_secrecy_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no static library at {} or no C compiler", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("ma_secrecy_smoke_{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "C program exited with {:?}", run.status.code());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(stdout.lines().count(), 2, "{stdout}");
}
