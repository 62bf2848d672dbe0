//! The check suite behind `limitper verify`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::chair::{chair_amplitudes, chair_intensity, chair_label, d4_apply, odd_coset_phase, ChairWeights, D4Element};
use crate::dyadic::{chair_module_enumerate, pd_module_enumerate, Complex, Dyadic, DyadicPoint2, Interval};
use crate::numerics::{
    approximant_amplitude_chair, compare, fixed_point_cube, AmplitudeEstimator, WeightedComb,
};
use crate::period_doubling::{
    pd_amplitudes, pd_eta, pd_eta_balanced, pd_eta_balanced_closed, pd_label, EtaRatio, PdWeights,
};
use crate::subst::{builtin, fixed_point_window};

/// Sizes for one run of the suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Largest `m` in the η comparison.
    pub eta_max: i64,
    /// Half-width of the 1D windows.
    pub pd_window: usize,
    pub pd_lag: i64,
    pub pd_rmax: u32,
    /// Half-width of the 2D label check and of the 2D empirical window.
    pub chair_window: usize,
    pub chair_smax: u32,
    pub chair_empirical_smax: u32,
    /// Half-size of the square checked for D4 colour invariance.
    pub d4_half: usize,
    /// Swaps in a wrong extinction weights table.
    pub tamper: bool,
}

impl SuiteOptions {
    pub fn full() -> Self {
        SuiteOptions {
            eta_max: 1 << 16,
            pd_window: 1 << 20,
            pd_lag: 64,
            pd_rmax: 6,
            chair_window: 1024,
            chair_smax: 5,
            chair_empirical_smax: 4,
            d4_half: 512,
            tamper: false,
        }
    }

    pub fn quick() -> Self {
        SuiteOptions {
            eta_max: 1 << 12,
            pd_window: 1 << 16,
            pd_lag: 16,
            pd_rmax: 4,
            chair_window: 256,
            chair_smax: 3,
            chair_empirical_smax: 3,
            d4_half: 64,
            tamper: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} ({:.2}s): {}", c.name, c.seconds, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {failed} failed", self.checks.len());
        out
    }
}

type Outcome = Result<String, String>;

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name,
        passed,
        detail,
        seconds,
    }
}

const AMPLITUDE_TOL: f64 = 0.01;
const EXACT_TOL: f64 = 1e-12;

/// Weights used for the `½Γ₊` extinction check.
fn extinction_weights(tamper: bool) -> ChairWeights {
    if tamper {
        let one = Complex::new(1.0, 0.0);
        let i = Complex::new(0.0, 1.0);
        ChairWeights::new([one, i, -one, i])
    } else {
        ChairWeights::powers_of_i()
    }
}

fn in_half_gamma_plus(k: DyadicPoint2) -> bool {
    k.exp() == 0 || (k.exp() == 1 && (k.m() + k.n()).rem_euclid(2) == 0)
}

fn check_eta(opts: &SuiteOptions) -> Outcome {
    let third = EtaRatio::new(-1, 3);
    for m in 1..=opts.eta_max {
        let rec = pd_eta_balanced(m);
        if rec != pd_eta_balanced_closed(m) {
            return Err(format!("m={m}: recursion gives {rec}"));
        }
        if m % 2 == 1 && rec != third {
            return Err(format!("m={m}: odd lag gives {rec}"));
        }
    }
    Ok(format!("exact for 1 <= m <= {}", opts.eta_max))
}

fn pd_window(n: usize) -> Result<crate::subst::PatternWindow, String> {
    fixed_point_cube(
        &builtin::period_doubling_squared(),
        &builtin::period_doubling_seed(),
        n,
    )
    .map_err(|e| e.to_string())
}

fn check_pd_labels(opts: &SuiteOptions) -> Outcome {
    let w = pd_window(opts.pd_window)?;
    for (pos, label) in w.cells() {
        if pd_label(pos[0]).index() != label {
            return Err(format!("position {}: window has label {label}", pos[0]));
        }
    }
    Ok(format!("{} positions", w.labels().len()))
}

fn check_pd_autocorrelation(opts: &SuiteOptions) -> Outcome {
    let w = pd_window(opts.pd_window)?;
    let balanced = PdWeights::balanced();
    let comb = WeightedComb::new(w, balanced.as_array().to_vec()).map_err(|e| e.to_string())?;
    let lags: Vec<i64> = (-opts.pd_lag..=opts.pd_lag).collect();
    let errors: Vec<Result<(i64, f64), String>> = lags
        .par_iter()
        .map(|&z| {
            let emp = crate::numerics::empirical_autocorrelation(&comb, &[z])
                .map_err(|e| e.to_string())?;
            Ok((z, (emp - pd_eta(z, &balanced)).norm()))
        })
        .collect();
    let mut worst = (0, 0.0);
    for e in errors {
        let (z, err) = e?;
        if err > worst.1 {
            worst = (z, err);
        }
    }
    if worst.1 > AMPLITUDE_TOL {
        return Err(format!("z={}: error {:.3e}", worst.0, worst.1));
    }
    Ok(format!("|z| <= {}, max error {:.3e}", opts.pd_lag, worst.1))
}

fn check_pd_amplitudes(opts: &SuiteOptions) -> Outcome {
    let w = pd_window(opts.pd_window)?;
    let points = pd_module_enumerate(
        opts.pd_rmax,
        &Interval::half_open(0.0, 1.0).expect("valid interval"),
    );
    let mut max = 0.0f64;
    for weights in [
        PdWeights::real(1.0, 0.0),
        PdWeights::real(0.0, 1.0),
        PdWeights::balanced(),
    ] {
        let comb = WeightedComb::new(w.clone(), weights.as_array().to_vec())
            .map_err(|e| e.to_string())?;
        let est = AmplitudeEstimator::new(&comb, opts.pd_rmax).map_err(|e| e.to_string())?;
        let report = compare(
            &points,
            |k| pd_amplitudes(k).combined(&weights),
            |k| est.amplitude(k).expect("exponent fits"),
            Some(opts.pd_window),
        );
        if let Some(r) = report.worst().filter(|r| r.abs_error > AMPLITUDE_TOL) {
            return Err(format!(
                "weights ({},{}), k={}: error {:.3e}",
                weights.alpha, weights.beta, r.k, r.abs_error
            ));
        }
        max = max.max(report.max_error);
    }
    Ok(format!("{} points x 3 weightings, max error {max:.3e}", points.len()))
}

fn check_pd_periodicity() -> Outcome {
    let points = pd_module_enumerate(8, &Interval::half_open(0.0, 1.0).expect("valid interval"));
    for k in points {
        let shifted = k.checked_add(Dyadic::integer(1)).map_err(|e| e.to_string())?;
        let (a, b) = (pd_amplitudes(k).a.norm(), pd_amplitudes(shifted).a.norm());
        if a != b {
            return Err(format!("k={k}: |A(k)|={a}, |A(k+1)|={b}"));
        }
    }
    Ok("|A(k)| = |A(k+1)| for r <= 8".into())
}

fn check_pd_mass() -> Outcome {
    let points = pd_module_enumerate(12, &Interval::half_open(0.0, 1.0).expect("valid interval"));
    let balanced = PdWeights::balanced();
    let mut acc = crate::numerics::CompensatedSum::default();
    for k in &points {
        acc.add(Complex::new(pd_amplitudes(*k).combined(&balanced).norm_sqr(), 0.0));
    }
    let total = acc.value().re;
    if (0.99..=1.0 + 1e-9).contains(&total) {
        Ok(format!("total {total:.12}"))
    } else {
        Err(format!("total {total:.12} outside [0.99, 1+1e-9]"))
    }
}

fn check_chair_labels(opts: &SuiteOptions) -> Outcome {
    let h = opts.chair_window;
    let levels = h.next_power_of_two().trailing_zeros();
    let w = fixed_point_window(&builtin::chair(), &builtin::chair_seed(), levels)
        .map_err(|e| e.to_string())?;
    let h = h as i64;
    let bad = (-h..h).into_par_iter().find_map_first(|y| {
        (-h..h).find_map(|x| {
            let label = w.get(&[x, y]).expect("window covers the square");
            (chair_label([x, y]) != label).then(|| format!("cell ({x},{y}): window has {label}"))
        })
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(format!("[-{h},{h})^2")),
    }
}

fn square() -> Interval {
    Interval::closed(-1.0, 1.0).expect("valid interval")
}

fn check_chair_approximant(opts: &SuiteOptions) -> Outcome {
    let points = chair_module_enumerate(opts.chair_smax, &square(), &square());
    let mut max = 0.0f64;
    for colour in 0..4 {
        let report = compare(
            &points,
            |k| chair_amplitudes(k).a[colour],
            |k| approximant_amplitude_chair(20, colour, k),
            Some(20),
        );
        if let Some(r) = report.worst().filter(|r| r.abs_error > 1e-6) {
            return Err(format!("colour {colour}, k={}: error {:.3e}", r.k, r.abs_error));
        }
        max = max.max(report.max_error);
    }
    Ok(format!("{} points x 4 colours, max error {max:.3e}", points.len()))
}

fn check_chair_empirical(opts: &SuiteOptions) -> Outcome {
    let window = fixed_point_cube(&builtin::chair(), &builtin::chair_seed(), opts.chair_window)
        .map_err(|e| e.to_string())?;
    let points = chair_module_enumerate(opts.chair_empirical_smax, &square(), &square());
    let mut max = 0.0f64;
    for colour in 0..4 {
        let weights = (0..4)
            .map(|i| Complex::new(if i == colour { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let comb = WeightedComb::new(window.clone(), weights).map_err(|e| e.to_string())?;
        let est = AmplitudeEstimator::new(&comb, opts.chair_empirical_smax)
            .map_err(|e| e.to_string())?;
        let report = compare(
            &points,
            |k| chair_amplitudes(k).a[colour],
            |k| est.amplitude(k).expect("exponent fits"),
            Some(opts.chair_window),
        );
        if let Some(r) = report.worst().filter(|r| r.abs_error > AMPLITUDE_TOL) {
            return Err(format!("colour {colour}, k={}: error {:.3e}", r.k, r.abs_error));
        }
        max = max.max(report.max_error);
    }
    Ok(format!("{} points x 4 colours, max error {max:.3e}", points.len()))
}

fn check_chair_identities(opts: &SuiteOptions) -> Outcome {
    let points = chair_module_enumerate(opts.chair_smax, &square(), &square());
    let ones = ChairWeights::ones();
    let ext = extinction_weights(opts.tamper);
    let zero = Complex::new(0.0, 0.0);
    for &k in &points {
        let a = chair_amplitudes(k).a;
        let half = in_half_gamma_plus(k);
        let want_i = if k.exp() == 0 { 1.0 } else { 0.0 };
        let i1 = chair_intensity(k, &ones);
        if (i1 - want_i).abs() > EXACT_TOL {
            return Err(format!("all-ones intensity at k={k} is {i1:e}"));
        }
        let (even, odd) = if half {
            (Complex::new(0.5, 0.0), odd_coset_phase(k) / 2.0)
        } else {
            (zero, zero)
        };
        if (a[0] + a[2] - even).norm() > EXACT_TOL {
            return Err(format!("A0+A2 at k={k} is {}", a[0] + a[2]));
        }
        if (a[1] + a[3] - odd).norm() > EXACT_TOL {
            return Err(format!("A1+A3 at k={k} is {}", a[1] + a[3]));
        }
        if half {
            let s = chair_amplitudes(k).combined(&ext);
            if s.norm() > EXACT_TOL {
                return Err(format!("extinction fails at k={k}: amplitude {s}"));
            }
        }
        if k.exp() >= 2 && ((a[2] + a[0]).norm() > EXACT_TOL || (a[3] + a[1]).norm() > EXACT_TOL) {
            return Err(format!("A2=-A0, A3=-A1 fail at k={k}"));
        }
    }
    Ok(format!("{} points", points.len()))
}

/// Fixed weights standing in for random ones, so the report is reproducible.
fn spread_weights() -> [ChairWeights; 3] {
    let c = Complex::new;
    [
        ChairWeights::new([c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.1), c(0.0, 1.9)]),
        ChairWeights::new([c(1.0, 1.0), c(-1.0, 0.25), c(0.5, -0.5), c(0.125, 0.0)]),
        ChairWeights::new([c(-2.5, 0.0), c(0.0, -0.75), c(1.5, 1.5), c(0.2, 0.4)]),
    ]
}

fn check_chair_symmetry(opts: &SuiteOptions) -> Outcome {
    let points = chair_module_enumerate(opts.chair_smax, &square(), &square());
    let ext = ChairWeights::powers_of_i();
    for &k in &points {
        for (e, w) in spread_weights().iter().enumerate() {
            for shift in [DyadicPoint2::integer(1, 0), DyadicPoint2::integer(0, 1)] {
                let moved = k.checked_add(shift).map_err(|e| e.to_string())?;
                let (a, b) = (chair_intensity(k, w), chair_intensity(moved, w));
                if (a - b).abs() > 1e-10 {
                    return Err(format!("weights #{e}: I({k})={a:e} but I({moved})={b:e}"));
                }
            }
        }
        let base = chair_intensity(k, &ext);
        for g in D4Element::all() {
            let moved = g.apply_to_k(k);
            let i = chair_intensity(moved, &ext);
            if (i - base).abs() > 1e-10 {
                return Err(format!("I({k})={base:e} but I({moved})={i:e}"));
            }
        }
    }
    Ok(format!("{} points", points.len()))
}

fn check_d4_window(opts: &SuiteOptions) -> Outcome {
    let levels = opts.d4_half.next_power_of_two().trailing_zeros();
    let w = fixed_point_window(&builtin::chair(), &builtin::chair_seed(), levels)
        .map_err(|e| e.to_string())?;
    for g in D4Element::all() {
        let image = d4_apply(&g, &w).map_err(|e| e.to_string())?;
        if image != w {
            return Err(format!(
                "element (rotation {}, reflect {}) moves the window",
                g.rotation(),
                g.reflects()
            ));
        }
    }
    Ok(format!("all 8 elements, half-size {}", 1usize << levels))
}

/// Runs every check in a fixed order.
pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let checks = vec![
        timed("eta_closed_form", || check_eta(opts)),
        timed("pd_label_window", || check_pd_labels(opts)),
        timed("pd_autocorrelation", || check_pd_autocorrelation(opts)),
        timed("pd_amplitudes_empirical", || check_pd_amplitudes(opts)),
        timed("pd_z_periodicity", check_pd_periodicity),
        timed("pd_pure_point_mass", check_pd_mass),
        timed("chair_label_window", || check_chair_labels(opts)),
        timed("chair_approximant", || check_chair_approximant(opts)),
        timed("chair_amplitudes_empirical", || check_chair_empirical(opts)),
        timed("chair_identities", || check_chair_identities(opts)),
        timed("chair_symmetry", || check_chair_symmetry(opts)),
        timed("chair_d4_window", || check_d4_window(opts)),
    ];
    SuiteReport { checks }
}
