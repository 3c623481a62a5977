//! Acceptance criteria. Each test prints one PASS/FAIL line followed by the
//! individual checks, then asserts.

#![allow(clippy::excessive_precision)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use photonfall::constants::{C, HBAR};
use photonfall::dispersion::{
    angular_frequency, effective_mass, group_velocity, kg_residual, kinetic_energy_nonrel,
    photon_energy, CavitySpec,
};
use photonfall::interferometry::{
    peak_snr, q_threshold, snr_trace, ExperimentConfig, WidthModel, FIG2_Q_VALUES,
};
use photonfall::propagator::{
    analytic_gaussian_amplitude, analytic_gaussian_oracle, canonical_scaling, init_gaussian,
    propagate, Boundary, Grid1D, PropagationScenario, Trace, WaveState,
};
use photonfall::run::{run, simulate_freefall, Command, Fig2bSummary};
use photonfall::scenario::{parse_scenario, ScenarioFile, Si};

struct Report {
    id: u8,
    title: &'static str,
    checks: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Report {
    fn new(id: u8, title: &'static str) -> Self {
        Report {
            id,
            title,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Written straight to stdout so the line shows even when output is captured.
    fn finish(self) {
        let ok = self.checks.iter().all(|(_, ok)| *ok);
        let mut text = format!(
            "\nacceptance {} {}: {}\n",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.title
        );
        for (label, ok) in &self.checks {
            text.push_str(&format!(
                "    [{}] {label}\n",
                if *ok { " ok " } else { "FAIL" }
            ));
        }
        for n in &self.notes {
            text.push_str(&format!("    note: {n}\n"));
        }
        std::io::stdout().lock().write_all(text.as_bytes()).unwrap();
        assert!(ok, "acceptance criterion {} failed:\n{text}", self.id);
    }
}

fn sci(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn scenario(name: &str) -> ScenarioFile {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../scenarios/{name}.json"));
    parse_scenario(&fs::read_to_string(path).unwrap()).unwrap()
}

fn with_n_s(mut s: ScenarioFile, n_s: f64) -> ScenarioFile {
    s.cavity.as_mut().unwrap().n_s = Si(n_s);
    s
}

fn with_dt(mut s: ScenarioFile, dt: f64) -> ScenarioFile {
    s.propagation.as_mut().unwrap().dt = Si(dt);
    s
}

/// Initial state and plan equivalent to what `freefall-numeric` builds.
fn setup(s: &ScenarioFile) -> (WaveState, PropagationScenario) {
    let cav = s.cavity.as_ref().unwrap().spec().unwrap();
    let profile = s.gravity_profile(&cav).unwrap();
    let p = s.propagation.as_ref().unwrap();
    let mass = effective_mass(&cav);
    let state = init_gaussian(
        &p.grid().unwrap(),
        p.sigma0.0,
        0.0,
        0.0,
        canonical_scaling(mass, p.sigma0.0).unwrap(),
    )
    .unwrap();
    let plan = PropagationScenario {
        mass,
        g_tilde: profile.g_tilde(),
        dt: p.dt.0,
        t_final: p.t_final.0,
        record_stride: s.output.stride,
        boundary: p.boundary,
    };
    (state, plan)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn criterion_1_parabolic_free_fall() {
    let mut r = Report::new(1, "parabolic free fall and time-step convergence");
    let s = scenario("freefall_scaled");
    let g_tilde = s
        .gravity_profile(&s.cavity.as_ref().unwrap().spec().unwrap())
        .unwrap()
        .g_tilde();
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    run(Command::FreefallNumeric, &s, dir.path()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let (header, rows) = read_csv(&dir.path().join("freefall_numeric.csv"));
    let (ti, yi) = (column(&header, "t_si"), column(&header, "y_si"));
    let t_final = rows.last().unwrap()[ti];
    let fall = 0.5 * g_tilde * t_final * t_final;
    let max_err = rows
        .iter()
        .map(|row| (row[yi] + 0.5 * g_tilde * row[ti] * row[ti]).abs() / fall)
        .fold(0.0, f64::max);
    r.check(
        format!("centroid vs -g~t^2/2: max error {max_err:.2e} of final displacement (< 1e-6)"),
        max_err < 1e-6,
    );
    r.check(
        format!("scaled scenario wall time {elapsed:.3} s (< 10 s)"),
        elapsed < 10.0,
    );

    // Full-state error against the exact accelerating Gaussian, halving dt.
    let sigma0 = s.propagation.as_ref().unwrap().sigma0.0;
    let dts = [0.1, 0.05, 0.025, 0.0125];
    let mut errors = Vec::new();
    for dt in dts {
        let (state, plan) = setup(&with_dt(s.clone(), dt));
        let (end, _) = propagate(&state, &plan).unwrap();
        let dy = end.grid.dy();
        let err: f64 = end
            .amplitudes_si()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let exact = analytic_gaussian_amplitude(
                    sigma0,
                    plan.mass,
                    plan.g_tilde,
                    end.t,
                    end.grid.position(i),
                );
                (a - exact).norm_sqr() * dy
            })
            .sum::<f64>()
            .sqrt();
        errors.push(err);
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    r.note(format!(
        "L2 state errors for dt = {dts:?}: {}",
        sci(&errors)
    ));
    r.check(
        format!("observed orders {orders:.4?} within 2 +/- 0.1"),
        orders.iter().all(|p| (p - 2.0).abs() < 0.1),
    );
    r.finish();
}

#[test]
fn criterion_2_equivalence_principle() {
    let mut r = Report::new(2, "centroid independent of mass over three decades");
    let g_tilde = 2e-3;
    let grid = Grid1D::new(-128.0, 128.0, 4096).unwrap();
    let traces: Vec<(f64, Trace)> = [1.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|f| {
            let mass = f * HBAR;
            let state =
                init_gaussian(&grid, 1.0, 0.0, 0.0, canonical_scaling(mass, 1.0).unwrap()).unwrap();
            let plan = PropagationScenario {
                mass,
                g_tilde,
                dt: 0.01,
                t_final: 10.0,
                record_stride: 100,
                boundary: Boundary::Periodic,
            };
            (mass, propagate(&state, &plan).unwrap().1)
        })
        .collect();
    let reference = &traces[0].1.records;
    let mut worst = 0.0f64;
    let mut worst_exact = 0.0f64;
    for (_, trace) in &traces {
        assert_eq!(trace.records.len(), reference.len());
        for (a, b) in trace.records.iter().zip(reference).skip(1) {
            let fall = 0.5 * g_tilde * a.t * a.t;
            worst = worst.max((a.centroid - b.centroid).abs() / fall);
            worst_exact = worst_exact.max((a.centroid + fall).abs() / fall);
        }
    }
    r.note(format!(
        "{} samples per trace, t = 1..10 s",
        reference.len() - 1
    ));
    r.check(
        format!("pointwise relative spread between masses {worst:.2e} (< 1e-8)"),
        worst < 1e-8,
    );
    r.check(
        format!("relative deviation from -g~t^2/2 {worst_exact:.2e} (< 1e-8)"),
        worst_exact < 1e-8,
    );
    r.finish();
}

#[test]
fn criterion_3_dielectric_drag() {
    let mut r = Report::new(3, "fall distance ratio equals n_s^2");
    let n_s = 1.43;
    let (vacuum, _) = simulate_freefall(&scenario("freefall_scaled")).unwrap();
    let (medium, _) = simulate_freefall(&with_n_s(scenario("freefall_scaled"), n_s)).unwrap();
    let last = (
        vacuum.records.last().unwrap(),
        medium.records.last().unwrap(),
    );
    let ratio = last.0.centroid / last.1.centroid;
    r.check(
        format!(
            "final ratio {ratio:.12} vs {} (rel {:.2e}, < 1e-8)",
            n_s * n_s,
            rel(ratio, n_s * n_s)
        ),
        rel(ratio, n_s * n_s) < 1e-8,
    );
    let worst = vacuum
        .records
        .iter()
        .zip(&medium.records)
        .skip(1)
        .map(|(a, b)| rel(a.centroid / b.centroid, n_s * n_s))
        .fold(0.0, f64::max);
    r.check(
        format!("ratio at every recorded time, worst rel {worst:.2e} (< 1e-8)"),
        worst < 1e-8,
    );
    r.finish();
}

#[test]
fn criterion_4_phase_gradient() {
    let mut r = Report::new(4, "envelope phase gradient equals omega0 g t / c^2");
    for (name, strict) in [("freefall_scaled", true), ("freefall_fig2", false)] {
        let base = scenario(name);
        let g = base.gravity.as_ref().unwrap().g.0;
        let mut runs = Vec::new();
        for n_s in [1.0, 1.43] {
            let s = with_n_s(base.clone(), n_s);
            let omega0 = s.cavity.as_ref().unwrap().spec().unwrap().omega0();
            let (trace, _) = simulate_freefall(&s).unwrap();
            let worst = trace
                .records
                .iter()
                .skip(1)
                .map(|rec| rel(-rec.phase_gradient, omega0 * g * rec.t / (C * C)))
                .fold(0.0, f64::max);
            r.check(
                format!("{name}, n_s = {n_s}: worst rel error {worst:.2e} (< 1e-4)"),
                worst < 1e-4,
            );
            runs.push(trace);
        }
        let spread = runs[0]
            .records
            .iter()
            .zip(&runs[1].records)
            .skip(1)
            .map(|(a, b)| rel(a.phase_gradient, b.phase_gradient))
            .fold(0.0, f64::max);
        if strict {
            r.check(
                format!(
                    "{name}: n_s = 1 vs 1.43 at fixed omega0, worst rel {spread:.2e} (< 1e-12)"
                ),
                spread < 1e-12,
            );
        } else {
            r.note(format!("{name}: n_s = 1 vs 1.43 worst rel {spread:.2e}"));
        }
    }
    r.finish();
}

/// Deterministic uniform samples in `[lo, hi)`.
fn samples(lo: f64, hi: f64, n: usize, runner: &mut TestRunner) -> Vec<f64> {
    (0..n)
        .map(|_| (lo..hi).new_tree(runner).unwrap().current())
        .collect()
}

fn random_cavities(runner: &mut TestRunner) -> Vec<CavitySpec> {
    let logs = samples(-6.7, -4.7, 100, runner);
    let indices = samples(1.0, 2.5, 100, runner);
    logs.iter()
        .zip(&indices)
        .map(|(l, n)| CavitySpec::from_wavelength(10f64.powf(*l), *n).unwrap())
        .collect()
}

#[test]
fn criterion_5_dispersion_exactness() {
    let mut r = Report::new(
        5,
        "exact dispersion, group velocity and non-relativistic limit",
    );
    let mut runner = TestRunner::deterministic();
    let cavities = random_cavities(&mut runner);
    let ks = samples(-3.0, 3.0, 100, &mut runner);

    // residual relative to the largest term, (omega/c~)^2
    let worst_kg = cavities
        .iter()
        .zip(&ks)
        .map(|(cav, lk)| {
            let k = cav.rest_wavenumber() * 10f64.powf(*lk);
            let omega = angular_frequency(cav, k);
            let scale = (omega / cav.light_speed()).powi(2);
            kg_residual(cav, k, omega).abs() / scale
        })
        .fold(0.0, f64::max);
    r.check(
        format!("100 random on-shell points, worst relative residual {worst_kg:.2e} (< 1e-10)"),
        worst_kg < 1e-10,
    );

    let ks = samples(-2.0, 2.0, 100, &mut runner);
    let worst_vg = cavities
        .iter()
        .zip(&ks)
        .map(|(cav, lk)| {
            let k0 = cav.rest_wavenumber();
            let k = k0 * 10f64.powf(*lk);
            let h = 2e-3 * k.hypot(k0);
            let w = |x: f64| angular_frequency(cav, x);
            let fd = (8.0 * (w(k + h) - w(k - h)) - (w(k + 2.0 * h) - w(k - 2.0 * h))) / (12.0 * h);
            rel(group_velocity(cav, k), fd)
        })
        .fold(0.0, f64::max);
    r.check(
        format!(
            "group velocity vs five-point finite difference, worst rel {worst_vg:.2e} (< 1e-8)"
        ),
        worst_vg < 1e-8,
    );

    // x = hbar c~ k / E0 below 1e-3
    let xs = samples(-8.0, -3.0, 100, &mut runner);
    let mut worst_nr = 0.0f64;
    let mut worst_direct = 0.0f64;
    for (cav, lx) in cavities.iter().zip(&xs) {
        let x = 10f64.powf(*lx);
        let e0 = cav.rest_energy();
        let k = x * e0 / (HBAR * cav.light_speed());
        let exact = e0 * x * x / ((1.0 + x * x).sqrt() + 1.0);
        worst_nr = worst_nr.max(rel(kinetic_energy_nonrel(cav, k), exact));
        if x > 1e-4 {
            worst_direct = worst_direct.max(rel(
                kinetic_energy_nonrel(cav, k),
                photon_energy(cav, k) - e0,
            ));
        }
    }
    r.check(
        format!("hbar^2 k^2/2m vs exact kinetic energy, worst rel {worst_nr:.2e} (< 1e-6)"),
        worst_nr < 1e-6,
    );
    r.check(
        format!(
            "same against E(k) - E0 for x in (1e-4, 1e-3), worst rel {worst_direct:.2e} (< 1e-6)"
        ),
        worst_direct < 1e-6,
    );
    r.finish();
}

// Desk-oracle peak values of Sn, 40-digit evaluation.
const SN_PEAK_PAPER: [f64; 3] = [
    0.446_573_628_777_685_25,
    3.038_803_597_208_853_2,
    9.575_035_202_698_147_1,
];
const SN_PEAK_CORRECTED: [f64; 3] = [
    9.022_344_948_707_415_4e-4,
    1.576_781_289_340_269_6e-3,
    2.440_932_520_186_267_8e-3,
];

struct Fig2bCheck {
    monotone: bool,
    single_interior: Vec<bool>,
    peak_in_lifetimes: Vec<f64>,
    sn_peaks: Vec<f64>,
    elapsed: f64,
}

fn fig2b_check(model: WidthModel) -> Fig2bCheck {
    let start = Instant::now();
    let base = ExperimentConfig::default().with_width_model(model);
    let cfgs: Vec<ExperimentConfig> = FIG2_Q_VALUES.iter().map(|&q| base.with_q(q)).collect();
    let traces: Vec<_> = cfgs
        .iter()
        .map(|c| snr_trace(c, 10.0 * c.lifetime(), 2001).unwrap())
        .collect();
    // a shared window for the pointwise ordering
    let window = 10.0 * cfgs[2].lifetime();
    let shared: Vec<_> = cfgs
        .iter()
        .map(|c| snr_trace(c, window, 2001).unwrap())
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let monotone = (1..2001).all(|i| {
        shared[0].samples[i].sn < shared[1].samples[i].sn
            && shared[1].samples[i].sn < shared[2].samples[i].sn
    });
    Fig2bCheck {
        monotone,
        single_interior: traces
            .iter()
            .map(|t| t.peak_interior && t.local_maxima().len() == 1)
            .collect(),
        peak_in_lifetimes: traces
            .iter()
            .zip(&cfgs)
            .map(|(t, c)| t.t_peak / c.lifetime())
            .collect(),
        sn_peaks: traces.iter().map(|t| t.sn_peak).collect(),
        elapsed,
    }
}

/// "Near 2 lifetimes" is pinned as within a factor of two: [1, 4] lifetimes.
const PEAK_WINDOW_LIFETIMES: (f64, f64) = (1.0, 4.0);

#[test]
fn criterion_6_fig2b_reproduction() {
    let mut r = Report::new(6, "Sn(t) traces for Q = 3, 5, 7 x 1e10 (literal width law)");
    let f = fig2b_check(WidthModel::PaperVerbatim);
    r.check("Sn strictly increasing in Q at every t > 0", f.monotone);
    r.check(
        format!("single interior peak per trace: {:?}", f.single_interior),
        f.single_interior.iter().all(|b| *b),
    );
    let (lo, hi) = PEAK_WINDOW_LIFETIMES;
    r.check(
        format!(
            "t_peak near 2 Q/omega0, in [{lo}, {hi}] lifetimes: {:.3?}",
            f.peak_in_lifetimes
        ),
        f.peak_in_lifetimes.iter().all(|x| (lo..=hi).contains(x)),
    );
    r.check(
        format!("Q = 7e10 reaches Sn >= 1: Sn_peak = {:.6}", f.sn_peaks[2]),
        f.sn_peaks[2] >= 1.0,
    );
    let worst = f
        .sn_peaks
        .iter()
        .zip(SN_PEAK_PAPER)
        .map(|(a, b)| rel(*a, b))
        .fold(0.0, f64::max);
    r.check(
        format!("peaks match frozen oracle values, worst rel {worst:.2e} (< 1e-9)"),
        worst < 1e-9,
    );
    r.check(
        format!("three traces in {:.3} s (< 1 s)", f.elapsed),
        f.elapsed < 1.0,
    );

    let c = fig2b_check(WidthModel::Corrected);
    let worst_c = c
        .sn_peaks
        .iter()
        .zip(SN_PEAK_CORRECTED)
        .map(|(a, b)| rel(*a, b))
        .fold(0.0, f64::max);
    r.note(format!(
        "corrected width law: monotone {}, single peak {:?}, t_peak {:.3?} lifetimes, Sn_peak {}, regression worst rel {worst_c:.2e}",
        c.monotone, c.single_interior, c.peak_in_lifetimes, sci(&c.sn_peaks)
    ));
    r.note("no single width law satisfies both the peak-location and the Sn >= 1 clauses");
    r.finish();
}

#[test]
fn criterion_7_q_threshold() {
    let mut r = Report::new(7, "minimum Q for Sn_peak = 1 (literal width law)");
    let cfg = ExperimentConfig::default().with_width_model(WidthModel::PaperVerbatim);
    let t = q_threshold(&cfg, 1e9, 1e12).unwrap();
    r.check(
        format!("Q_min = {:.6e} in [1e10, 1e11]", t.q_min),
        (1e10..=1e11).contains(&t.q_min),
    );
    let frozen = 3.695_528_610_253_512_9e10;
    r.check(
        format!(
            "Q_min vs frozen oracle {frozen:.6e}: rel {:.2e} (< 1e-4)",
            rel(t.q_min, frozen)
        ),
        rel(t.q_min, frozen) < 1e-4,
    );
    let (_, sn) = peak_snr(&cfg.with_q(t.q_min)).unwrap();
    r.check(
        format!("Sn_peak(Q_min) = {sn:.6}, within 1e-3 of 1"),
        (sn - 1.0).abs() < 1e-3,
    );
    let corrected = q_threshold(&cfg.with_width_model(WidthModel::Corrected), 1e9, 1e13).unwrap();
    r.note(format!(
        "corrected width law gives Q_min = {:.6e}",
        corrected.q_min
    ));
    r.finish();
}

#[test]
fn criterion_8_conservation() {
    let mut r = Report::new(
        8,
        "norm, energy and exact-solution agreement over 1e4 steps",
    );
    let s = with_dt(scenario("freefall_scaled"), 1e-3);
    let (_, c) = simulate_freefall(&s).unwrap();
    let per_1e4 = c.norm_drift * 1e4 / c.n_steps as f64;
    r.note(format!("{} steps", c.n_steps));
    r.check(
        format!("norm drift {per_1e4:.2e} per 1e4 steps (< 1e-12)"),
        per_1e4 < 1e-12,
    );
    r.check(
        format!("<H> relative drift {:.2e} (< 1e-10)", c.energy_drift),
        c.energy_drift < 1e-10,
    );
    r.check(
        format!("centroid vs exact {:.2e} (< 1e-6)", c.max_centroid_error),
        c.max_centroid_error < 1e-6,
    );
    r.check(
        format!("width vs exact {:.2e} (< 1e-6)", c.max_width_error),
        c.max_width_error < 1e-6,
    );
    r.check(
        format!("<k> vs exact {:.2e} (< 1e-6)", c.max_mean_k_error),
        c.max_mean_k_error < 1e-6,
    );

    let p = s.propagation.as_ref().unwrap();
    let (state, plan) = setup(&s);
    let (end, _) = propagate(&state, &plan).unwrap();
    let exact = analytic_gaussian_oracle(p.sigma0.0, plan.mass, plan.g_tilde, end.t);
    r.check(
        format!("final time {} s matches the oracle time", end.t),
        rel(end.t, p.t_final.0) < 1e-12 && exact.width > p.sigma0.0,
    );
    r.finish();
}

// Desk-oracle divergence between the two width laws, per Q.
const PEAK_RATIO: [f64; 3] = [
    494.964_037_970_709_09,
    1_927.219_467_755_289_4,
    3_922.695_577_822_640_9,
];
const MAX_ABS_LOG10: [f64; 3] = [
    3.449_443_289_092_906_7,
    3.633_084_144_889_961_2,
    3.633_084_034_498_348_9,
];
const FINAL_WIDTH_RATIO: [f64; 3] = [
    1.723_948_495_304_797_8,
    2.003_158_876_355_111_2,
    2.182_015_559_235_510_7,
];

#[test]
fn criterion_9_width_formula_report() {
    let mut r = Report::new(9, "literal vs corrected width law divergence");
    let mut outputs = Vec::new();
    for model in [WidthModel::PaperVerbatim, WidthModel::Corrected] {
        let mut s = scenario("fig2b");
        s.experiment.as_mut().unwrap().width_model = model;
        let dir = tempfile::tempdir().unwrap();
        let m = run(Command::Fig2b, &s, dir.path()).unwrap();
        let summary: Fig2bSummary = serde_json::from_str(
            &fs::read_to_string(dir.path().join("fig2b_summary.json")).unwrap(),
        )
        .unwrap();
        outputs.push((m, summary, PathBuf::from(dir.path()), dir));
    }
    let (paper, corrected) = (&outputs[0], &outputs[1]);
    for (a, b) in paper
        .0
        .outputs
        .iter()
        .zip(&corrected.0.outputs)
        .filter(|(a, _)| a.file.ends_with(".csv"))
    {
        r.check(
            format!("{} differs between width laws", a.file),
            a.file == b.file && a.sha256 != b.sha256,
        );
    }
    for (i, curve) in paper.1.curves.iter().enumerate() {
        let d = curve.width_model_divergence;
        r.check(
            format!(
                "Q = {:e}: max |log10 Sn ratio| {:.4} decades (>= 1)",
                curve.q, d.max_abs_log10_sn_ratio
            ),
            d.max_abs_log10_sn_ratio >= 1.0,
        );
        let worst = rel(d.peak_ratio, PEAK_RATIO[i])
            .max(rel(d.max_abs_log10_sn_ratio, MAX_ABS_LOG10[i]))
            .max(rel(d.final_width_ratio, FINAL_WIDTH_RATIO[i]));
        r.check(
            format!(
                "Q = {:e}: divergence block matches frozen values, worst rel {worst:.2e} (< 1e-9)",
                curve.q
            ),
            worst < 1e-9,
        );
        r.check(
            format!(
                "Q = {:e}: divergence block identical in both summaries",
                curve.q
            ),
            corrected.1.curves[i].width_model_divergence == d,
        );
    }
    r.finish();
}
