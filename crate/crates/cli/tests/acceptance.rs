//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use mathphys_core::cosmo::{at_drift, entropy_drift, evolve, flat_closed_form, CosmoParams};
use mathphys_core::electrostatics::{equilibrium_distance, force, force_maximum, surface_spread, SphereChargeSystem};
use mathphys_core::heatburgers::{
    burgers_residual, fd_heat_solve, series_case_a, series_case_b, stationary_omega, stationary_omega_fourier, Field1D,
    HeatSolution, RodSpec, SeriesTruncation, SpaceTimeGrid,
};
use mathphys_core::higgs::{
    finite_difference_hessian, hessian, reduced_stability, relative_matrix_error, stability_check, theta_scan_minimizer,
    TwoHiggsParams,
};
use mathphys_core::mechanics::{virial_average, OscillatorSpec};
use mathphys_core::numerics::{halving_orders, loglog_slope, OdeSpec, QuadratureSpec, RandomStream};
use mathphys_core::quantum::{
    coulomb_momentum_limit, fd_torus_error, nascent_pairing, sphere_flux, torus_eigenvalue, NascentFamily, NascentForm,
    TestFunction, TorusSpec, WaveSpec,
};
use mathphys_core::suites::top_ensemble;
use mathphys_core::ultrametric::{asymptotic_bounds_s, sum_r, sum_s, SeriesParams};
use mathphys_core::volterra::{marching_error, p4_marching, KernelFamily, VolterraProblem};
use mathphys_core::walk::{chi_square_vs_occupation, dispersion, occupation, occupation_asymptotic, simulate_sharded, WalkParams};
use num_complex::Complex64;

type Outcome = mathphys_core::Result<(bool, String)>;

const SEED: u64 = 42;

fn ode() -> OdeSpec {
    OdeSpec::new(1e-13, 1e-12, f64::INFINITY, 1e-14).unwrap()
}

fn virial() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [1u32, 2, 3, 5] {
        let start = Instant::now();
        let avg = virial_average(&OscillatorSpec::new(1.0, 1.0, n, 1.0)?, 200, &ode())?;
        let secs = start.elapsed().as_secs_f64();
        let err = (avg.ratio() - n as f64).abs();
        ok &= err <= 1e-3 * n as f64 && secs < 10.0 && avg.periods >= 200;
        parts.push(format!("n={n} ratio={:.9} ({secs:.2}s)", avg.ratio()));
    }
    Ok((ok, parts.join(", ")))
}

fn volterra() -> Outcome {
    let spec = QuadratureSpec::tight();
    let mut ok = true;
    let mut worst_order = f64::INFINITY;
    for k in [
        KernelFamily::linear_half(1.0)?,
        KernelFamily::saturating(1.0)?,
        KernelFamily::quadratic_third(1.0)?,
    ] {
        let p = VolterraProblem::new(k, |x| x.exp())?;
        let errs = [256, 512, 1024]
            .iter()
            .map(|&n| marching_error(&p, n, &spec))
            .collect::<mathphys_core::Result<Vec<_>>>()?;
        for o in halving_orders(&errs) {
            worst_order = worst_order.min(o);
            ok &= o >= 1.8;
        }
    }
    let sol = p4_marching(FRAC_PI_2, 2048)?;
    let sine = sol.x.iter().zip(&sol.phi).map(|(x, v)| (v - x.sin()).abs()).fold(0.0, f64::max);
    ok &= sine <= 1e-6;
    Ok((ok, format!("min marching order {worst_order:.4}, sin recovery error {sine:.2e}")))
}

fn ultrametric() -> Outcome {
    let mut ok = true;
    let (mut lo_ratio, mut hi_ratio) = (f64::INFINITY, 0.0f64);
    for a in [2.0, 3.0] {
        for b in [2.0, 3.0] {
            for k in 0..=2 {
                let p = SeriesParams::new(a, b, k, 1e-16)?;
                for i in 0..=12 {
                    let t = 10f64.powf(3.0 + i as f64 / 4.0);
                    let s = sum_s(&p, t)?;
                    let (lo, hi) = asymptotic_bounds_s(&p, t)?;
                    lo_ratio = lo_ratio.min(s / lo);
                    hi_ratio = hi_ratio.max(s / hi);
                }
            }
        }
    }
    ok &= lo_ratio >= 0.8 && hi_ratio <= 1.2;
    let mut worst_slope: f64 = 0.0;
    for (a, b) in [(2.0, 3.0), (3.0, 2.0), (2.0, 2.0), (3.0, 3.0)] {
        let p = SeriesParams::new(a, b, 0, 1e-16)?;
        let ts: Vec<f64> = (0..=30).map(|i| 10f64.powf(3.0 + i as f64 / 10.0)).collect();
        let rs = ts.iter().map(|&t| sum_r(&p, t)).collect::<mathphys_core::Result<Vec<_>>>()?;
        worst_slope = worst_slope.max((loglog_slope(&ts, &rs) + p.exponent()).abs());
    }
    ok &= worst_slope <= 0.02;
    Ok((
        ok,
        format!("S/lower >= {lo_ratio:.4}, S/upper <= {hi_ratio:.4}, worst slope deviation {worst_slope:.2e}"),
    ))
}

fn random_walk() -> Outcome {
    let start = Instant::now();
    let p = WalkParams::new(0.5, 1.0)?;
    let t = 10.0;
    let law = simulate_sharded(&p, t, 1_000_000, SEED, 0, 8)?;
    let z = (law.second_moment() - dispersion(&p, t)) / law.second_moment_stderr();
    let chi = chi_square_vs_occupation(&p, &law, 15);
    let unit = WalkParams::new(1.0, 1.0)?;
    let ratio = occupation(&unit, 0, 1e4) / occupation_asymptotic(&unit, 1e4);
    let secs = start.elapsed().as_secs_f64();
    let ok = z.abs() <= 4.0 && chi.p_value > 1e-3 && (ratio - 1.0).abs() <= 0.01 && secs < 60.0;
    Ok((
        ok,
        format!("z = {z:.3}, chi2 p = {:.3}, asymptotic ratio {ratio:.6}, {secs:.2}s", chi.p_value),
    ))
}

fn cosmology() -> Outcome {
    let p = CosmoParams::flat();
    let traj = evolve(&p, 1.0, 10.0, &OdeSpec::new(1e-16, 1e-12, f64::INFINITY, 1e-16)?)?;
    let err = traj
        .iter()
        .map(|s| (s.temperature / flat_closed_form(&p, 1.0, s.t) - 1.0).abs())
        .fold(0.0, f64::max);
    let (at, ent) = (at_drift(&traj), entropy_drift(&p, &traj));
    Ok((
        err <= 1e-8 && at <= 1e-8 && ent <= 1e-7,
        format!("closed form {err:.2e}, aT drift {at:.2e}, sa^3 drift {ent:.2e}"),
    ))
}

fn electrostatics() -> Outcome {
    let mut ok = true;
    for (alpha, s0, smax, fmax) in [(2.0, 1.43, 1.79, 0.43), (1.0, 1.62, 2.07, 0.15), (0.5, 1.88, 2.46, 0.05)] {
        let (s, f) = force_maximum(alpha)?;
        ok &= (equilibrium_distance(alpha)? - s0).abs() <= 0.01 && (s - smax).abs() <= 0.01 && (f - fmax).abs() <= 0.01;
    }
    let delta = 1e-4;
    let near = force(&SphereChargeSystem::new(1.0, 1.0, 1.0, 1.0 + delta)?) * (2.0 * delta).powi(2);
    ok &= (near + 1.0).abs() <= 1e-3;
    let mut s = RandomStream::new(SEED, 7);
    let mut spread: f64 = 0.0;
    for _ in 0..5 {
        let r = s.uniform_in(0.5, 2.0);
        let sys = SphereChargeSystem::new(r, s.uniform_in(-3.0, 3.0), s.uniform_in(0.2, 3.0), r * s.uniform_in(1.05, 5.0))?;
        spread = spread.max(surface_spread(&sys, 200)?);
    }
    ok &= spread <= 1e-9;
    Ok((ok, format!("contact ratio {near:.7}, surface spread {spread:.2e}")))
}

fn higgs() -> Outcome {
    let mut s = RandomStream::new(SEED, 8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
        let p = TwoHiggsParams::random(&mut s, true).with_tadpoles_solved(v1, v2)?;
        worst = worst.max(relative_matrix_error(&hessian(&p, v1, v2)?, &finite_difference_hessian(&p, v1, v2, 1e-4)));
    }
    let mut mismatches = 0;
    for _ in 0..1000 {
        let mut p = TwoHiggsParams::random(&mut s, false);
        p.mu12_sq = Complex64::new(0.0, 0.0);
        let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
        if stability_check(&p, v1, v2)?.locally_stable() != reduced_stability(&p) {
            mismatches += 1;
        }
    }
    let mut off_zero = 0;
    for _ in 0..100 {
        let mut p = TwoHiggsParams::random(&mut s, false);
        p.mu12_sq = Complex64::new(s.uniform_in(0.01, 2.0), 0.0);
        p.lambda5 = Complex64::new(-s.uniform_in(0.01, 2.0), 0.0);
        if theta_scan_minimizer(&p, s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0), 3600) != 0.0 {
            off_zero += 1;
        }
    }
    Ok((
        worst <= 1e-6 && mismatches == 0 && off_zero == 0,
        format!("Hessian error {worst:.2e}, reduced-case mismatches {mismatches}, theta minima off zero {off_zero}"),
    ))
}

fn torus() -> Outcome {
    let phases = [0.0, 1.0, PI];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &phi1 in &phases {
        for &phi2 in &phases {
            let t = TorusSpec::new(1.0, 1.0, phi1, phi2)?;
            let errs = [32, 64, 128]
                .iter()
                .map(|&n| fd_torus_error(&t, n, 6))
                .collect::<mathphys_core::Result<Vec<_>>>()?;
            for o in halving_orders(&errs) {
                lo = lo.min(o);
                hi = hi.max(o);
            }
        }
    }
    let t = TorusSpec::new(1.0, 1.3, 0.4, 1.1)?;
    let shifted = TorusSpec {
        phi1: t.phi1 + 2.0 * PI,
        phi2: t.phi2 + 2.0 * PI,
        ..t
    };
    let mut a: Vec<f64> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for n1 in -10..=10 {
        for n2 in -10..=10 {
            a.push(torus_eigenvalue(&t, n1, n2));
            b.push(torus_eigenvalue(&shifted, n1 + 1, n2 + 1));
        }
    }
    let periodic = a.iter().zip(&b).map(|(x, y)| (x - y).abs() / x.max(1.0)).fold(0.0, f64::max);
    Ok((
        lo >= 1.9 && hi <= 2.1 && periodic <= 1e-12,
        format!("orders in [{lo:.4}, {hi:.4}], periodicity mismatch {periodic:.1e}"),
    ))
}

fn nascent() -> Outcome {
    let mut ok = true;
    let widths = [0.1, 0.05, 0.025, 0.0125];
    let tests_1d = [TestFunction::Bump { l: 1.0 }, TestFunction::ModulatedBump { l: 1.5 }];
    let tests_3d = [TestFunction::Bump { l: 1.0 }, TestFunction::GaussianCutoff { l: 2.0 }];
    let mut worst_final: f64 = 0.0;
    for form in NascentForm::ALL {
        let tests = if form.is_radial() { &tests_3d } else { &tests_1d };
        for test in tests {
            let mut errs = Vec::new();
            for a in widths {
                errs.push((nascent_pairing(&NascentFamily::new(form, a)?, test)? - test.eval(0.0)).abs());
            }
            ok &= errs.windows(2).all(|w| w[1] < w[0]);
            worst_final = worst_final.max(errs[3]);
        }
    }
    let test = TestFunction::GaussianCutoff { l: 2.0 };
    let mut coulomb = Vec::new();
    for am in [0.02, 0.01, 0.005, 0.0025] {
        coulomb.push((coulomb_momentum_limit(am, 1.0, &test)? / test.eval(0.0) - 1.0).abs());
    }
    ok &= coulomb.windows(2).all(|w| w[1] < w[0]);
    let k = 1.3;
    let w = WaveSpec::spherical(k)?;
    let mut spread: f64 = 0.0;
    for i in 0..=20 {
        let r = 0.1 * 100f64.powf(i as f64 / 20.0);
        spread = spread.max((sphere_flux(&w, r)? / (4.0 * PI * k) - 1.0).abs());
    }
    ok &= spread <= 1e-8;
    Ok((
        ok,
        format!("narrowest pairing error {worst_final:.2e}, Coulomb deviation {:.2e}, flux spread {spread:.1e}", coulomb[3]),
    ))
}

fn heat() -> Outcome {
    let r = RodSpec::new(1.0, 0.5, 2.0)?;
    let probes = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9];
    let t = r.time_scale();
    let fd_a = fd_heat_solve(&r, &Field1D::dirichlet(r.l, 400, |_| 2.0), 0.0, t, 400, 400)?;
    let tb = 0.2 * r.time_scale();
    let fd_b = fd_heat_solve(&r, &Field1D::dirichlet(r.l, 400, |_| 0.0), 1.5, tb, 400, 400)?;
    let tr = SeriesTruncation::fixed(100_000)?;
    let (mut ea, mut eb): (f64, f64) = (0.0, 0.0);
    for x in probes {
        ea = ea.max((fd_a.at(x) / series_case_a(&r, 2.0, x, t, &tr)? - 1.0).abs());
        eb = eb.max((fd_b.at(x) / series_case_b(&r, 1.5, x, tb, &tr)? - 1.0).abs());
    }
    let unit = RodSpec::new(1.0, 1.0, 1.0)?;
    let long = SeriesTruncation::fixed(200_000)?;
    let (mut limit, mut fourier): (f64, f64) = (0.0, 0.0);
    for i in 1..40 {
        let x = i as f64 / 40.0;
        let w = stationary_omega(&unit, 1.0, x)?;
        limit = limit.max((series_case_b(&unit, 1.0, x, 60.0 * unit.time_scale(), &long)? - w).abs());
        fourier = fourier.max((stationary_omega_fourier(&unit, 1.0, x, &tr)? - w).abs());
    }
    Ok((
        ea <= 1e-3 && eb <= 1e-3 && limit <= 1e-6 && fourier <= 1e-6,
        format!("case a {ea:.2e}, case b {eb:.2e}, tent limit {limit:.2e}, Fourier tent {fourier:.2e}"),
    ))
}

fn burgers() -> Outcome {
    let nu = 0.5;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut decreasing = true;
    for sol in [
        HeatSolution::Cosine { k: 2.0, amplitude: 0.6 },
        HeatSolution::Source { x0: 0.3, mass: 1.0 },
    ] {
        let mut res = Vec::new();
        for n in [80usize, 160, 320] {
            let g = SpaceTimeGrid::uniform((-1.0, 1.0), 2 * n, (0.5, 1.0), n / 2, |x, t| sol.burgers_velocity(nu, x, t))?;
            res.push(burgers_residual(nu, &g));
        }
        decreasing &= res.windows(2).all(|w| w[1] < w[0]);
        for o in halving_orders(&res) {
            lo = lo.min(o);
            hi = hi.max(o);
        }
    }
    let sol = HeatSolution::Exponential { c: -0.8 };
    let mut constant: f64 = 0.0;
    for (x, t) in [(0.0, 0.1), (2.0, 1.0), (-3.0, 5.0)] {
        constant = constant.max((sol.burgers_velocity(nu, x, t)? + 0.8).abs());
    }
    Ok((
        decreasing && lo >= 1.85 && hi <= 2.15 && constant <= 1e-10,
        format!("residual orders in [{lo:.4}, {hi:.4}], constant speed error {constant:.1e}"),
    ))
}

fn top() -> Outcome {
    let mut s = RandomStream::new(SEED, 10);
    let e = top_ensemble(50, &mut s)?;
    Ok((
        e.max_conservation_drift <= 1e-8
            && e.max_reduced_residual <= 1e-8
            && e.max_band_excursion <= 1e-6
            && e.lift_mismatches == 0
            && e.max_lift_range_excursion <= 1e-9,
        format!(
            "{} runs ({} lifting), drift {:.1e}, reduced residual {:.1e}, band excursion {:.1e}, lift mismatches {}",
            e.runs, e.lifting_runs, e.max_conservation_drift, e.max_reduced_residual, e.max_band_excursion, e.lift_mismatches
        ),
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_mathphys-bench");
    let dir = tempfile::tempdir().expect("temp dir");
    let mut reports = Vec::new();
    let mut elapsed = Duration::ZERO;
    for run in ["first", "second"] {
        let out = dir.path().join(run);
        let start = Instant::now();
        let status = Command::new(bin)
            .args(["verify", "all", "--seed", "42", "--out"])
            .arg(&out)
            .status()
            .expect("binary runs");
        elapsed = elapsed.max(start.elapsed());
        if !status.success() {
            return Ok((false, format!("verify all exited with {status}")));
        }
        reports.push(std::fs::read(out.join("verify_all.json")).expect("report written"));
    }
    Ok((
        reports[0] == reports[1] && elapsed < Duration::from_secs(600),
        format!("{} byte reports identical: {}, slowest run {:.2}s", reports[0].len(), reports[0] == reports[1], elapsed.as_secs_f64()),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("virial ratios", virial),
        ("Volterra closed form and marching oracle", volterra),
        ("ultrametric sandwich and decay slope", ultrametric),
        ("random walk Monte Carlo", random_walk),
        ("flat cosmology", cosmology),
        ("charge near a sphere", electrostatics),
        ("two-Higgs vacuum", higgs),
        ("twisted torus spectrum", torus),
        ("nascent deltas and spherical flux", nascent),
        ("heated rod", heat),
        ("Burgers via Cole-Hopf", burgers),
        ("spinning ball trajectories", top),
        ("determinism and runtime", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
