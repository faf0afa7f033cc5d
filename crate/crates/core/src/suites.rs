//! Per-problem verification suites `p01`–`p14`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::cosmo::{at_drift, entropy_drift, evolve, flat_closed_form, CosmoParams};
use crate::electrostatics::{
    equilibrium_distance, force, force_maximum, sign_changes, surface_spread, SphereChargeSystem,
};
use crate::error::{Error, Result};
use crate::heatburgers::{
    burgers_residual, fd_heat_solve, series_case_a, series_case_b, stationary_omega, stationary_omega_fourier, Field1D,
    HeatSolution, RodSpec, SeriesTruncation, SpaceTimeGrid,
};
use crate::higgs::{
    finite_difference_hessian, hessian, reduced_stability, relative_matrix_error, stability_check, theta_scan_minimizer,
    TwoHiggsParams,
};
use crate::mechanics::{
    dimensionless, motion_band, simulate_top, theta_at_start, theta_function, virial_average, DimensionlessTop,
    OscillatorSpec, TopSpec,
};
use crate::numerics::{halving_orders, loglog_slope, OdeSpec, QuadratureSpec, RandomStream};
use crate::quantum::{
    box_flux, coulomb_momentum_limit, fd_torus_error, flux_analytic, flux_finite_difference, nascent_pairing,
    sphere_flux, torus_eigenvalue, NascentFamily, NascentForm, TestFunction, TorusSpec, WaveSpec,
};
use crate::report::{Checker, Comparison, Overrides, Provenance, Report};
use crate::ultrametric::{asymptotic_bounds_s, sum_r, sum_s, SeriesParams};
use crate::volterra::{
    closed_form_residual, marching_error, p4_marching, p4_residual, solve_closed_form, KernelFamily, VolterraProblem,
};
use crate::walk::{chi_square_vs_occupation, dispersion, occupation, occupation_asymptotic, simulate_sharded, WalkParams};

use Comparison::{Absolute, AtLeast, AtMost, Exact, Relative};
use Provenance::{Derived, Published, Trivial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProblemId(u8);

impl ProblemId {
    pub const COUNT: u8 = 14;

    pub fn new(n: u8) -> Option<Self> {
        (1..=Self::COUNT).contains(&n).then_some(Self(n))
    }

    pub fn all() -> Vec<Self> {
        (1..=Self::COUNT).map(Self).collect()
    }

    pub fn number(&self) -> u8 {
        self.0
    }

    pub fn topic(&self) -> &'static str {
        match self.0 {
            1 => "anharmonic virial averages",
            2 => "Volterra resolvent",
            3 => "ultrametric series",
            4 => "Volterra equation reduced to an ODE",
            5 => "Poisson random walk",
            6 => "radiation-dominated cosmology",
            7 => "charge near a conducting sphere",
            8 => "two-Higgs-doublet vacuum",
            9 => "probability flux",
            10 => "spinning eccentric ball",
            11 => "twisted torus spectrum",
            12 => "nascent delta families",
            13 => "heated rod",
            14 => "Burgers via Cole-Hopf",
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{:02}", self.0)
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.strip_prefix('p')
            .and_then(|d| d.parse::<u8>().ok())
            .and_then(Self::new)
            .ok_or_else(|| format!("unknown problem '{s}' (expected p01..p14 or all)"))
    }
}

/// Parse `all` or a comma-separated list of problem ids.
pub fn parse_selection(s: &str) -> std::result::Result<Vec<ProblemId>, String> {
    if s == "all" {
        return Ok(ProblemId::all());
    }
    let mut ids = s.split(',').map(str::parse).collect::<std::result::Result<Vec<ProblemId>, _>>()?;
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Stream id for a problem's generator; the walk shards use the ids after it.
pub fn stream_id(p: ProblemId) -> u64 {
    1000 * p.number() as u64
}

/// Run the selected suites concurrently and assemble the report in problem
/// order.
pub fn run(problems: &[ProblemId], seed: u64, overrides: &Overrides) -> Report {
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = problems
            .iter()
            .map(|&p| scope.spawn(move || run_one(p, seed, overrides)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    Report::new(seed, problems.iter().map(|p| p.to_string()).collect(), overrides, rows)
}

pub fn run_one(p: ProblemId, seed: u64, overrides: &Overrides) -> Vec<crate::report::CheckRow> {
    let name: &'static str = NAMES[p.number() as usize - 1];
    let mut c = Checker::new(name, overrides);
    let mut stream = RandomStream::new(seed, stream_id(p));
    let outcome = match p.number() {
        1 => p01(&mut c),
        2 => p02(&mut c),
        3 => p03(&mut c),
        4 => p04(&mut c),
        5 => p05(&mut c, seed, stream_id(p)),
        6 => p06(&mut c),
        7 => p07(&mut c),
        8 => p08(&mut c, &mut stream),
        9 => p09(&mut c, &mut stream),
        10 => p10(&mut c, &mut stream),
        11 => p11(&mut c),
        12 => p12(&mut c),
        13 => p13(&mut c),
        14 => p14(&mut c),
        _ => unreachable!(),
    };
    if let Err(e) = outcome {
        c.error("suite_error", &e.to_string());
    }
    c.into_rows()
}

const NAMES: [&str; 14] = [
    "p01", "p02", "p03", "p04", "p05", "p06", "p07", "p08", "p09", "p10", "p11", "p12", "p13", "p14",
];

fn tight_ode() -> OdeSpec {
    OdeSpec::new(1e-13, 1e-12, f64::INFINITY, 1e-14).expect("valid tolerances")
}

fn p01(c: &mut Checker) -> Result<()> {
    for (n, tol) in [(1u32, 1e-6), (2, 1e-3), (3, 1e-3), (5, 1e-3)] {
        let o = OscillatorSpec::new(1.0, 1.0, n, 1.0)?;
        let avg = virial_average(&o, 200, &tight_ode())?;
        let prov = if n == 1 { Trivial } else { Published };
        c.check(format!("kinetic_over_potential_n{n}"), avg.ratio(), n as f64, tol, Relative, prov, "<K> = n<U> for U = lambda x^(2n)");
    }
    Ok(())
}

fn p02(c: &mut Checker) -> Result<()> {
    let spec = QuadratureSpec::tight();
    let p = VolterraProblem::new(KernelFamily::linear_half(1.0)?, |_| 1.0)?;
    c.check("hand_value_linear_half", solve_closed_form(&p, 1.0, &spec)?, 2.5, 1e-12, Absolute, Trivial, "resolvent solution for alpha = x/2, f = 1");
    let families = [
        ("linear_half", KernelFamily::linear_half(1.0)?),
        ("saturating", KernelFamily::saturating(1.0)?),
        ("quadratic_third", KernelFamily::quadratic_third(1.0)?),
        ("negative_sine", KernelFamily::negative_sine(1.0)?),
    ];
    for (name, k) in families {
        let p = VolterraProblem::new(k, |x| (2.0 * x).sin() + 1.0)?;
        let mut worst: f64 = 0.0;
        for i in 0..32 {
            worst = worst.max(closed_form_residual(&p, i as f64 / 31.0, &spec)?.abs());
        }
        c.check(format!("residual_{name}"), worst, 0.0, 1e-8, AtMost, Derived, "closed-form solution substituted back into the integral equation");
    }
    let p = VolterraProblem::new(KernelFamily::saturating(1.0)?, |x| x.exp())?;
    let errs = [256, 512, 1024]
        .iter()
        .map(|&n| marching_error(&p, n, &spec))
        .collect::<Result<Vec<_>>>()?;
    for (i, o) in halving_orders(&errs).into_iter().enumerate() {
        c.check(format!("marching_order_{}", 256 << i), o, 2.0, 1.8, AtLeast, Derived, "trapezoidal marching oracle converges at second order");
    }
    Ok(())
}

fn p03(c: &mut Checker) -> Result<()> {
    for a in [2.0, 3.0] {
        for b in [2.0, 3.0] {
            for k in 0..=2 {
                let p = SeriesParams::new(a, b, k, 1e-16)?;
                let (mut lo_ratio, mut hi_ratio) = (f64::INFINITY, 0.0f64);
                for e in 3..=6 {
                    let t = 10f64.powi(e);
                    let s = sum_s(&p, t)?;
                    let (lo, hi) = asymptotic_bounds_s(&p, t)?;
                    lo_ratio = lo_ratio.min(s / lo);
                    hi_ratio = hi_ratio.max(s / hi);
                }
                let tag = format!("a{a}_b{b}_k{k}");
                c.check(format!("sandwich_lower_{tag}"), lo_ratio, 1.0, 0.8, AtLeast, Published, "power-law sandwich of the weighted series");
                c.check(format!("sandwich_upper_{tag}"), hi_ratio, 1.0, 1.2, AtMost, Published, "power-law sandwich of the weighted series");
            }
        }
    }
    for (a, b) in [(2.0, 3.0), (3.0, 2.0)] {
        let p = SeriesParams::new(a, b, 0, 1e-16)?;
        let ts: Vec<f64> = (0..=30).map(|i| 10f64.powf(3.0 + i as f64 / 10.0)).collect();
        let rs = ts.iter().map(|&t| sum_r(&p, t)).collect::<Result<Vec<_>>>()?;
        c.check(format!("decay_slope_a{a}_b{b}"), loglog_slope(&ts, &rs), -p.exponent(), 0.02, Absolute, Published, "R(t) decays as t^(-ln a / ln b)");
    }
    Ok(())
}

fn p04(c: &mut Checker) -> Result<()> {
    let sol = p4_marching(FRAC_PI_2, 2048)?;
    let worst = sol.x.iter().zip(&sol.phi).map(|(x, v)| (v - x.sin()).abs()).fold(0.0, f64::max);
    c.check("recovers_sine", worst, 0.0, 1e-6, AtMost, Published, "integral equation solved by sin x");
    let worst = [0.3, FRAC_PI_2, 3.0]
        .iter()
        .map(|&x| p4_residual(x).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    c.check("sine_residual", worst, 0.0, 1e-10, AtMost, Derived, "sin x substituted into the integral equation");
    Ok(())
}

fn p05(c: &mut Checker, seed: u64, first_stream: u64) -> Result<()> {
    let p = WalkParams::new(0.5, 1.0)?;
    let t = 10.0;
    let law = simulate_sharded(&p, t, 1_000_000, seed, first_stream, 8)?;
    let z = (law.second_moment() - dispersion(&p, t)) / law.second_moment_stderr();
    c.check("variance_z_score", z.abs(), 0.0, 4.0, AtMost, Derived, "Monte Carlo dispersion equals alpha t / tau");
    let chi = chi_square_vs_occupation(&p, &law, 15);
    c.check("chi_square_p_value", chi.p_value, 1.0, 1e-3, AtLeast, Derived, "occupation law exp(-z) I_m(z) against Monte Carlo");
    let total: f64 = (-60..=60).map(|m| occupation(&p, m, 5.0)).sum();
    c.check("occupation_normalised", total, 1.0, 1e-12, Absolute, Trivial, "sum over sites of exp(-z) I_m(z)");
    let unit = WalkParams::new(1.0, 1.0)?;
    let ratio = occupation(&unit, 0, 1e4) / occupation_asymptotic(&unit, 1e4);
    c.check("asymptotic_ratio", ratio, 1.0, 0.01, Absolute, Published, "return probability ~ (2 pi z)^(-1/2)");
    Ok(())
}

fn p06(c: &mut Checker) -> Result<()> {
    let p = CosmoParams::flat();
    let spec = OdeSpec::new(1e-16, 1e-12, f64::INFINITY, 1e-16)?;
    let traj = evolve(&p, 1.0, 10.0, &spec)?;
    let worst = traj
        .iter()
        .map(|s| (s.temperature / flat_closed_form(&p, 1.0, s.t) - 1.0).abs())
        .fold(0.0, f64::max);
    c.check("flat_closed_form", worst, 0.0, 1e-8, AtMost, Derived, "separable solution of the flat temperature equation");
    c.check("scale_times_temperature_drift", at_drift(&traj), 0.0, 1e-8, AtMost, Published, "a T is constant");
    c.check("comoving_entropy_drift", entropy_drift(&p, &traj), 0.0, 1e-7, AtMost, Published, "s a^3 is constant");
    Ok(())
}

fn p07(c: &mut Checker) -> Result<()> {
    for (alpha, s0, smax, fmax) in [(2.0, 1.43, 1.79, 0.43), (1.0, 1.62, 2.07, 0.15), (0.5, 1.88, 2.46, 0.05)] {
        let anchor = "published equilibrium distances and force maxima";
        c.check(format!("s0_alpha{alpha}"), equilibrium_distance(alpha)?, s0, 0.01, Absolute, Published, anchor);
        let (s, f) = force_maximum(alpha)?;
        c.check(format!("s_max_alpha{alpha}"), s, smax, 0.01, Absolute, Published, anchor);
        c.check(format!("f_max_alpha{alpha}"), f, fmax, 0.01, Absolute, Published, anchor);
        c.check(format!("sign_changes_alpha{alpha}"), sign_changes(alpha, 20_000) as f64, 1.0, 0.0, Exact, Derived, "force changes sign once");
    }
    let delta = 1e-4;
    let s = SphereChargeSystem::new(1.0, 1.0, 1.0, 1.0 + delta)?;
    c.check("near_contact", force(&s) * (2.0 * delta).powi(2), -1.0, 1e-3, Absolute, Derived, "image attraction at contact");
    let s = SphereChargeSystem::new(1.0, 2.0, 1.0, 3.0)?;
    c.check("surface_equipotential", surface_spread(&s, 400)?, 0.0, 1e-9, AtMost, Trivial, "sphere surface is an equipotential");
    Ok(())
}

fn p08(c: &mut Checker, s: &mut RandomStream) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
        let p = TwoHiggsParams::random(s, true).with_tadpoles_solved(v1, v2)?;
        worst = worst.max(relative_matrix_error(&hessian(&p, v1, v2)?, &finite_difference_hessian(&p, v1, v2, 1e-4)));
    }
    c.check("hessian_vs_finite_difference", worst, 0.0, 1e-6, AtMost, Derived, "analytic mass matrix of the aligned vacuum");
    let mut mismatches = 0;
    for _ in 0..500 {
        let mut p = TwoHiggsParams::random(s, false);
        p.mu12_sq = Complex64::new(0.0, 0.0);
        let (v1, v2) = (s.uniform_in(0.2, 2.0), s.uniform_in(0.2, 2.0));
        if stability_check(&p, v1, v2)?.locally_stable() != reduced_stability(&p) {
            mismatches += 1;
        }
    }
    c.check("reduced_stability_mismatches", mismatches as f64, 0.0, 0.0, Exact, Published, "stability conditions without the mixing mass");
    let mut off_zero = 0;
    for _ in 0..50 {
        let mut p = TwoHiggsParams::random(s, false);
        p.mu12_sq = Complex64::new(s.uniform_in(0.01, 2.0), 0.0);
        p.lambda5 = Complex64::new(-s.uniform_in(0.01, 2.0), 0.0);
        if theta_scan_minimizer(&p, s.uniform_in(0.1, 2.0), s.uniform_in(0.1, 2.0), 3600) != 0.0 {
            off_zero += 1;
        }
    }
    c.check("relative_phase_minimum_at_zero", off_zero as f64, 0.0, 0.0, Exact, Published, "vev alignment for positive mixing mass and negative lambda5");
    Ok(())
}

fn p09(c: &mut Checker, s: &mut RandomStream) -> Result<()> {
    let k = 1.7;
    let w = WaveSpec::spherical(k)?;
    let want = 4.0 * PI * k;
    let mut spread: f64 = 0.0;
    for r in (0..=12).map(|i| 0.1 * 100f64.powf(i as f64 / 12.0)) {
        spread = spread.max((sphere_flux(&w, r)? / want - 1.0).abs());
    }
    c.check("spherical_flux_through_spheres", spread, 0.0, 1e-8, AtMost, Published, "outgoing flux 4 pi hbar k / m independent of radius");
    let plane = WaveSpec::plane([1.0, -0.4, 0.3], 2.0)?;
    c.check("plane_flux_through_cube", box_flux(&plane, 1.5)?.abs(), 0.0, 1e-12, AtMost, Trivial, "plane-wave flux is divergence free");
    let mut worst: f64 = 0.0;
    for wave in [plane, w] {
        for _ in 0..20 {
            let p = [s.uniform_in(-3.0, 3.0), s.uniform_in(-3.0, 3.0), s.uniform_in(0.5, 3.0)];
            let exact = flux_analytic(&wave, &p)?;
            let fd = flux_finite_difference(&wave, &p, 1e-4)?;
            let scale = exact.iter().map(|x| x.abs()).fold(0.0, f64::max);
            let err = exact.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(err / scale);
        }
    }
    c.check("flux_from_wavefunction", worst, 0.0, 1e-6, AtMost, Derived, "j = (hbar/m) Im(psi* grad psi) by differences");
    Ok(())
}

/// Trajectory checks shared with the acceptance suite.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TopEnsemble {
    pub runs: usize,
    pub lifting_runs: usize,
    pub max_conservation_drift: f64,
    pub max_reduced_residual: f64,
    pub max_band_excursion: f64,
    pub lift_mismatches: usize,
    pub max_lift_range_excursion: f64,
}

pub fn top_ensemble(runs: usize, stream: &mut RandomStream) -> Result<TopEnsemble> {
    let mut out = TopEnsemble {
        runs,
        ..Default::default()
    };
    let spec = tight_ode();
    for _ in 0..runs {
        let t = TopSpec::random(stream);
        let d = dimensionless(&t);
        let band = motion_band(&d, t.epsilon)?;
        let run = simulate_top(&t, 50.0 / t.omega0, 2000, &spec)?;
        let m = run.monitors();
        out.max_conservation_drift = out.max_conservation_drift.max(m.energy_drift).max(m.p_phi_drift).max(m.p_psi_drift);
        out.max_reduced_residual = out.max_reduced_residual.max(m.reduced_residual);
        let (lo, hi) = band.cos_theta_range;
        out.max_band_excursion = out.max_band_excursion.max(lo - m.cos_theta_min).max(m.cos_theta_max - hi).max(0.0);
        let early = simulate_top(&t, 0.01 / t.omega0, 1, &spec)?;
        let theta = early.samples.last().expect("two samples").theta;
        let rose = t.epsilon.cos() - theta.cos() > 0.0;
        if rose != band.lifts_up {
            out.lift_mismatches += 1;
        }
        if band.lifts_up {
            out.lifting_runs += 1;
            let excursion = (t.epsilon - m.theta_min).max(m.theta_max - (PI - t.epsilon)).max(0.0);
            out.max_lift_range_excursion = out.max_lift_range_excursion.max(excursion);
        }
    }
    Ok(out)
}

fn p10(c: &mut Checker, s: &mut RandomStream) -> Result<()> {
    let mut worst_identity: f64 = 0.0;
    let mut min_disc = f64::INFINITY;
    for _ in 0..500 {
        let d = DimensionlessTop {
            alpha: s.uniform_in(0.0, 2.0),
            beta: s.uniform_in(0.0, 5.0),
            gamma: s.uniform_in(0.0, 5.0),
        };
        let eps = s.uniform_in(1e-3, PI);
        let err = (theta_function(&d, eps, eps.cos()) - theta_at_start(&d, eps)).abs() / (1.0 + d.beta_gamma());
        worst_identity = worst_identity.max(err);
    }
    c.check("theta_at_start_identity", worst_identity, 0.0, 1e-12, AtMost, Derived, "Theta(eps) = -2 sin^2 eps ((alpha - 1) cos eps + beta gamma)");
    for _ in 0..10_000 {
        let d = DimensionlessTop {
            alpha: s.uniform_in(0.0, 2.0),
            beta: 1.0,
            gamma: s.uniform_in(1e-9, 10.0),
        };
        let eps = s.uniform_in(1e-3, FRAC_PI_2);
        let b = motion_band(&d, eps);
        let disc = match b {
            Ok(b) => (b.z_plus - b.z_minus).powi(2),
            Err(Error::ComplexRoots { discriminant }) => discriminant,
            Err(e) => return Err(e),
        };
        min_disc = min_disc.min(disc);
    }
    c.check("real_roots", min_disc, 0.0, 0.0, AtLeast, Published, "Theta has two real roots in cos theta");
    let e = top_ensemble(50, s)?;
    let anchor = "first integrals of the ball";
    c.check("conservation_drift", e.max_conservation_drift, 0.0, 1e-8, AtMost, Derived, anchor);
    c.check("reduced_equation_residual", e.max_reduced_residual, 0.0, 1e-8, AtMost, Published, "first-order equation for theta");
    c.check("band_excursion", e.max_band_excursion, 0.0, 1e-6, AtMost, Published, "motion confined between cos eps and z+");
    c.check("lift_mismatches", e.lift_mismatches as f64, 0.0, 0.0, Exact, Published, "centre of mass lifts iff (alpha - 1) cos eps + beta gamma < 0");
    c.check("lifting_range_excursion", e.max_lift_range_excursion, 0.0, 1e-9, AtMost, Published, "lifting tops stay within [eps, pi - eps]");
    Ok(())
}

fn p11(c: &mut Checker) -> Result<()> {
    let phases = [0.0, 1.0, PI];
    for &phi1 in &phases {
        for &phi2 in &phases {
            let t = TorusSpec::new(1.0, 1.0, phi1, phi2)?;
            let errs = [32, 64, 128]
                .iter()
                .map(|&n| fd_torus_error(&t, n, 6))
                .collect::<Result<Vec<_>>>()?;
            for (i, o) in halving_orders(&errs).into_iter().enumerate() {
                c.check(
                    format!("fd_order_phi1_{phi1:.4}_phi2_{phi2:.4}_n{}", 32 << i),
                    o,
                    2.0,
                    0.1,
                    Absolute,
                    Derived,
                    "five-point twisted Laplacian converges to the analytic levels",
                );
            }
        }
    }
    let t = TorusSpec::new(1.0, 1.3, 0.4, 1.1)?;
    let shifted = TorusSpec {
        phi1: t.phi1 + 2.0 * PI,
        phi2: t.phi2 - 2.0 * PI,
        ..t
    };
    let mut worst: f64 = 0.0;
    for n1 in -10..=10 {
        for n2 in -10..=10 {
            let e = torus_eigenvalue(&t, n1, n2);
            worst = worst.max((torus_eigenvalue(&shifted, n1 + 1, n2 - 1) - e).abs() / e.max(1.0));
        }
    }
    c.check("phase_periodicity", worst, 0.0, 1e-12, AtMost, Trivial, "spectrum is 2 pi periodic in each phase");
    Ok(())
}

fn p12(c: &mut Checker) -> Result<()> {
    let tests_1d = [TestFunction::Bump { l: 1.0 }, TestFunction::ModulatedBump { l: 1.5 }];
    let tests_3d = [TestFunction::Bump { l: 1.0 }, TestFunction::GaussianCutoff { l: 2.0 }];
    for form in NascentForm::ALL {
        let tests = if form.is_radial() { &tests_3d } else { &tests_1d };
        for (ti, test) in tests.iter().enumerate() {
            let errs = [0.1, 0.05, 0.025, 0.0125]
                .iter()
                .map(|&a| Ok((nascent_pairing(&NascentFamily::new(form, a)?, test)? - test.eval(0.0)).abs()))
                .collect::<Result<Vec<_>>>()?;
            let monotone = errs.windows(2).all(|w| w[1] < w[0]);
            c.check(format!("monotone_{}_test{ti}", form.name()), f64::from(u8::from(monotone)), 1.0, 0.0, Exact, Published, "pairing with a test function tends to its value at the origin");
            c.check(format!("final_error_{}_test{ti}", form.name()), errs[3], 0.0, 0.05, AtMost, Derived, "pairing error at the narrowest width");
        }
    }
    let test = TestFunction::GaussianCutoff { l: 2.0 };
    let devs = [0.02, 0.01, 0.005, 0.0025]
        .iter()
        .map(|&am| Ok((coulomb_momentum_limit(am, 1.0, &test)? / test.eval(0.0) - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?;
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    c.check("coulomb_monotone", f64::from(u8::from(monotone)), 1.0, 0.0, Exact, Published, "Coulomb momentum density tends to the delta function");
    c.check("coulomb_limit_deviation", devs[1], 0.0, 0.05, AtMost, Published, "Coulomb momentum density tends to the delta function");
    c.check("coulomb_deviation_halving", devs[1] / devs[2], 2.0, 0.2, Absolute, Derived, "deviation linear in alpha mu");
    Ok(())
}

const PROBES: [f64; 7] = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9];

fn p13(c: &mut Checker) -> Result<()> {
    let r = RodSpec::new(1.0, 0.5, 2.0)?;
    let nx = 400;
    let t = r.time_scale();
    let fd = fd_heat_solve(&r, &Field1D::dirichlet(r.l, nx, |_| 2.0), 0.0, t, nx, 400)?;
    let mut worst: f64 = 0.0;
    for x in PROBES {
        let v = series_case_a(&r, 2.0, x, t, &SeriesTruncation::default())?;
        worst = worst.max((fd.at(x) / v - 1.0).abs());
    }
    c.check("case_a_vs_fd", worst, 0.0, 1e-3, AtMost, Derived, "series for a uniformly heated rod against Crank-Nicolson");
    let tr = SeriesTruncation::fixed(100_000)?;
    let t = 0.2 * r.time_scale();
    let fd = fd_heat_solve(&r, &Field1D::dirichlet(r.l, nx, |_| 0.0), 1.5, t, nx, 400)?;
    let mut worst: f64 = 0.0;
    for x in PROBES {
        let v = series_case_b(&r, 1.5, x, t, &tr)?;
        worst = worst.max((fd.at(x) / v - 1.0).abs());
    }
    c.check("case_b_vs_fd", worst, 0.0, 1e-3, AtMost, Derived, "point-source series against Crank-Nicolson");
    let unit = RodSpec::new(1.0, 1.0, 1.0)?;
    let long = SeriesTruncation::fixed(200_000)?;
    let (mut limit, mut fourier): (f64, f64) = (0.0, 0.0);
    for i in 1..20 {
        let x = i as f64 / 20.0;
        let w = stationary_omega(&unit, 1.0, x)?;
        limit = limit.max((series_case_b(&unit, 1.0, x, 60.0 * unit.time_scale(), &long)? - w).abs());
        fourier = fourier.max((stationary_omega_fourier(&unit, 1.0, x, &tr)? - w).abs());
    }
    c.check("case_b_long_time_limit", limit, 0.0, 1e-6, AtMost, Published, "solution tends to the stationary tent");
    c.check("tent_fourier_form", fourier, 0.0, 1e-6, AtMost, Published, "sine series of the tent profile");
    c.check("tent_peak", stationary_omega(&r, 1.5, 0.5)?, 1.5 * r.l / (4.0 * r.a_sq * r.c), 1e-15, Absolute, Published, "peak Ql/(4 a^2 c)");
    Ok(())
}

fn p14(c: &mut Checker) -> Result<()> {
    let nu = 0.5;
    for (name, sol) in [
        ("cosine", HeatSolution::Cosine { k: 2.0, amplitude: 0.6 }),
        ("source", HeatSolution::Source { x0: 0.3, mass: 1.0 }),
    ] {
        let res = [80usize, 160, 320]
            .iter()
            .map(|&n| {
                let g = SpaceTimeGrid::uniform((-1.0, 1.0), 2 * n, (0.5, 1.0), n / 2, |x, t| sol.burgers_velocity(nu, x, t))?;
                Ok(burgers_residual(nu, &g))
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, o) in halving_orders(&res).into_iter().enumerate() {
            c.check(format!("residual_order_{name}_{i}"), o, 2.0, 0.15, Absolute, Derived, "Cole-Hopf image of a heat solution satisfies Burgers");
        }
    }
    let sol = HeatSolution::Exponential { c: 1.7 };
    let mut worst: f64 = 0.0;
    for (x, t) in [(0.0, 0.0), (1.3, 0.5), (-2.0, 2.0)] {
        worst = worst.max((sol.burgers_velocity(nu, x, t)? - 1.7).abs());
    }
    c.check("constant_speed", worst, 0.0, 1e-10, AtMost, Derived, "exponential heat solution maps to v = c");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids() {
        assert_eq!("p07".parse::<ProblemId>().unwrap().number(), 7);
        assert!("p15".parse::<ProblemId>().is_err());
        assert!("x".parse::<ProblemId>().is_err());
        assert_eq!(parse_selection("all").unwrap().len(), 14);
        assert_eq!(parse_selection("p03,p01,p03").unwrap(), vec![ProblemId(1), ProblemId(3)]);
        assert_eq!(ProblemId(4).to_string(), "p04");
    }

    #[test]
    fn cheap_suites_pass() {
        let o = Overrides::default();
        for n in [2, 4, 6, 7, 9, 12, 14] {
            let rows = run_one(ProblemId(n), 42, &o);
            assert!(!rows.is_empty());
            for r in rows {
                assert!(r.passed, "{r:?}");
            }
        }
    }
}
