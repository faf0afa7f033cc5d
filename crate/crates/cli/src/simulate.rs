use std::fmt::Write as _;

use mathphys_core::cosmo::{at_drift, entropy_drift, evolve_sampled, flat_closed_form, CosmoParams, ThermalState};
use mathphys_core::heatburgers::{
    series_case_a, series_case_b, stationary_omega, two_bump_burgers, two_bump_velocity, RodSpec, SeriesTruncation,
};
use mathphys_core::mechanics::{dimensionless, lifts_up, motion_band, simulate_top, DimensionlessTop, TopSpec};
use mathphys_core::numerics::OdeSpec;
use mathphys_core::report::format_sig17;
use mathphys_core::walk::{chi_square_vs_occupation, dispersion, occupation, simulate_sharded, WalkParams};
use mathphys_core::Error;

use crate::args::SimArgs;
use crate::CmdError;

/// Table plus a `key,value` monitor summary.
pub struct Simulation {
    pub table: String,
    pub summary: Vec<(String, f64)>,
}

pub const SCENARIOS: [&str; 5] = ["top", "walk", "cosmo", "heat", "burgers"];

pub fn run(scenario: &str, a: &SimArgs, seed: u64) -> Result<Simulation, CmdError> {
    match scenario {
        "top" => top(a),
        "walk" => walk(a, seed),
        "cosmo" => cosmo(a),
        "heat" => heat(a),
        "burgers" => burgers(a),
        _ => Err(CmdError::Usage(format!(
            "unknown scenario '{scenario}' (expected one of {})",
            SCENARIOS.join(", ")
        ))),
    }
}

pub fn summary_csv(s: &[(String, f64)]) -> String {
    let mut out = String::from("monitor,value\n");
    for (k, v) in s {
        let _ = writeln!(out, "{k},{}", format_sig17(*v));
    }
    out
}

fn row(out: &mut String, cells: &[f64]) {
    let cells: Vec<String> = cells.iter().map(|&v| format_sig17(v)).collect();
    let _ = writeln!(out, "{}", cells.join(","));
}

fn top(a: &SimArgs) -> Result<Simulation, CmdError> {
    let d = DimensionlessTop {
        alpha: a.alpha.unwrap_or(0.5),
        beta: 1.0,
        gamma: a.betagamma.unwrap_or(0.1),
    };
    let eps = a.eps.unwrap_or(0.4);
    let omega0 = a.omega0.unwrap_or(1.0);
    let spec = TopSpec::from_dimensionless(&d, omega0, eps)?;
    let t_end = a.t_end.unwrap_or(50.0 / omega0);
    let n = a.samples.unwrap_or(2000) as usize;
    let ode = OdeSpec::new(1e-13, 1e-12, f64::INFINITY, 1e-14)?;
    let traj = simulate_top(&spec, t_end, n, &ode)?;
    let first = traj.samples[0];
    let mut table = String::from("t,theta,phi,psi,x_m,y_m,energy,p_phi,p_psi,energy_drift,p_phi_drift,p_psi_drift\n");
    for s in &traj.samples {
        row(
            &mut table,
            &[
                s.t,
                s.theta,
                s.phi,
                s.psi,
                s.x_m,
                s.y_m,
                s.energy,
                s.p_phi,
                s.p_psi,
                (s.energy - first.energy) / spec.energy_scale(),
                (s.p_phi - first.p_phi) / (spec.j * spec.omega0),
                (s.p_psi - first.p_psi) / (spec.j * spec.omega0),
            ],
        );
    }
    let m = traj.monitors();
    let dl = dimensionless(&spec);
    let mut summary = vec![
        ("energy_drift".into(), m.energy_drift),
        ("p_phi_drift".into(), m.p_phi_drift),
        ("p_psi_drift".into(), m.p_psi_drift),
        ("reduced_residual".into(), m.reduced_residual),
        ("cos_theta_min".into(), m.cos_theta_min),
        ("cos_theta_max".into(), m.cos_theta_max),
        ("lifts_up".into(), f64::from(u8::from(lifts_up(&dl, eps)))),
    ];
    if let Ok(b) = motion_band(&dl, eps) {
        summary.push(("band_cos_lower".into(), b.cos_theta_range.0));
        summary.push(("band_cos_upper".into(), b.cos_theta_range.1));
    }
    Ok(Simulation { table, summary })
}

fn walk(a: &SimArgs, seed: u64) -> Result<Simulation, CmdError> {
    let p = WalkParams::new(a.alpha.unwrap_or(1.0), a.tau.unwrap_or(1.0))?;
    let t = a.t_end.unwrap_or(10.0);
    let law = simulate_sharded(&p, t, a.samples.unwrap_or(100_000), seed, 0, 4)?;
    let m_max = law.counts.keys().map(|m| m.abs()).max().unwrap_or(0);
    let mut table = String::from("m,empirical,exact\n");
    for m in -m_max..=m_max {
        let _ = writeln!(
            table,
            "{m},{},{}",
            format_sig17(law.count(m) as f64 / law.n_samples as f64),
            format_sig17(occupation(&p, m, t))
        );
    }
    let chi = chi_square_vs_occupation(&p, &law, 15);
    let summary = vec![
        ("second_moment".into(), law.second_moment()),
        ("dispersion".into(), dispersion(&p, t)),
        ("z_score".into(), (law.second_moment() - dispersion(&p, t)) / law.second_moment_stderr()),
        ("chi_square".into(), chi.statistic),
        ("chi_square_p_value".into(), chi.p_value),
    ];
    Ok(Simulation { table, summary })
}

fn cosmo(a: &SimArgs) -> Result<Simulation, CmdError> {
    let p = CosmoParams::new(a.k.unwrap_or(0), 1.0, 1.0, 1.0)?;
    let t_end = a.t_end.unwrap_or(10.0);
    if !(t_end > 0.0) {
        return Err(CmdError::Usage("t-end must be positive".into()));
    }
    let n = a.samples.unwrap_or(200).max(1) as usize;
    let times: Vec<f64> = (1..=n).map(|i| t_end * i as f64 / n as f64).collect();
    let ode = OdeSpec::new(1e-16, 1e-12, f64::INFINITY, 1e-16)?;
    let (traj, turnaround): (Vec<ThermalState>, Option<f64>) = match evolve_sampled(&p, 1.0, &times, &ode) {
        Ok(t) => (t, None),
        Err(Error::Turnaround { t, .. }) => {
            let times: Vec<f64> = (1..=n).map(|i| t * i as f64 / (n + 1) as f64).collect();
            (evolve_sampled(&p, 1.0, &times, &ode)?, Some(t))
        }
        Err(e) => return Err(e.into()),
    };
    let flat = p.k == 0;
    let mut table = String::from(if flat { "t,a,temperature,closed_form\n" } else { "t,a,temperature\n" });
    let mut worst: f64 = 0.0;
    for s in &traj {
        if flat {
            let c = flat_closed_form(&p, 1.0, s.t);
            worst = worst.max((s.temperature / c - 1.0).abs());
            row(&mut table, &[s.t, s.a, s.temperature, c]);
        } else {
            row(&mut table, &[s.t, s.a, s.temperature]);
        }
    }
    let mut summary = vec![
        ("at_drift".into(), at_drift(&traj)),
        ("entropy_drift".into(), entropy_drift(&p, &traj)),
    ];
    if flat {
        summary.push(("closed_form_error".into(), worst));
    }
    if let Some(t) = turnaround {
        summary.push(("turnaround_time".into(), t));
    }
    Ok(Simulation { table, summary })
}

fn heat(a: &SimArgs) -> Result<Simulation, CmdError> {
    let case = a.case.as_deref().unwrap_or("b");
    let r = RodSpec::new(1.0, 1.0, 1.0)?;
    let tr = SeriesTruncation::fixed(100_000)?;
    let factors = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0];
    let times: Vec<f64> = factors.iter().map(|f| f * r.time_scale()).collect();
    let xs: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let mut table = String::new();
    let mut summary = Vec::new();
    match case {
        "a" => {
            table.push_str("t,x,value\n");
            for (&t, f) in times.iter().zip(factors) {
                let mut peak: f64 = 0.0;
                for &x in &xs {
                    let v = series_case_a(&r, 1.0, x, t, &tr)?;
                    peak = peak.max(v);
                    row(&mut table, &[t, x, v]);
                }
                summary.push((format!("max_at_{f}_time_scales"), peak));
            }
        }
        "b" => {
            table.push_str("t,x,value,stationary\n");
            for (&t, f) in times.iter().zip(factors) {
                let mut gap: f64 = 0.0;
                for &x in &xs {
                    let v = series_case_b(&r, 1.0, x, t, &tr)?;
                    let w = stationary_omega(&r, 1.0, x)?;
                    gap = gap.max((v - w).abs());
                    row(&mut table, &[t, x, v, w]);
                }
                summary.push((format!("distance_to_stationary_at_{f}_time_scales"), gap));
            }
        }
        other => return Err(CmdError::Usage(format!("unknown heat case '{other}' (expected a or b)"))),
    }
    Ok(Simulation { table, summary })
}

fn burgers(a: &SimArgs) -> Result<Simulation, CmdError> {
    let nu = a.nu.unwrap_or(0.5);
    if !(nu > 0.0) {
        return Err(CmdError::Usage("viscosity must be positive".into()));
    }
    let t_end = a.t_end.unwrap_or(10.0);
    let xs: Vec<f64> = (0..=120).map(|i| -15.0 + 30.0 * i as f64 / 120.0).collect();
    let mut table = String::from("t,x,v\n");
    let mut initial_error: f64 = 0.0;
    let mut peak_final: f64 = 0.0;
    for i in 0..=5 {
        let t = t_end * i as f64 / 5.0;
        for &x in &xs {
            let v = if t == 0.0 { two_bump_velocity(x) } else { two_bump_burgers(nu, x, t)? };
            if i == 1 {
                initial_error = initial_error.max((two_bump_burgers(nu, x, 1e-6)? - two_bump_velocity(x)).abs());
            }
            if i == 5 {
                peak_final = peak_final.max(v);
            }
            row(&mut table, &[t, x, v]);
        }
    }
    let summary = vec![
        ("initial_data_error".into(), initial_error),
        ("final_peak".into(), peak_final),
    ];
    Ok(Simulation { table, summary })
}
