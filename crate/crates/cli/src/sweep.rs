use std::fmt::Write as _;

use mathphys_core::electrostatics::dimensionless_force;
use mathphys_core::heatburgers::{series_case_b, stationary_omega, RodSpec, SeriesTruncation};
use mathphys_core::quantum::{torus_levels, TorusSpec};
use mathphys_core::report::format_sig17;
use mathphys_core::ultrametric::{asymptotic_bounds_s, sum_s, SeriesParams};
use mathphys_core::walk::{dispersion, occupation, occupation_asymptotic, WalkParams};

use crate::args::{grid, parse_range, Spacing, SweepArgs};
use crate::CmdError;

const PARAMETERS: &[(&str, &str)] = &[("p03", "t"), ("p05", "t"), ("p07", "alpha"), ("p11", "phi1"), ("p13", "t")];

/// Build the sweep table as CSV.
pub fn run(problem: &str, a: &SweepArgs) -> Result<String, CmdError> {
    if !PARAMETERS.contains(&(problem, a.param.as_str())) {
        let known: Vec<String> = PARAMETERS.iter().map(|(p, k)| format!("{p}:{k}")).collect();
        return Err(CmdError::Usage(format!(
            "unknown sweep parameter '{}' for {problem} (known: {})",
            a.param,
            known.join(", ")
        )));
    }
    let (lo, hi, n) = parse_range(&a.range).map_err(CmdError::Usage)?;
    let values = grid(lo, hi, n, a.spacing).map_err(CmdError::Usage)?;
    let mut out = String::new();
    let row = |out: &mut String, cells: &[f64]| {
        let cells: Vec<String> = cells.iter().map(|&v| format_sig17(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    };
    match problem {
        "p03" => {
            let p = SeriesParams::new(a.a, a.b, a.power, 1e-16)?;
            out.push_str("t,sum,lower,upper\n");
            for t in values {
                let (lower, upper) = asymptotic_bounds_s(&p, t)?;
                row(&mut out, &[t, sum_s(&p, t)?, lower, upper]);
            }
        }
        "p05" => {
            let p = WalkParams::new(1.0, 1.0)?;
            out.push_str("t,dispersion,return_probability,return_asymptotic\n");
            for t in values {
                row(&mut out, &[t, dispersion(&p, t), occupation(&p, 0, t), occupation_asymptotic(&p, t)]);
            }
        }
        "p07" => {
            let (slo, shi, sn) = parse_range(&a.s_range).map_err(CmdError::Usage)?;
            if !(slo > 1.0) {
                return Err(CmdError::Usage("distances must exceed the sphere radius".into()));
            }
            let s_grid = grid(slo, shi, sn, Spacing::Lin).map_err(CmdError::Usage)?;
            out.push('s');
            for alpha in &values {
                let _ = write!(out, ",f_alpha_{alpha}");
            }
            out.push('\n');
            for s in s_grid {
                let mut cells = vec![s];
                for &alpha in &values {
                    cells.push(dimensionless_force(alpha, s)?);
                }
                row(&mut out, &cells);
            }
        }
        "p11" => {
            out.push_str("phi1,e1,e2,e3,e4,e5,e6\n");
            for phi1 in values {
                let t = TorusSpec::new(1.0, 1.0, phi1, a.phi2)?;
                let mut cells = vec![phi1];
                cells.extend(torus_levels(&t, 4).into_iter().take(6));
                row(&mut out, &cells);
            }
        }
        "p13" => {
            let r = RodSpec::new(1.0, 1.0, 1.0)?;
            let tr = SeriesTruncation::fixed(100_000)?;
            out.push_str("t,midpoint,stationary_midpoint\n");
            for t in values {
                if !(t > 0.0) {
                    return Err(CmdError::Usage("times must be positive".into()));
                }
                row(&mut out, &[t, series_case_b(&r, 1.0, 0.5, t, &tr)?, stationary_omega(&r, 1.0, 0.5)?]);
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}
