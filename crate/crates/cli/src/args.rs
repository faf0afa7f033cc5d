use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mathphys-bench",
    version,
    about = "Verify, sweep and simulate the mathphys problem set",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write a report.
    Verify {
        /// p01..p14, a comma-separated list, or all.
        problem: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate a problem's outputs over a parameter range.
    Sweep {
        /// p03, p05, p07, p11 or p13.
        problem: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Integrate a scenario and write a trajectory or field table.
    Simulate {
        /// top, walk, cosmo, heat or burgers.
        scenario: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, env = "MATHPHYS_BENCH_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Replace a check's tolerance, keyed by `check` or `problem.check`.
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    pub tol_override: Vec<String>,
    /// Directory for output files; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format; sweeps and simulations always write CSV.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat `key=value` file whose keys are long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub param: String,
    /// `lo:hi:n`.
    #[arg(long)]
    pub range: String,
    #[arg(long, value_enum, default_value = "lin")]
    pub spacing: Spacing,
    /// Distance grid `lo:hi:n` for the force curves.
    #[arg(long = "s-range", default_value = "1.01:5:400")]
    pub s_range: String,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 3.0)]
    pub b: f64,
    /// Weight exponent of the series.
    #[arg(long = "power", default_value_t = 0)]
    pub power: i32,
    #[arg(long, default_value_t = 0.0)]
    pub phi2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub betagamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Curvature sign.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i32>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "case")]
    pub case: Option<String>,
}

/// Parse `lo:hi:n`.
pub fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("range '{s}' is not lo:hi:n"));
    };
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound in '{s}'"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound in '{s}'"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad count in '{s}'"))?;
    if n == 0 {
        return Err("empty range".into());
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(format!("range '{s}' is not finite"));
    }
    Ok((lo, hi, n))
}

pub fn grid(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Result<Vec<f64>, String> {
    if n == 1 {
        return Ok(vec![lo]);
    }
    let frac = |i: usize| i as f64 / (n - 1) as f64;
    match spacing {
        Spacing::Lin => Ok((0..n).map(|i| lo + (hi - lo) * frac(i)).collect()),
        Spacing::Log => {
            if !(lo > 0.0 && hi > 0.0) {
                return Err("log spacing needs a positive range".into());
            }
            let (a, b) = (lo.ln(), hi.ln());
            Ok((0..n).map(|i| (a + (b - a) * frac(i)).exp()).collect())
        }
    }
}

/// Read a config file into `--key value` pairs.
pub fn config_args(path: &Path) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k == "config" {
            return Err(format!("{}:{}: config files cannot nest", path.display(), i + 1));
        }
        out.push(OsString::from(format!("--{k}")));
        out.push(OsString::from(v.trim()));
    }
    Ok(out)
}

/// Locate `--config` in raw arguments and splice its entries in right after
/// the subcommand, so that command-line flags win.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    if args.len() < 2 {
        return Ok(args);
    }
    let extra = config_args(&path)?;
    let mut out = args[..2].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}

/// Parse `k=v` tolerance overrides.
pub fn parse_overrides(items: &[String]) -> Result<std::collections::BTreeMap<String, f64>, String> {
    let mut m = std::collections::BTreeMap::new();
    for it in items {
        let (k, v) = it.split_once('=').ok_or_else(|| format!("tolerance override '{it}' is not key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("tolerance override '{it}' has a non-numeric value"))?;
        if !(v >= 0.0) {
            return Err(format!("tolerance override '{it}' must be non-negative"));
        }
        m.insert(k.trim().to_string(), v);
    }
    Ok(m)
}
