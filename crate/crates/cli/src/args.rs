//! Command-line surface: subcommands, shared flags and the small grammar
//! for grids, index lists and parameter ranges.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nclight_core::{Family, PhaseGrid};

#[derive(Parser, Debug)]
#[command(
    name = "nclight",
    version,
    about = "Nonclassical optical states: beam-splitter entanglement and nonclassicality measures"
)]
pub struct Cli {
    /// Tail-probability bound for the adaptive Fock cutoff.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub cutoff_eps: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output path (stdout when omitted). Figure grid sets treat this as a
    /// filename prefix.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump a state's Fock amplitudes (n, re, im, prob).
    State(StateArgs),
    /// Beam-splitter output entanglement of one state.
    Ebs {
        #[command(flatten)]
        state: StateArgs,
        /// Report the entropy in bits instead of nats (display only).
        #[arg(long)]
        bits: bool,
    },
    /// Closed-form Wigner function on a grid.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_parser = parse_grid, default_value = DEFAULT_GRID)]
        grid: PhaseGrid,
    },
    /// Wigner negativity of one state.
    Negativity {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Husimi Q function on a grid.
    Qgrid {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_parser = parse_grid, default_value = DEFAULT_GRID)]
        grid: PhaseGrid,
    },
    /// η-convoluted R(z,η) distribution on a grid.
    Rfunc {
        #[command(flatten)]
        state: StateArgs,
        /// Smoothing parameter η ∈ (0, 1).
        #[arg(long)]
        eta: f64,
        #[arg(long, value_parser = parse_grid, default_value = DEFAULT_GRID)]
        grid: PhaseGrid,
    },
    /// Nonclassical depth of one state.
    Ncdepth {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Hilbert-Schmidt distance to the nearest coherent state.
    Hsdist {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Measure sweep over an (m, r) grid.
    Sweep {
        /// State family: number|svs|sns|pasvs.
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// m values: single (`3`), list (`1,2,5`) or range (`1:5`).
        #[arg(long, value_parser = parse_m_list, default_value = "0")]
        m: Vec<usize>,
        /// r values: single (`0.5`) or grid (`min:max:step`).
        #[arg(long, value_parser = parse_r_grid, default_value = "0")]
        r: Vec<f64>,
        /// Comma-separated subset of ebs,delta,dnc,ncdepth.
        #[arg(long, value_parser = parse_measures, default_value = "ebs")]
        measures: Vec<crate::sweep::Measure>,
    },
    /// Canonical dataset for one of the study figures
    /// (1a, 1b, 2a, 2b, 3, 4a, 4b, 5, 6).
    Figure {
        id: String,
    },
    /// Run the full closed-form/oracle equivalence suite.
    Selftest,
}

/// Family + parameters shared by the single-state commands.
#[derive(Parser, Debug, Clone)]
pub struct StateArgs {
    /// State family: number|svs|sns|pasvs.
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Photon-addition / number index.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Squeezing strength.
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
}

impl StateArgs {
    /// Reject parameter/family combinations that are silently meaningless.
    pub fn validate(&self) -> Result<nclight_core::StateSpec, String> {
        match self.family {
            Family::Number if self.r != 0.0 => {
                Err("--family number takes no --r (number states are unsqueezed)".into())
            }
            Family::SqueezedVacuum if self.m != 0 => {
                Err("--family svs takes no --m (use pasvs for photon addition)".into())
            }
            _ => Ok(nclight_core::StateSpec::new(self.family, self.m, self.r)),
        }
    }
}

pub const DEFAULT_GRID: &str = "-6:6:121,-6:6:121";

pub fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// `x1min:x1max:n1,x2min:x2max:n2`.
pub fn parse_grid(s: &str) -> Result<PhaseGrid, String> {
    let (first, second) = s
        .split_once(',')
        .ok_or_else(|| format!("grid `{s}` must be x1min:x1max:n1,x2min:x2max:n2"))?;
    let parse_axis = |axis: &str| -> Result<(f64, f64, usize), String> {
        let parts: Vec<&str> = axis.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("axis `{axis}` must be min:max:n"));
        }
        let min: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
        let max: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
        let n: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
        Ok((min, max, n))
    };
    let (x1_min, x1_max, n1) = parse_axis(first)?;
    let (x2_min, x2_max, n2) = parse_axis(second)?;
    PhaseGrid::new(x1_min, x1_max, n1, x2_min, x2_max, n2).map_err(|e| e.to_string())
}

/// `3`, `1,2,5` or `1:5`.
pub fn parse_m_list(s: &str) -> Result<Vec<usize>, String> {
    if let Some((lo, hi)) = s.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
        let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
        if hi < lo {
            return Err(format!("empty m range `{s}`"));
        }
        return Ok((lo..=hi).collect());
    }
    let list: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse()).collect();
    let list = list.map_err(|e| format!("{e}"))?;
    if list.is_empty() {
        return Err("empty m list".into());
    }
    Ok(list)
}

/// `0.5` or `min:max:step`.
pub fn parse_r_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => {
            let v: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
            Ok(vec![v])
        }
        3 => {
            let min: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
            let max: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
            let step: f64 = parts[2].trim().parse().map_err(|e| format!("{e}"))?;
            Ok(r_grid(min, max, step).ok_or_else(|| format!("bad r grid `{s}` (need step > 0)"))?)
        }
        _ => Err(format!("r spec `{s}` must be a value or min:max:step")),
    }
}

/// Inclusive grid min, min+step, ..., max (within half-step slack).
pub fn r_grid(min: f64, max: f64, step: f64) -> Option<Vec<f64>> {
    if !(step > 0.0) || max < min {
        return None;
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Some((0..count).map(|i| min + step * i as f64).collect())
}

pub fn parse_measures(s: &str) -> Result<Vec<crate::sweep::Measure>, String> {
    let list: Result<Vec<_>, _> = s.split(',').map(|p| p.trim().parse()).collect();
    let list = list?;
    if list.is_empty() {
        return Err("empty measure list".into());
    }
    Ok(list)
}
