//! Run configuration: command-line flags layered over an optional TOML file.
//!
//! ```toml
//! n = 50
//! v = 0.1
//! ez_min = 0.0
//! ez_max = 20.0
//! ez_steps = 200
//! d = [1, 10, 25]
//! p = [1, 26]
//! format = "csv"
//!
//! [physical]          # optional; replaces n/v and sets the field
//! n_molecules = 50
//! dipole_debye = 1.2
//! b_ghz = 10.0
//! r_nm = 5.0
//! field_v_per_m = 0.0
//! ```

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use crate::error::{ChainError, Result};
use crate::model::{to_dimensionless, ModelParams, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TwoMolecule,
    Spectrum,
    PairwiseScan,
    PartitionScan,
    ThermalMap,
    Crossing,
    Validate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::TwoMolecule => "two-molecule",
            Experiment::Spectrum => "spectrum",
            Experiment::PairwiseScan => "pairwise-scan",
            Experiment::PartitionScan => "partition-scan",
            Experiment::ThermalMap => "thermal-map",
            Experiment::Crossing => "crossing",
            Experiment::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `steps` evenly spaced points from `min` to `max` (just `min` when
/// `steps == 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let g = Self { min, max, steps };
        if steps == 0 || !min.is_finite() || !max.is_finite() || (steps > 1 && max <= min) {
            return Err(ChainError::Config(format!("invalid grid min={min} max={max} steps={steps}")));
        }
        Ok(g)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 }).collect()
    }

    pub fn describe(&self) -> String {
        format!("[{}, {}] x {}", self.min, self.max, self.steps)
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub params: ModelParams,
    pub physical: Option<PhysicalParams>,
    pub ez_grid: Grid,
    pub t_grid: Grid,
    pub d_list: Vec<usize>,
    pub p_list: Vec<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_N: usize = 50;
pub const DEFAULT_V: f64 = 0.1;
pub const DEFAULT_EZ_MAX: f64 = 20.0;
pub const DEFAULT_EZ_STEPS: usize = 200;
pub const DEFAULT_T_MIN: f64 = 0.2;
pub const DEFAULT_T_MAX: f64 = 1.2;
pub const DEFAULT_T_STEPS: usize = 20;
pub const DEFAULT_D: [usize; 3] = [1, 10, 25];
pub const DEFAULT_P: [usize; 2] = [1, 26];
pub const DEFAULT_VALIDATE_N: usize = 3;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    experiment: Option<Experiment>,
    n: Option<usize>,
    v: Option<f64>,
    e_z: Option<f64>,
    ez_min: Option<f64>,
    ez_max: Option<f64>,
    ez_steps: Option<usize>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    t_steps: Option<usize>,
    d: Option<Vec<usize>>,
    p: Option<Vec<usize>>,
    out: Option<PathBuf>,
    format: Option<Format>,
    physical: Option<PhysicalFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicalFile {
    n_molecules: Option<usize>,
    dipole_debye: f64,
    b_ghz: f64,
    r_nm: f64,
    #[serde(default)]
    field_v_per_m: f64,
}

#[derive(Debug, Parser)]
#[command(name = "rotor-chain", about = "Spectra and entanglement of dipole-coupled rotor chains")]
pub struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Option<Experiment>,
    /// TOML file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of molecules.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimensionless dipole scale mu^2 / (4 pi eps0 r^3 B).
    #[arg(long)]
    pub v: Option<f64>,
    /// Single field value (sets a one-point field grid).
    #[arg(long)]
    pub ez: Option<f64>,
    #[arg(long)]
    pub ez_min: Option<f64>,
    #[arg(long)]
    pub ez_max: Option<f64>,
    #[arg(long)]
    pub ez_steps: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Pair distances, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<usize>>,
    /// Site positions (1-based), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ChainError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| ChainError::Config(format!("{}: {}", path.display(), e.message())))
}

/// Parses command-line arguments (including the program name).
pub fn parse_args<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| ChainError::Config(e.to_string()))?;
    parse_config(&cli)
}

pub fn parse_config(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    resolve(cli, file)
}

fn resolve(cli: &Cli, file: FileConfig) -> Result<RunConfig> {
    let experiment = cli
        .experiment
        .or(file.experiment)
        .ok_or_else(|| ChainError::Config("missing required key `experiment`".into()))?;

    let default_n = match experiment {
        Experiment::TwoMolecule => 2,
        Experiment::Validate => DEFAULT_VALIDATE_N,
        _ => DEFAULT_N,
    };

    let physical = file.physical.map(|p| PhysicalParams {
        n_molecules: p.n_molecules.unwrap_or(default_n),
        dipole_debye: p.dipole_debye,
        b_ghz: p.b_ghz,
        r_nm: p.r_nm,
        field_v_per_m: p.field_v_per_m,
    });
    let config_err = |e: ChainError| ChainError::Config(e.to_string());

    let (mut params, physical) = match physical {
        Some(mut phys) => {
            if let Some(n) = cli.n {
                phys.n_molecules = n;
            }
            (to_dimensionless(&phys).map_err(config_err)?, Some(phys))
        }
        None => {
            let n = cli.n.or(file.n).unwrap_or(default_n);
            let v = cli.v.or(file.v).unwrap_or(DEFAULT_V);
            (ModelParams::new(n, v, 0.0).map_err(config_err)?, None)
        }
    };
    if physical.is_some() {
        if let Some(v) = cli.v {
            params.v_dip = v;
        }
    }
    if experiment == Experiment::TwoMolecule && params.n_molecules != 2 {
        return Err(ChainError::Config("two-molecule experiment needs n = 2".into()));
    }

    let single = cli.ez.or(file.e_z);
    let base_ez = if physical.is_some() { params.e_z } else { 0.0 };
    let ez_grid = if let Some(e) = single {
        Grid::new(e, e, 1)?
    } else {
        let min = cli.ez_min.or(file.ez_min).unwrap_or(base_ez);
        let max = cli.ez_max.or(file.ez_max).unwrap_or(DEFAULT_EZ_MAX.max(min));
        let default_steps = if experiment == Experiment::Validate { 1 } else { DEFAULT_EZ_STEPS };
        Grid::new(min, max, cli.ez_steps.or(file.ez_steps).unwrap_or(default_steps))?
    };
    if ez_grid.min < 0.0 {
        return Err(ChainError::Config("field grid must be >= 0".into()));
    }
    params.e_z = ez_grid.min;

    let t_grid = Grid::new(
        cli.t_min.or(file.t_min).unwrap_or(DEFAULT_T_MIN),
        cli.t_max.or(file.t_max).unwrap_or(DEFAULT_T_MAX),
        cli.t_steps.or(file.t_steps).unwrap_or(DEFAULT_T_STEPS),
    )?;
    if t_grid.min <= 0.0 {
        return Err(ChainError::Config("temperatures must be > 0".into()));
    }

    let n = params.n_molecules;
    let d_list = cli.d.clone().or(file.d).unwrap_or_else(|| DEFAULT_D.iter().copied().filter(|&d| d < n).collect());
    let p_list = cli.p.clone().or(file.p).unwrap_or_else(|| {
        let centre = n / 2 + 1;
        let mut p = if n >= DEFAULT_P[1] { DEFAULT_P.to_vec() } else { vec![1, centre] };
        p.dedup();
        p
    });
    if let Some(&d) = d_list.iter().find(|&&d| d == 0 || d >= n) {
        return Err(ChainError::Config(format!("distance {d} outside 1..={}", n - 1)));
    }
    if let Some(&p) = p_list.iter().find(|&&p| p == 0 || p > n) {
        return Err(ChainError::Config(format!("site {p} outside 1..={n}")));
    }

    let output = cli.out.clone().or(file.out);
    if let Some(path) = &output {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(ChainError::Config(format!("output directory {} does not exist", dir.display())));
        }
    }
    let format = cli.format.or(file.format).unwrap_or_default();

    Ok(RunConfig { experiment, params, physical, ez_grid, t_grid, d_list, p_list, output, format })
}

impl RunConfig {
    /// Every resolved parameter, in both unit systems when available.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("experiment".to_string(), self.experiment.name().to_string()),
            ("n_molecules".to_string(), self.params.n_molecules.to_string()),
            ("b_rot".to_string(), self.params.b_rot.to_string()),
            ("v_dip".to_string(), self.params.v_dip.to_string()),
            ("e_z_grid".to_string(), self.ez_grid.describe()),
            ("t_grid".to_string(), self.t_grid.describe()),
            ("d_list".to_string(), format!("{:?}", self.d_list)),
            ("p_list".to_string(), format!("{:?}", self.p_list)),
            ("energy_unit".to_string(), "B".to_string()),
        ];
        if let Some(p) = &self.physical {
            m.push(("dipole_debye".to_string(), p.dipole_debye.to_string()));
            m.push(("b_ghz".to_string(), p.b_ghz.to_string()));
            m.push(("r_nm".to_string(), p.r_nm.to_string()));
            m.push(("field_v_per_m".to_string(), p.field_v_per_m.to_string()));
        } else if self.params.v_dip == DEFAULT_V {
            m.push(("note".to_string(), "v_dip is the default choice 0.1".to_string()));
        }
        m
    }
}
