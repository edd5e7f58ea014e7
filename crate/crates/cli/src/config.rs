use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ioncavity::{FockCutoffs, Params};
use serde::Serialize;

use crate::cli::{Common, Format, Mode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<ioncavity::Error> for CliError {
    fn from(e: ioncavity::Error) -> Self {
        use ioncavity::Error as E;
        match e {
            E::InvalidArgument(_) | E::OutOfCutoff { .. } | E::DimensionMismatch(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

const KEYS: &[&str] = &[
    "eta_l", "eta_c", "omega_hz", "g_hz", "nu_hz", "m", "k", "m0", "mode", "format", "ratios", "m_max", "n_max",
    "k_max", "leak_tol", "out",
];

/// Contents of a `key = value` config file. `#` starts a comment; keys use
/// the long flag names with `_` for `-`.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", no + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("line {}: unknown key `{key}`", no + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("bad value `{v}` for `{key}`"))))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("bad value `{s}` in `{key}`"))))
                    .collect()
            })
            .transpose()
    }

    fn mode(&self) -> Result<Option<Mode>, CliError> {
        match self.values.get("mode").map(String::as_str) {
            None => Ok(None),
            Some("rwa") => Ok(Some(Mode::Rwa)),
            Some("full") => Ok(Some(Mode::Full)),
            Some(v) => Err(CliError::Config(format!("mode must be rwa or full, got `{v}`"))),
        }
    }

    fn format(&self) -> Result<Option<Format>, CliError> {
        match self.values.get("format").map(String::as_str) {
            None => Ok(None),
            Some("csv") => Ok(Some(Format::Csv)),
            Some("json") => Ok(Some(Format::Json)),
            Some(v) => Err(CliError::Config(format!("format must be csv or json, got `{v}`"))),
        }
    }
}

/// Per-command defaults for the list-valued settings.
pub struct Defaults {
    pub etas: Vec<f64>,
    pub ms: Vec<usize>,
}

impl Defaults {
    pub fn tables() -> Self {
        Self { etas: vec![0.02, 0.2], ms: vec![1, 4, 9, 16] }
    }

    pub fn single() -> Self {
        Self { etas: vec![0.2], ms: vec![1] }
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub eta_l: Vec<f64>,
    pub eta_c: Vec<f64>,
    pub omega_hz: f64,
    pub g_hz: f64,
    pub nu_hz: f64,
    pub m: Vec<usize>,
    pub k: usize,
    pub m0: usize,
    #[serde(serialize_with = "ser_mode")]
    pub mode: Mode,
    #[serde(skip)]
    pub format: Format,
    pub ratios: Vec<f64>,
    pub m_max: usize,
    pub n_max: usize,
    pub k_max: usize,
    pub leak_tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub check: bool,
}

fn ser_mode<S: serde::Serializer>(m: &Mode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match m {
        Mode::Rwa => "rwa",
        Mode::Full => "full",
    })
}

impl RunConfig {
    pub fn resolve(cli: &Common, defaults: Defaults) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let base = FockCutoffs::default();
        let cfg = Self {
            eta_l: pick(cli.eta_l.clone(), file.list("eta_l")?, defaults.etas.clone()),
            eta_c: pick(cli.eta_c.clone(), file.list("eta_c")?, defaults.etas),
            omega_hz: pick(cli.omega_hz, file.get("omega_hz")?, 140e3),
            g_hz: pick(cli.g_hz, file.get("g_hz")?, 140e3),
            nu_hz: pick(cli.nu_hz, file.get("nu_hz")?, 10e6),
            m: pick(cli.m.clone(), file.list("m")?, defaults.ms),
            k: pick(cli.k, file.get("k")?, 1),
            m0: pick(cli.m0, file.get("m0")?, 0),
            mode: pick(cli.mode, file.mode()?, Mode::Rwa),
            format: pick(cli.format, file.format()?, Format::Csv),
            ratios: pick(cli.ratios.clone(), file.list("ratios")?, vec![10.0, 50.0, 200.0]),
            m_max: pick(cli.m_max, file.get("m_max")?, base.m_max),
            n_max: pick(cli.n_max, file.get("n_max")?, base.n_max),
            k_max: pick(cli.k_max, file.get("k_max")?, 5),
            leak_tol: pick(None, file.get("leak_tol")?, base.leak_tol),
            out: cli.out.clone().or(file.get::<String>("out")?.map(PathBuf::from)),
            check: cli.check,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.eta_l.is_empty() || self.eta_c.is_empty() || self.m.is_empty() || self.ratios.is_empty() {
            return bad("lists must be non-empty".into());
        }
        for &eta in self.eta_l.iter().chain(&self.eta_c) {
            if !(0.0..1.0).contains(&eta) {
                return bad(format!("Lamb-Dicke parameters must lie in [0, 1), got {eta}"));
            }
        }
        for (name, v) in [("omega_hz", self.omega_hz), ("g_hz", self.g_hz)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a finite non-negative number, got {v}"));
            }
        }
        if !(self.nu_hz > 0.0 && self.nu_hz.is_finite()) {
            return bad(format!("nu_hz must be positive, got {}", self.nu_hz));
        }
        if self.ratios.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return bad("ratios must be positive".into());
        }
        if self.k == 0 || self.k_max == 0 {
            return bad("k and k_max must be at least 1".into());
        }
        self.cutoffs()?;
        Ok(())
    }

    pub fn cutoffs(&self) -> Result<FockCutoffs, CliError> {
        Ok(FockCutoffs::new(self.m_max, self.n_max, self.leak_tol)?)
    }

    /// Physical parameters with the first η of each list.
    pub fn params(&self) -> Params {
        Params {
            omega: TAU * self.omega_hz,
            g: TAU * self.g_hz,
            eta_l: self.eta_l[0],
            eta_c: self.eta_c[0],
            nu: TAU * self.nu_hz,
            ..Params::default()
        }
    }

    pub fn single_eta(&self) -> Result<(), CliError> {
        if self.eta_l.len() != 1 || self.eta_c.len() != 1 {
            return Err(CliError::Config("this command takes a single --eta-l and --eta-c".into()));
        }
        Ok(())
    }

    pub fn single_m(&self) -> Result<usize, CliError> {
        match self.m.as_slice() {
            [m] => Ok(*m),
            _ => Err(CliError::Config("this command takes a single --m".into())),
        }
    }
}

fn pick<T>(cli: Option<T>, file: Option<T>, default: T) -> T {
    cli.or(file).unwrap_or(default)
}
