//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use gapweak::pair_constellation::OffsetTuple;
use gapweak::prime_engine::MAX_WINDOW_BASE;
use gapweak::gap_statistics::MIN_MC_SAMPLES;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub x_grid: Vec<u64>,
    pub t_max: usize,
    pub c_values: Vec<f64>,
    pub menu_exponents: Vec<f64>,
    pub mc_samples: u64,
    pub mc_seed: u64,
    /// Resolved against the directory holding the config file.
    pub pattern_files: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub constellations: Vec<OffsetTuple>,
    /// Sieve levels `s = log R / log z`.
    pub selberg_s: Vec<f64>,
    pub cost_exponent: f64,
    /// Hex SHA-256 of the config text.
    pub hash: String,
    origin: String,
}

const KEYS: [&str; 11] = [
    "x_grid",
    "t_max",
    "c_values",
    "menu_exponents",
    "mc_samples",
    "mc_seed",
    "pattern_files",
    "output_dir",
    "constellations",
    "selberg_s",
    "cost_exponent",
];

struct Entries<'a> {
    origin: &'a str,
    map: BTreeMap<&'a str, (usize, &'a str)>,
}

impl Entries<'_> {
    fn fail(&self, field: &str, message: impl Into<String>) -> CliError {
        let line = self.map.get(field).map_or(0, |e| e.0);
        CliError::Config {
            origin: self.origin.to_string(),
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn raw(&self, field: &str) -> Option<&str> {
        self.map.get(field).map(|e| e.1)
    }

    fn list<T>(&self, field: &str, default: Vec<T>, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
        let Some(raw) = self.raw(field) else {
            return Ok(default);
        };
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| item(s).ok_or_else(|| self.fail(field, format!("cannot parse {s:?}"))))
            .collect()
    }

    fn scalar<T>(&self, field: &str, default: T, item: impl Fn(&str) -> Option<T>) -> Result<T, CliError> {
        match self.raw(field) {
            None => Ok(default),
            Some(raw) => item(raw.trim()).ok_or_else(|| self.fail(field, format!("cannot parse {raw:?}"))),
        }
    }
}

/// Integers as `123`, `1_000_000` or `10^6`.
pub fn parse_int(s: &str) -> Option<u64> {
    let s = s.replace('_', "");
    match s.split_once('^') {
        Some((b, e)) => b.trim().parse::<u64>().ok()?.checked_pow(e.trim().parse().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Offsets separated by whitespace or commas, e.g. `0 2 6`.
pub fn parse_offsets(s: &str) -> Option<OffsetTuple> {
    let values: Option<Vec<i64>> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect();
    OffsetTuple::from_unnormalized(&values?).ok()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir, &path.display().to_string())
    }

    /// `origin` names the source in diagnostics.
    pub fn parse(text: &str, base_dir: &Path, origin: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fail = |field: &str, message: String| CliError::Config {
                origin: origin.to_string(),
                line,
                field: field.to_string(),
                message,
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| fail("", format!("expected `key = value`, got {content:?}")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(fail(key, "unknown key".into()));
            }
            if map.insert(key, (line, value.trim())).is_some() {
                return Err(fail(key, "duplicate key".into()));
            }
        }
        let e = Entries { origin, map };

        let x_grid = e.list("x_grid", vec![], parse_int)?;
        if let Some(w) = x_grid.windows(2).find(|w| w[0] >= w[1]) {
            return Err(e.fail("x_grid", format!("not strictly increasing at {} then {}", w[0], w[1])));
        }
        if let Some(x) = x_grid.iter().find(|&&x| !(3..=MAX_WINDOW_BASE).contains(&x)) {
            return Err(e.fail("x_grid", format!("window base {x} outside 3..=2^62")));
        }
        let t_max = e.scalar("t_max", 3, |s| parse_int(s).map(|v| v as usize))?;
        if t_max == 0 {
            return Err(e.fail("t_max", "must be >= 1"));
        }
        let c_values = e.list("c_values", vec![0.5], parse_float)?;
        if let Some(c) = c_values.iter().find(|&&c| !(c > 0.0 && c < 1.0)) {
            return Err(e.fail("c_values", format!("{c} not in (0, 1)")));
        }
        let menu_exponents = e.list("menu_exponents", vec![0.5, 0.9], parse_float)?;
        if let Some(m) = menu_exponents.iter().find(|&&m| m <= 0.0) {
            return Err(e.fail("menu_exponents", format!("{m} must be positive")));
        }
        let mc_samples = e.scalar("mc_samples", 100_000, parse_int)?;
        if mc_samples < MIN_MC_SAMPLES {
            return Err(e.fail("mc_samples", format!("{mc_samples} below the minimum {MIN_MC_SAMPLES}")));
        }
        let mc_seed = e.scalar("mc_seed", 1, parse_int)?;
        let pattern_files = e.list("pattern_files", vec![], |s| Some(base_dir.join(s)))?;
        let output_dir = e.scalar("output_dir", base_dir.join("out"), |s| {
            Some(if s == "." { base_dir.to_path_buf() } else { base_dir.join(s) })
        })?;
        let constellations = match e.raw("constellations") {
            None => vec![],
            Some(raw) => raw
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_offsets(s).ok_or_else(|| e.fail("constellations", format!("bad offsets {s:?}"))))
                .collect::<Result<_, _>>()?,
        };
        let selberg_s = e.list("selberg_s", vec![1.0, 2.0, 3.0], parse_float)?;
        if let Some(s) = selberg_s.iter().find(|&&s| !(1.0..=3.0).contains(&s)) {
            return Err(e.fail("selberg_s", format!("{s} not in [1, 3]")));
        }
        let cost_exponent = e.scalar("cost_exponent", 3.0, parse_float)?;
        if cost_exponent < 1.0 {
            return Err(e.fail("cost_exponent", "must be >= 1"));
        }

        Ok(Self {
            x_grid,
            t_max,
            c_values,
            menu_exponents,
            mc_samples,
            mc_seed,
            pattern_files,
            output_dir,
            constellations,
            selberg_s,
            cost_exponent,
            hash: hex::encode(Sha256::digest(text.as_bytes())),
            origin: origin.to_string(),
        })
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// `# config_sha256=... seed=...`
    pub fn header_comment(&self) -> String {
        format!("# config_sha256={} seed={}", self.hash, self.mc_seed)
    }
}
