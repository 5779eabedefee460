//! The experiment commands. Each returns a [`Table`]; windows are processed
//! in parallel and rows come back in grid order.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use gapweak::gap_statistics::{
    collision_probability, mc_menu_repeat, mc_tensor_collision, top_k_mass, top_k_menu,
    CountTable, GapDistribution, GapVectorDistribution, WindowSummary,
};
use gapweak::gap_statistics::exceptional_budget;
use gapweak::pair_constellation::{singular_series, ExtendedWindow, OffsetTuple, DEFAULT_SERIES_CUTOFF};
use gapweak::prime_engine::PrimeWindow;
use gapweak::rational::{self, Rational};
use gapweak::selberg_sieve::{local_weakness, sifted_bound_report, ObstructionPattern, SelbergSystem, DENSE_SUPPORT_LIMIT};
use gapweak::successor_baseline::window_baseline_report;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::table::{float, opt_float, pass, rat, Table};
use crate::{CliError, ExperimentConfig};

/// Tensor powers sampled by the Monte Carlo columns.
pub const MC_POWERS: [usize; 3] = [1, 2, 3];

fn loglog3(x: f64) -> f64 {
    (3.0 * x).ln().ln()
}

fn mc_seed(base: u64, x: u64, m: usize, kind: u64) -> u64 {
    base ^ x.rotate_left(20) ^ ((m as u64) << 4 | kind)
}

fn gap_columns(cfg: &ExperimentConfig) -> Vec<String> {
    let mut cols: Vec<String> = [
        "X", "pi_X", "support", "atom_max", "w", "logical_entropy", "H_bits", "H2_bits",
        "w_normalized", "pair_domination",
    ]
    .map(String::from)
    .to_vec();
    for t in 2..=cfg.t_max {
        cols.push(format!("w_t{t}"));
        cols.push(format!("w_t{t}_normalized"));
    }
    for c in &cfg.c_values {
        cols.push(format!("k_c{c}"));
        cols.push(format!("exceptional_c{c}"));
    }
    for e in &cfg.menu_exponents {
        cols.push(format!("menu_k_e{e}"));
        cols.push(format!("menu_mass_e{e}"));
        cols.push(format!("union_bound_e{e}"));
    }
    for m in MC_POWERS {
        cols.push(format!("mc_w_m{m}"));
        cols.push(format!("mc_w_m{m}_sigmas"));
    }
    if !cfg.menu_exponents.is_empty() {
        for m in MC_POWERS {
            cols.push(format!("mc_menu_m{m}"));
            cols.push(format!("mc_menu_m{m}_sigmas"));
        }
    }
    cols
}

fn gap_row(cfg: &ExperimentConfig, x: u64) -> Result<Vec<String>, CliError> {
    let w = PrimeWindow::build(x)?;
    let d = GapDistribution::from_window(&w);
    let s = WindowSummary::compute(&d, &cfg.c_values)?;
    let xf = x as f64;

    let shifts: BTreeSet<u64> = d.counts().keys().copied().collect();
    let reach = shifts.iter().next_back().copied().unwrap_or(0);
    let pairs = ExtendedWindow::new(x, reach)?.pair_counts(&shifts)?;
    let dominated = d.counts().iter().all(|(h, c)| *c <= pairs[h]);

    let mut row = vec![
        x.to_string(),
        s.pi_x.to_string(),
        s.support.to_string(),
        rat(&s.atom_max),
        rat(&s.collision),
        rat(&s.logical_entropy),
        float(s.shannon_bits),
        float(s.renyi2_bits),
        float(s.normalized_collision()),
        pass(dominated),
    ];
    for t in 2..=cfg.t_max {
        let v = GapVectorDistribution::from_window(&w, t)?;
        let wt = collision_probability(&v);
        let norm = rational::to_f64(&wt) * (xf.ln() / loglog3(xf)).powi(t as i32);
        row.push(rat(&wt));
        row.push(float(norm));
    }
    for (_, k, mass) in &s.exceptional {
        row.push(k.to_string());
        row.push(rat(mass));
    }
    let mut first_menu = None;
    for &e in &cfg.menu_exponents {
        let k = exceptional_budget(x, e);
        let mass = top_k_mass(&d, k);
        let bound = &s.atom_max * Rational::from_integer(k.into());
        row.push(k.to_string());
        row.push(rat(&mass));
        row.push(rat(&bound));
        first_menu.get_or_insert((top_k_menu(&d, k), mass));
    }
    let w_exact = rational::to_f64(&s.collision);
    for m in MC_POWERS {
        let est = mc_tensor_collision(&d, m, cfg.mc_samples, mc_seed(cfg.mc_seed, x, m, 0))?;
        row.push(float(est.frequency));
        row.push(float(est.sigmas_from(w_exact.powi(m as i32))));
    }
    if let Some((menu, mass)) = first_menu {
        let mass = mass.to_f64().unwrap_or(f64::NAN);
        for m in MC_POWERS {
            let est = mc_menu_repeat(&d, &menu, m, cfg.mc_samples, mc_seed(cfg.mc_seed, x, m, 1))?;
            row.push(float(est.frequency));
            row.push(float(est.sigmas_from(mass.powi(m as i32))));
        }
    }
    Ok(row)
}

pub fn cmd_gaps(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let mut t = Table::new("gaps", gap_columns(cfg));
    t.rows = cfg
        .x_grid
        .par_iter()
        .map(|&x| gap_row(cfg, x))
        .collect::<Result<_, _>>()?;
    Ok(t)
}

pub fn cmd_constellations(cfg: &ExperimentConfig, offsets: Option<&[OffsetTuple]>) -> Result<Table, CliError> {
    let tuples = offsets.unwrap_or(&cfg.constellations);
    let cols = [
        "X", "offsets", "order", "admissible", "count", "pi_X", "series", "series_tail_bound",
        "normalized",
    ];
    let mut t = Table::new("constellations", cols.map(String::from).to_vec());
    let series: Vec<_> = tuples.iter().map(|tu| singular_series(tu, DEFAULT_SERIES_CUTOFF)).collect();
    let reach = tuples.iter().map(OffsetTuple::span).max().unwrap_or(0);
    let blocks: Vec<Vec<Vec<String>>> = cfg
        .x_grid
        .par_iter()
        .map(|&x| -> Result<_, CliError> {
            let ew = ExtendedWindow::new(x, reach)?;
            let pi = PrimeWindow::build(x)?.pi_x();
            let lx = (x as f64).ln();
            tuples
                .iter()
                .zip(&series)
                .map(|(tu, sv)| {
                    let count = ew.constellation_count(tu)?;
                    let m = tu.order() as i32 - 1;
                    let normalized = (sv.value > 0.0)
                        .then(|| count as f64 / pi as f64 * lx.powi(m) / sv.value);
                    Ok(vec![
                        x.to_string(),
                        tu.to_string(),
                        tu.order().to_string(),
                        tu.is_admissible().to_string(),
                        count.to_string(),
                        pi.to_string(),
                        float(sv.value),
                        float(sv.tail_bound),
                        opt_float(normalized),
                    ])
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

/// Pattern files parsed in config order.
pub fn load_patterns(cfg: &ExperimentConfig) -> Result<Vec<(String, ObstructionPattern)>, CliError> {
    cfg.pattern_files
        .iter()
        .map(|path| {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let pat = ObstructionPattern::parse(&text).map_err(|source| CliError::Pattern {
                path: path.clone(),
                source,
            })?;
            Ok((pattern_name(path), pat))
        })
        .collect()
}

fn pattern_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// `R = round(z^s)`, at least 2.
pub fn level_for(z: u64, s: f64) -> u64 {
    ((z as f64).powf(s).round() as u64).max(2)
}

fn selberg_columns() -> Vec<String> {
    [
        "pattern", "X", "W0", "b", "z", "kappa", "support_primes", "s", "R", "moduli",
        "local_weakness", "local_weakness_f", "selberg_cf", "selberg_qf", "cf_qf_rel_diff",
        "selberg_over_local", "F1", "sifted_count", "pi_X", "main_term", "ratio", "split",
    ]
    .map(String::from)
    .to_vec()
}

fn selberg_rows(
    name: &str,
    pat: &ObstructionPattern,
    w: &PrimeWindow,
    s_values: &[f64],
) -> Result<Vec<Vec<String>>, CliError> {
    let loc = local_weakness(pat);
    let loc_cell = loc.exact.as_ref().map_or_else(|| float(loc.value), rat);
    s_values
        .iter()
        .map(|&s| {
            let level = level_for(pat.cutoff(), s);
            let report = sifted_bound_report(w, pat, level)?;
            let sys = SelbergSystem::new(pat.clone(), level)?;
            let cf = sys.closed_form().ok().map(|m| m.value);
            let qf = (sys.support_len() <= DENSE_SUPPORT_LIMIT)
                .then(|| sys.solve_qf().ok().map(|q| q.minimum))
                .flatten();
            let rel = cf.zip(qf).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()));
            let over = cf.filter(|_| loc.value > 0.0).map(|c| c / loc.value);
            Ok(vec![
                name.to_string(),
                w.base().to_string(),
                pat.wheel().to_string(),
                pat.residue().to_string(),
                pat.cutoff().to_string(),
                pat.kappa().to_string(),
                pat.support().len().to_string(),
                float(report.s),
                level.to_string(),
                sys.support_len().to_string(),
                loc_cell.clone(),
                float(loc.value),
                opt_float(cf),
                opt_float(qf),
                opt_float(rel),
                opt_float(over),
                opt_float(report.f1),
                report.count.to_string(),
                w.pi_x().to_string(),
                opt_float(report.main_term),
                opt_float(report.ratio),
                pass(report.split.holds),
            ])
        })
        .collect()
}

pub fn cmd_selberg(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let patterns = load_patterns(cfg)?;
    let mut t = Table::new("selberg", selberg_columns());
    let blocks: Vec<Vec<Vec<String>>> = cfg
        .x_grid
        .par_iter()
        .map(|&x| -> Result<_, CliError> {
            let w = PrimeWindow::build(x)?;
            let mut rows = Vec::new();
            for (name, pat) in &patterns {
                rows.extend(selberg_rows(name, pat, &w, &cfg.selberg_s)?);
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let cols = [
        "X", "variant", "primes", "total_candidates", "mean_candidates", "max_candidates",
        "mean_cost_units", "ratio_to_seq",
    ];
    let mut t = Table::new("bench", cols.map(String::from).to_vec());
    let blocks: Vec<Vec<Vec<String>>> = cfg
        .x_grid
        .par_iter()
        .map(|&x| -> Result<_, CliError> {
            let w = PrimeWindow::build(x)?;
            let report = window_baseline_report(&w, cfg.cost_exponent)?;
            Ok(report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        x.to_string(),
                        r.variant.to_string(),
                        r.primes.to_string(),
                        r.total_candidates.to_string(),
                        float(r.mean_candidates),
                        r.max_candidates.to_string(),
                        float(r.mean_cost_units),
                        float(r.ratio_to_seq),
                    ]
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    t.rows = blocks.into_iter().flatten().collect();
    Ok(t)
}

/// Every table the config describes, in a fixed order.
pub fn all_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    Ok(vec![
        cmd_gaps(cfg)?,
        cmd_constellations(cfg, None)?,
        cmd_selberg(cfg)?,
        cmd_bench(cfg)?,
    ])
}

/// Writes `table` under `dir` and returns the path.
pub fn write_table(cfg: &ExperimentConfig, table: &Table, dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(table.file_name());
    fs::write(&path, table.render(&cfg.header_comment())).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
