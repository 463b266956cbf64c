//! The five report-producing commands.
//!
//! Grid point `i` draws from RNG stream `i` under the configured seed, so a
//! point's numbers do not depend on which other points are in the grid.

use hazsel_core::estimators::{admissible_range, alpha_upper_bound};
use hazsel_core::risk::{exact_risk_scaleinv_k2, gb_component_risk, h_of_q, sup_risk_scaleinv};
use hazsel_core::{EstimatorSpec, PairedComparison, QuadratureSpec, RiskEstimate, RngSpec};
use serde_json::{Map, Value};

use crate::config::{EstimatorChoice, ExperimentConfig};
use crate::engine::Engine;
use crate::error::{CliError, Result};
use crate::report::{Cell, Report};

/// `|z|` beyond which a paired difference counts as a verdict.
pub const VERDICT_Z: f64 = 3.0;

fn meta(command: &str, cfg: Option<&ExperimentConfig>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), Value::from(command));
    m.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    if let Some(cfg) = cfg {
        m.insert("seed".into(), Value::from(cfg.seed));
        m.insert("config".into(), cfg.echo());
    }
    m
}

fn scale_columns(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("scale_{i}")).collect()
}

fn point_rng(cfg: &ExperimentConfig, index: usize) -> RngSpec {
    RngSpec::with_stream(cfg.seed, index as u64)
}

/// Risks of every configured estimator at every grid point.
pub fn grid_risks(cfg: &ExperimentConfig, engine: &Engine) -> Result<Vec<(Vec<f64>, Vec<RiskEstimate>)>> {
    let specs: Vec<EstimatorSpec> = cfg.specs()?.into_iter().map(|(_, s)| s).collect();
    let grid = cfg.grid()?;
    cfg.populations()?
        .iter()
        .zip(grid)
        .enumerate()
        .map(|(i, (pop, scales))| Ok((scales, engine.risks(&specs, pop, cfg.replications, &point_rng(cfg, i))?)))
        .collect()
}

pub fn risk_table(cfg: &ExperimentConfig, engine: &Engine) -> Result<Report> {
    let labels: Vec<String> = cfg.specs()?.into_iter().map(|(l, _)| l).collect();
    let mut columns = scale_columns(cfg.k);
    for l in &labels {
        columns.push(format!("R_{l}"));
        columns.push(format!("SE_{l}"));
    }
    let mut report = Report::new(columns);
    for (scales, risks) in grid_risks(cfg, engine)? {
        let mut row: Vec<Cell> = scales.into_iter().map(Cell::Num).collect();
        for r in risks {
            row.push(Cell::Fixed(r.mean));
            row.push(Cell::Fixed(r.std_error));
        }
        report.push(row);
    }
    report.meta = meta("risk-table", Some(cfg));
    Ok(report)
}

pub fn bounds(n: u32, k: usize) -> Result<Report> {
    if k < 2 {
        return Err(CliError::invalid("k", format!("must be >= 2, got {k}")));
    }
    let range = admissible_range(n)?;
    let nf = f64::from(n);
    let mut report = Report::new(vec!["quantity".into(), "c".into(), "h".into(), "value".into()]);
    let text = |s: &str| Cell::Text(s.into());
    report.push(vec![text("c_lower"), Cell::Empty, Cell::Empty, Cell::Num(range.c_lower)]);
    report.push(vec![text("c_upper"), Cell::Empty, Cell::Empty, Cell::Num(range.c_upper)]);
    report.push(vec![text("minimax_value"), Cell::Empty, Cell::Empty, Cell::Fixed(gb_component_risk(n)?)]);
    let first = if n >= 3 { nf - 2.0 } else { nf - 1.0 };
    let mut c = first;
    while c <= nf {
        report.push(vec![text("sup_risk_bound"), Cell::Num(c), Cell::Empty, Cell::Fixed(sup_risk_scaleinv(c, n)?)]);
        c += 1.0;
    }
    for c in [nf - 1.0, nf] {
        report.push(vec![
            text("alpha_bound"),
            Cell::Num(c),
            Cell::Int(k as i64),
            Cell::Num(alpha_upper_bound(n, k, c)?),
        ]);
    }
    let mut m = meta("bounds", None);
    m.insert("n".into(), Value::from(n));
    m.insert("k".into(), Value::from(k));
    report.meta = m;
    Ok(report)
}

/// Per-point verdict for `R(a) − R(b)`.
pub fn verdict(cmp: &PairedComparison, a: &str, b: &str) -> String {
    if cmp.mean_diff == 0.0 && cmp.std_error_diff == 0.0 {
        "identical".into()
    } else if cmp.z_score() > VERDICT_Z {
        format!("{b} dominates")
    } else if cmp.z_score() < -VERDICT_Z {
        format!("{a} dominates")
    } else {
        "inconclusive".into()
    }
}

pub fn dominance(cfg: &ExperimentConfig, engine: &Engine, a: &EstimatorChoice, b: &EstimatorChoice) -> Result<Report> {
    let resolve = |e: &EstimatorChoice| {
        e.resolve(cfg.n, cfg.k, cfg.alpha, cfg.h_count)
            .map_err(|err| CliError::invalid("estimators", format!("{}: {err}", e.label())))
    };
    let (spec_a, spec_b) = (resolve(a)?, resolve(b)?);
    let (la, lb) = (a.label(), b.label());
    let mut columns = scale_columns(cfg.k);
    columns.extend(["mean_diff", "se_diff", "z", "verdict"].map(String::from));
    let mut report = Report::new(columns);
    let grid = cfg.grid()?;
    let mut verdicts = Vec::with_capacity(grid.len());
    for (i, (pop, scales)) in cfg.populations()?.iter().zip(grid).enumerate() {
        let cmp = engine.paired(&spec_a, &spec_b, pop, cfg.replications, &point_rng(cfg, i))?;
        let v = verdict(&cmp, &la, &lb);
        let mut row: Vec<Cell> = scales.into_iter().map(Cell::Num).collect();
        row.extend([
            Cell::Fixed(cmp.mean_diff),
            Cell::Fixed(cmp.std_error_diff),
            Cell::Num((cmp.z_score() * 1e3).round() / 1e3),
            Cell::Text(v.clone()),
        ]);
        report.push(row);
        verdicts.push(v);
    }
    let total = verdicts.len();
    let count = |s: &str| verdicts.iter().filter(|v| *v == s).count();
    let (b_wins, a_wins) = (count(&format!("{lb} dominates")), count(&format!("{la} dominates")));
    let summary = if count("identical") == total {
        format!("{la} and {lb} are identical at every grid point")
    } else if b_wins == total {
        format!("{lb} dominates {la} at all {total} grid points")
    } else if a_wins == total {
        format!("{la} dominates {lb} at all {total} grid points")
    } else {
        format!(
            "inconclusive at {VERDICT_Z} SE: {lb} better at {b_wins}, {la} better at {a_wins}, no verdict at {} of {total} points",
            total - a_wins - b_wins
        )
    };
    let mut m = meta("dominance", Some(cfg));
    m.insert("pair".into(), Value::from(vec![la, lb]));
    report.meta = m;
    report.summary = Some(summary);
    Ok(report)
}

fn require_two(cfg: &ExperimentConfig, what: &str) -> Result<()> {
    if cfg.k != 2 {
        return Err(CliError::invalid("k", format!("{what} needs k = 2, got {}", cfg.k)));
    }
    Ok(())
}

pub fn plot_data(cfg: &ExperimentConfig, engine: &Engine) -> Result<Report> {
    require_two(cfg, "plot-data")?;
    let labels: Vec<String> = cfg.specs()?.into_iter().map(|(l, _)| l).collect();
    let mut points: Vec<(String, f64, f64, RiskEstimate)> = Vec::new();
    for (scales, risks) in grid_risks(cfg, engine)? {
        let ratio = scales[0] / scales[1];
        for (label, r) in labels.iter().zip(risks) {
            points.push((label.clone(), ratio, scales[0], r));
        }
    }
    points.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    let mut report = Report::new(["ratio", "estimator", "risk", "std_error"].map(String::from).to_vec());
    for (label, ratio, _, r) in points {
        report.push(vec![Cell::Fixed(ratio), Cell::Text(label), Cell::Fixed(r.mean), Cell::Fixed(r.std_error)]);
    }
    report.meta = meta("plot-data", Some(cfg));
    Ok(report)
}

/// Exact two-population risk of `c / Y_J` next to its Monte Carlo estimate.
/// Without configured scales a single equal-scale point is used.
pub fn exact(cfg: &ExperimentConfig, engine: &Engine, c: f64) -> Result<Report> {
    require_two(cfg, "exact")?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(CliError::invalid("c", format!("must be finite and > 0, got {c}")));
    }
    let grid = cfg.scales_grid.clone().unwrap_or_else(|| vec![vec![1.0, 1.0]]);
    let cfg = ExperimentConfig {
        scales_grid: Some(grid.clone()),
        ..cfg.clone()
    };
    let spec = EstimatorSpec::scale_inverse(c);
    let quad = QuadratureSpec::default();
    let mut report = Report::new(
        ["scale_1", "scale_2", "q", "h", "exact_risk", "mc_risk", "mc_se"]
            .map(String::from)
            .to_vec(),
    );
    for (i, (pop, scales)) in cfg.populations()?.iter().zip(grid).enumerate() {
        let rates = pop.rates();
        let q = rates[0].max(rates[1]) / rates[0].min(rates[1]);
        let exact = exact_risk_scaleinv_k2(c, rates, cfg.n, &quad)?;
        let mc = engine.risks(&[spec], pop, cfg.replications, &point_rng(&cfg, i))?[0];
        report.push(vec![
            Cell::Num(scales[0]),
            Cell::Num(scales[1]),
            Cell::Num(q),
            Cell::Num(h_of_q(q, cfg.n)?),
            Cell::Fixed(exact),
            Cell::Fixed(mc.mean),
            Cell::Fixed(mc.std_error),
        ]);
    }
    let mut m = meta("exact", Some(&cfg));
    m.insert("c".into(), Value::from(c));
    report.meta = m;
    Ok(report)
}
