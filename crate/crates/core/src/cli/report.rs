use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::csv::{num, text, Table};
use super::CliError;
use crate::baselines::{baseline_amount_of_fading, BaselineParams};
use crate::capacity::{self, Scheme};
use crate::error::Error;
use crate::model::{JftsModel, JftsParams};
use crate::oracle::{mc_capacity, EnvelopeSampler, McEstimate};
use crate::scalar::db_to_linear;

pub const DEFAULT_MC_N: usize = 100_000;
/// K-factors (dB) of the report grid.
pub const GRID_K_DB: [f64; 3] = [2.0, 5.0, 8.0];
/// Shadowing factors (dB) of the report grid.
pub const GRID_SH_DB: [f64; 4] = [-9.8, -6.0, -2.0, 5.0];
pub const GRID_DELTA: [f64; 3] = [0.1, 0.4, 0.9];
pub const GRID_GAMMA_BAR_DB: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];
pub const GRID_SCHEMES: [Scheme; 4] = [Scheme::Opra, Scheme::Ora, Scheme::Cifr, Scheme::Tifr];
/// Truncation multipliers of the quadrature columns.
pub const GAMMA_MAX_MULTS: [f64; 3] = [1e2, 1e3, 1e4];
/// Target amount of fading of the AF search.
pub const AF_TARGET: f64 = 3.45;
pub const AF_POWERS: [f64; 3] = [0.25, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Monte Carlo samples per point; 0 disables.
    pub mc_n: usize,
    pub seed: u64,
}

/// `(k_db, sh_db, delta)` triples of the report grid, in row order.
pub fn grid() -> Vec<(f64, f64, f64)> {
    let mut g = Vec::new();
    for k in GRID_K_DB {
        for s in GRID_SH_DB {
            for d in GRID_DELTA {
                g.push((k, s, d));
            }
        }
    }
    g
}

struct Row {
    gamma0: f64,
    closed: f64,
    quad: [f64; 3],
    mc: Option<McEstimate>,
    status: Vec<String>,
}

impl Row {
    fn new() -> Self {
        Self { gamma0: f64::NAN, closed: f64::NAN, quad: [f64::NAN; 3], mc: None, status: Vec::new() }
    }

    fn take(&mut self, r: Result<f64, Error>) -> f64 {
        r.unwrap_or_else(|e| {
            self.status.push(e.to_string());
            f64::NAN
        })
    }
}

fn point_rows(
    model: &Result<JftsModel<f64>, Error>,
    sampler: &Result<EnvelopeSampler, String>,
    db: f64,
    opts: &ReportOptions,
) -> Vec<Row> {
    let gb = db_to_linear(db);
    let model = match model {
        Ok(m) => m,
        Err(e) => {
            return GRID_SCHEMES
                .iter()
                .map(|_| {
                    let mut r = Row::new();
                    r.status.push(e.to_string());
                    r
                })
                .collect()
        }
    };
    GRID_SCHEMES
        .iter()
        .map(|&scheme| {
            let mut row = Row::new();
            match scheme {
                Scheme::Opra => match capacity::solve_cutoff(model, gb, 1e-12) {
                    Ok(cut) => {
                        row.gamma0 = cut.gamma0;
                        row.closed = row.take(capacity::opra_closed_at(model, cut.gamma0, gb).map(|r| r.value));
                        for (i, f) in GAMMA_MAX_MULTS.iter().enumerate() {
                            row.quad[i] = row.take(capacity::opra_quadrature_at(model, cut.gamma0, gb, f * gb).map(|r| r.value));
                        }
                    }
                    Err(e) => row.status.push(e.to_string()),
                },
                Scheme::Ora => {
                    match capacity::ora_series(model, gb, 50) {
                        Ok(r) => {
                            row.closed = r.value;
                            if r.flag("divergent") {
                                row.status.push("series divergent at n=1".into());
                            }
                        }
                        Err(e) => row.status.push(e.to_string()),
                    }
                    for (i, f) in GAMMA_MAX_MULTS.iter().enumerate() {
                        row.quad[i] = row.take(capacity::ora_quadrature(model, gb, f * gb).map(|r| r.value));
                    }
                }
                Scheme::Cifr => row.closed = capacity::cifr(model).value,
                Scheme::Tifr => match capacity::tifr_max(model, gb) {
                    Ok(o) => {
                        row.gamma0 = o.gamma0;
                        row.closed = o.result.value;
                    }
                    Err(e) => row.status.push(e.to_string()),
                },
            }
            if opts.mc_n > 0 && scheme != Scheme::Cifr {
                match sampler {
                    Ok(s) => match mc_capacity(s, gb, scheme, opts.mc_n, opts.seed) {
                        Ok(e) => row.mc = Some(e),
                        Err(e) => row.status.push(format!("mc: {e}")),
                    },
                    Err(msg) => row.status.push(msg.clone()),
                }
            }
            row
        })
        .collect()
}

fn report_csv(opts: &ReportOptions) -> (String, Vec<String>) {
    let params = grid();
    let models: Vec<Result<JftsModel<f64>, Error>> = params
        .iter()
        .map(|&(k, s, d)| JftsParams::from_db(k, s, d).and_then(JftsModel::new))
        .collect();
    let samplers: Vec<Result<EnvelopeSampler, String>> = models
        .iter()
        .map(|m| match (opts.mc_n > 0, m) {
            (false, _) => Err("mc disabled".to_string()),
            (true, Ok(m)) => EnvelopeSampler::build(m).map_err(|e| format!("sampler: {e}")),
            (true, Err(e)) => Err(e.to_string()),
        })
        .collect();
    let points: Vec<(usize, f64)> = (0..params.len())
        .flat_map(|i| GRID_GAMMA_BAR_DB.iter().map(move |&db| (i, db)))
        .collect();
    let rows: Vec<Vec<Row>> = points
        .par_iter()
        .map(|&(i, db)| point_rows(&models[i], &samplers[i], db, opts))
        .collect();
    let header: Vec<String> = [
        "k_db",
        "sh_db",
        "delta",
        "gamma_bar_db",
        "scheme",
        "gamma0_analytic",
        "closed",
        "quad_1e2",
        "quad_1e3",
        "quad_1e4",
        "mc_mean",
        "mc_half_width_95",
        "gamma0_empirical",
        "cutoff_gap",
        "mc_minus_quad_1e3",
        "status",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut t = Table::new("report", &header);
    let buildable: Vec<String> = params
        .iter()
        .zip(&samplers)
        .filter(|(_, s)| s.is_ok())
        .map(|(p, _)| format!("K={} dB, S_h={} dB, delta={}", p.0, p.1, p.2))
        .collect();
    for (&(i, db), group) in points.iter().zip(rows) {
        let (k, s, d) = params[i];
        for (scheme, r) in GRID_SCHEMES.iter().zip(group) {
            let (mc_mean, mc_hw, mc_cut) = match r.mc {
                Some(e) => (e.mean, e.half_width_95, e.cutoff.unwrap_or(f64::NAN)),
                None => (f64::NAN, f64::NAN, f64::NAN),
            };
            t.row(&[
                num(k),
                num(s),
                num(d),
                num(db),
                scheme.to_string(),
                num(r.gamma0),
                num(r.closed),
                num(r.quad[0]),
                num(r.quad[1]),
                num(r.quad[2]),
                num(mc_mean),
                num(mc_hw),
                num(mc_cut),
                num(mc_cut - r.gamma0),
                num(mc_mean - r.quad[1]),
                text(&r.status.join(" | ")),
            ]);
        }
    }
    (t.finish(), buildable)
}

/// One row of the amount-of-fading search over the envelope powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfRow {
    pub p1: f64,
    pub p2: f64,
    pub omega_a: f64,
    pub ln_normalization: f64,
    pub amount_of_fading: f64,
    pub hits_target: bool,
}

/// Amount of fading of the baseline-comparison JFTS channel (K = 5 dB, S_h = -9.8 dB, Δ = 0.1) over
/// `P₁, P₂ ∈ {0.25, 0.5, 1}`.
pub fn af_search() -> Vec<(AfRow, String)> {
    let mut out = Vec::new();
    for p1 in AF_POWERS {
        for p2 in AF_POWERS {
            let r = JftsParams::from_db(5.0, -9.8, 0.1)
                .and_then(|p| p.with_powers(p1, p2))
                .and_then(JftsModel::new)
                .and_then(|m| Ok((m.omega_a(), m.envelope_moments()?)));
            let row = match r {
                Ok((omega_a, mo)) => {
                    let af = mo.amount_of_fading();
                    (
                        AfRow {
                            p1,
                            p2,
                            omega_a,
                            ln_normalization: mo.ln_normalization(),
                            amount_of_fading: af,
                            hits_target: (af - AF_TARGET).abs() <= 0.05 * AF_TARGET,
                        },
                        String::new(),
                    )
                }
                Err(e) => (
                    AfRow {
                        p1,
                        p2,
                        omega_a: f64::NAN,
                        ln_normalization: f64::NAN,
                        amount_of_fading: f64::NAN,
                        hits_target: false,
                    },
                    e.to_string(),
                ),
            };
            out.push(row);
        }
    }
    out
}

fn af_csv(rows: &[(AfRow, String)]) -> String {
    let header: Vec<String> = ["p1", "p2", "omega_a", "ln_normalization", "amount_of_fading", "hits_target", "status"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut t = Table::new("report-af", &header);
    for (r, status) in rows {
        t.row(&[
            num(r.p1),
            num(r.p2),
            num(r.omega_a),
            num(r.ln_normalization),
            num(r.amount_of_fading),
            r.hits_target.to_string(),
            text(status),
        ]);
    }
    t.finish()
}

/// Writes `report.csv`, `af_search.csv` and `summary.txt` into `dir`.
pub fn write_report(dir: &Path, opts: &ReportOptions) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let (csv, buildable) = report_csv(opts);
    let rows = csv.lines().count() - 2;
    let af = af_search();
    let hits: Vec<&AfRow> = af.iter().filter(|(r, _)| r.hits_target).map(|(r, _)| r).collect();
    let mut summary = String::new();
    let _ = writeln!(summary, "jfts-capacity v{} discrepancy report", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        summary,
        "rows: {rows} ({} channels x {} mean CSNR points x {} schemes)",
        grid().len(),
        GRID_GAMMA_BAR_DB.len(),
        GRID_SCHEMES.len()
    );
    let _ = writeln!(summary, "monte carlo: n = {}, seed = {}", opts.mc_n, opts.seed);
    let _ = writeln!(summary, "channels whose envelope density normalizes to [0.9, 1.1]: {}", buildable.len());
    for b in &buildable {
        let _ = writeln!(summary, "  {b}");
    }
    let _ = writeln!(summary, "amount-of-fading search (K=5 dB, S_h=-9.8 dB, delta=0.1, target {AF_TARGET} +/- 5%):");
    for (r, status) in &af {
        let _ = writeln!(
            summary,
            "  P1={} P2={}: AF={} ln(normalization)={}{}",
            r.p1,
            r.p2,
            num(r.amount_of_fading),
            num(r.ln_normalization),
            if status.is_empty() { String::new() } else { format!(" ({status})") }
        );
    }
    let _ = writeln!(summary, "  combinations within tolerance: {}", hits.len());
    for (label, bp) in [
        ("nakagami-lognormal (m=1, sigma=3.88 dB)", BaselineParams::NakagamiLogNormal { m: 1.0, sigma_db: 3.88 }),
        ("k-fading (k=0.96)", BaselineParams::KFading { k: 0.96 }),
    ] {
        match baseline_amount_of_fading(bp) {
            Ok(af) => {
                let _ = writeln!(summary, "baseline {label}: AF={}", num(af));
            }
            Err(e) => {
                let _ = writeln!(summary, "baseline {label}: {e}");
            }
        }
    }
    std::fs::write(dir.join("report.csv"), csv)?;
    std::fs::write(dir.join("af_search.csv"), af_csv(&af))?;
    std::fs::write(dir.join("summary.txt"), summary)?;
    Ok(())
}
