use std::path::Path;

use clap::ValueEnum;
use rayon::prelude::*;

use super::csv::{num, text, Table};
use super::sweep::{McSpec, SweepParams, SweepSpec, DEFAULT_GAMMA_MAX_MULT, DEFAULT_SEED};
use super::{CliError, Config, FigureArgs};
use crate::baselines::{baseline_opra, BaselineParams};
use crate::capacity::{self, Scheme};
use crate::error::Result;
use crate::model::{JftsModel, JftsParams};
use crate::oracle::{mc_capacity, EnvelopeSampler};
use crate::scalar::db_to_linear;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

impl FigureName {
    fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig1a => "fig1a",
            FigureName::Fig1b => "fig1b",
            FigureName::Fig2a => "fig2a",
            FigureName::Fig2b => "fig2b",
            FigureName::Fig3a => "fig3a",
            FigureName::Fig3b => "fig3b",
        }
    }
}

/// Axis, truncation and Monte Carlo settings shared by every curve of a figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSettings {
    pub from_db: f64,
    pub to_db: f64,
    pub step_db: f64,
    pub gamma_max_mult: f64,
    pub mc: Option<McSpec>,
}

impl Default for FigureSettings {
    fn default() -> Self {
        Self { from_db: 0.0, to_db: 20.0, step_db: 1.0, gamma_max_mult: DEFAULT_GAMMA_MAX_MULT, mc: None }
    }
}

impl FigureSettings {
    pub(super) fn resolve(a: &FigureArgs, c: &Config) -> std::result::Result<Self, CliError> {
        let d = Self::default();
        let n = a.n.or(c.n);
        Ok(Self {
            from_db: a.from_db.or(c.from_db).unwrap_or(d.from_db),
            to_db: a.to_db.or(c.to_db).unwrap_or(d.to_db),
            step_db: a.step_db.or(c.step_db).unwrap_or(d.step_db),
            gamma_max_mult: a.gamma_max_mult.or(c.gamma_max_mult).unwrap_or(d.gamma_max_mult),
            mc: n.map(|n| McSpec { n, seed: a.seed.or(c.seed).unwrap_or(DEFAULT_SEED) }),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Cutoff,
    Ergodic,
    Outage,
    BaselineOpra,
    JftsOpra,
}

struct Curve {
    label: String,
    kind: Kind,
    spec: SweepSpec,
}

fn jfts(k: f64, s: f64, d: f64) -> SweepParams {
    SweepParams::Jfts(JftsParams::from_db(k, s, d).expect("preset parameters are valid"))
}

/// Label-safe rendering of a dB value (`-9.8` becomes `m9.8`).
fn db_label(x: f64) -> String {
    if x < 0.0 {
        format!("m{}", -x)
    } else {
        format!("{x}")
    }
}

fn curves(name: FigureName, st: &FigureSettings) -> Vec<Curve> {
    let mk = |label: String, kind: Kind, params: SweepParams, schemes: &[Scheme]| Curve {
        label,
        kind,
        spec: SweepSpec {
            from_db: st.from_db,
            to_db: st.to_db,
            step_db: st.step_db,
            params,
            schemes: schemes.iter().copied().collect(),
            gamma_max_mult: st.gamma_max_mult,
            mc: st.mc,
        },
    };
    let k_sweep = [2.0, 5.0, 8.0].map(|k| (format!("k{}", db_label(k)), jfts(k, -2.0, 0.4)));
    let s_sweep = [-6.0, -2.0, 5.0].map(|s| (format!("sh{}", db_label(s)), jfts(5.0, s, 0.9)));
    match name {
        FigureName::Fig1a => [
            ("high_quality", jfts(20.0, 10.0, 0.1)),
            ("degraded", jfts(2.0, -6.0, 0.9)),
            ("reference", jfts(5.0, -9.8, 0.1)),
        ]
        .into_iter()
        .map(|(l, p)| mk(l.to_string(), Kind::Cutoff, p, &[Scheme::Opra]))
        .collect(),
        FigureName::Fig1b => vec![
            mk(
                "nakagami_lognormal".into(),
                Kind::BaselineOpra,
                SweepParams::Baseline(BaselineParams::NakagamiLogNormal { m: 1.0, sigma_db: 3.88 }),
                &[Scheme::Opra],
            ),
            mk("k_fading".into(), Kind::BaselineOpra, SweepParams::Baseline(BaselineParams::KFading { k: 0.96 }), &[
                Scheme::Opra,
            ]),
            mk("jfts".into(), Kind::JftsOpra, jfts(5.0, -9.8, 0.1), &[Scheme::Opra]),
        ],
        FigureName::Fig2a | FigureName::Fig2b => {
            let sweep = if name == FigureName::Fig2a { k_sweep } else { s_sweep };
            sweep.into_iter().map(|(l, p)| mk(l, Kind::Ergodic, p, &[Scheme::Opra, Scheme::Ora])).collect()
        }
        FigureName::Fig3a | FigureName::Fig3b => {
            let sweep = if name == FigureName::Fig3a { k_sweep } else { s_sweep };
            sweep.into_iter().map(|(l, p)| mk(l, Kind::Outage, p, &[Scheme::Tifr])).collect()
        }
    }
}

fn columns(c: &Curve, mc: bool) -> Vec<String> {
    let l = &c.label;
    let mut cols: Vec<String> = match c.kind {
        Kind::Cutoff => vec![format!("gamma0_{l}")],
        Kind::Ergodic => vec![
            format!("gamma0_{l}"),
            format!("opra_closed_{l}"),
            format!("opra_quad_{l}"),
            format!("ora_quad_{l}"),
        ],
        Kind::Outage => vec![format!("tifr_gamma0_{l}"), format!("tifr_{l}")],
        Kind::BaselineOpra => vec![format!("gamma0_{l}"), format!("opra_{l}")],
        Kind::JftsOpra => vec![format!("gamma0_{l}"), format!("opra_closed_{l}"), format!("opra_quad_{l}")],
    };
    if mc {
        match c.kind {
            Kind::Cutoff => cols.push(format!("mc_gamma0_{l}")),
            Kind::Ergodic => cols.extend([
                format!("mc_gamma0_{l}"),
                format!("mc_opra_{l}"),
                format!("mc_opra_hw_{l}"),
                format!("mc_ora_{l}"),
                format!("mc_ora_hw_{l}"),
            ]),
            Kind::Outage => cols.extend([format!("mc_tifr_{l}"), format!("mc_tifr_hw_{l}")]),
            Kind::JftsOpra => cols.extend([format!("mc_opra_{l}"), format!("mc_opra_hw_{l}")]),
            Kind::BaselineOpra => {}
        }
    }
    cols.push(format!("status_{l}"));
    cols
}

/// Cells of one curve at one axis point. Failures become NaN cells and a status message.
fn cells(c: &Curve, sampler: Option<&std::result::Result<EnvelopeSampler, String>>, db: f64) -> Vec<String> {
    let gb = db_to_linear(db);
    let gmax = c.spec.gamma_max_mult * gb;
    let mut status: Vec<String> = Vec::new();
    let mut note = |r: &crate::error::Error| status.push(r.to_string());
    let nan = f64::NAN;
    let mut out: Vec<f64> = Vec::new();
    let model = match c.spec.params {
        SweepParams::Jfts(p) => Some(JftsModel::new(p)),
        SweepParams::Baseline(_) => None,
    };
    let model = match model {
        Some(Ok(m)) => Some(m),
        Some(Err(e)) => {
            note(&e);
            None
        }
        None => None,
    };
    let cutoff = model.as_ref().map(|m| capacity::solve_cutoff(m, gb, 1e-12));
    let g0 = match &cutoff {
        Some(Ok(s)) => Some(s.gamma0),
        Some(Err(e)) => {
            note(e);
            None
        }
        None => None,
    };
    let mut value = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            note(&e);
            nan
        }
    };
    match (c.kind, &model) {
        (Kind::Cutoff, _) => out.push(g0.unwrap_or(nan)),
        (Kind::Ergodic | Kind::JftsOpra, Some(m)) => {
            out.push(g0.unwrap_or(nan));
            match g0 {
                Some(g0) => {
                    out.push(value(capacity::opra_closed_at(m, g0, gb).map(|r| r.value)));
                    out.push(value(capacity::opra_quadrature_at(m, g0, gb, gmax).map(|r| r.value)));
                }
                None => out.extend([nan, nan]),
            }
            if c.kind == Kind::Ergodic {
                out.push(value(capacity::ora_quadrature(m, gb, gmax).map(|r| r.value)));
            }
        }
        (Kind::Outage, Some(m)) => match capacity::tifr_max(m, gb) {
            Ok(o) => out.extend([o.gamma0, o.result.value]),
            Err(e) => {
                note(&e);
                out.extend([nan, nan]);
            }
        },
        (Kind::BaselineOpra, _) => match c.spec.params {
            SweepParams::Baseline(bp) => match baseline_opra(bp, gb) {
                Ok(r) => out.extend([r.gamma0.unwrap_or(nan), r.value]),
                Err(e) => {
                    note(&e);
                    out.extend([nan, nan]);
                }
            },
            SweepParams::Jfts(_) => out.extend([nan, nan]),
        },
        (_, None) => out.extend(std::iter::repeat(nan).take(columns(c, false).len() - 1)),
    }
    if let (Some(mc), Some(sampler)) = (c.spec.mc, sampler) {
        let schemes: &[Scheme] = match c.kind {
            Kind::Cutoff => &[Scheme::Opra],
            Kind::Ergodic => &[Scheme::Opra, Scheme::Ora],
            Kind::Outage => &[Scheme::Tifr],
            Kind::JftsOpra => &[Scheme::Opra],
            Kind::BaselineOpra => &[],
        };
        for (i, &scheme) in schemes.iter().enumerate() {
            let est = match sampler {
                Ok(s) => mc_capacity(s, gb, scheme, mc.n, mc.seed).map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            match est {
                Ok(e) => {
                    if c.kind == Kind::Cutoff {
                        out.push(e.cutoff.unwrap_or(nan));
                    } else {
                        if c.kind == Kind::Ergodic && i == 0 {
                            out.push(e.cutoff.unwrap_or(nan));
                        }
                        out.extend([e.mean, e.half_width_95]);
                    }
                }
                Err(msg) => {
                    if !status.contains(&msg) {
                        status.push(msg);
                    }
                    let width = match c.kind {
                        Kind::Cutoff => 1,
                        Kind::Ergodic if i == 0 => 3,
                        _ => 2,
                    };
                    out.extend(std::iter::repeat(nan).take(width));
                }
            }
        }
    }
    let mut row: Vec<String> = out.into_iter().map(num).collect();
    row.push(text(&status.join(" | ")));
    row
}

/// The figure's CSV text.
pub fn figure_csv(name: FigureName, settings: &FigureSettings) -> Result<String> {
    let curves = curves(name, settings);
    for c in &curves {
        c.spec.validate()?;
    }
    let axis = curves[0].spec.gamma_bar_db();
    let mc = settings.mc.is_some();
    let samplers: Vec<Option<std::result::Result<EnvelopeSampler, String>>> = curves
        .iter()
        .map(|c| match (mc, c.spec.params) {
            (true, SweepParams::Jfts(p)) => Some(
                JftsModel::new(p)
                    .and_then(|m| EnvelopeSampler::build(&m))
                    .map_err(|e| format!("sampler: {e}")),
            ),
            _ => None,
        })
        .collect();
    let mut header = vec!["gamma_bar_db".to_string()];
    for c in &curves {
        header.extend(columns(c, mc));
    }
    let rows: Vec<Vec<String>> = axis
        .par_iter()
        .map(|&db| {
            let mut row = vec![num(db)];
            for (c, s) in curves.iter().zip(&samplers) {
                row.extend(cells(c, s.as_ref(), db));
            }
            row
        })
        .collect();
    let mut t = Table::new(name.as_str(), &header);
    for r in &rows {
        t.row(r);
    }
    Ok(t.finish())
}

pub(crate) fn run(name: FigureName, settings: &FigureSettings, out: &Path) -> std::result::Result<(), CliError> {
    let csv = figure_csv(name, settings)?;
    std::fs::write(out, csv)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# jfts-capacity v"));
        let header = lines.next().unwrap().split(',').map(String::from).collect::<Vec<_>>();
        let rows = lines.map(|l| l.split(',').map(String::from).collect::<Vec<_>>()).collect::<Vec<_>>();
        for r in &rows {
            assert_eq!(r.len(), header.len());
        }
        (header, rows)
    }

    #[test]
    fn every_figure_has_consistent_shape() {
        let st = FigureSettings { from_db: 8.0, to_db: 12.0, step_db: 2.0, ..FigureSettings::default() };
        for name in [FigureName::Fig1a, FigureName::Fig1b, FigureName::Fig2a, FigureName::Fig2b, FigureName::Fig3a, FigureName::Fig3b] {
            let csv = figure_csv(name, &st).unwrap();
            let (header, rows) = parse(&csv);
            assert_eq!(header[0], "gamma_bar_db");
            assert_eq!(rows.len(), 3);
            assert_eq!(csv, figure_csv(name, &st).unwrap());
        }
    }

    #[test]
    fn failures_are_reported_in_status() {
        let st = FigureSettings { from_db: 10.0, to_db: 10.0, ..FigureSettings::default() };
        let (header, rows) = parse(&figure_csv(FigureName::Fig1a, &st).unwrap());
        let i = header.iter().position(|h| h == "gamma0_high_quality").unwrap();
        let s = header.iter().position(|h| h == "status_high_quality").unwrap();
        assert_eq!(rows[0][i], "NaN");
        assert!(rows[0][s].contains("no root"));
    }

    #[test]
    fn mc_columns_for_buildable_and_unbuildable_channels() {
        let st = FigureSettings {
            from_db: 10.0,
            to_db: 10.0,
            mc: Some(McSpec { n: 20_000, seed: 1 }),
            ..FigureSettings::default()
        };
        let (header, rows) = parse(&figure_csv(FigureName::Fig2a, &st).unwrap());
        let mc = header.iter().position(|h| h == "mc_ora_k5").unwrap();
        assert_eq!(rows[0][mc], "NaN");
        let s = header.iter().position(|h| h == "status_k5").unwrap();
        assert!(rows[0][s].contains("sampler"));
    }

    #[test]
    fn invalid_axis_is_a_domain_error() {
        let st = FigureSettings { step_db: -1.0, ..FigureSettings::default() };
        assert!(figure_csv(FigureName::Fig1a, &st).unwrap_err().is_domain());
    }
}
