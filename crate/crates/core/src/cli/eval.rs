use std::io::Write;

use super::csv::{num, Table};
use super::sweep::{DEFAULT_GAMMA_MAX_MULT, DEFAULT_SEED};
use super::{CliError, Config, EvalArgs, MethodArg, SchemeArg};
use crate::capacity::{self, Diagnostic, Scheme};
use crate::error::Error;
use crate::model::{JftsModel, JftsParams};
use crate::oracle::{mc_capacity, EnvelopeSampler};
use crate::scalar::db_to_linear;

/// Fully resolved `eval` inputs (flags over config over defaults).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSettings {
    pub k_db: f64,
    pub sh_db: f64,
    pub delta: f64,
    pub p1: f64,
    pub p2: f64,
    pub m: usize,
    pub gamma_bar_db: f64,
    pub scheme: SchemeArg,
    pub method: MethodArg,
    pub gamma_max_mult: f64,
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
}

impl EvalSettings {
    pub(super) fn resolve(a: &EvalArgs, c: &Config) -> Result<Self, CliError> {
        Ok(Self {
            k_db: a.k_db.or(c.k_db).unwrap_or(5.0),
            sh_db: a.sh_db.or(c.sh_db).unwrap_or(-9.8),
            delta: a.delta.or(c.delta).unwrap_or(0.1),
            p1: a.p1.or(c.p1).unwrap_or(1.0),
            p2: a.p2.or(c.p2).unwrap_or(1.0),
            m: a.m.or(c.m).unwrap_or(20),
            gamma_bar_db: a.gamma_bar_db.or(c.gamma_bar_db).unwrap_or(10.0),
            scheme: a.scheme.or(c.scheme()?).unwrap_or(SchemeArg::Opra),
            method: a.method.or(c.method()?).unwrap_or(MethodArg::Closed),
            gamma_max_mult: a.gamma_max_mult.or(c.gamma_max_mult).unwrap_or(DEFAULT_GAMMA_MAX_MULT),
            n: a.n.or(c.n).unwrap_or(1_000_000),
            seed: a.seed.or(c.seed).unwrap_or(DEFAULT_SEED),
            tol: a.tol.or(c.tol).unwrap_or(1e-12),
        })
    }
}

struct Outcome {
    scheme: Scheme,
    method: &'static str,
    gamma0: Option<f64>,
    value: f64,
    half_width: Option<f64>,
    gamma_max: Option<f64>,
    diagnostics: Vec<(String, String)>,
}

impl Outcome {
    fn from_capacity(r: capacity::CapacityResult<f64>, method: &'static str) -> Self {
        Self {
            scheme: r.scheme,
            method,
            gamma0: r.gamma0,
            value: r.value,
            half_width: None,
            gamma_max: r.gamma_max,
            diagnostics: r.diagnostics.iter().map(|(k, v)| (k.clone(), diag(v))).collect(),
        }
    }
}

fn diag(d: &Diagnostic) -> String {
    match d {
        Diagnostic::Number(x) => num(*x),
        other => other.to_string(),
    }
}

fn evaluate(s: &EvalSettings) -> Result<Outcome, Error> {
    let params = JftsParams::from_db(s.k_db, s.sh_db, s.delta)?
        .with_powers(s.p1, s.p2)?
        .with_quad_order(s.m)?;
    let model = JftsModel::new(params)?;
    let gb = db_to_linear(s.gamma_bar_db);
    if !(s.gamma_max_mult > 1.0) {
        return Err(Error::Domain(format!("gamma_max_mult must exceed 1, got {}", s.gamma_max_mult)));
    }
    let gmax = s.gamma_max_mult * gb;
    let mc = |scheme: Scheme| -> Result<Outcome, Error> {
        let sampler = EnvelopeSampler::build(&model)?;
        let e = mc_capacity(&sampler, gb, scheme, s.n, s.seed)?;
        let mut diagnostics = vec![
            ("n".to_string(), e.n.to_string()),
            ("seed".to_string(), e.seed.to_string()),
            ("normalization".to_string(), num(sampler.normalization())),
        ];
        if scheme == Scheme::Opra {
            if let Ok(c) = capacity::solve_cutoff(&model, gb, s.tol) {
                diagnostics.push(("analytic_gamma0".into(), num(c.gamma0)));
            }
        }
        Ok(Outcome {
            scheme,
            method: "mc",
            gamma0: e.cutoff,
            value: e.mean,
            half_width: Some(e.half_width_95),
            gamma_max: None,
            diagnostics,
        })
    };
    match (s.scheme, s.method) {
        (SchemeArg::Opra, MethodArg::Closed) => {
            let cut = capacity::solve_cutoff(&model, gb, s.tol)?;
            let mut out = Outcome::from_capacity(capacity::opra_closed_at(&model, cut.gamma0, gb)?, "closed");
            out.diagnostics.push(("cutoff_residual".into(), num(cut.residual)));
            out.diagnostics.push(("multiple_cutoff_roots".into(), cut.multiple_roots.to_string()));
            for (key, f) in [("gap_1e2", 1e2), ("gap_1e3", 1e3), ("gap_1e4", 1e4)] {
                let q = capacity::opra_quadrature_at(&model, cut.gamma0, gb, f * gb)?;
                out.diagnostics.push((key.into(), num(out.value - q.value)));
            }
            Ok(out)
        }
        (SchemeArg::Opra, MethodArg::Quad) => {
            let cut = capacity::solve_cutoff(&model, gb, s.tol)?;
            Ok(Outcome::from_capacity(capacity::opra_quadrature_at(&model, cut.gamma0, gb, gmax)?, "quad"))
        }
        (SchemeArg::Ora, MethodArg::Closed) => Ok(Outcome::from_capacity(capacity::ora_series(&model, gb, 50)?, "series")),
        (SchemeArg::Ora, MethodArg::Quad) => Ok(Outcome::from_capacity(capacity::ora_quadrature(&model, gb, gmax)?, "quad")),
        (SchemeArg::Cifr, MethodArg::Closed | MethodArg::Quad) => Ok(Outcome::from_capacity(capacity::cifr(&model), "closed")),
        (SchemeArg::Cifr, MethodArg::Mc) => Err(Error::Domain("CIFR has no Monte Carlo estimator".into())),
        (SchemeArg::Tifr, MethodArg::Closed) => {
            let opt = capacity::tifr_max(&model, gb)?;
            Ok(Outcome::from_capacity(opt.result, "closed"))
        }
        (SchemeArg::Tifr, MethodArg::Quad) => Err(Error::Domain("TIFR has no quadrature form; use closed or mc".into())),
        (SchemeArg::Opra, MethodArg::Mc) => mc(Scheme::Opra),
        (SchemeArg::Ora, MethodArg::Mc) => mc(Scheme::Ora),
        (SchemeArg::Tifr, MethodArg::Mc) => mc(Scheme::Tifr),
    }
}

pub fn run<W: Write>(s: &EvalSettings, out: &mut W) -> Result<(), CliError> {
    let o = evaluate(s)?;
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    writeln!(out, "scheme {}", o.scheme)?;
    writeln!(out, "method {}", o.method)?;
    writeln!(
        out,
        "channel k_db={} sh_db={} delta={} p1={} p2={} m={}",
        s.k_db, s.sh_db, s.delta, s.p1, s.p2, s.m
    )?;
    writeln!(out, "gamma_bar_db {}", s.gamma_bar_db)?;
    match o.gamma0 {
        Some(g) => writeln!(out, "gamma0 {g:.9}")?,
        None => writeln!(out, "gamma0 -")?,
    }
    writeln!(out, "capacity {:.6}", o.value)?;
    if let Some(h) = o.half_width {
        writeln!(out, "half_width_95 {h:.6}")?;
    }
    for (k, v) in &o.diagnostics {
        writeln!(out, "diagnostic {k} {v}")?;
    }
    writeln!(out)?;
    let header: Vec<String> = [
        "scheme", "method", "k_db", "sh_db", "delta", "p1", "p2", "m", "gamma_bar_db", "gamma0", "capacity",
        "half_width_95", "gamma_max",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut t = Table::new("eval", &header);
    t.row(&[
        o.scheme.to_string(),
        o.method.to_string(),
        num(s.k_db),
        num(s.sh_db),
        num(s.delta),
        num(s.p1),
        num(s.p2),
        s.m.to_string(),
        num(s.gamma_bar_db),
        opt(o.gamma0),
        num(o.value),
        opt(o.half_width),
        opt(o.gamma_max),
    ]);
    write!(out, "{}", t.finish())?;
    Ok(())
}
