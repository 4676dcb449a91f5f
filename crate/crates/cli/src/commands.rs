use std::f64::consts::PI;
use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use lcm_core::families::{limit_probe_table, FactorialRootSequence, ProbeRow, SequenceRow};
use lcm_core::tau_lab::hirsch_tail_bound;
use lcm_core::{
    asym_eval, check_lcm, compose, digamma, hirsch_constant, ln_gamma, make_provider, shift_ratio,
    tau0_estimate, tau_max, AsymptoticSeries, Branch, CheckOptions, CheckReport, FamilySpec,
    InnerFunction, Interval, OpenInterval, SeriesKind, TauResult, Verdict,
};

use crate::render::{num, Output};
use crate::{
    AsymArgs, BranchArg, CheckArgs, Cli, Command, FamilyArg, KindArg, SeqArgs, TableArgs, TableName, TauArgs,
    EXIT_FAIL, EXIT_OK,
};

const DEFAULT_ORDERS: usize = 8;
const DEFAULT_GRID: usize = 400;

/// Values quoted for the maxima of tau(2, .) and tau(3, .).
const PUBLISHED_TAU: [(f64, f64); 2] = [(2.0, 0.264076), (3.0, 0.271807)];

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (output, code) = match &cli.command {
        Command::Check(a) => cmd_check(a)?,
        Command::Tau(a) => (cmd_tau(a)?, EXIT_OK),
        Command::Table(a) => (cmd_table(a)?, EXIT_OK),
        Command::Asym(a) => (cmd_asym(a)?, EXIT_OK),
        Command::Seq(a) => (cmd_seq(a)?, EXIT_OK),
    };
    output.write(cli.format, out)?;
    Ok(code)
}

fn split_pair(text: &str, what: &str) -> Result<(String, String)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("malformed {what} '{text}': expected FROM:TO"))?;
    Ok((a.trim().to_owned(), b.trim().to_owned()))
}

pub(crate) fn parse_interval(text: &str) -> Result<(f64, f64)> {
    let (a, b) = split_pair(text, "interval")?;
    let lo: f64 = a.parse().with_context(|| format!("malformed interval lower end '{a}'"))?;
    let hi: f64 = b.parse().with_context(|| format!("malformed interval upper end '{b}'"))?;
    if !(lo < hi) {
        bail!("malformed interval '{text}': need lo < hi");
    }
    Ok((lo, hi))
}

fn parse_scan(text: &str) -> Result<(u32, u32)> {
    let (a, b) = split_pair(text, "scan range")?;
    let from: u32 = a.parse().with_context(|| format!("malformed scan start '{a}'"))?;
    let to: u32 = b.parse().with_context(|| format!("malformed scan end '{b}'"))?;
    if from < 1 || from > to {
        bail!("scan range '{text}' must satisfy 1 <= FROM <= TO");
    }
    Ok((from, to))
}

pub(crate) fn parse_inner(text: &str) -> Result<InnerFunction> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let nums = |xs: &[&str]| -> Result<Vec<f64>> {
        xs.iter()
            .map(|s| s.parse::<f64>().with_context(|| format!("bad number '{s}' in '{text}'")))
            .collect()
    };
    Ok(match parts.as_slice() {
        ["one-minus-exp"] => InnerFunction::OneMinusExp,
        ["atan-sqrt"] => InnerFunction::AtanSqrt,
        ["log-shift", rest @ ..] if rest.len() == 2 => {
            let v = nums(rest)?;
            InnerFunction::LogShift { a: v[0], b: v[1] }
        }
        ["power", rest @ ..] if rest.len() == 3 => {
            let v = nums(rest)?;
            InnerFunction::Power {
                a: v[0],
                alpha: v[1],
                b: v[2],
            }
        }
        _ => bail!(
            "unsupported inner function '{text}': use one-minus-exp, atan-sqrt, log-shift:A:B or power:A:ALPHA:B"
        ),
    })
}

fn family_spec(a: &CheckArgs, kind: FamilyArg) -> FamilySpec {
    let branch = match a.branch {
        BranchArg::Positive => Branch::Positive,
        BranchArg::Negative => Branch::Negative,
    };
    let spec = match kind {
        FamilyArg::RecipGammaRoot => FamilySpec::recip_gamma_root(),
        FamilyArg::Nu => FamilySpec::nu(a.alpha),
        FamilyArg::XAlpha => FamilySpec::x_alpha(a.alpha, branch),
        FamilyArg::Q => FamilySpec::q(a.a, a.b, a.c),
    };
    if a.invert {
        spec.inverted()
    } else {
        spec
    }
}

pub(crate) fn run_check(a: &CheckArgs) -> Result<CheckReport> {
    let explicit = a.interval.as_deref().map(parse_interval).transpose()?;
    let (provider, lo, hi, orders, grid) = if let Some(preset) = a.preset {
        let built = preset.build(a.orders)?;
        let (lo, hi) = explicit.unwrap_or((built.lo, built.hi));
        (built.provider, lo, hi, built.orders, a.grid.unwrap_or(built.grid))
    } else {
        let kind = a.family.ok_or_else(|| anyhow!("either --preset or --family is required"))?;
        let (lo, hi) = explicit.ok_or_else(|| anyhow!("--interval LO:HI is required with --family"))?;
        let orders = a.orders.unwrap_or(DEFAULT_ORDERS);
        let mut p = make_provider(family_spec(a, kind), orders)?;
        if let Some(alpha) = a.shift {
            p = shift_ratio(p, alpha)?;
        }
        if let Some(text) = &a.compose {
            p = compose(p, parse_inner(text)?, OpenInterval::new(lo, hi)?)?;
        }
        (p, lo, hi, orders, a.grid.unwrap_or(DEFAULT_GRID))
    };
    let iv = Interval::inside(&provider.domain(), lo, hi, a.margin)?;
    let opts = CheckOptions {
        tolerance: a.tolerance,
        ..CheckOptions::default()
    };
    Ok(check_lcm(&*provider, &iv, orders, grid, &opts)?)
}

fn check_summary(r: &CheckReport) -> String {
    let (lo, hi) = r.interval.effective();
    match r.witness() {
        None => format!(
            "PASS {}: no violation at orders 1..={} on [{lo}, {hi}] (grid {})",
            r.spec, r.orders, r.grid_size
        ),
        Some(w) => format!(
            "FAIL {}: order {} has signed derivative {:e} at x = {} (threshold {:e})",
            r.spec, w.order, w.min_signed_value, w.argmin, w.threshold
        ),
    }
}

fn cmd_check(a: &CheckArgs) -> Result<(Output, i32)> {
    let report = run_check(a)?;
    let verdict = report.verdict.to_string();
    let rows = report
        .records
        .iter()
        .map(|r| {
            vec![
                r.order.to_string(),
                num(r.min_signed_value),
                num(r.argmin),
                num(r.max_abs),
                num(r.threshold),
                r.pass.to_string(),
                verdict.clone(),
            ]
        })
        .collect();
    let header = vec!["order", "min_signed_value", "argmin", "max_abs", "threshold", "pass", "verdict"];
    let summary = check_summary(&report);
    // the summary goes to stderr in both formats so the witness is always visible
    eprintln!("{summary}");
    let code = if report.verdict == Verdict::Pass { EXIT_OK } else { EXIT_FAIL };
    Ok((Output::new(header, rows, &report)?, code))
}

fn tau_rows(results: &[TauResult]) -> Vec<Vec<String>> {
    results
        .iter()
        .map(|r| vec![num(r.s), num(r.t_star), num(r.tau_max), num(r.bracket.0), num(r.bracket.1)])
        .collect()
}

const TAU_HEADER: [&str; 5] = ["s", "t_star", "tau_max", "bracket_lo", "bracket_hi"];

fn cmd_tau(a: &TauArgs) -> Result<Output> {
    if let Some(s) = a.s {
        let r = tau_max(s)?;
        return Output::new(TAU_HEADER.to_vec(), tau_rows(&[r]), &r);
    }
    let text = a.scan.as_deref().ok_or_else(|| anyhow!("either --s or --scan is required"))?;
    let (from, to) = parse_scan(text)?;
    let results = (from..=to)
        .into_par_iter()
        .map(|s| tau_max(s as f64))
        .collect::<lcm_core::Result<Vec<_>>>()?;
    Output::new(TAU_HEADER.to_vec(), tau_rows(&results), &results)
}

#[derive(Serialize)]
struct PublishedRow {
    s: f64,
    t_star: f64,
    tau_max: f64,
    published: f64,
    abs_diff: f64,
}

#[derive(Serialize)]
struct ThresholdRow {
    s: f64,
    tau_max: f64,
    threshold: f64,
}

#[derive(Serialize)]
struct HirschRow {
    k_max: u64,
    value: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct ProbeTable {
    limit: f64,
    rows: Vec<ProbeRow>,
}

fn cmd_table(a: &TableArgs) -> Result<Output> {
    match a.name {
        TableName::RemarkTau => {
            let rows = PUBLISHED_TAU
                .iter()
                .map(|&(s, published)| {
                    let r = tau_max(s)?;
                    Ok(PublishedRow {
                        s,
                        t_star: r.t_star,
                        tau_max: r.tau_max,
                        published,
                        abs_diff: (r.tau_max - published).abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let csv = rows
                .iter()
                .map(|r| vec![num(r.s), num(r.t_star), num(r.tau_max), num(r.published), num(r.abs_diff)])
                .collect();
            Output::new(vec!["s", "t_star", "tau_max", "published", "abs_diff"], csv, &rows)
        }
        TableName::Thresholds => {
            let rows = [2.0, 3.0]
                .iter()
                .map(|&s| {
                    let t = tau_max(s)?.tau_max;
                    Ok(ThresholdRow {
                        s,
                        tau_max: t,
                        threshold: 1.0 / (1.0 + t),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let csv = rows.iter().map(|r| vec![num(r.s), num(r.tau_max), num(r.threshold)]).collect();
            Output::new(vec!["s", "tau_max", "threshold"], csv, &rows)
        }
        TableName::NbxLimit => {
            let doc = ProbeTable {
                limit: -PI * PI / 12.0,
                rows: limit_probe_table(2, 5)?,
            };
            let csv = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.x),
                        num(r.value),
                        num(r.error),
                        r.extrapolated.map(num).unwrap_or_default(),
                    ]
                })
                .collect();
            let summary = format!("limit -pi^2/12 = {}", num(doc.limit));
            Ok(Output::new(vec!["x", "value", "error", "extrapolated"], csv, &doc)?.with_summary(summary))
        }
        TableName::Hirsch => {
            let rows = [1_000u64, 10_000, 100_000, 1_000_000]
                .iter()
                .map(|&k| {
                    Ok(HirschRow {
                        k_max: k,
                        value: hirsch_constant(k)?,
                        tail_bound: hirsch_tail_bound(k),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let csv = rows
                .iter()
                .map(|r| vec![r.k_max.to_string(), num(r.value), num(r.tail_bound)])
                .collect();
            Output::new(vec!["k_max", "value", "tail_bound"], csv, &rows)
        }
        TableName::Tau0 => {
            let est = tau0_estimate(a.s_max)?;
            let summary = format!(
                "tau0 = {} at s = {} (at s_max: {}), alpha threshold = {}",
                num(est.tau0),
                est.s_at,
                est.attained_at_s_max,
                num(est.alpha_threshold)
            );
            Ok(Output::new(TAU_HEADER.to_vec(), tau_rows(&est.profile), &est)?.with_summary(summary))
        }
    }
}

#[derive(Serialize)]
struct AsymRow {
    x: f64,
    exact: f64,
    expansion: f64,
    abs_error: f64,
}

fn cmd_asym(a: &AsymArgs) -> Result<Output> {
    if !(a.from >= 1.0 && a.to >= a.from && a.to.is_finite()) {
        bail!("need 1 <= from <= to < inf, got from = {}, to = {}", a.from, a.to);
    }
    if a.points < 1 {
        bail!("--points must be at least 1");
    }
    let kind = match a.kind {
        KindArg::Lngamma => SeriesKind::LnGamma,
        KindArg::Digamma => SeriesKind::Digamma,
    };
    let series = AsymptoticSeries::new(kind, a.terms)?;
    let ratio = a.to / a.from;
    let rows = (0..a.points)
        .map(|i| {
            let x = if a.points == 1 {
                a.from
            } else {
                a.from * ratio.powf(i as f64 / (a.points - 1) as f64)
            };
            let exact = match kind {
                SeriesKind::LnGamma => ln_gamma(x)?,
                SeriesKind::Digamma => digamma(x)?,
            };
            let expansion = asym_eval(series, x)?;
            Ok(AsymRow {
                x,
                exact,
                expansion,
                abs_error: (exact - expansion).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = rows
        .iter()
        .map(|r| vec![num(r.x), num(r.exact), num(r.expansion), num(r.abs_error)])
        .collect();
    Output::new(vec!["x", "exact", "expansion", "abs_error"], csv, &rows)
}

#[derive(Serialize)]
struct SequenceDoc<'a> {
    m: u64,
    n: u64,
    rows: &'a [SequenceRow],
    min_delta: f64,
    nondecreasing: bool,
}

fn cmd_seq(a: &SeqArgs) -> Result<Output> {
    let seq = FactorialRootSequence::scan(a.m, a.n, a.kmax)?;
    let min_delta = seq.min_delta();
    let nondecreasing = seq.is_nondecreasing(0.0);
    let doc = SequenceDoc {
        m: seq.m,
        n: seq.n,
        rows: &seq.rows,
        min_delta,
        nondecreasing,
    };
    let csv = seq
        .rows
        .iter()
        .map(|r| vec![r.k.to_string(), num(r.value), num(r.delta)])
        .collect();
    let summary = format!(
        "m = {}, n = {}, k = 1..={}: nondecreasing = {nondecreasing}, min delta = {min_delta:e}",
        a.m, a.n, a.kmax
    );
    Ok(Output::new(vec!["k", "value", "delta"], csv, &doc)?.with_summary(summary))
}
