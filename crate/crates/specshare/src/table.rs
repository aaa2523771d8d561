//! Flat CSV rows shared by every verb and dataset.

use std::io::Write;

use specshare_core::bargaining::{resource_cost, resource_cost_metric, EquilibriumSolution};
use specshare_core::{Error, MarketParams};

use crate::config::Mode;
use crate::error::AppResult;
use crate::pipeline::Evaluation;

/// Column order of every CSV this crate writes.
pub const COLUMNS: [&str; 46] = [
    "point_index",
    "mode",
    "gamma",
    "c",
    "s",
    "delta_part1",
    "l0",
    "m",
    "w",
    "v_l",
    "v_f",
    "alpha",
    "k",
    "b",
    "delta",
    "d_provenance",
    "d_l",
    "d_f",
    "d_i_l",
    "d_i_f",
    "d_resource_cost",
    "bounded",
    "pi_star",
    "d_total",
    "margin",
    "interior",
    "exists",
    "solution_index",
    "regime",
    "i_l",
    "i_f",
    "degree_coop",
    "s_tilde",
    "theta",
    "p_l",
    "p_f",
    "n_l",
    "n_f",
    "nt_l",
    "nt_f",
    "pi_l",
    "pi_f",
    "pi_total",
    "u_excess",
    "resource_cost",
    "note",
];

/// Formats with 12 significant digits; integers and zero stay short.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.into()
}

fn solution_cells(index: usize, s: &EquilibriumSolution) -> Vec<String> {
    let (nt_l, nt_f) = s.demand.map_or((None, None), |d| (Some(d.n_tilde_l), Some(d.n_tilde_f)));
    vec![
        index.to_string(),
        s.regime.as_str().into(),
        fmt_num(s.alloc.i_l()),
        fmt_num(s.alloc.i_f()),
        fmt_num(s.alloc.ratio()),
        opt(s.flows.s_tilde.value()),
        fmt_num(s.flows.theta),
        fmt_num(s.prices.p_l),
        fmt_num(s.prices.p_f),
        fmt_num(s.split.n_l),
        fmt_num(s.split.n_f),
        opt(nt_l),
        opt(nt_f),
        fmt_num(s.payoffs.pi_l),
        fmt_num(s.payoffs.pi_f),
        fmt_num(s.payoffs.total()),
        fmt_num(s.u_excess_star),
        resource_cost_metric(s).map(fmt_num).unwrap_or_default(),
    ]
}

fn param_cells(point_index: usize, mode: Mode, p: &MarketParams) -> Vec<String> {
    vec![
        point_index.to_string(),
        mode.as_str().into(),
        fmt_num(p.gamma),
        fmt_num(p.c),
        fmt_num(p.s_market),
        fmt_num(p.delta_part1),
        fmt_num(p.l0),
        opt(p.m_cap),
        fmt_num(p.w),
        fmt_num(p.v_l),
        fmt_num(p.v_f),
        fmt_num(p.alpha),
        fmt_num(p.k),
        fmt_num(p.b),
        fmt_num(p.delta()),
    ]
}

/// Row for a point whose evaluation failed before bargaining: parameter
/// echo, the error in `note`, everything else empty.
pub fn error_row(point_index: usize, mode: Mode, params: &MarketParams, err: &Error) -> Vec<String> {
    let mut row = param_cells(point_index, mode, params);
    row.resize(COLUMNS.len() - 1, String::new());
    row.push(err.to_string());
    row
}

/// Rows of one evaluation: one per solution, or a single row with empty
/// solution cells when none exist.
pub fn rows(point_index: usize, ev: &Evaluation) -> Vec<Vec<String>> {
    let mut head = param_cells(point_index, ev.mode, &ev.params);
    head.extend([
        ev.d.provenance.as_str().into(),
        fmt_num(ev.d.d_l),
        fmt_num(ev.d.d_f),
        opt(ev.d_outcome.map(|o| o.alloc.i_l())),
        opt(ev.d_outcome.map(|o| o.alloc.i_f())),
        opt(ev.d_outcome.map(|o| resource_cost(&o.alloc, &o.prices))),
    ]);
    let blank_solution = || vec![String::new(); 18];
    let mut out = Vec::new();
    match &ev.outcome {
        Ok(o) => {
            let r = &o.report;
            head.extend([
                flag(true),
                fmt_num(r.pi_star),
                fmt_num(r.d),
                fmt_num(r.margin),
                flag(r.interior),
                flag(r.exists),
            ]);
            if o.solutions.is_empty() {
                let mut row = head.clone();
                row.extend(blank_solution());
                row.push(String::new());
                out.push(row);
            }
            for (i, s) in o.solutions.iter().enumerate() {
                let mut row = head.clone();
                row.extend(solution_cells(i, s));
                row.push(String::new());
                out.push(row);
            }
        }
        Err(e) => {
            let unbounded = *e == Error::UnboundedObjective;
            head.extend([
                flag(!unbounded),
                String::new(),
                fmt_num(ev.d.total()),
                String::new(),
                String::new(),
                flag(false),
            ]);
            head.extend(blank_solution());
            head.push(e.to_string());
            out.push(head);
        }
    }
    out
}

/// Writes header plus rows.
pub fn write_rows<W: Write>(out: W, rows: &[Vec<String>]) -> AppResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        debug_assert_eq!(r.len(), COLUMNS.len());
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
