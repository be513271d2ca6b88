//! Plain-text formats.
//!
//! * Density matrix: a line with `dim`, then `dim²` lines `re im` in row-major order.
//! * Ensemble: a line `|X| d`, then one line per label: `p(x)` followed by `2·d²` reals
//!   (`re im` pairs, row-major).
//! * Channel: a line `|X| |Y|`, then `|X|` rows of `|Y|` probabilities.
//! * Curves: CSV `mu,R_bits,P_bits` (P curve) or `mu,R_bits,D_bits` (D curve); envelopes
//!   `R_bits,P_env_bits` / `R_bits,D_env_bits`; closed-form rows `lambda,R_bits,P_bits`.
//!
//! Whitespace-separated; `#` starts a comment. Errors carry 1-based line numbers.

use crate::ensemble::{CQEnsemble, ClassicalChannel};
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, ProbabilityDistribution};
use crate::tradeoff::{CurveKind, Envelope, TradeoffCurve};
use num_complex::Complex64;
use std::fmt::Write as _;

/// Non-empty lines with comments stripped, as `(line_number, tokens)`.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number(line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_err(line, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

fn count(line: usize, tok: &str, what: &str) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(parse_err(line, format!("{what} must be a positive integer, got {tok:?}"))),
    }
}

fn header<'a>(lines: &[(usize, Vec<&'a str>)], fields: usize, what: &str) -> Result<(usize, Vec<&'a str>)> {
    let Some((ln, toks)) = lines.first() else {
        return Err(parse_err(1, format!("empty {what} file")));
    };
    if toks.len() != fields {
        return Err(parse_err(*ln, format!("{what} header needs {fields} field(s), found {}", toks.len())));
    }
    Ok((*ln, toks.clone()))
}

fn expect_lines(lines: &[(usize, Vec<&str>)], wanted: usize, what: &str) -> Result<()> {
    let have = lines.len() - 1;
    if have < wanted {
        let last = lines.last().map(|l| l.0).unwrap_or(1);
        return Err(parse_err(last + 1, format!("{what}: expected {wanted} data lines, found {have}")));
    }
    if have > wanted {
        return Err(parse_err(lines[wanted + 1].0, format!("{what}: unexpected extra line")));
    }
    Ok(())
}

/// Attaches a line number to a validation failure raised while building a value.
fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    })
}

pub fn parse_density_matrix(text: &str) -> Result<DensityMatrix> {
    let lines = content_lines(text);
    let (hl, h) = header(&lines, 1, "density matrix")?;
    let dim = count(hl, h[0], "dimension")?;
    expect_lines(&lines, dim * dim, "density matrix")?;
    let mut entries = Vec::with_capacity(dim * dim);
    for (ln, toks) in &lines[1..] {
        if toks.len() != 2 {
            return Err(parse_err(*ln, format!("expected \"re im\", found {} field(s)", toks.len())));
        }
        entries.push(Complex64::new(number(*ln, toks[0])?, number(*ln, toks[1])?));
    }
    at_line(hl, DensityMatrix::from_row_major(dim, &entries))
}

pub fn format_density_matrix(rho: &DensityMatrix) -> String {
    let mut s = format!("{}\n", rho.dim());
    for z in rho.to_row_major() {
        let _ = writeln!(s, "{} {}", z.re, z.im);
    }
    s
}

pub fn parse_ensemble(text: &str) -> Result<CQEnsemble> {
    let lines = content_lines(text);
    let (hl, h) = header(&lines, 2, "ensemble")?;
    let nx = count(hl, h[0], "label count")?;
    let d = count(hl, h[1], "dimension")?;
    expect_lines(&lines, nx, "ensemble")?;
    let mut probs = Vec::with_capacity(nx);
    let mut states = Vec::with_capacity(nx);
    for (ln, toks) in &lines[1..] {
        if toks.len() != 1 + 2 * d * d {
            return Err(parse_err(*ln, format!("expected {} fields, found {}", 1 + 2 * d * d, toks.len())));
        }
        probs.push(number(*ln, toks[0])?);
        let entries: Vec<Complex64> = toks[1..]
            .chunks(2)
            .map(|c| Ok(Complex64::new(number(*ln, c[0])?, number(*ln, c[1])?)))
            .collect::<Result<_>>()?;
        states.push(at_line(*ln, DensityMatrix::from_row_major(d, &entries))?);
    }
    let dist = at_line(lines[1].0, ProbabilityDistribution::new(probs))?;
    at_line(hl, CQEnsemble::new(dist, states))
}

pub fn format_ensemble(ens: &CQEnsemble) -> String {
    let mut s = format!("{} {}\n", ens.labels(), ens.dim());
    for (p, rho) in ens.probs().probs().iter().zip(ens.states()) {
        let _ = write!(s, "{p}");
        for z in rho.to_row_major() {
            let _ = write!(s, " {} {}", z.re, z.im);
        }
        s.push('\n');
    }
    s
}

pub fn parse_channel(text: &str) -> Result<ClassicalChannel> {
    let lines = content_lines(text);
    let (hl, h) = header(&lines, 2, "channel")?;
    let nx = count(hl, h[0], "input count")?;
    let ny = count(hl, h[1], "output count")?;
    expect_lines(&lines, nx, "channel")?;
    let mut rows = Vec::with_capacity(nx);
    for (ln, toks) in &lines[1..] {
        if toks.len() != ny {
            return Err(parse_err(*ln, format!("expected {ny} probabilities, found {}", toks.len())));
        }
        let row: Vec<f64> = toks.iter().map(|t| number(*ln, t)).collect::<Result<_>>()?;
        // Validate row by row so the error points at the offending line.
        at_line(*ln, ClassicalChannel::new(vec![row.clone()]))?;
        rows.push(row);
    }
    at_line(hl, ClassicalChannel::new(rows))
}

pub fn format_channel(w: &ClassicalChannel) -> String {
    let mut s = format!("{} {}\n", w.rows(), w.cols());
    for x in 0..w.rows() {
        let row: Vec<String> = w.row(x).iter().map(|v| v.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub const P_CURVE_HEADER: &str = "mu,R_bits,P_bits";
pub const D_CURVE_HEADER: &str = "mu,R_bits,D_bits";
pub const P_ENVELOPE_HEADER: &str = "R_bits,P_env_bits";
pub const D_ENVELOPE_HEADER: &str = "R_bits,D_env_bits";
pub const UNIFORM_HEADER: &str = "lambda,R_bits,P_bits";

/// One row of a curve CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub mu: f64,
    pub rate: f64,
    pub value: f64,
}

pub fn format_curve_csv(curve: &TradeoffCurve) -> String {
    let header = match curve.kind {
        CurveKind::Purity => P_CURVE_HEADER,
        CurveKind::CommonRandomness => D_CURVE_HEADER,
    };
    let mut s = format!("{header}\n");
    for p in &curve.points {
        let _ = writeln!(s, "{},{},{}", p.multiplier, p.rate, p.value);
    }
    s
}

pub fn format_envelope_csv(curve: &TradeoffCurve) -> String {
    let header = match curve.kind {
        CurveKind::Purity => P_ENVELOPE_HEADER,
        CurveKind::CommonRandomness => D_ENVELOPE_HEADER,
    };
    let mut s = format!("{header}\n");
    for (r, p) in curve.envelope.vertices() {
        let _ = writeln!(s, "{r},{p}");
    }
    s
}

pub fn format_uniform_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut s = format!("{UNIFORM_HEADER}\n");
    for (lam, r, p) in rows {
        let _ = writeln!(s, "{lam},{r},{p}");
    }
    s
}

/// Parses a CSV whose header is one of `headers`, returning the header index and numeric rows.
fn parse_csv(text: &str, headers: &[&str], width: usize) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((hl, h)) = lines.next() else { return Err(parse_err(1, "empty CSV")) };
    let which = headers
        .iter()
        .position(|x| *x == h.trim())
        .ok_or_else(|| parse_err(hl + 1, format!("unexpected header {:?}", h.trim())))?;
    let mut rows = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(parse_err(i + 1, format!("expected {width} fields, found {}", fields.len())));
        }
        rows.push(fields.iter().map(|f| number(i + 1, f)).collect::<Result<_>>()?);
    }
    Ok((which, rows))
}

/// Reads a curve CSV; the kind follows from the header.
pub fn parse_curve_csv(text: &str) -> Result<(CurveKind, Vec<CurveRow>)> {
    let (which, rows) = parse_csv(text, &[P_CURVE_HEADER, D_CURVE_HEADER], 3)?;
    let kind = if which == 0 { CurveKind::Purity } else { CurveKind::CommonRandomness };
    Ok((kind, rows.into_iter().map(|r| CurveRow { mu: r[0], rate: r[1], value: r[2] }).collect()))
}

/// Reads an envelope CSV back into an [`Envelope`].
pub fn parse_envelope_csv(text: &str) -> Result<(CurveKind, Envelope)> {
    let (which, rows) = parse_csv(text, &[P_ENVELOPE_HEADER, D_ENVELOPE_HEADER], 2)?;
    let kind = if which == 0 { CurveKind::Purity } else { CurveKind::CommonRandomness };
    Ok((kind, Envelope::from_points(rows.into_iter().map(|r| (r[0], r[1])))))
}

pub fn parse_uniform_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let (_, rows) = parse_csv(text, &[UNIFORM_HEADER], 3)?;
    Ok(rows.into_iter().map(|r| (r[0], r[1], r[2])).collect())
}
