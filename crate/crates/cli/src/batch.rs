//! CSV batch evaluation with in-band per-row errors.

use std::io::{Read, Write};

use clap::ValueEnum;
use hlzeta::{Complex64, EvalPoint, ParameterSet};
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::parse_complex;
use crate::eval::{evaluate, ErrorInfo, EvalRecord, MethodChoice, Request};

/// Parameter columns, all optional with default 1.
pub const PARAM_COLUMNS: [&str; 8] = ["mu", "eta", "eta_p", "delta", "delta_p", "nu", "xi", "xi_p"];
/// Argument columns, all required.
pub const POINT_COLUMNS: [&str; 4] = ["z", "t", "s", "a"];
pub const OPTION_COLUMNS: [&str; 2] = ["method", "tol"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

/// Settings that apply to rows without their own `method` / `tol`.
#[derive(Debug, Clone, Copy)]
pub struct BatchDefaults {
    pub method: MethodChoice,
    pub tol: Option<f64>,
    pub max_diagonal: Option<usize>,
}

/// Problems with the input file as a whole.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Serialize)]
struct JsonRow {
    row: usize,
    #[serde(flatten)]
    record: Option<EvalRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorInfo>,
}

#[derive(Debug, Serialize)]
struct CsvRow {
    row: usize,
    value_re: Option<f64>,
    value_im: Option<f64>,
    abs_err: Option<f64>,
    method: Option<String>,
    work: Option<usize>,
    converged: Option<bool>,
    reduction_tag: Option<String>,
    error_kind: Option<String>,
    error: Option<String>,
}

struct Columns {
    params: [Option<usize>; 8],
    point: [usize; 4],
    method: Option<usize>,
    tol: Option<usize>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self, InputError> {
        let find = |name: &str| header.iter().position(|h| h.trim() == name);
        for h in header.iter() {
            let h = h.trim();
            let known = PARAM_COLUMNS.contains(&h) || POINT_COLUMNS.contains(&h) || OPTION_COLUMNS.contains(&h);
            if !known {
                return Err(InputError(format!("unknown column {h:?}")));
            }
        }
        let mut point = [0; 4];
        for (slot, name) in point.iter_mut().zip(POINT_COLUMNS) {
            *slot = find(name).ok_or_else(|| InputError(format!("missing required column {name:?}")))?;
        }
        let mut params = [None; 8];
        for (slot, name) in params.iter_mut().zip(PARAM_COLUMNS) {
            *slot = find(name);
        }
        Ok(Columns { params, point, method: find("method"), tol: find("tol") })
    }

    fn request(&self, record: &csv::StringRecord, defaults: &BatchDefaults) -> Result<Request, String> {
        let cell = |i: usize| record.get(i).map(str::trim).filter(|s| !s.is_empty());
        let complex = |i: Option<usize>, name: &str| -> Result<Option<Complex64>, String> {
            match i.and_then(cell) {
                None => Ok(None),
                Some(text) => parse_complex(text).map(Some).map_err(|e| format!("{name}: {e}")),
            }
        };
        let mut p = [Complex64::new(1.0, 0.0); 8];
        for ((slot, &col), name) in p.iter_mut().zip(&self.params).zip(PARAM_COLUMNS) {
            if let Some(v) = complex(col, name)? {
                *slot = v;
            }
        }
        let mut x = [Complex64::new(0.0, 0.0); 4];
        for ((slot, &col), name) in x.iter_mut().zip(&self.point).zip(POINT_COLUMNS) {
            *slot = complex(Some(col), name)?.ok_or_else(|| format!("{name}: missing value"))?;
        }
        let method = match self.method.and_then(cell) {
            None => defaults.method,
            Some(m) => MethodChoice::parse(m).ok_or_else(|| format!("method: unknown method {m:?}"))?,
        };
        let tol = match self.tol.and_then(cell) {
            None => defaults.tol,
            Some(t) => Some(
                t.parse::<f64>()
                    .ok()
                    .filter(|t| *t > 0.0)
                    .ok_or_else(|| format!("tol: expected a positive number, got {t:?}"))?,
            ),
        };
        Ok(Request {
            params: ParameterSet { mu: p[0], eta: p[1], eta_p: p[2], delta: p[3], delta_p: p[4], nu: p[5], xi: p[6], xi_p: p[7] },
            point: EvalPoint { z: x[0], t: x[1], s: x[2], a: x[3] },
            method,
            tol,
            max_diagonal: defaults.max_diagonal,
        })
    }
}

type RowOutcome = Result<EvalRecord, ErrorInfo>;

fn evaluate_row(parsed: Result<Request, String>) -> RowOutcome {
    let req = parsed.map_err(ErrorInfo::parse)?;
    if let Err(e) = req.params.validate().and_then(|_| req.point.validate()) {
        return Err(ErrorInfo::new(&e, None));
    }
    let (tag, result) = evaluate(&req);
    result.map(|r| EvalRecord::new(&r, tag)).map_err(|e| ErrorInfo::new(&e, Some(tag)))
}

/// Evaluates every row of `input` and writes one record per row, in input
/// order, to `output`. Rows are evaluated on the current rayon pool.
pub fn run_batch<R: Read, W: Write>(
    input: R,
    output: W,
    format: OutputFormat,
    defaults: &BatchDefaults,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(|e| InputError(format!("unreadable header: {e}")))?.clone();
    let columns = Columns::from_header(&header)?;
    let mut requests = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| InputError(format!("ill-formed input: {e}")))?;
        requests.push(columns.request(&record, defaults));
    }
    let outcomes: Vec<RowOutcome> = requests.into_par_iter().map(evaluate_row).collect();
    write_outcomes(outcomes, output, format)
}

fn write_outcomes<W: Write>(outcomes: Vec<RowOutcome>, mut output: W, format: OutputFormat) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        OutputFormat::Jsonl => {
            for (row, outcome) in outcomes.into_iter().enumerate() {
                let line = match outcome {
                    Ok(record) => JsonRow { row, record: Some(record), error: None },
                    Err(e) => JsonRow { row, record: None, error: Some(e) },
                };
                serde_json::to_writer(&mut output, &line)?;
                output.write_all(b"\n")?;
            }
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(output);
            for (row, outcome) in outcomes.into_iter().enumerate() {
                let line = match outcome {
                    Ok(r) => CsvRow {
                        row,
                        value_re: Some(r.value.re),
                        value_im: Some(r.value.im),
                        abs_err: Some(r.abs_err),
                        method: Some(r.method),
                        work: Some(r.work),
                        converged: Some(r.converged),
                        reduction_tag: Some(r.reduction_tag),
                        error_kind: None,
                        error: None,
                    },
                    Err(e) => CsvRow {
                        row,
                        value_re: e.partial.as_ref().map(|p| p.value.re),
                        value_im: e.partial.as_ref().map(|p| p.value.im),
                        abs_err: e.partial.as_ref().map(|p| p.abs_err),
                        method: e.partial.as_ref().map(|p| p.method.clone()),
                        work: e.partial.as_ref().map(|p| p.work),
                        converged: e.partial.as_ref().map(|p| p.converged),
                        reduction_tag: e.partial.as_ref().map(|p| p.reduction_tag.clone()),
                        error_kind: Some(e.kind),
                        error: Some(e.message),
                    },
                };
                writer.serialize(line)?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &str, format: OutputFormat) -> Result<String, Box<dyn std::error::Error>> {
        let defaults = BatchDefaults { method: MethodChoice::Auto, tol: None, max_diagonal: None };
        let mut out = Vec::new();
        run_batch(input.as_bytes(), &mut out, format, &defaults)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn header_only() {
        assert_eq!(run("z,t,s,a\n", OutputFormat::Jsonl).unwrap(), "");
    }

    #[test]
    fn rows_in_order_with_errors_in_band() {
        let out = run("z,t,s,a,nu\n0,0,2,4,\n0.5,0,1,1,-2\n0.5,0,1,1,1\nx,0,1,1,1\n", OutputFormat::Jsonl).unwrap();
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0]["value"]["re"], 0.0625);
        assert_eq!(lines[1]["error"]["kind"], "invalid-parameter");
        assert!((lines[2]["value"]["re"].as_f64().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-8);
        assert_eq!(lines[3]["error"]["kind"], "parse");
        for (i, l) in lines.iter().enumerate() {
            assert_eq!(l["row"], i);
        }
    }

    #[test]
    fn csv_output() {
        let out = run("z,t,s,a,method\n0,0,2,4,series\n", OutputFormat::Csv).unwrap();
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("row,value_re"));
        assert_eq!(out.lines().filter(|l| l.starts_with("row")).count(), 1);
        assert!(lines.next().unwrap().starts_with("0,0.0625,0.0,"));
    }

    #[test]
    fn ill_formed_files() {
        assert!(run("z,t,s\n0,0,1\n", OutputFormat::Jsonl).is_err());
        assert!(run("z,t,s,a,bogus\n0,0,1,1,1\n", OutputFormat::Jsonl).is_err());
        assert!(run("z,t,s,a\n0,0,1\n", OutputFormat::Jsonl).is_err());
    }
}
