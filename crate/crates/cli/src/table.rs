//! Text grid of values over lists of `z` and `t`, for fixed parameters.

use hlzeta::{Complex64, EvalPoint, ParameterSet};
use rayon::prelude::*;

use crate::complex::format_complex;
use crate::eval::{evaluate, MethodChoice, Request};

pub struct TableSpec {
    pub params: ParameterSet,
    pub zs: Vec<Complex64>,
    pub ts: Vec<Complex64>,
    pub s: Complex64,
    pub a: Complex64,
    pub method: MethodChoice,
    pub tol: Option<f64>,
    pub max_diagonal: Option<usize>,
}

fn cell(value: Result<Complex64, String>) -> String {
    match value {
        Ok(v) => format_complex(v),
        Err(kind) => format!("<{kind}>"),
    }
}

/// Rows are `z` values, columns `t` values; failed cells show the error kind.
pub fn render_table(spec: &TableSpec) -> String {
    let jobs: Vec<(usize, usize)> =
        (0..spec.zs.len()).flat_map(|i| (0..spec.ts.len()).map(move |j| (i, j))).collect();
    let cells: Vec<String> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let req = Request {
                params: spec.params,
                point: EvalPoint { z: spec.zs[i], t: spec.ts[j], s: spec.s, a: spec.a },
                method: spec.method,
                tol: spec.tol,
                max_diagonal: spec.max_diagonal,
            };
            let (_, r) = evaluate(&req);
            cell(r.map(|r| r.value).map_err(|e| e.kind().to_string()))
        })
        .collect();

    let mut grid = vec![std::iter::once("z \\ t".to_string()).chain(spec.ts.iter().map(|&t| format_complex(t))).collect::<Vec<_>>()];
    for (i, &z) in spec.zs.iter().enumerate() {
        let mut row = vec![format_complex(z)];
        row.extend(cells[i * spec.ts.len()..(i + 1) * spec.ts.len()].iter().cloned());
        grid.push(row);
    }
    let width: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &grid {
        let line: Vec<String> = row.iter().zip(&width).map(|(text, &w)| format!("{text:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
