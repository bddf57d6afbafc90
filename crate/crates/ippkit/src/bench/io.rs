//! Text problem files and CSV trace files.
//!
//! Problem files start with a header line, `LASSO n m density gamma seed` or
//! `LCQP n m r density seed`, followed by named sections: `MATRIX <name> coo`
//! with one `i j v` triplet per line and `VECTOR <name>` with one value per
//! line. Floats are written with 17 significant digits so that reading a file
//! back reproduces every value exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::generators::{LassoInstance, LcqpInstance};
use crate::error::{OptError, Result};
use crate::linalg::{Matrix, Vector};
use crate::trace::{RunStatus, RunTrace, TraceRow};

/// A generated benchmark instance.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemInstance {
    /// Unconstrained ℓ₁-regularized least squares.
    Lasso(LassoInstance),
    /// Box- and equality-constrained quadratic program.
    Lcqp(LcqpInstance),
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_matrix(out: &mut String, name: &str, a: &Matrix) {
    writeln!(out, "MATRIX {name} coo").unwrap();
    for ((i, j), v) in a.indexed_iter() {
        if *v != 0.0 {
            writeln!(out, "{i} {j} {}", fmt_f64(*v)).unwrap();
        }
    }
}

fn write_vector(out: &mut String, name: &str, v: &Vector) {
    writeln!(out, "VECTOR {name}").unwrap();
    for x in v {
        writeln!(out, "{}", fmt_f64(*x)).unwrap();
    }
}

/// Serializes an instance to the text format.
pub fn problem_to_string(p: &ProblemInstance) -> String {
    let mut out = String::new();
    match p {
        ProblemInstance::Lasso(l) => {
            writeln!(out, "LASSO {} {} {} {} {}", l.n(), l.m(), fmt_f64(l.density), fmt_f64(l.gamma), l.seed).unwrap();
            write_matrix(&mut out, "A", &l.a);
            write_vector(&mut out, "b", &l.b);
        }
        ProblemInstance::Lcqp(q) => {
            writeln!(out, "LCQP {} {} {} {} {}", q.n(), q.m(), q.rank, fmt_f64(q.density), q.seed).unwrap();
            write_matrix(&mut out, "M", &q.m_mat);
            write_vector(&mut out, "c", &q.c);
            write_matrix(&mut out, "A", &q.a);
            write_vector(&mut out, "b", &q.b);
        }
    }
    out
}

/// Writes an instance to `path`.
pub fn write_problem(path: &Path, p: &ProblemInstance) -> Result<()> {
    fs::write(path, problem_to_string(p))?;
    Ok(())
}

enum Section {
    Matrix(Vec<(usize, usize, f64)>),
    Vector(Vec<f64>),
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> OptError {
    OptError::Usage(format!("problem file line {line}: {msg}"))
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what}")))
}

fn take_matrix(sections: &mut HashMap<String, Section>, name: &str, rows: usize, cols: usize) -> Result<Matrix> {
    match sections.remove(name) {
        Some(Section::Matrix(entries)) => {
            let mut a = Matrix::zeros((rows, cols));
            for (i, j, v) in entries {
                if i >= rows || j >= cols {
                    return Err(OptError::Usage(format!("entry ({i},{j}) outside {rows}x{cols} matrix {name}")));
                }
                a[[i, j]] = v;
            }
            Ok(a)
        }
        _ => Err(OptError::Usage(format!("missing matrix section {name}"))),
    }
}

fn take_vector(sections: &mut HashMap<String, Section>, name: &str, len: usize) -> Result<Vector> {
    match sections.remove(name) {
        Some(Section::Vector(v)) if v.len() == len => Ok(Vector::from(v)),
        Some(Section::Vector(v)) => Err(OptError::Usage(format!("vector {name} has {} entries, expected {len}", v.len()))),
        _ => Err(OptError::Usage(format!("missing vector section {name}"))),
    }
}

/// Parses the text format.
pub fn problem_from_str(text: &str) -> Result<ProblemInstance> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| OptError::Usage("empty problem file".into()))?;
    let mut sections: HashMap<String, Section> = HashMap::new();
    let mut current: Option<String> = None;
    for (idx, line) in lines {
        let ln = idx + 1;
        let mut toks = line.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first {
            "MATRIX" => {
                let name: String = parse(toks.next(), ln, "matrix name")?;
                if toks.next() != Some("coo") {
                    return Err(parse_err(ln, "only coo matrices are supported"));
                }
                sections.insert(name.clone(), Section::Matrix(Vec::new()));
                current = Some(name);
            }
            "VECTOR" => {
                let name: String = parse(toks.next(), ln, "vector name")?;
                sections.insert(name.clone(), Section::Vector(Vec::new()));
                current = Some(name);
            }
            _ => {
                let name = current.as_ref().ok_or_else(|| parse_err(ln, "data before any section"))?;
                match sections.get_mut(name) {
                    Some(Section::Matrix(entries)) => {
                        let i = parse(Some(first), ln, "row index")?;
                        let j = parse(toks.next(), ln, "column index")?;
                        let v = parse(toks.next(), ln, "value")?;
                        entries.push((i, j, v));
                    }
                    Some(Section::Vector(values)) => values.push(parse(Some(first), ln, "value")?),
                    None => unreachable!("current section is always registered"),
                }
            }
        }
    }
    let mut h = header.split_whitespace();
    let kind = h.next().unwrap_or("");
    let n: usize = parse(h.next(), 1, "n")?;
    let m: usize = parse(h.next(), 1, "m")?;
    match kind {
        "LASSO" => {
            let density = parse(h.next(), 1, "density")?;
            let gamma = parse(h.next(), 1, "gamma")?;
            let seed = parse(h.next(), 1, "seed")?;
            let a = take_matrix(&mut sections, "A", m, n)?;
            let b = take_vector(&mut sections, "b", m)?;
            Ok(ProblemInstance::Lasso(LassoInstance { a, b, gamma, density, seed }))
        }
        "LCQP" => {
            let rank = parse(h.next(), 1, "rank")?;
            let density = parse(h.next(), 1, "density")?;
            let seed = parse(h.next(), 1, "seed")?;
            let m_mat = take_matrix(&mut sections, "M", n, n)?;
            let c = take_vector(&mut sections, "c", n)?;
            let a = take_matrix(&mut sections, "A", m, n)?;
            let b = take_vector(&mut sections, "b", m)?;
            Ok(ProblemInstance::Lcqp(LcqpInstance { m_mat, c, a, b, rank, density, seed }))
        }
        other => Err(parse_err(1, format!("unknown problem kind {other:?}"))),
    }
}

/// Reads an instance from `path`.
pub fn read_problem(path: &Path) -> Result<ProblemInstance> {
    problem_from_str(&fs::read_to_string(path)?)
}

/// Column order of trace files.
pub const TRACE_HEADER: [&str; 10] = [
    "outer_iter",
    "inner_iters",
    "prox_evals",
    "grad_evals",
    "wall_time_s",
    "objective",
    "gap_estimate",
    "feasibility",
    "grad_map_norm",
    "dual_norm",
];

/// Writes a trace as CSV with a header row.
pub fn write_trace<W: std::io::Write>(writer: W, trace: &RunTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRACE_HEADER)?;
    for r in &trace.rows {
        w.write_record([
            r.outer_iter.to_string(),
            r.inner_iters.to_string(),
            r.prox_evals.to_string(),
            r.grad_evals.to_string(),
            r.wall_time_s.to_string(),
            r.objective.to_string(),
            r.gap_estimate.to_string(),
            r.feasibility.to_string(),
            r.grad_map_norm.to_string(),
            r.dual_norm.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trace written by [`write_trace`].
pub fn read_trace<R: std::io::Read>(reader: R) -> Result<RunTrace> {
    let mut rd = csv::Reader::from_reader(reader);
    if rd.headers()?.iter().ne(TRACE_HEADER) {
        return Err(OptError::Usage("trace header does not match the expected columns".into()));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| OptError::Usage(format!("bad number {:?} in trace", &rec[i])))
        };
        let u = |i: usize| -> Result<usize> {
            rec[i].parse().map_err(|_| OptError::Usage(format!("bad count {:?} in trace", &rec[i])))
        };
        rows.push(TraceRow {
            outer_iter: u(0)?,
            inner_iters: u(1)?,
            prox_evals: u(2)?,
            grad_evals: u(3)?,
            wall_time_s: f(4)?,
            objective: f(5)?,
            gap_estimate: f(6)?,
            feasibility: f(7)?,
            grad_map_norm: f(8)?,
            dual_norm: f(9)?,
        });
    }
    Ok(RunTrace { rows })
}

/// Path of the status file stored next to a trace file.
pub fn status_path(trace_path: &Path) -> std::path::PathBuf {
    let mut s = trace_path.as_os_str().to_owned();
    s.push(".status");
    s.into()
}

/// Writes `converged` or `budget_exhausted` next to a trace file.
pub fn write_status(trace_path: &Path, status: RunStatus) -> Result<()> {
    let text = match status {
        RunStatus::Converged => "converged\n",
        RunStatus::BudgetExhausted => "budget_exhausted\n",
    };
    fs::write(status_path(trace_path), text)?;
    Ok(())
}

/// Reads the status stored next to a trace file; a missing file means converged.
pub fn read_status(trace_path: &Path) -> Result<RunStatus> {
    match fs::read_to_string(status_path(trace_path)) {
        Ok(s) if s.trim() == "budget_exhausted" => Ok(RunStatus::BudgetExhausted),
        Ok(s) if s.trim() == "converged" => Ok(RunStatus::Converged),
        Ok(s) => Err(OptError::Usage(format!("unknown run status {:?}", s.trim()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(RunStatus::Converged),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generators::{gen_lasso, gen_lcqp};

    #[test]
    fn round_trip_is_exact() {
        for p in [
            ProblemInstance::Lasso(gen_lasso(7, 4, 0.5, 0.3, 11).unwrap()),
            ProblemInstance::Lcqp(gen_lcqp(8, 3, 2, 0.4, 12).unwrap()),
        ] {
            assert_eq!(problem_from_str(&problem_to_string(&p)).unwrap(), p);
        }
    }

    #[test]
    fn malformed_files_are_usage_errors() {
        assert!(matches!(problem_from_str("QP 1 1 0"), Err(OptError::Usage(_))));
        assert!(matches!(problem_from_str("LASSO 2 1 0.5 0.5 1\nVECTOR b\n1.0\n"), Err(OptError::Usage(_))));
    }

    #[test]
    fn trace_round_trip() {
        let row = TraceRow {
            outer_iter: 1,
            inner_iters: 2,
            prox_evals: 3,
            grad_evals: 4,
            wall_time_s: 0.5,
            objective: 1.25,
            gap_estimate: f64::NAN,
            feasibility: 0.0,
            grad_map_norm: 1e-3,
            dual_norm: 2.0,
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, &RunTrace { rows: vec![row] }).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        assert_eq!(back.rows[0].prox_evals, 3);
        assert!(back.rows[0].gap_estimate.is_nan());
        assert_eq!(back.rows[0].grad_map_norm, 1e-3);
    }
}
