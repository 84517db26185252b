//! DIMACS encoding of "some k-coloring of [1..n] has no monochromatic
//! generator". Variable `(e - 1)·k + q` means element `e` has color `q`.

use std::path::{Path, PathBuf};
use std::process::Command;

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::search::{Coloring, MAX_COLORS};
use crate::set::Bound;

/// Environment variable naming an external SAT solver executable.
pub const SOLVER_ENV: &str = "PARFILTER_SAT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// A model as a list of nonzero literals.
    Sat(Vec<i32>),
    Unsat,
}

pub fn var(e: u32, q: u32, k: u32) -> i32 {
    ((e - 1) * k + q) as i32
}

/// The clauses of the encoding, in output order.
pub fn encode(family: &Antichain, k: u32) -> Result<Cnf> {
    if family.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 || k > MAX_COLORS {
        return Err(Error::InvalidParameter(format!("k must be in 1..={MAX_COLORS}, got {k}")));
    }
    let n = family.bound().n();
    let mut clauses = Vec::new();
    for e in 1..=n {
        clauses.push((1..=k).map(|q| var(e, q, k)).collect());
        for q in 1..=k {
            for p in q + 1..=k {
                clauses.push(vec![-var(e, q, k), -var(e, p, k)]);
            }
        }
    }
    for g in family.generators() {
        for q in 1..=k {
            clauses.push(g.iter().map(|e| -var(e, q, k)).collect());
        }
    }
    Ok(Cnf { vars: n * k, clauses })
}

/// DIMACS text with a comment header recording `n`, `k` and the family digest.
pub fn export_cnf(family: &Antichain, k: u32) -> Result<String> {
    let cnf = encode(family, k)?;
    let mut out = String::new();
    out.push_str("c parfilter refutation encoding\n");
    out.push_str(&format!("c n={} k={} family={}\n", family.bound(), k, family.digest()));
    out.push_str(&format!("p cnf {} {}\n", cnf.vars, cnf.clauses.len()));
    for c in &cnf.clauses {
        for lit in c {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    Ok(out)
}

pub fn write_cnf(family: &Antichain, k: u32, path: &Path) -> Result<()> {
    let text = export_cnf(family, k)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::parse(ln, "duplicate problem line"));
            }
            let f: Vec<&str> = rest.split_whitespace().collect();
            let (vars, count) = match f.as_slice() {
                ["cnf", v, c] => (v.parse().ok(), c.parse().ok()),
                _ => (None, None),
            };
            match (vars, count) {
                (Some(v), Some(c)) => header = Some((v, c)),
                _ => return Err(Error::parse(ln, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::parse(ln, "clause before the problem line"));
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::parse(ln, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > vars {
                return Err(Error::parse(ln, format!("literal {lit} exceeds {vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(Error::parse(text.lines().count().max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(Error::parse(text.lines().count(), "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(Error::parse(1, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(Cnf { vars, clauses })
}

/// Checks that `cnf` is exactly the encoding of `(family, k)`, up to clause
/// and literal order.
pub fn validate_cnf(cnf: &Cnf, family: &Antichain, k: u32) -> Result<()> {
    let expected = encode(family, k)?;
    if cnf.vars != expected.vars {
        return Err(Error::InvalidParameter(format!("expected {} variables, found {}", expected.vars, cnf.vars)));
    }
    let canon = |c: &Cnf| {
        let mut cs: Vec<Vec<i32>> = c
            .clauses
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        cs.sort_unstable();
        cs
    };
    if canon(cnf) != canon(&expected) {
        return Err(Error::InvalidParameter("clauses differ from the expected encoding".into()));
    }
    Ok(())
}

/// Reads the coloring off a model: each element must have exactly one true
/// color variable.
pub fn decode_model(model: &[i32], bound: Bound, k: u32) -> Result<Coloring> {
    let vars = (bound.n() * k) as usize;
    let mut truth = vec![false; vars + 1];
    for &lit in model {
        let v = lit.unsigned_abs() as usize;
        if v == 0 || v > vars {
            return Err(Error::InvalidParameter(format!("model literal {lit} out of range")));
        }
        truth[v] = lit > 0;
    }
    let mut colors = Vec::with_capacity(bound.n() as usize);
    for e in 1..=bound.n() {
        let on: Vec<u32> = (1..=k).filter(|&q| truth[var(e, q, k) as usize]).collect();
        match on.as_slice() {
            [q] => colors.push(*q),
            _ => return Err(Error::InvalidParameter(format!("element {e} has {} colors in the model", on.len()))),
        }
    }
    Coloring::new(bound, k, &colors)
}

/// Parses competition-format solver output (`s ...` and `v ...` lines).
pub fn parse_solver_output(text: &str) -> Result<SatOutcome> {
    let mut status = None;
    let mut model = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| Error::parse(i + 1, format!("bad literal {tok:?}")))?;
                if lit != 0 {
                    model.push(lit);
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SatOutcome::Sat(model)),
        Some("UNSATISFIABLE") => Ok(SatOutcome::Unsat),
        Some(other) => Err(Error::InvalidParameter(format!("solver status {other:?}"))),
        None => Err(Error::InvalidParameter("solver printed no status line".into())),
    }
}

pub fn solver_from_env() -> Option<PathBuf> {
    std::env::var_os(SOLVER_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

/// Runs `exe <cnf_path>` and parses its standard output.
pub fn run_solver(exe: &Path, cnf_path: &Path) -> Result<SatOutcome> {
    let out = Command::new(exe).arg(cnf_path).output().map_err(|e| Error::io(exe, e))?;
    parse_solver_output(&String::from_utf8_lossy(&out.stdout))
}
