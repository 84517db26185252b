use std::fmt;

use crate::error::{Error, Result};

/// Homogeneous integer system `A x = 0`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl LinearSystem {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("linear system needs at least one row and one column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {rows}x{cols} system, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(LinearSystem { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged rows in linear system".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Parses the file format: a `rows cols` line followed by one line of
    /// integers per row. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `rows cols` header"))?;
        let dims = parse_ints(hl, header)?;
        let [rows, cols] = dims[..] else {
            return Err(Error::parse(hl, "header must be `rows cols`"));
        };
        if rows <= 0 || cols <= 0 {
            return Err(Error::parse(hl, "rows and cols must be positive"));
        }
        let (rows, cols) = (rows as usize, cols as usize);
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (ln, line) in lines {
            let row = parse_ints(ln, line)?;
            if row.len() != cols {
                return Err(Error::parse(ln, format!("expected {cols} integers, found {}", row.len())));
            }
            seen += 1;
            if seen > rows {
                return Err(Error::parse(ln, format!("more than {rows} rows")));
            }
            entries.extend(row);
        }
        if seen != rows {
            return Err(Error::parse(hl, format!("header declares {rows} rows, found {seen}")));
        }
        Self::new(rows, cols, entries)
    }

    /// Inline form `[a b c; d e f]`.
    pub fn parse_inline(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidParameter(format!("inline system must look like [1 1 -1], got {s:?}")))?;
        let rows = body
            .split(';')
            .map(|r| {
                r.split_whitespace()
                    .map(|t| {
                        // accept the unicode minus sign
                        t.replace('\u{2212}', "-")
                            .parse::<i64>()
                            .map_err(|_| Error::InvalidParameter(format!("bad coefficient {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    pub fn to_inline(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Calls `visit` on every solution `x ∈ [1..n]^cols` of `A x = 0`.
    ///
    /// One column with a nonzero entry is solved for; the others are
    /// enumerated, so the cost is `n^(cols-1)`.
    pub(crate) fn for_each_solution(&self, n: u32, mut visit: impl FnMut(&[u32])) {
        let solved = (0..self.cols).rev().find(|&j| (0..self.rows).any(|i| self.get(i, j) != 0));
        let mut x = vec![1u32; self.cols];
        let free: Vec<usize> = (0..self.cols).filter(|&j| Some(j) != solved).collect();
        self.enumerate(&free, 0, solved, n, &mut x, &mut visit);
    }

    fn enumerate(
        &self,
        free: &[usize],
        depth: usize,
        solved: Option<usize>,
        n: u32,
        x: &mut [u32],
        visit: &mut impl FnMut(&[u32]),
    ) {
        if depth == free.len() {
            if let Some(s) = solved {
                let pivot_row = (0..self.rows).find(|&i| self.get(i, s) != 0).expect("solved column is nonzero");
                let a = self.get(pivot_row, s) as i128;
                let rest: i128 = (0..self.cols)
                    .filter(|&j| j != s)
                    .map(|j| self.get(pivot_row, j) as i128 * x[j] as i128)
                    .sum();
                if rest % a != 0 {
                    return;
                }
                let v = -rest / a;
                if v < 1 || v > n as i128 {
                    return;
                }
                x[s] = v as u32;
            }
            let ok = (0..self.rows)
                .all(|i| (0..self.cols).map(|j| self.get(i, j) as i128 * x[j] as i128).sum::<i128>() == 0);
            if ok {
                visit(x);
            }
            return;
        }
        let j = free[depth];
        for v in 1..=n {
            x[j] = v;
            self.enumerate(free, depth + 1, solved, n, x, visit);
        }
    }
}

fn parse_ints(line_no: usize, line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| {
            t.replace('\u{2212}', "-").parse::<i64>().map_err(|_| Error::parse(line_no, format!("bad integer {t:?}")))
        })
        .collect()
}

impl fmt::Debug for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSystem{}", self.to_inline())
    }
}
