//! Rado's columns condition, decided exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{combine, express_in_span, lift, ExactInt, Frac};
use crate::witnesses::LinearSystem;

/// Exhaustive search is over subsets of columns.
pub const MAX_COLUMNS: usize = 24;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnsVariant {
    /// Every column of `P_i` (`i > 1`) lies in the span of the earlier parts.
    #[default]
    Paper,
    /// The sum of the columns of `P_i` lies in the span of the earlier parts.
    Classical,
}

impl std::str::FromStr for ColumnsVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ColumnsVariant::Paper),
            "classical" => Ok(ColumnsVariant::Classical),
            other => Err(Error::InvalidParameter(format!("unknown columns variant {other:?}"))),
        }
    }
}

impl fmt::Display for ColumnsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnsVariant::Paper => "paper",
            ColumnsVariant::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanTarget {
    /// A single column (0-based).
    Column(usize),
    /// The column sum of part `i` (0-based part index).
    PartSum(usize),
}

/// `target = Σ coeffs[j] · column(basis[j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanWitness<T: ExactInt> {
    pub target: SpanTarget,
    pub basis: Vec<usize>,
    pub coeffs: Vec<Frac<T>>,
}

/// Ordered partition of the column indices (0-based) with its span witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnsPartition<T: ExactInt> {
    pub variant: ColumnsVariant,
    pub parts: Vec<Vec<usize>>,
    pub witnesses: Vec<SpanWitness<T>>,
}

/// Searches for a columns partition. `P_1` ranges over the nonempty zero-sum
/// column subsets in ascending bitmask order; the remaining parts are built
/// by span closure.
pub fn columns_condition<T: ExactInt>(
    sys: &LinearSystem,
    variant: ColumnsVariant,
) -> Result<Option<ColumnsPartition<T>>> {
    let c = sys.cols();
    if c > MAX_COLUMNS {
        return Err(Error::InvalidParameter(format!("columns condition supports at most {MAX_COLUMNS} columns")));
    }
    let cols = sys.columns();
    for mask in 1u32..(1u32 << c) {
        let members = mask_members(mask, c);
        if !sums_to_zero(&cols, &members) {
            continue;
        }
        let found = match variant {
            ColumnsVariant::Paper => close_paper::<T>(&cols, members)?,
            ColumnsVariant::Classical => close_classical::<T>(&cols, members)?,
        };
        if let Some((parts, witnesses)) = found {
            return Ok(Some(ColumnsPartition { variant, parts, witnesses }));
        }
    }
    Ok(None)
}

fn mask_members(mask: u32, c: usize) -> Vec<usize> {
    (0..c).filter(|j| mask >> j & 1 == 1).collect()
}

fn sums_to_zero(cols: &[Vec<i64>], members: &[usize]) -> bool {
    let dim = cols[0].len();
    (0..dim).all(|i| members.iter().map(|&j| cols[j][i] as i128).sum::<i128>() == 0)
}

fn pick(cols: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter().map(|&j| cols[j].clone()).collect()
}

type Closure<T> = Option<(Vec<Vec<usize>>, Vec<SpanWitness<T>>)>;

fn close_paper<T: ExactInt>(cols: &[Vec<i64>], first: Vec<usize>) -> Result<Closure<T>> {
    // span(P_1 ∪ P_2) = span(P_1) once P_2 ⊆ span(P_1), so closure stops after one step.
    let basis = pick(cols, &first);
    let rest: Vec<usize> = (0..cols.len()).filter(|j| !first.contains(j)).collect();
    let mut witnesses = Vec::with_capacity(rest.len());
    for &j in &rest {
        match express_in_span::<T>(&basis, &cols[j])? {
            Some(coeffs) => witnesses.push(SpanWitness { target: SpanTarget::Column(j), basis: first.clone(), coeffs }),
            None => return Ok(None),
        }
    }
    let mut parts = vec![first];
    if !rest.is_empty() {
        parts.push(rest);
    }
    Ok(Some((parts, witnesses)))
}

fn close_classical<T: ExactInt>(cols: &[Vec<i64>], first: Vec<usize>) -> Result<Closure<T>> {
    // Any subset usable now stays usable (minus already-used columns) after the
    // span grows, so the order in which parts are taken does not matter.
    let dim = cols[0].len();
    let mut used = first.clone();
    let mut parts = vec![first];
    let mut witnesses = Vec::new();
    loop {
        let rest: Vec<usize> = (0..cols.len()).filter(|j| !used.contains(j)).collect();
        if rest.is_empty() {
            return Ok(Some((parts, witnesses)));
        }
        let basis = pick(cols, &used);
        let mut next = None;
        for mask in 1u32..(1u32 << rest.len()) {
            let part: Vec<usize> = mask_members(mask, rest.len()).into_iter().map(|i| rest[i]).collect();
            let sum: Vec<i64> = (0..dim)
                .map(|i| {
                    let s: i128 = part.iter().map(|&j| cols[j][i] as i128).sum();
                    i64::try_from(s).map_err(|_| Error::Overflow)
                })
                .collect::<Result<_>>()?;
            if let Some(coeffs) = express_in_span::<T>(&basis, &sum)? {
                next = Some((part, coeffs));
                break;
            }
        }
        let Some((part, coeffs)) = next else { return Ok(None) };
        witnesses.push(SpanWitness { target: SpanTarget::PartSum(parts.len()), basis: used.clone(), coeffs });
        used.extend(&part);
        parts.push(part);
    }
}

impl<T: ExactInt> ColumnsPartition<T> {
    /// Re-checks the partition against `sys` by exact re-multiplication of
    /// every witness. Does not reuse the search.
    pub fn verify(&self, sys: &LinearSystem) -> Result<bool> {
        let cols = sys.columns();
        let c = cols.len();
        let dim = sys.rows();

        let mut part_of = vec![usize::MAX; c];
        for (p, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return Ok(false);
            }
            for &j in part {
                if j >= c || part_of[j] != usize::MAX {
                    return Ok(false);
                }
                part_of[j] = p;
            }
        }
        if part_of.contains(&usize::MAX) || self.parts.is_empty() {
            return Ok(false);
        }
        if !sums_to_zero(&cols, &self.parts[0]) {
            return Ok(false);
        }

        let mut covered = Vec::new();
        for w in &self.witnesses {
            let (target_part, target_vec) = match w.target {
                SpanTarget::Column(j) if j < c => (part_of[j], lift::<T>(&cols[j])?),
                SpanTarget::PartSum(p) if p < self.parts.len() => {
                    let mut acc = vec![Frac::zero(); dim];
                    for &j in &self.parts[p] {
                        let v = lift::<T>(&cols[j])?;
                        for (a, x) in acc.iter_mut().zip(v) {
                            *a = a.checked_add(&x).ok_or(Error::Overflow)?;
                        }
                    }
                    (p, acc)
                }
                _ => return Ok(false),
            };
            if w.basis.len() != w.coeffs.len()
                || w.basis.iter().any(|&j| j >= c || part_of[j] >= target_part)
            {
                return Ok(false);
            }
            if combine(&pick(&cols, &w.basis), &w.coeffs, dim)? != target_vec {
                return Ok(false);
            }
            covered.push(w.target);
        }

        let required: Vec<SpanTarget> = match self.variant {
            ColumnsVariant::Paper => {
                self.parts.iter().skip(1).flatten().map(|&j| SpanTarget::Column(j)).collect()
            }
            ColumnsVariant::Classical => (1..self.parts.len()).map(SpanTarget::PartSum).collect(),
        };
        Ok(required.iter().all(|t| covered.contains(t)))
    }
}

impl<T: ExactInt> fmt::Display for ColumnsPartition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let cols: Vec<String> = part.iter().map(|j| (j + 1).to_string()).collect();
            write!(f, "P_{}={{{}}}", i + 1, cols.join(","))?;
        }
        Ok(())
    }
}
