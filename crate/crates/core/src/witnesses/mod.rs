//! Generator antichains of the named witness families.

mod columns;
mod linear;

use std::fmt;
use std::path::Path;

pub use columns::{columns_condition, ColumnsPartition, ColumnsVariant, SpanTarget, SpanWitness, MAX_COLUMNS};
pub use linear::LinearSystem;

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::set::{Bound, ElemSet};

/// Folkman sources enumerate `2^m - 1` subset sums per base set.
pub const MAX_FOLKMAN_M: u32 = 16;

/// A rule producing the generators of a witness family at any bound.
#[derive(Clone, PartialEq, Eq)]
pub enum GeneratorSource {
    /// Arithmetic progressions `{a, a+d, ..., a+(l-1)d}` with `d >= 1`.
    Ap { length: u32 },
    /// Value sets of `x + y = z` with `x <= y` (`x < y` when distinct).
    Schur { distinct: bool },
    /// `FS(B)` for `|B| = m`.
    Folkman { m: u32, distinct: bool },
    /// Value sets of positive solutions of `A x = 0`.
    Linear { system: LinearSystem, distinct: bool },
    /// A fixed family; `origin` names where it came from (e.g. a file path).
    Custom { antichain: Antichain, origin: String },
}

impl GeneratorSource {
    pub fn ap(length: u32) -> Result<Self> {
        if length < 2 {
            return Err(Error::InvalidParameter(format!("AP length must be at least 2, got {length}")));
        }
        Ok(GeneratorSource::Ap { length })
    }

    pub fn schur(distinct: bool) -> Self {
        GeneratorSource::Schur { distinct }
    }

    pub fn folkman(m: u32, distinct: bool) -> Result<Self> {
        if m == 0 || m > MAX_FOLKMAN_M {
            return Err(Error::InvalidParameter(format!("Folkman m must be in 1..={MAX_FOLKMAN_M}, got {m}")));
        }
        Ok(GeneratorSource::Folkman { m, distinct })
    }

    pub fn linear(system: LinearSystem, distinct: bool) -> Self {
        GeneratorSource::Linear { system, distinct }
    }

    /// Parses `ap:<l>`, `schur[:distinct]`, `folkman:<m>[:distinct]`,
    /// `linear:<file>[:distinct]`, `linear:[1 1 -1][:distinct]` and
    /// `custom:<file>`. File paths are resolved relative to the working
    /// directory.
    pub fn parse(desc: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognized source {desc:?}"));
        let (kind, rest) = desc.split_once(':').unwrap_or((desc, ""));
        match kind {
            "ap" => {
                let l = rest.parse().map_err(|_| bad())?;
                Self::ap(l)
            }
            "schur" => match rest {
                "" => Ok(Self::schur(false)),
                "distinct" => Ok(Self::schur(true)),
                _ => Err(bad()),
            },
            "folkman" => {
                let (m, flag) = rest.split_once(':').unwrap_or((rest, ""));
                let distinct = match flag {
                    "" => false,
                    "distinct" => true,
                    _ => return Err(bad()),
                };
                Self::folkman(m.parse().map_err(|_| bad())?, distinct)
            }
            "linear" => {
                let (body, distinct) = match rest.strip_suffix(":distinct") {
                    Some(b) => (b, true),
                    None => (rest, false),
                };
                let system = if body.trim_start().starts_with('[') {
                    LinearSystem::parse_inline(body)?
                } else {
                    LinearSystem::parse(&read_file(body)?)?
                };
                Ok(Self::linear(system, distinct))
            }
            "custom" if !rest.is_empty() => {
                let antichain = Antichain::parse(&read_file(rest)?)?;
                Ok(GeneratorSource::Custom { antichain, origin: rest.to_string() })
            }
            _ => Err(bad()),
        }
    }

    /// Canonical descriptor. Linear systems are rendered inline so the
    /// descriptor does not depend on a file path.
    pub fn descriptor(&self) -> String {
        let flag = |d: bool| if d { ":distinct" } else { "" };
        match self {
            GeneratorSource::Ap { length } => format!("ap:{length}"),
            GeneratorSource::Schur { distinct } => format!("schur{}", flag(*distinct)),
            GeneratorSource::Folkman { m, distinct } => format!("folkman:{m}{}", flag(*distinct)),
            GeneratorSource::Linear { system, distinct } => format!("linear:{}{}", system.to_inline(), flag(*distinct)),
            GeneratorSource::Custom { origin, .. } => format!("custom:{origin}"),
        }
    }
}

impl fmt::Display for GeneratorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl fmt::Debug for GeneratorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorSource({})", self.descriptor())
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::io(path, e))
}

/// The generator antichain of `src` over `[1..bound]`.
///
/// A source with no witness inside the bound yields the empty family; `Par_k`
/// of the empty family is refuted by every coloring.
pub fn generate(src: &GeneratorSource, bound: Bound) -> Result<Antichain> {
    if let GeneratorSource::Custom { antichain, .. } = src {
        return antichain.at_bound(bound);
    }
    let mut sets = Vec::new();
    enumerate(src, bound, |elems| {
        sets.push(ElemSet::from_elems(bound, elems.iter().copied()).expect("witness inside bound"));
    });
    Ok(Antichain::reduce(bound, sets))
}

/// Size of the enumeration behind [`generate`] before antichain reduction;
/// closed form for APs.
pub fn expected_generator_count(src: &GeneratorSource, bound: Bound) -> u64 {
    let n = bound.n() as u64;
    match src {
        GeneratorSource::Ap { length } => {
            let step = (*length as u64 - 1).max(1);
            (1..).map(|d| n.saturating_sub(step * d)).take_while(|&c| c > 0).sum()
        }
        GeneratorSource::Custom { antichain, .. } => {
            antichain.generators().iter().filter(|g| g.max_elem().is_some_and(|m| m <= bound.n())).count() as u64
        }
        _ => {
            let mut count = 0;
            enumerate(src, bound, |_| count += 1);
            count
        }
    }
}

/// Calls `emit` once per witness (as a possibly-unsorted element list).
fn enumerate(src: &GeneratorSource, bound: Bound, mut emit: impl FnMut(&[u32])) {
    let n = bound.n();
    match src {
        GeneratorSource::Ap { length } => {
            let l = *length;
            for d in 1.. {
                let span = (l - 1) * d;
                if span >= n {
                    break;
                }
                for a in 1..=n - span {
                    let ap: Vec<u32> = (0..l).map(|i| a + i * d).collect();
                    emit(&ap);
                }
            }
        }
        GeneratorSource::Schur { distinct } => {
            for x in 1..=n / 2 {
                let y0 = if *distinct { x + 1 } else { x };
                for y in y0..=n - x {
                    emit(&[x, y, x + y]);
                }
            }
        }
        GeneratorSource::Folkman { m, distinct } => {
            let mut base = Vec::with_capacity(*m as usize);
            folkman_bases(*m as usize, 1, 0, n, &mut base, &mut |b| {
                let sums = subset_sums(b);
                if *distinct && sums.len() < (1usize << b.len()) - 1 {
                    return;
                }
                emit(&sums);
            });
        }
        GeneratorSource::Linear { system, distinct } => {
            system.for_each_solution(n, |x| {
                if *distinct && !pairwise_distinct(x) {
                    return;
                }
                emit(x);
            });
        }
        GeneratorSource::Custom { antichain, .. } => {
            for g in antichain.generators() {
                if g.max_elem().is_some_and(|m| m <= n) {
                    emit(&g.to_vec());
                }
            }
        }
    }
}

/// `B = {b_1 < ... < b_m}` with `Σ B <= n`.
fn folkman_bases(m: usize, from: u32, sum: u32, n: u32, base: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if base.len() == m {
        f(base);
        return;
    }
    let left = (m - base.len()) as u32;
    // the remaining `left` elements are at least b, b+1, ..., b+left-1
    let mut b = from;
    while sum as u64 + left as u64 * b as u64 + (left as u64 * (left as u64 - 1)) / 2 <= n as u64 {
        base.push(b);
        folkman_bases(m, b + 1, sum + b, n, base, f);
        base.pop();
        b += 1;
    }
}

/// Distinct nonempty subset sums, ascending.
fn subset_sums(b: &[u32]) -> Vec<u32> {
    let mut sums: Vec<u32> = (1u32..(1 << b.len()))
        .map(|mask| b.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).sum())
        .collect();
    sums.sort_unstable();
    sums.dedup();
    sums
}

fn pairwise_distinct(x: &[u32]) -> bool {
    let mut v = x.to_vec();
    v.sort_unstable();
    x.len() != 1 && v.windows(2).all(|w| w[0] != w[1])
}

/// A witness family indexed by a length parameter, as used for block
/// extraction: `F_m` is `at_length(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorFamily {
    Ap,
    Folkman { distinct: bool },
    /// Ignores the length parameter.
    Fixed(GeneratorSource),
}

impl GeneratorFamily {
    /// `ap`, `folkman[:distinct]`, or any fixed source descriptor.
    pub fn parse(desc: &str) -> Result<Self> {
        match desc {
            "ap" => Ok(GeneratorFamily::Ap),
            "folkman" => Ok(GeneratorFamily::Folkman { distinct: false }),
            "folkman:distinct" => Ok(GeneratorFamily::Folkman { distinct: true }),
            other => GeneratorSource::parse(other).map(GeneratorFamily::Fixed),
        }
    }

    pub fn at_length(&self, m: u32) -> Result<GeneratorSource> {
        match self {
            GeneratorFamily::Ap => GeneratorSource::ap(m),
            GeneratorFamily::Folkman { distinct } => GeneratorSource::folkman(m, *distinct),
            GeneratorFamily::Fixed(src) => Ok(src.clone()),
        }
    }
}
