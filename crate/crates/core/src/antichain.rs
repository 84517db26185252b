//! Upward-closed families over `[1..n]`, represented by their ⊆-minimal generators.

use std::collections::HashSet;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::set::{Bound, ElemSet};

/// The family `{ A ⊆ [1..n] : some generator G ⊆ A }`.
///
/// Generators are pairwise ⊆-incomparable, nonempty, and kept in canonical
/// order, so two equal families compare and serialize identically. A family
/// with no generators is allowed: it is the empty family, which no set
/// belongs to.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Antichain {
    bound: Bound,
    generators: Vec<ElemSet>,
}

/// Reduces `sets` to their ⊆-minimal members in canonical order.
///
/// Empty sets in the input are ignored.
pub fn normalize_antichain(sets: Vec<ElemSet>) -> Result<Antichain> {
    let bound = match sets.iter().find(|s| !s.is_empty()) {
        Some(s) => s.bound(),
        None => return Err(Error::EmptyInput),
    };
    if let Some(s) = sets.iter().find(|s| s.bound() != bound) {
        return Err(Error::BoundMismatch { expected: bound.n(), found: s.bound().n() });
    }
    Ok(Antichain::reduce(bound, sets))
}

impl Antichain {
    pub fn empty(bound: Bound) -> Self {
        Antichain { bound, generators: Vec::new() }
    }

    /// Like [`normalize_antichain`] but tolerates an all-empty input, which
    /// produces the empty family. All sets must already be over `bound`.
    pub(crate) fn reduce(bound: Bound, mut sets: Vec<ElemSet>) -> Antichain {
        sets.retain(|s| !s.is_empty());
        debug_assert!(sets.iter().all(|s| s.bound() == bound));
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.canonical_cmp(b)));
        sets.dedup();

        let mut kept: Vec<ElemSet> = Vec::with_capacity(sets.len());
        let mut kept_lookup: HashSet<Vec<u32>> = HashSet::new();
        // Start of the run of sets with the current cardinality; sets of equal
        // size cannot be proper subsets of one another.
        let mut smaller_end = 0;
        let mut run_len = 0;
        for s in sets {
            let len = s.len();
            if len != run_len {
                smaller_end = kept.len();
                run_len = len;
            }
            let absorbed = if len <= 16 && (1usize << len) < smaller_end {
                has_kept_subset(&s, &kept_lookup)
            } else {
                kept[..smaller_end].iter().any(|g| g.is_subset(&s))
            };
            if !absorbed {
                kept_lookup.insert(s.to_vec());
                kept.push(s);
            }
        }
        kept.sort_by(|a, b| a.canonical_cmp(b));
        Antichain { bound, generators: kept }
    }

    /// Wraps generators that are already a canonical antichain.
    fn from_canonical(bound: Bound, generators: Vec<ElemSet>) -> Antichain {
        Antichain { bound, generators }
    }

    #[inline]
    pub fn bound(&self) -> Bound {
        self.bound
    }

    #[inline]
    pub fn generators(&self) -> &[ElemSet] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether `a` contains some generator.
    pub fn member(&self, a: &ElemSet) -> Result<bool> {
        if a.bound() != self.bound {
            return Err(Error::BoundMismatch { expected: self.bound.n(), found: a.bound().n() });
        }
        Ok(self.first_generator_in(a).is_some())
    }

    /// First generator (canonical order) contained in `a`.
    pub fn first_generator_in(&self, a: &ElemSet) -> Option<&ElemSet> {
        self.generators.iter().find(|g| g.is_subset(a))
    }

    /// Keeps exactly the generators inside `[1..new_bound]`.
    pub fn restrict(&self, new_bound: Bound) -> Result<Antichain> {
        if new_bound > self.bound {
            return Err(Error::BoundMismatch { expected: self.bound.n(), found: new_bound.n() });
        }
        let generators = self
            .generators
            .iter()
            .filter(|g| g.max_elem().is_some_and(|m| m <= new_bound.n()))
            .map(|g| g.with_bound(new_bound))
            .collect::<Result<Vec<_>>>()?;
        Ok(Antichain::from_canonical(new_bound, generators))
    }

    /// Restricts when shrinking; re-embeds the same generators when growing.
    pub fn at_bound(&self, bound: Bound) -> Result<Antichain> {
        if bound <= self.bound {
            return self.restrict(bound);
        }
        let generators =
            self.generators.iter().map(|g| g.with_bound(bound)).collect::<Result<Vec<_>>>()?;
        Ok(Antichain::from_canonical(bound, generators))
    }

    /// Generators lying inside `domain`, over the same bound.
    pub fn within(&self, domain: &ElemSet) -> Result<Antichain> {
        if domain.bound() != self.bound {
            return Err(Error::BoundMismatch {
                expected: self.bound.n(),
                found: domain.bound().n(),
            });
        }
        let generators = self.generators.iter().filter(|g| g.is_subset(domain)).cloned().collect();
        Ok(Antichain::from_canonical(self.bound, generators))
    }

    /// Text form: header `antichain n=<bound> g=<count>`, then one generator
    /// per line as ascending space-separated integers.
    pub fn to_text(&self) -> String {
        let mut out = format!("antichain n={} g={}\n", self.bound, self.generators.len());
        for g in &self.generators {
            let line: Vec<String> = g.iter().map(|m| m.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Antichain> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| Error::parse(1, "missing antichain header"))?;
        let fields = parse_header(header, "antichain", &["n", "g"])
            .map_err(|msg| Error::parse(1, msg))?;
        let bound = Bound::new(fields[0]).map_err(|e| Error::parse(1, e.to_string()))?;
        let count = fields[1] as usize;

        let mut sets = Vec::with_capacity(count);
        for (lineno, line) in lines {
            if line.is_empty() {
                continue;
            }
            let elems = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| Error::parse(lineno, format!("bad integer {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let set = ElemSet::from_elems(bound, elems).map_err(|e| Error::parse(lineno, e.to_string()))?;
            sets.push(set);
        }
        if sets.len() != count {
            return Err(Error::parse(1, format!("header declares {count} generators, found {}", sets.len())));
        }
        Ok(Antichain::reduce(bound, sets))
    }

    /// SHA-256 of the text form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

fn has_kept_subset(s: &ElemSet, kept: &HashSet<Vec<u32>>) -> bool {
    let elems = s.to_vec();
    let full = (1u32 << elems.len()) - 1;
    // proper nonempty subsets
    (1..full).any(|mask| {
        let sub: Vec<u32> =
            elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        kept.contains(&sub)
    })
}

/// Parses `<tag> k1=v1 k2=v2 ...` with keys in the given order.
pub(crate) fn parse_header(line: &str, tag: &str, keys: &[&str]) -> std::result::Result<Vec<u64>, String> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(format!("expected header starting with `{tag}`"));
    }
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let tok = toks.next().ok_or_else(|| format!("missing `{key}=` in header"))?;
        let val = tok
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=`, found {tok:?}"))?;
        out.push(val.parse().map_err(|_| format!("bad value for `{key}`: {val:?}"))?);
    }
    if let Some(extra) = toks.next() {
        return Err(format!("unexpected header token {extra:?}"));
    }
    Ok(out)
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Antichain(n={}, {:?})", self.bound, self.generators)
    }
}
