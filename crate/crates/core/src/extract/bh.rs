//! Monochromatic block extraction: disjoint blocks `F_1..F_t`, each a
//! generator of its own family, such that the coloring is constant on every
//! `r`-subset meeting each block at most once.

use std::collections::HashMap;

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::extract::{BlockSequence, PairColoring};
use crate::search::SearchStats;
use crate::set::ElemSet;
use crate::witnesses::{generate, GeneratorFamily, GeneratorSource};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockExtraction {
    pub blocks: BlockSequence,
    /// `generators[i]` is a generator of `sources[i]` inside `blocks[i]`.
    pub generators: Vec<ElemSet>,
    pub sources: Vec<GeneratorSource>,
    /// The common color of all transversal `r`-subsets (1 when there are none).
    pub color: u32,
    pub arity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractOptions {
    pub budget: Option<u64>,
    /// For `r = 1` with AP sources, first look for one monochromatic AP of
    /// the total length and cut it into consecutive pieces.
    pub fast_path: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { budget: None, fast_path: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractOutcome {
    /// `None` means the search space at this bound was exhausted.
    pub extraction: Option<BlockExtraction>,
    pub nodes: u64,
    pub via_fast_path: bool,
}

/// `F_{m_1}, ..., F_{m_t}` for a length-indexed family.
pub fn sources_for(family: &GeneratorFamily, lengths: &[u32]) -> Result<Vec<GeneratorSource>> {
    if lengths.is_empty() {
        return Err(Error::EmptyInput);
    }
    lengths.iter().map(|&m| family.at_length(m)).collect()
}

struct Budget {
    nodes: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExhausted(SearchStats { nodes: self.nodes - 1 }));
        }
        Ok(())
    }
}

/// Searches for a block extraction. Blocks are filled left to right, each
/// trying its family's generators in canonical order, and every placement is
/// checked against the transversal subsets it completes.
///
/// `Ok` with no extraction means the search was exhausted; running out of
/// budget is `Err(BudgetExhausted)`.
pub fn bh_extract(c: &PairColoring, sources: &[GeneratorSource], opts: &ExtractOptions) -> Result<ExtractOutcome> {
    if sources.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut budget = Budget { nodes: 0, limit: opts.budget.unwrap_or(u64::MAX) };

    if opts.fast_path && c.arity() == 1 {
        let lengths: Option<Vec<u32>> = sources
            .iter()
            .map(|s| match s {
                GeneratorSource::Ap { length } => Some(*length),
                _ => None,
            })
            .collect();
        if let Some(lengths) = lengths {
            if let Some(x) = consecutive_split(c, sources, &lengths, &mut budget)? {
                debug_assert!(verify_extraction(c, &x));
                return Ok(ExtractOutcome { extraction: Some(x), nodes: budget.nodes, via_fast_path: true });
            }
        }
    }

    let mut families: HashMap<String, Antichain> = HashMap::new();
    let mut candidates: Vec<Vec<Vec<u32>>> = Vec::with_capacity(sources.len());
    for src in sources {
        let key = src.descriptor();
        if !families.contains_key(&key) {
            families.insert(key.clone(), generate(src, c.bound())?);
        }
        candidates.push(families[&key].generators().iter().map(ElemSet::to_vec).collect());
    }

    let mut state = Backtrack {
        c,
        r: c.arity() as usize,
        candidates: &candidates,
        chosen: Vec::with_capacity(sources.len()),
        used: vec![false; c.bound().n() as usize + 1],
        budget: &mut budget,
    };
    let found = state.place(None)?;
    let extraction = match found {
        Some((chosen, color)) => {
            let sets = chosen
                .iter()
                .map(|g| ElemSet::from_elems(c.bound(), g.iter().copied()))
                .collect::<Result<Vec<_>>>()?;
            Some(BlockExtraction {
                blocks: BlockSequence::new(sets.clone())?,
                generators: sets,
                sources: sources.to_vec(),
                color: color.unwrap_or(1),
                arity: c.arity(),
            })
        }
        None => None,
    };
    if let Some(x) = &extraction {
        debug_assert!(verify_extraction(c, x));
    }
    Ok(ExtractOutcome { extraction, nodes: budget.nodes, via_fast_path: false })
}

/// First monochromatic AP of length `Σ lengths` in `(start, step)` order,
/// cut into consecutive runs.
fn consecutive_split(
    c: &PairColoring,
    sources: &[GeneratorSource],
    lengths: &[u32],
    budget: &mut Budget,
) -> Result<Option<BlockExtraction>> {
    let n = c.bound().n() as u64;
    let total: u64 = lengths.iter().map(|&m| m as u64).sum();
    if total == 0 || total > n {
        return Ok(None);
    }
    for a in 1..=n {
        let mut d = 1u64;
        while a + (total - 1) * d <= n {
            budget.tick()?;
            let q = c.color(&[a as u32]);
            if (1..total).all(|i| c.color(&[(a + i * d) as u32]) == q) {
                let mut blocks = Vec::with_capacity(lengths.len());
                let mut next = a;
                for &m in lengths {
                    let elems = (0..m as u64).map(|i| (next + i * d) as u32);
                    blocks.push(ElemSet::from_elems(c.bound(), elems)?);
                    next += m as u64 * d;
                }
                return Ok(Some(BlockExtraction {
                    blocks: BlockSequence::new(blocks.clone())?,
                    generators: blocks,
                    sources: sources.to_vec(),
                    color: q,
                    arity: 1,
                }));
            }
            d += 1;
        }
    }
    Ok(None)
}

type Found = Option<(Vec<Vec<u32>>, Option<u32>)>;

struct Backtrack<'a> {
    c: &'a PairColoring,
    r: usize,
    candidates: &'a [Vec<Vec<u32>>],
    chosen: Vec<Vec<u32>>,
    used: Vec<bool>,
    budget: &'a mut Budget,
}

impl Backtrack<'_> {
    fn place(&mut self, color: Option<u32>) -> Result<Found> {
        let i = self.chosen.len();
        if i == self.candidates.len() {
            return Ok(Some((self.chosen.clone(), color)));
        }
        for g in &self.candidates[i] {
            self.budget.tick()?;
            if g.iter().any(|&e| self.used[e as usize]) {
                continue;
            }
            let Some(color) = self.consistent(g, color) else {
                continue;
            };
            for &e in g {
                self.used[e as usize] = true;
            }
            self.chosen.push(g.clone());
            let res = self.place(color)?;
            let g = self.chosen.pop().expect("just pushed");
            for &e in &g {
                self.used[e as usize] = false;
            }
            if res.is_some() {
                return Ok(res);
            }
        }
        Ok(None)
    }

    /// Checks every transversal subset using one element of `g` and `r - 1`
    /// elements from distinct earlier blocks. Returns the (possibly newly
    /// fixed) color, or `None` on a clash.
    fn consistent(&self, g: &[u32], color: Option<u32>) -> Option<Option<u32>> {
        let r = self.r;
        if r - 1 > self.chosen.len() {
            return Some(color);
        }
        let mut color = color;
        let mut pick = Vec::with_capacity(r);
        let mut combo: Vec<usize> = (0..r - 1).collect();
        loop {
            let ok = self.product(&combo, 0, &mut pick, &mut |subset: &[u32]| {
                let mut sorted = subset.to_vec();
                sorted.sort_unstable();
                for &x in g {
                    let mut s = sorted.clone();
                    let at = s.partition_point(|&y| y < x);
                    s.insert(at, x);
                    let q = self.c.color(&s);
                    match color {
                        None => color = Some(q),
                        Some(p) if p != q => return false,
                        _ => {}
                    }
                }
                true
            });
            if !ok {
                return None;
            }
            if !next_combo(&mut combo, self.chosen.len()) {
                return Some(color);
            }
        }
    }

    fn product(&self, combo: &[usize], at: usize, pick: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if at == combo.len() {
            return f(pick);
        }
        for &e in &self.chosen[combo[at]] {
            pick.push(e);
            let ok = self.product(combo, at + 1, pick, f);
            pick.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Next `combo.len()`-subset of `0..n` in lexicographic order.
fn next_combo(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks an extraction from scratch: blocks disjoint and inside the
/// coloring's bound, each claimed generator a generator of its family and
/// inside its block, and every transversal `r`-subset of the stated color.
pub fn verify_extraction(c: &PairColoring, x: &BlockExtraction) -> bool {
    let blocks = x.blocks.blocks();
    let t = blocks.len();
    if t == 0 || x.generators.len() != t || x.sources.len() != t || x.arity != c.arity() {
        return false;
    }
    if x.color == 0 || x.color > c.k() {
        return false;
    }
    let n = c.bound().n();
    if blocks.iter().any(|b| b.max_elem().is_none_or(|m| m > n)) {
        return false;
    }
    for i in 0..t {
        for j in i + 1..t {
            if !blocks[i].is_disjoint(&blocks[j]) {
                return false;
            }
        }
    }
    for ((block, g), src) in blocks.iter().zip(&x.generators).zip(&x.sources) {
        if !g.is_subset(block) {
            return false;
        }
        let Ok(family) = generate(src, c.bound()) else {
            return false;
        };
        let Ok(g) = g.with_bound(c.bound()) else {
            return false;
        };
        if !family.generators().contains(&g) {
            return false;
        }
    }

    // Every way to pick `r` distinct blocks and one element from each.
    let r = c.arity() as usize;
    let elems: Vec<Vec<u32>> = blocks.iter().map(ElemSet::to_vec).collect();
    fn walk(c: &PairColoring, elems: &[Vec<u32>], from: usize, left: usize, pick: &mut Vec<u32>, color: u32) -> bool {
        if left == 0 {
            let mut s = pick.clone();
            s.sort_unstable();
            return c.color(&s) == color;
        }
        for b in from..elems.len() {
            if elems.len() - b < left {
                break;
            }
            for &e in &elems[b] {
                pick.push(e);
                let ok = walk(c, elems, b + 1, left - 1, pick, color);
                pick.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    walk(c, &elems, 0, r, &mut Vec::with_capacity(r), x.color)
}
