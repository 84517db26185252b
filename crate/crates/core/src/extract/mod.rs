//! Finite block objects: the Furstenberg–Weiss blocks, first-generator
//! selection, and monochromatic block extraction for colorings of r-subsets.

mod bh;
mod fw;
mod pair;

pub use bh::{bh_extract, sources_for, verify_extraction, BlockExtraction, ExtractOptions, ExtractOutcome};
pub use fw::{fw_blocks, fw_verify};
pub use pair::{binomial, colex_rank, for_each_colex, PairColoring, MAX_DENSE_ARITY};

use crate::error::{Error, Result};
use crate::set::{Bound, ElemSet};
use crate::witnesses::{generate, GeneratorSource};

/// Pairwise disjoint, nonempty blocks over a common bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    blocks: Vec<ElemSet>,
}

impl BlockSequence {
    pub fn new(blocks: Vec<ElemSet>) -> Result<Self> {
        if let Some(first) = blocks.first() {
            let bound = first.bound();
            if let Some(b) = blocks.iter().find(|b| b.bound() != bound) {
                return Err(Error::BoundMismatch { expected: bound.n(), found: b.bound().n() });
            }
        }
        if let Some(i) = blocks.iter().position(ElemSet::is_empty) {
            return Err(Error::InvalidParameter(format!("block {} is empty", i + 1)));
        }
        for (i, a) in blocks.iter().enumerate() {
            if blocks[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                return Err(Error::NotDisjoint);
            }
        }
        Ok(BlockSequence { blocks })
    }

    /// Builds blocks over `bound` from element lists.
    pub fn from_vecs(bound: Bound, blocks: &[Vec<u32>]) -> Result<Self> {
        let sets = blocks.iter().map(|b| ElemSet::from_elems(bound, b.iter().copied())).collect::<Result<Vec<_>>>()?;
        Self::new(sets)
    }

    pub fn blocks(&self) -> &[ElemSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn to_vecs(&self) -> Vec<Vec<u32>> {
        self.blocks.iter().map(ElemSet::to_vec).collect()
    }
}

/// For each `i`, the first generator of `sources[i]` (canonical order) inside
/// `members[i]`.
pub fn sfin_select(members: &[ElemSet], sources: &[GeneratorSource], bound: Bound) -> Result<Vec<ElemSet>> {
    if members.len() != sources.len() {
        return Err(Error::InvalidParameter(format!(
            "{} members but {} sources",
            members.len(),
            sources.len()
        )));
    }
    let mut out = Vec::with_capacity(members.len());
    for (i, (a, src)) in members.iter().zip(sources).enumerate() {
        let family = generate(src, bound)?;
        let a = a.with_bound(bound)?;
        match family.first_generator_in(&a) {
            Some(g) => out.push(g.clone()),
            None => return Err(Error::NoGenerator(i)),
        }
    }
    Ok(out)
}
