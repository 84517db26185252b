//! Certified decision of `Par_k` membership.
//!
//! A set `A` is in `Par_k(F)` when every partition of `A` into `k` pieces has
//! a piece containing a generator of `F`. A negative answer carries the
//! refuting coloring; a positive answer is only produced after the whole
//! search space has been covered.

mod backtrack;
mod exhaustive;
mod minimal;
mod split;
mod threshold;

use std::fmt;

pub use minimal::{is_par_member_oracle, minimal_par_members};
pub use split::split_refutation;
pub use threshold::{min_threshold, ThresholdResult};

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::set::{Bound, ElemSet};

/// Largest supported number of colors.
pub const MAX_COLORS: u32 = 255;

/// A map from a domain `D ⊆ [1..n]` to colors `1..=k`.
///
/// Total colorings of `[1..n]` use the full interval as domain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    domain: ElemSet,
    k: u32,
    // indexed by element; 0 outside the domain
    colors: Vec<u8>,
}

impl Coloring {
    /// Total coloring of `[1..bound]`; `colors[i]` is the color of `i + 1`.
    pub fn new(bound: Bound, k: u32, colors: &[u32]) -> Result<Self> {
        if colors.len() != bound.n() as usize {
            return Err(Error::InvalidParameter(format!(
                "coloring of [1..{bound}] needs {bound} colors, got {}",
                colors.len()
            )));
        }
        Self::on_domain(ElemSet::full(bound), k, colors)
    }

    /// Coloring of `domain`; `colors` lists the colors of the domain's
    /// elements in ascending element order.
    pub fn on_domain(domain: ElemSet, k: u32, colors: &[u32]) -> Result<Self> {
        if k > MAX_COLORS || (k == 0 && !domain.is_empty()) {
            return Err(Error::InvalidParameter(format!("number of colors must be in 1..={MAX_COLORS}, got {k}")));
        }
        if colors.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "domain has {} elements but {} colors were given",
                domain.len(),
                colors.len()
            )));
        }
        let mut dense = vec![0u8; domain.bound().n() as usize + 1];
        for (e, &c) in domain.iter().zip(colors) {
            if c == 0 || c > k {
                return Err(Error::InvalidParameter(format!("color {c} of element {e} outside 1..={k}")));
            }
            dense[e as usize] = c as u8;
        }
        Ok(Coloring { domain, k, colors: dense })
    }

    /// Builds from color classes; classes must be disjoint and are numbered
    /// from 1 in the given order.
    pub fn from_classes(bound: Bound, classes: &[ElemSet]) -> Result<Self> {
        let mut domain = ElemSet::empty(bound);
        for c in classes {
            if !c.is_disjoint(&domain) {
                return Err(Error::NotDisjoint);
            }
            domain = domain.union(c)?;
        }
        let colors: Vec<u32> = domain
            .iter()
            .map(|e| classes.iter().position(|c| c.contains(e)).expect("element in a class") as u32 + 1)
            .collect();
        Self::on_domain(domain, classes.len() as u32, &colors)
    }

    pub fn bound(&self) -> Bound {
        self.domain.bound()
    }

    pub fn domain(&self) -> &ElemSet {
        &self.domain
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_total(&self) -> bool {
        self.domain.len() == self.bound().n() as usize
    }

    #[inline]
    pub fn color(&self, e: u32) -> Option<u32> {
        match self.colors.get(e as usize) {
            Some(&c) if c != 0 => Some(c as u32),
            _ => None,
        }
    }

    /// Colors of the domain elements, ascending by element.
    pub fn to_vec(&self) -> Vec<u32> {
        self.domain.iter().map(|e| self.colors[e as usize] as u32).collect()
    }

    /// `k` color classes, class `i` holding color `i + 1`.
    pub fn classes(&self) -> Vec<ElemSet> {
        let mut classes = vec![ElemSet::empty(self.bound()); self.k as usize];
        for e in self.domain.iter() {
            classes[self.colors[e as usize] as usize - 1].insert(e);
        }
        classes
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<String> = self.classes().iter().map(ToString::to_string).collect();
        write!(f, "Coloring(k={}, {})", self.k, classes.join("/"))
    }
}

/// First generator (canonical order) lying inside a single color class, with
/// that color.
pub fn mono_witness(c: &Coloring, family: &Antichain) -> Result<Option<(ElemSet, u32)>> {
    if c.bound() != family.bound() {
        return Err(Error::BoundMismatch { expected: family.bound().n(), found: c.bound().n() });
    }
    for g in family.generators() {
        let mut elems = g.iter();
        let Some(first) = elems.next().and_then(|e| c.color(e)) else { continue };
        if elems.all(|e| c.color(e) == Some(first)) {
            return Ok(Some((g.clone(), first)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerates all `k^|A|` colorings.
    Exhaustive,
    /// Depth-first search over partial colorings, pruning assignments that
    /// complete a monochromatic generator.
    #[default]
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Node ceiling; `None` is unlimited.
    pub budget: Option<u64>,
    pub workers: usize,
    /// Return the lexicographically least refutation regardless of
    /// `workers`, with a node count equal to the single-worker run.
    pub deterministic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { strategy: Strategy::Backtracking, budget: None, workers: 1, deterministic: false }
    }
}

impl SearchOptions {
    pub fn exhaustive() -> Self {
        SearchOptions { strategy: Strategy::Exhaustive, ..Self::default() }
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A coloring none of whose classes contains a generator.
    Refuted(Coloring),
    /// Every coloring has a monochromatic generator.
    Established { nodes_explored: u64, exhaustive: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParCertificate {
    pub verdict: Verdict,
    pub family_digest: String,
    pub k: u32,
    pub bound: Bound,
    pub nodes: u64,
}

impl ParCertificate {
    pub fn is_established(&self) -> bool {
        matches!(self.verdict, Verdict::Established { .. })
    }

    pub fn refutation(&self) -> Option<&Coloring> {
        match &self.verdict {
            Verdict::Refuted(c) => Some(c),
            Verdict::Established { .. } => None,
        }
    }
}

/// Decides whether `[1..n]` is in `Par_k(family)`.
pub fn is_par_member(family: &Antichain, k: u32, opts: &SearchOptions) -> Result<ParCertificate> {
    is_par_member_on(family, &ElemSet::full(family.bound()), k, opts)
}

/// Decides whether `domain` is in `Par_k(family)`.
pub fn is_par_member_on(
    family: &Antichain,
    domain: &ElemSet,
    k: u32,
    opts: &SearchOptions,
) -> Result<ParCertificate> {
    if k == 0 || k > MAX_COLORS {
        return Err(Error::InvalidParameter(format!("k must be in 1..={MAX_COLORS}, got {k}")));
    }
    if domain.bound() != family.bound() {
        return Err(Error::BoundMismatch { expected: family.bound().n(), found: domain.bound().n() });
    }
    let local = family.within(domain)?;
    let (outcome, nodes) = if local.is_empty() {
        // Nothing can be monochromatic: the constant coloring refutes.
        (Some(vec![1u32; domain.len()]), 0)
    } else {
        match opts.strategy {
            Strategy::Exhaustive => exhaustive::search(&local, domain, k, opts.budget)?,
            Strategy::Backtracking => backtrack::search(&local, domain, k, opts)?,
        }
    };
    let verdict = match outcome {
        Some(colors) => Verdict::Refuted(Coloring::on_domain(domain.clone(), k, &colors)?),
        None => Verdict::Established { nodes_explored: nodes, exhaustive: true },
    };
    if let Verdict::Refuted(c) = &verdict {
        assert!(mono_witness(c, family)?.is_none(), "search returned a coloring with a monochromatic generator");
    }
    Ok(ParCertificate { verdict, family_digest: family.digest(), k, bound: family.bound(), nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antichain::normalize_antichain;
    use crate::witnesses::{generate, GeneratorSource};

    fn b(n: u64) -> Bound {
        Bound::new(n).unwrap()
    }

    fn ap3(n: u64) -> Antichain {
        generate(&GeneratorSource::ap(3).unwrap(), b(n)).unwrap()
    }

    fn classes(n: u64, cls: &[&[u32]]) -> Coloring {
        let sets: Vec<ElemSet> = cls.iter().map(|c| ElemSet::from_elems(b(n), c.iter().copied()).unwrap()).collect();
        Coloring::from_classes(b(n), &sets).unwrap()
    }

    #[test]
    fn mono_witness_examples() {
        let constant = Coloring::new(b(3), 1, &[1, 1, 1]).unwrap();
        let (g, col) = mono_witness(&constant, &ap3(3)).unwrap().unwrap();
        assert_eq!((g.to_vec(), col), (vec![1, 2, 3], 1));

        let c = classes(8, &[&[1, 2, 5, 6], &[3, 4, 7, 8]]);
        assert!(mono_witness(&c, &ap3(8)).unwrap().is_none());

        assert!(mono_witness(&c, &Antichain::empty(b(8))).unwrap().is_none());
        assert!(mono_witness(&c, &ap3(9)).is_err());
    }

    #[test]
    fn coloring_validation() {
        assert!(Coloring::new(b(3), 2, &[1, 2]).is_err());
        assert!(Coloring::new(b(3), 2, &[1, 3, 1]).is_err());
        assert!(Coloring::new(b(3), 0, &[1, 1, 1]).is_err());
        let c = Coloring::new(b(3), 2, &[2, 1, 2]).unwrap();
        assert_eq!(c.classes()[1].to_vec(), vec![1, 3]);
        assert!(c.is_total());
    }

    #[test]
    fn w23_both_strategies() {
        for opts in [SearchOptions::default(), SearchOptions::exhaustive()] {
            let r = is_par_member(&ap3(8), 2, &opts).unwrap();
            let c = r.refutation().expect("refuted at 8");
            assert!(mono_witness(c, &ap3(8)).unwrap().is_none());
            assert!(is_par_member(&ap3(9), 2, &opts).unwrap().is_established());
        }
    }

    #[test]
    fn single_color_with_generator_is_established() {
        let fam = normalize_antichain(vec![ElemSet::from_elems(b(5), [2u32, 4]).unwrap()]).unwrap();
        for opts in [SearchOptions::default(), SearchOptions::exhaustive()] {
            assert!(is_par_member(&fam, 1, &opts).unwrap().is_established());
        }
    }

    #[test]
    fn empty_family_refuted_by_constant() {
        let r = is_par_member(&Antichain::empty(b(4)), 3, &SearchOptions::default()).unwrap();
        assert_eq!(r.refutation().unwrap().to_vec(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn lex_least_refutation_agrees() {
        let fam = ap3(8);
        let bt = is_par_member(&fam, 2, &SearchOptions::default()).unwrap();
        let ex = is_par_member(&fam, 2, &SearchOptions::exhaustive()).unwrap();
        assert_eq!(bt.refutation(), ex.refutation());
        assert_eq!(bt.refutation().unwrap().to_vec(), vec![1, 1, 2, 2, 1, 1, 2, 2]);
    }

    #[test]
    fn budget_is_a_third_outcome() {
        let opts = SearchOptions::default().with_budget(Some(10));
        assert!(matches!(is_par_member(&ap3(9), 2, &opts), Err(Error::BudgetExhausted(_))));
        let opts = SearchOptions::exhaustive().with_budget(Some(10));
        assert!(matches!(is_par_member(&ap3(9), 2, &opts), Err(Error::BudgetExhausted(_))));
    }

    #[test]
    fn parallel_deterministic_matches_sequential() {
        let fam = generate(&GeneratorSource::ap(3).unwrap(), b(20)).unwrap();
        let seq = is_par_member(&fam, 3, &SearchOptions { deterministic: true, ..Default::default() }).unwrap();
        for workers in [2, 3, 4, 8] {
            let par = is_par_member(&fam, 3, &SearchOptions { workers, deterministic: true, ..Default::default() })
                .unwrap();
            assert_eq!(par, seq, "workers={workers}");
        }
        let fam9 = ap3(9);
        let seq = is_par_member(&fam9, 2, &SearchOptions::default()).unwrap();
        let par = is_par_member(&fam9, 2, &SearchOptions { workers: 4, deterministic: true, ..Default::default() })
            .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn parallel_nondeterministic_is_sound() {
        let fam = generate(&GeneratorSource::ap(3).unwrap(), b(24)).unwrap();
        let r = is_par_member(&fam, 3, &SearchOptions { workers: 4, ..Default::default() }).unwrap();
        assert!(mono_witness(r.refutation().unwrap(), &fam).unwrap().is_none());
    }

    #[test]
    fn search_on_subdomain() {
        let fam = ap3(12);
        let dom = ElemSet::from_elems(b(12), [2u32, 4, 6, 8, 10, 12]).unwrap();
        // {2,4,...,12} is an image of [1..6] under x -> 2x, so it is 2-colorable.
        let r = is_par_member_on(&fam, &dom, 2, &SearchOptions::default()).unwrap();
        let c = r.refutation().unwrap();
        assert_eq!(c.domain(), &dom);
        assert!(mono_witness(c, &fam).unwrap().is_none());
    }
}
