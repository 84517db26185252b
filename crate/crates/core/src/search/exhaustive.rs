//! Brute-force enumeration of every coloring, in lexicographic order.
//!
//! Shares nothing with the backtracking search beyond the input types, so the
//! two can be cross-checked.

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::search::SearchStats;
use crate::set::ElemSet;

/// Returns the lexicographically least refuting coloring, or `None` with the
/// number of colorings checked.
pub(super) fn search(family: &Antichain, domain: &ElemSet, k: u32, budget: Option<u64>) -> Result<(Option<Vec<u32>>, u64)> {
    let elems = domain.to_vec();
    let len = elems.len();
    let index_of = |e: u32| elems.binary_search(&e).expect("generator inside domain");
    let gens: Vec<Vec<usize>> = family.generators().iter().map(|g| g.iter().map(index_of).collect()).collect();

    let limit = budget.unwrap_or(u64::MAX);
    let mut colors = vec![1u32; len];
    let mut checked = 0u64;
    loop {
        checked += 1;
        if checked > limit {
            return Err(Error::BudgetExhausted(SearchStats { nodes: checked - 1 }));
        }
        let mono = gens.iter().any(|g| {
            let c = colors[g[0]];
            g[1..].iter().all(|&i| colors[i] == c)
        });
        if !mono {
            return Ok((Some(colors), checked));
        }
        // odometer, last element fastest
        let mut i = len;
        loop {
            if i == 0 {
                return Ok((None, checked));
            }
            i -= 1;
            if colors[i] < k {
                colors[i] += 1;
                break;
            }
            colors[i] = 1;
        }
    }
}
