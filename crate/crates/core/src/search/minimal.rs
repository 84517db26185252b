use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::search::{is_par_member_on, SearchOptions, SearchStats};
use crate::set::ElemSet;

/// Whether every `k`-partition of `a` has a piece containing a generator,
/// decided by enumerating all `k^|a|` partitions.
pub fn is_par_member_oracle(family: &Antichain, a: &ElemSet, k: u32) -> Result<bool> {
    Ok(is_par_member_on(family, a, k, &SearchOptions::exhaustive())?.is_established())
}

/// All ⊆-minimal `A ⊆ [1..n]` with `|A| <= max_size` and `A ∈ Par_k(family)`.
///
/// Candidates are visited by increasing size, so a candidate is minimal
/// exactly when no member found earlier lies inside it. `budget` caps the
/// total number of partitions enumerated.
pub fn minimal_par_members(family: &Antichain, k: u32, max_size: usize, budget: Option<u64>) -> Result<Antichain> {
    let bound = family.bound();
    let n = bound.n() as usize;
    let mut found: Vec<ElemSet> = Vec::new();
    let mut spent = 0u64;

    for size in 1..=max_size.min(n) {
        let mut comb: Vec<u32> = (1..=size as u32).collect();
        loop {
            let a = ElemSet::from_elems(bound, comb.iter().copied())?;
            if !found.iter().any(|m| m.is_subset(&a)) {
                let opts = SearchOptions::exhaustive().with_budget(budget.map(|b| b.saturating_sub(spent)));
                match is_par_member_on(family, &a, k, &opts) {
                    Ok(cert) => {
                        spent += cert.nodes;
                        if cert.is_established() {
                            found.push(a);
                        }
                    }
                    Err(Error::BudgetExhausted(s)) => {
                        return Err(Error::BudgetExhausted(SearchStats { nodes: spent + s.nodes }))
                    }
                    Err(e) => return Err(e),
                }
            }
            if !next_combination(&mut comb, n as u32) {
                break;
            }
        }
    }
    Ok(Antichain::reduce(bound, found))
}

/// Advances to the next `|comb|`-subset of `[1..n]` in lexicographic order.
fn next_combination(comb: &mut [u32], n: u32) -> bool {
    let r = comb.len();
    for i in (0..r).rev() {
        if comb[i] < n - (r - 1 - i) as u32 {
            comb[i] += 1;
            for j in i + 1..r {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antichain::normalize_antichain;
    use crate::set::Bound;

    fn fam(n: u64, xs: &[&[u32]]) -> Antichain {
        let b = Bound::new(n).unwrap();
        normalize_antichain(xs.iter().map(|x| ElemSet::from_elems(b, x.iter().copied()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn single_pair_never_forced() {
        let f = fam(2, &[&[1, 2]]);
        assert!(minimal_par_members(&f, 2, 2, None).unwrap().is_empty());
    }

    #[test]
    fn triangle() {
        let f = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let m = minimal_par_members(&f, 2, 3, None).unwrap();
        let gens: Vec<Vec<u32>> = m.generators().iter().map(ElemSet::to_vec).collect();
        assert_eq!(gens, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn k1_members_are_the_generators() {
        let f = fam(5, &[&[1, 2], &[2, 4, 5], &[3]]);
        assert_eq!(minimal_par_members(&f, 1, 5, None).unwrap(), f);
    }

    #[test]
    fn budget() {
        let f = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert!(matches!(minimal_par_members(&f, 2, 3, Some(3)), Err(Error::BudgetExhausted(_))));
    }

    #[test]
    fn combinations() {
        let mut c = vec![1, 2];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![3, 4]);
    }
}
