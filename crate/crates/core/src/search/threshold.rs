use crate::error::{Error, Result};
use crate::search::{is_par_member, ParCertificate, SearchOptions};
use crate::set::Bound;
use crate::witnesses::{generate, GeneratorSource};

/// Least `N` with `[1..N] ∈ Par_k`, with the certificates on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdResult {
    /// Set only when resolved.
    pub threshold: Option<u32>,
    /// Established certificate at the threshold.
    pub established: Option<ParCertificate>,
    /// Refuted certificate at `threshold - 1` (or at `largest_refuted` when
    /// unresolved); absent when nothing was refuted.
    pub refutation: Option<ParCertificate>,
    pub largest_refuted: Option<u32>,
    pub resolved: bool,
    /// The scan stopped because the node budget ran out (rather than at `n_max`).
    pub budget_exhausted: bool,
    pub budget_spent: u64,
}

/// Scans `N = 1, 2, ...` up to `n_max`. Established at `N` implies
/// established at every larger `N` (a refutation restricts downward), so the
/// first established bound is the threshold.
pub fn min_threshold(src: &GeneratorSource, k: u32, n_max: Bound, opts: &SearchOptions) -> Result<ThresholdResult> {
    let mut spent = 0u64;
    let mut refutation: Option<ParCertificate> = None;
    let result = |threshold: Option<u32>,
                  established: Option<ParCertificate>,
                  refutation: Option<ParCertificate>,
                  budget_exhausted: bool,
                  spent: u64| ThresholdResult {
        threshold,
        largest_refuted: refutation.as_ref().map(|c| c.bound.n()),
        resolved: established.is_some(),
        established,
        refutation,
        budget_exhausted,
        budget_spent: spent,
    };
    for n in 1..=n_max.n() {
        let bound = Bound::new(n as u64)?;
        let family = generate(src, bound)?;
        let remaining = opts.budget.map(|b| b.saturating_sub(spent));
        let cert = match is_par_member(&family, k, &opts.with_budget(remaining)) {
            Ok(c) => c,
            Err(Error::BudgetExhausted(stats)) => {
                return Ok(result(None, None, refutation, true, spent + stats.nodes));
            }
            Err(e) => return Err(e),
        };
        spent += cert.nodes;
        if cert.is_established() {
            return Ok(result(Some(n), Some(cert), refutation, false, spent));
        }
        refutation = Some(cert);
    }
    Ok(result(None, None, refutation, false, spent))
}
