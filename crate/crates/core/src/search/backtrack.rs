//! Depth-first search for a refuting coloring.
//!
//! Elements are colored in ascending order, colors in ascending order, and an
//! element may only open the next unused color (restricted growth), so the
//! first element always gets color 1. The first leaf reached is therefore the
//! lexicographically least refutation.
//!
//! With several workers the tree is cut at a fixed depth into prefixes. Node
//! counts are reported as the single-worker search would have seen them, so
//! certificates do not depend on the worker count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::search::{SearchOptions, SearchStats};
use crate::set::ElemSet;

const CHECK_EVERY: u64 = 1 << 12;

/// Generators keyed by their last position, with the other positions inlined.
struct Problem {
    len: usize,
    k: u8,
    closing: Vec<Vec<(u32, u32)>>,
    pool: Vec<u32>,
}

impl Problem {
    fn new(family: &Antichain, domain: &ElemSet, k: u32) -> Self {
        let elems = domain.to_vec();
        let mut pos = vec![u32::MAX; domain.bound().n() as usize + 1];
        for (i, &e) in elems.iter().enumerate() {
            pos[e as usize] = i as u32;
        }
        let mut closing = vec![Vec::new(); elems.len()];
        let mut pool = Vec::new();
        for g in family.generators() {
            let ps: Vec<u32> = g.iter().map(|e| pos[e as usize]).collect();
            debug_assert!(ps.iter().all(|&p| p != u32::MAX));
            let (&last, rest) = ps.split_last().expect("generators are nonempty");
            let start = pool.len() as u32;
            pool.extend_from_slice(rest);
            closing[last as usize].push((start, pool.len() as u32));
        }
        Problem { len: elems.len(), k: k as u8, closing, pool }
    }

    /// Whether giving `q` to position `p` completes a monochromatic generator.
    #[inline]
    fn completes(&self, colors: &[u8], p: usize, q: u8) -> bool {
        self.closing[p].iter().any(|&(s, e)| self.pool[s as usize..e as usize].iter().all(|&o| colors[o as usize] == q))
    }
}

enum Leaf {
    Found,
    Exhausted,
    Aborted,
}

struct Walker<'a> {
    problem: &'a Problem,
    colors: Vec<u8>,
    nodes: u64,
    limit: u64,
    stop: &'a dyn Fn() -> bool,
}

impl Walker<'_> {
    /// Explores below `depth`; colors `< depth` are fixed. `open` is the
    /// number of colors used so far.
    fn dfs(&mut self, depth: usize, open: u8) -> Leaf {
        if depth == self.problem.len {
            return Leaf::Found;
        }
        let top = open.saturating_add(1).min(self.problem.k);
        for q in 1..=top {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Leaf::Aborted;
            }
            if self.nodes.is_multiple_of(CHECK_EVERY) && (self.stop)() {
                return Leaf::Aborted;
            }
            if self.problem.completes(&self.colors, depth, q) {
                continue;
            }
            self.colors[depth] = q;
            match self.dfs(depth + 1, open.max(q)) {
                Leaf::Exhausted => {}
                other => return other,
            }
        }
        self.colors[depth] = 0;
        Leaf::Exhausted
    }
}

struct Prefix {
    colors: Vec<u8>,
    open: u8,
    depth: usize,
    // prefix-tree nodes visited up to and including this prefix
    nodes_before: u64,
}

fn prefixes(problem: &Problem, depth: usize) -> (Vec<Prefix>, u64) {
    fn go(problem: &Problem, colors: &mut Vec<u8>, d: usize, open: u8, target: usize, nodes: &mut u64, out: &mut Vec<Prefix>) {
        if d == target || d == problem.len {
            out.push(Prefix { colors: colors.clone(), open, depth: d, nodes_before: *nodes });
            return;
        }
        let top = open.saturating_add(1).min(problem.k);
        for q in 1..=top {
            *nodes += 1;
            if problem.completes(colors, d, q) {
                continue;
            }
            colors[d] = q;
            go(problem, colors, d + 1, open.max(q), target, nodes, out);
        }
        colors[d] = 0;
    }
    let mut out = Vec::new();
    let mut nodes = 0;
    let mut colors = vec![0u8; problem.len];
    go(problem, &mut colors, 0, 0, depth, &mut nodes, &mut out);
    (out, nodes)
}

enum SubResult {
    Found(Vec<u8>, u64),
    Exhausted(u64),
    Aborted,
    Skipped,
}

/// Returns `(Some(colors), nodes)` for a refutation, `(None, nodes)` when the
/// search space is exhausted.
pub(super) fn search(
    family: &Antichain,
    domain: &ElemSet,
    k: u32,
    opts: &SearchOptions,
) -> Result<(Option<Vec<u32>>, u64)> {
    let problem = Problem::new(family, domain, k);
    let workers = opts.workers.max(1);
    let limit = opts.budget.unwrap_or(u64::MAX);

    let depth = split_depth(k, workers);
    let (prefixes, prefix_nodes) = prefixes(&problem, depth);

    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let any_found = AtomicBool::new(false);
    let results: Mutex<Vec<Option<SubResult>>> = Mutex::new((0..prefixes.len()).map(|_| None).collect());

    let run = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= prefixes.len() {
            break;
        }
        let cancelled = || {
            if opts.deterministic {
                best.load(Ordering::Relaxed) < i
            } else {
                any_found.load(Ordering::Relaxed)
            }
        };
        let res = if cancelled() {
            SubResult::Skipped
        } else {
            let p = &prefixes[i];
            let mut w = Walker { problem: &problem, colors: p.colors.clone(), nodes: 0, limit, stop: &cancelled };
            match w.dfs(p.depth, p.open) {
                Leaf::Found => {
                    best.fetch_min(i, Ordering::Relaxed);
                    any_found.store(true, Ordering::Relaxed);
                    SubResult::Found(w.colors, w.nodes)
                }
                Leaf::Exhausted => SubResult::Exhausted(w.nodes),
                Leaf::Aborted => SubResult::Aborted,
            }
        };
        results.lock().expect("poisoned")[i] = Some(res);
    };

    if workers == 1 || prefixes.len() <= 1 {
        run();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers.min(prefixes.len()) {
                s.spawn(run);
            }
        });
    }

    let results: Vec<SubResult> =
        results.into_inner().expect("poisoned").into_iter().map(|r| r.expect("every prefix visited")).collect();
    let exhausted = |nodes: u64| Error::BudgetExhausted(SearchStats { nodes });

    if !opts.deterministic {
        if let Some((colors, _)) = results.iter().find_map(|r| match r {
            SubResult::Found(c, n) => Some((c, n)),
            _ => None,
        }) {
            let total: u64 = prefix_nodes
                + results
                    .iter()
                    .map(|r| match r {
                        SubResult::Found(_, n) | SubResult::Exhausted(n) => *n,
                        _ => 0,
                    })
                    .sum::<u64>();
            return Ok((Some(widen(colors)), total));
        }
    }

    // Sequential-equivalent accounting: everything before the first
    // refuting prefix, plus that prefix's nodes up to its leaf.
    let mut seq = 0u64;
    for (i, r) in results.iter().enumerate() {
        match r {
            SubResult::Exhausted(n) => seq = seq.saturating_add(*n),
            SubResult::Found(colors, n) => {
                let total = seq.saturating_add(*n).saturating_add(prefixes[i].nodes_before);
                if total > limit {
                    return Err(exhausted(total));
                }
                return Ok((Some(widen(colors)), total));
            }
            SubResult::Aborted | SubResult::Skipped => return Err(exhausted(limit.saturating_add(1))),
        }
    }
    let total = seq.saturating_add(prefix_nodes);
    if total > limit {
        return Err(exhausted(total));
    }
    Ok((None, total))
}

fn widen(colors: &[u8]) -> Vec<u32> {
    colors.iter().map(|&c| c as u32).collect()
}

/// `⌈log_k(workers)⌉`, the number of leading elements fixed per subtree.
fn split_depth(k: u32, workers: usize) -> usize {
    if workers <= 1 || k <= 1 {
        return 0;
    }
    let mut depth = 0;
    let mut reach = 1usize;
    while reach < workers {
        reach = reach.saturating_mul(k as usize);
        depth += 1;
    }
    depth
}
