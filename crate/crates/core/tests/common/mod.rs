//! Oracles shared by the integration tests. Nothing here calls into the
//! search, extraction or CNF code of the library; sets are plain sorted
//! vectors of elements.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All 3-term (or `len`-term) arithmetic progressions inside `[1..n]`.
pub fn aps(n: u32, len: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 1..=n {
        let mut d = 1;
        while a + (len - 1) * d <= n {
            out.push((0..len).map(|i| a + i * d).collect());
            d += 1;
        }
    }
    out
}

/// `{x, y, x + y}` inside `[1..n]`; with `distinct` the case `x = y` is excluded.
pub fn schur_triples(n: u32, distinct: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in x..=n {
            if x + y > n || (distinct && x == y) {
                continue;
            }
            let mut s = vec![x, y, x + y];
            s.dedup();
            out.push(s);
        }
    }
    out
}

/// `colors[e - 1]` is the color of `e`.
pub fn has_mono(colors: &[u32], sets: &[Vec<u32>]) -> bool {
    sets.iter().any(|s| {
        let c = colors[s[0] as usize - 1];
        s.iter().all(|&e| colors[e as usize - 1] == c)
    })
}

/// Calls `f` on every k-coloring of `len` points; stops early when `f`
/// returns false. Returns false if stopped.
pub fn all_colorings(len: usize, k: u32, mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let mut c = vec![1u32; len];
    loop {
        if !f(&c) {
            return false;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if c[i] < k {
                c[i] += 1;
                break;
            }
            c[i] = 1;
        }
    }
}

/// Whether every k-coloring of `domain` has a monochromatic set among
/// `sets` (only sets inside `domain` count).
pub fn brute_member(domain: &[u32], sets: &[Vec<u32>], k: u32) -> bool {
    let local: Vec<Vec<usize>> = sets
        .iter()
        .filter(|s| s.iter().all(|e| domain.contains(e)))
        .map(|s| s.iter().map(|e| domain.iter().position(|d| d == e).unwrap()).collect())
        .collect();
    if local.is_empty() {
        return false;
    }
    all_colorings(domain.len(), k, |c| {
        local.iter().any(|s| s.iter().all(|&i| c[i] == c[s[0]]))
    })
}

/// Least N with `[1..N]` a member, scanning up to `n_max`.
pub fn brute_threshold(sets_at: impl Fn(u32) -> Vec<Vec<u32>>, k: u32, n_max: u32) -> Option<u32> {
    (1..=n_max).find(|&n| brute_member(&(1..=n).collect::<Vec<_>>(), &sets_at(n), k))
}

/// Random family of `count` sets of size `2..=max_size` inside `[1..n]`.
pub fn random_sets(rng: &mut TestRng, n: u32, count: usize, min_size: usize, max_size: usize) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| {
            let size = rng.gen_range(min_size..=max_size.min(n as usize));
            let mut s: Vec<u32> = Vec::new();
            while s.len() < size {
                let e = rng.gen_range(1..=n);
                if !s.contains(&e) {
                    s.push(e);
                }
            }
            s.sort_unstable();
            s
        })
        .collect()
}

/// Minimal sets of a family (drops duplicates and supersets).
pub fn minimal_sets(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let subset = |a: &Vec<u32>, b: &Vec<u32>| a.iter().all(|x| b.contains(x));
    let mut out: Vec<Vec<u32>> = Vec::new();
    for s in sets {
        let dominated = sets.iter().any(|t| subset(t, s) && t.len() < s.len());
        if !dominated && !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

/// Small DPLL solver with unit propagation. Returns a model as literals.
pub fn dpll(vars: u32, clauses: &[Vec<i32>]) -> Option<Vec<i32>> {
    fn solve(clauses: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
        // unit propagation to a fixed point
        let mut trail = Vec::new();
        loop {
            let mut changed = false;
            for c in clauses {
                let mut unassigned = None;
                let mut count = 0;
                let mut sat = false;
                for &lit in c {
                    let v = assign[lit.unsigned_abs() as usize];
                    if v == 0 {
                        count += 1;
                        unassigned = Some(lit);
                    } else if (v > 0) == (lit > 0) {
                        sat = true;
                        break;
                    }
                }
                if sat {
                    continue;
                }
                match (count, unassigned) {
                    (0, _) => {
                        for v in trail {
                            assign[v] = 0;
                        }
                        return false;
                    }
                    (1, Some(lit)) => {
                        let v = lit.unsigned_abs() as usize;
                        assign[v] = if lit > 0 { 1 } else { -1 };
                        trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let Some(v) = (1..assign.len()).find(|&v| assign[v] == 0) else {
            return true;
        };
        for val in [1i8, -1] {
            assign[v] = val;
            if solve(clauses, assign) {
                return true;
            }
        }
        assign[v] = 0;
        for v in trail {
            assign[v] = 0;
        }
        false
    }
    let mut assign = vec![0i8; vars as usize + 1];
    if solve(clauses, &mut assign) {
        Some((1..=vars as i32).map(|v| if assign[v as usize] > 0 { v } else { -v }).collect())
    } else {
        None
    }
}

/// Runs the `parfilter` binary.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_parfilter")).args(args).output().expect("run parfilter");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
