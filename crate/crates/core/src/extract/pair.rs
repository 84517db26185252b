use std::fmt;
use std::sync::Arc;

use crate::antichain::parse_header;
use crate::error::{Error, Result};
use crate::search::{Coloring, MAX_COLORS};
use crate::set::Bound;

/// Dense tables are only built for arity up to this value.
pub const MAX_DENSE_ARITY: u32 = 3;
const MAX_DENSE_ENTRIES: u64 = 1 << 28;

type Query = Arc<dyn Fn(&[u32]) -> u32 + Send + Sync>;

#[derive(Clone)]
enum Storage {
    /// Colors indexed by colex rank.
    Dense(Vec<u8>),
    Query(Query),
}

/// A coloring `c : [ [1..n] ]^r -> {1..k}` of the `r`-subsets of the ground set.
#[derive(Clone)]
pub struct PairColoring {
    bound: Bound,
    arity: u32,
    k: u32,
    storage: Storage,
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of an ascending subset of `[1..n]`.
pub fn colex_rank(subset: &[u32]) -> u64 {
    subset.iter().enumerate().map(|(i, &x)| binomial((x - 1) as u64, (i + 1) as u64)).sum()
}

/// Calls `f` on every `r`-subset of `[1..n]` in colex order.
pub fn for_each_colex(n: u32, r: u32, mut f: impl FnMut(&[u32])) {
    if r == 0 || r > n {
        return;
    }
    let mut s: Vec<u32> = (1..=r).collect();
    loop {
        f(&s);
        // colex successor: bump the first entry that can move
        let mut i = 0;
        while i + 1 < s.len() && s[i] + 1 == s[i + 1] {
            i += 1;
        }
        if i + 1 == s.len() && s[i] == n {
            return;
        }
        s[i] += 1;
        for (j, v) in s.iter_mut().enumerate().take(i) {
            *v = j as u32 + 1;
        }
    }
}

impl PairColoring {
    fn check_params(arity: u32, k: u32) -> Result<()> {
        if arity == 0 {
            return Err(Error::InvalidParameter("arity must be at least 1".into()));
        }
        if k == 0 || k > MAX_COLORS {
            return Err(Error::InvalidParameter(format!("k must be in 1..={MAX_COLORS}, got {k}")));
        }
        Ok(())
    }

    /// Dense coloring; `colors` lists the colors of all `arity`-subsets in
    /// colex order.
    pub fn dense(bound: Bound, arity: u32, k: u32, colors: &[u32]) -> Result<Self> {
        Self::check_params(arity, k)?;
        if arity > MAX_DENSE_ARITY {
            return Err(Error::InvalidParameter(format!(
                "dense colorings support arity up to {MAX_DENSE_ARITY}, got {arity}"
            )));
        }
        let expected = binomial(bound.n() as u64, arity as u64);
        if expected > MAX_DENSE_ENTRIES {
            return Err(Error::InvalidParameter(format!("{expected} subsets is too many for a dense table")));
        }
        if colors.len() as u64 != expected {
            return Err(Error::InvalidParameter(format!("expected {expected} colors, got {}", colors.len())));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvalidParameter(format!("color {bad} outside 1..={k}")));
        }
        let table = colors.iter().map(|&c| c as u8).collect();
        Ok(PairColoring { bound, arity, k, storage: Storage::Dense(table) })
    }

    /// Builds a dense table by evaluating `f` on every subset.
    pub fn tabulate(bound: Bound, arity: u32, k: u32, mut f: impl FnMut(&[u32]) -> u32) -> Result<Self> {
        let mut colors = Vec::new();
        for_each_colex(bound.n(), arity, |s| colors.push(f(s)));
        Self::dense(bound, arity, k, &colors)
    }

    /// Coloring answered by a callback; any arity. `f` receives ascending
    /// subsets and must return a color in `1..=k`.
    pub fn from_fn(bound: Bound, arity: u32, k: u32, f: impl Fn(&[u32]) -> u32 + Send + Sync + 'static) -> Result<Self> {
        Self::check_params(arity, k)?;
        Ok(PairColoring { bound, arity, k, storage: Storage::Query(Arc::new(f)) })
    }

    /// The arity-1 coloring induced by a total element coloring.
    pub fn from_element_coloring(c: &Coloring) -> Result<Self> {
        if !c.is_total() {
            return Err(Error::InvalidParameter("element coloring must be total".into()));
        }
        Self::dense(c.bound(), 1, c.k(), &c.to_vec())
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Color of an ascending `arity`-subset of `[1..n]`.
    #[inline]
    pub fn color(&self, subset: &[u32]) -> u32 {
        debug_assert_eq!(subset.len(), self.arity as usize);
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        match &self.storage {
            Storage::Dense(t) => t[colex_rank(subset) as usize] as u32,
            Storage::Query(f) => f(subset),
        }
    }

    /// File form: header `pcoloring n=<N> r=<r> k=<k>`, then one color per
    /// line for each `r`-subset in colex order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing pcoloring header"))?;
        let f = parse_header(header, "pcoloring", &["n", "r", "k"]).map_err(|m| Error::parse(hl, m))?;
        let bound = Bound::new(f[0]).map_err(|e| Error::parse(hl, e.to_string()))?;
        let (arity, k) = (f[1] as u32, f[2] as u32);
        Self::check_params(arity, k).map_err(|e| Error::parse(hl, e.to_string()))?;
        if arity > MAX_DENSE_ARITY {
            return Err(Error::parse(hl, format!("arity {arity} exceeds the supported maximum {MAX_DENSE_ARITY}")));
        }
        let expected = binomial(bound.n() as u64, arity as u64);
        let mut colors = Vec::with_capacity(expected as usize);
        for (ln, line) in lines {
            let c: u32 = line.parse().map_err(|_| Error::parse(ln, format!("bad color {line:?}")))?;
            if c == 0 || c > k {
                return Err(Error::parse(ln, format!("color {c} outside 1..={k}")));
            }
            if colors.len() as u64 == expected {
                return Err(Error::parse(ln, format!("more than {expected} colors")));
            }
            colors.push(c);
        }
        if colors.len() as u64 != expected {
            return Err(Error::parse(hl, format!("expected {expected} colors, found {}", colors.len())));
        }
        Self::dense(bound, arity, k, &colors).map_err(|e| Error::parse(hl, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("pcoloring n={} r={} k={}\n", self.bound, self.arity, self.k);
        for_each_colex(self.bound.n(), self.arity, |s| {
            out.push_str(&self.color(s).to_string());
            out.push('\n');
        });
        out
    }
}

impl fmt::Debug for PairColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.storage {
            Storage::Dense(_) => "dense",
            Storage::Query(_) => "query",
        };
        write!(f, "PairColoring(n={}, r={}, k={}, {kind})", self.bound, self.arity, self.k)
    }
}
