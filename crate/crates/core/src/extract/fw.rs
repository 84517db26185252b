use crate::error::{Error, Result};
use crate::extract::BlockSequence;
use crate::set::{Bound, ElemSet};

/// `A_1 = {1}`, and `A_n = {m+1, ..., m+n}` with `m = 2·max(A_{n-1})`.
/// The bound of the result is `max(A_t)`.
pub fn fw_blocks(t: u32) -> Result<BlockSequence> {
    if t == 0 {
        return Err(Error::InvalidParameter("fw needs t >= 1".into()));
    }
    let mut ranges: Vec<(u64, u64)> = vec![(1, 1)];
    for n in 2..=t as u64 {
        let m = 2 * ranges.last().expect("nonempty").1;
        let hi = m + n;
        if hi > Bound::MAX as u64 {
            return Err(Error::BoundOverflow(hi));
        }
        ranges.push((m + 1, hi));
    }
    let bound = Bound::new(ranges.last().expect("nonempty").1)?;
    let blocks = ranges.iter().map(|&(lo, hi)| ElemSet::interval(bound, lo as u32, hi as u32)).collect();
    BlockSequence::new(blocks)
}

/// True iff no 3-term AP takes its three terms from three different blocks.
pub fn fw_verify(blocks: &BlockSequence) -> bool {
    let Some(first) = blocks.blocks().first() else {
        return true;
    };
    let n = first.bound().n() as usize;
    let mut owner = vec![usize::MAX; n + 1];
    let mut elems = Vec::new();
    for (i, b) in blocks.blocks().iter().enumerate() {
        for e in b {
            owner[e as usize] = i;
            elems.push(e as usize);
        }
    }
    elems.sort_unstable();
    for (i, &a) in elems.iter().enumerate() {
        for &c in &elems[i + 1..] {
            if (a + c) % 2 != 0 || owner[a] == owner[c] {
                continue;
            }
            let mid = (a + c) / 2;
            let o = owner[mid];
            if o != usize::MAX && o != owner[a] && o != owner[c] {
                return false;
            }
        }
    }
    true
}
