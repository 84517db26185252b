use crate::antichain::Antichain;
use crate::error::{Error, Result};
use crate::search::{mono_witness, Coloring};
use crate::set::ElemSet;

/// Glues a refuting `n`-coloring of `b` and a refuting `m`-coloring of `c`
/// into a refuting `(n + m)`-coloring of `b ∪ c`: the classes of `rb`
/// followed by the classes of `rc`.
///
/// This is the step showing that `Par(F)` splits over disjoint unions.
pub fn split_refutation(
    family: &Antichain,
    b: &ElemSet,
    c: &ElemSet,
    rb: &Coloring,
    rc: &Coloring,
) -> Result<Coloring> {
    if !b.is_disjoint(c) {
        return Err(Error::NotDisjoint);
    }
    for (name, set, col) in [("b", b, rb), ("c", c, rc)] {
        if col.domain() != set {
            return Err(Error::InvalidRefutation(format!("coloring of {name} has domain {}, expected {set}", col.domain())));
        }
        if let Some((g, q)) = mono_witness(col, family)? {
            return Err(Error::InvalidRefutation(format!("coloring of {name} has generator {g} in class {q}")));
        }
    }
    let shift = rb.k();
    let union = b.union(c)?;
    let colors: Vec<u32> = union
        .iter()
        .map(|e| match rb.color(e) {
            Some(q) => q,
            None => shift + rc.color(e).expect("element of c"),
        })
        .collect();
    let glued = Coloring::on_domain(union, rb.k() + rc.k(), &colors)?;
    assert!(mono_witness(&glued, family)?.is_none(), "glued coloring has a monochromatic generator");
    Ok(glued)
}
