//! Closed-set enumeration in lectic order (NextClosure) over the object side.

use super::bitset::BitSet;
use super::context::Context;

/// All formal concepts of `ctx` as (extent, intent) pairs, extents in lectic
/// order starting from the closure of the empty set.
pub fn next_closure_concepts(ctx: &Context) -> Vec<(BitSet, BitSet)> {
    let n = ctx.n_objects();
    let mut out = Vec::new();
    let (mut extent, intent) = ctx.close_objects(&BitSet::new(n));
    out.push((extent.clone(), intent));
    // prefix[k] = intent of the k smallest members of the current extent
    let mut prefix: Vec<BitSet> = Vec::new();
    'outer: loop {
        let members: Vec<usize> = extent.iter().collect();
        prefix.clear();
        prefix.push(BitSet::full(ctx.n_attributes()));
        for &g in &members {
            let mut next = prefix.last().unwrap().clone();
            next.intersect_with(ctx.row(g));
            prefix.push(next);
        }
        let mut truncated = extent.clone();
        let mut kept = members.len();
        for i in (0..n).rev() {
            if truncated.contains(i) {
                truncated.remove(i);
                kept -= 1;
                continue;
            }
            let candidate_intent = prefix[kept].intersection(ctx.row(i));
            let candidate = ctx.extent_of(&candidate_intent);
            if !candidate.has_new_below(&truncated, i) {
                extent = candidate;
                out.push((extent.clone(), candidate_intent));
                continue 'outer;
            }
        }
        break;
    }
    out
}
