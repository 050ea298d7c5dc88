//! The order-16 symmetry group of the counting problem.
//!
//! Positions `0..8` hold `a1..a4, b1..b4`. The group is generated by four
//! involutions: swap indices 1 and 2, swap indices 3 and 4, swap the index
//! pairs {1,2} and {3,4}, and swap `a` with `b`. All the constraints, `|Delta|`,
//! `P` and the set `{|Delta1|, |Delta2|}` are invariant.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::LatticeTuple;

/// `image[i] = t[perm[i]]`.
pub type Permutation = [usize; 8];

const GENERATORS: [Permutation; 4] =
    [[1, 0, 2, 3, 5, 4, 6, 7], [0, 1, 3, 2, 4, 5, 7, 6], [2, 3, 0, 1, 6, 7, 4, 5], [4, 5, 6, 7, 0, 1, 2, 3]];

fn compose(p: &Permutation, q: &Permutation) -> Permutation {
    // Applying q then p: (p . q)(t)[i] = q(t)[p[i]] = t[q[p[i]]].
    std::array::from_fn(|i| q[p[i]])
}

/// All 16 elements, in a fixed order starting with the identity.
pub fn symmetry_group() -> &'static [Permutation] {
    static GROUP: OnceLock<Vec<Permutation>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let id: Permutation = std::array::from_fn(|i| i);
        let mut elems = vec![id];
        let mut k = 0;
        while k < elems.len() {
            let g = elems[k];
            for s in &GENERATORS {
                let h = compose(s, &g);
                if !elems.contains(&h) {
                    elems.push(h);
                }
            }
            k += 1;
        }
        elems
    })
}

pub fn apply(g: &Permutation, t: &LatticeTuple) -> LatticeTuple {
    let v = t.to_array();
    LatticeTuple::from_array(std::array::from_fn(|i| v[g[i]]))
}

/// Distinct images of `t`, sorted.
pub fn orbit(t: &LatticeTuple) -> Vec<LatticeTuple> {
    let set: BTreeSet<LatticeTuple> = symmetry_group().iter().map(|g| apply(g, t)).collect();
    set.into_iter().collect()
}

/// Number of group elements fixing `t`; `16 = |orbit| * stabilizer_order`.
pub fn stabilizer_order(t: &LatticeTuple) -> usize {
    symmetry_group().iter().filter(|g| apply(g, t) == *t).count()
}

/// The normalization
///
/// ```text
/// min(|a3|, |a4|, |b3|, |b4|) <= min(|a1|, |a2|, |b1|, |b2|)
/// max(|a1|, |a2|, |b1|, |b2|) = |a1|
/// |b2 b3 - a2 a3| >= |a2 a4 - b2 b4|
/// ```
pub fn is_normalized(t: &LatticeTuple) -> bool {
    let [a1, a2, a3, a4, b1, b2, b3, b4] = t.to_array().map(i128::from);
    let first =
        a3.abs().min(a4.abs()).min(b3.abs()).min(b4.abs()) <= a1.abs().min(a2.abs()).min(b1.abs()).min(b2.abs());
    let second = a1.abs() >= a2.abs().max(b1.abs()).max(b2.abs());
    let k = a2 * a4 - b2 * b4;
    let l = b2 * b3 - a2 * a3;
    first && second && l.abs() >= k.abs()
}

/// One representative per orbit: the smallest normalized image, or the
/// smallest image overall if no image is normalized.
pub fn canonical_representative(t: &LatticeTuple) -> LatticeTuple {
    let images = orbit(t);
    images.iter().copied().find(is_normalized).unwrap_or(images[0])
}
