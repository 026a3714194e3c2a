//! Canonical labelings of connected gluings.
//!
//! A gluing is a pair of permutations on darts (segments): `next` walks a
//! cylinder boundary, `partner` is the pairing involution. Relabeling the
//! darts, rotating a boundary or mirroring every boundary at once gives an
//! isomorphic surface; the canonical code is the smallest breadth-first
//! code over all roots and both orientations.

/// One entry per dart in canonical order: the labels of its successor and
/// partner, and its decoration (a length, or `()`).
pub(crate) type Code<L> = Vec<(usize, usize, L)>;

pub(crate) struct Canonical<L> {
    pub code: Code<L>,
    /// `order[i]` is the original dart labeled `i`.
    pub order: Vec<usize>,
    pub mirrored: bool,
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Labels darts in breadth-first order from `root`, returning `None` as
/// soon as the code exceeds `best`.
fn code_from<L: Ord + Clone>(
    root: usize,
    next: &[usize],
    partner: &[usize],
    decoration: &[L],
    best: Option<&Code<L>>,
) -> Option<(Code<L>, Vec<usize>)> {
    let n = next.len();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut code = Vec::with_capacity(n);
    let mut tighter = false;
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for e in [next[d], partner[d]] {
            if label[e] == usize::MAX {
                label[e] = order.len();
                order.push(e);
            }
        }
        let entry = (label[next[d]], label[partner[d]], decoration[d].clone());
        if let (Some(best), false) = (best, tighter) {
            match entry.cmp(&best[i]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Less => tighter = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        code.push(entry);
        i += 1;
    }
    // disconnected gluings never reach every dart
    (order.len() == n).then_some((code, order))
}

pub(crate) fn canonical<L: Ord + Clone>(next: &[usize], partner: &[usize], decoration: &[L]) -> Canonical<L> {
    let mirror = inverse(next);
    let mut best: Option<Canonical<L>> = None;
    for (mirrored, succ) in [(false, next), (true, mirror.as_slice())] {
        for root in 0..next.len() {
            if let Some((code, order)) = code_from(root, succ, partner, decoration, best.as_ref().map(|b| &b.code)) {
                if best.as_ref().is_none_or(|b| code < b.code) {
                    best = Some(Canonical { code, order, mirrored });
                }
            }
        }
    }
    best.expect("gluing is connected and non-empty")
}

/// Whether `next` and `partner` generate a transitive group.
pub(crate) fn connected(next: &[usize], partner: &[usize]) -> bool {
    let n = next.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(d) = stack.pop() {
        for e in [next[d], partner[d]] {
            if !seen[e] {
                seen[e] = true;
                count += 1;
                stack.push(e);
            }
        }
    }
    count == n
}

/// Cycles of a permutation, each starting at its smallest element, sorted
/// by that element.
pub(crate) fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut d = p[start];
        while d != start {
            seen[d] = true;
            cycle.push(d);
            d = p[d];
        }
        out.push(cycle);
    }
    out
}

/// Vertex permutation: the corner at the start of `d` continues at the
/// start of the segment after its partner.
pub(crate) fn vertex_permutation(next: &[usize], partner: &[usize]) -> Vec<usize> {
    partner.iter().map(|&p| next[p]).collect()
}

/// Applies a canonical labeling: returns relabeled `next` and `partner`.
pub(crate) fn relabel<L>(next: &[usize], partner: &[usize], canon: &Canonical<L>) -> (Vec<usize>, Vec<usize>) {
    let n = next.len();
    let mut label = vec![0; n];
    for (i, &d) in canon.order.iter().enumerate() {
        label[d] = i;
    }
    let succ = if canon.mirrored { inverse(next) } else { next.to_vec() };
    let mut new_next = vec![0; n];
    let mut new_partner = vec![0; n];
    for d in 0..n {
        new_next[label[d]] = label[succ[d]];
        new_partner[label[d]] = label[partner[d]];
    }
    (new_next, new_partner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeling_invariance() {
        // one cylinder a b a' b' (a torus)
        let next = vec![1, 2, 3, 0];
        let partner = vec![2, 3, 0, 1];
        let base = canonical(&next, &partner, &[(); 4]).code;
        // conjugate by a permutation
        let perm = [2, 0, 3, 1];
        let mut n2 = vec![0; 4];
        let mut p2 = vec![0; 4];
        for d in 0..4 {
            n2[perm[d]] = perm[next[d]];
            p2[perm[d]] = perm[partner[d]];
        }
        assert_eq!(canonical(&n2, &p2, &[(); 4]).code, base);
        let canon = canonical(&n2, &p2, &[(); 4]);
        let (n3, p3) = relabel(&n2, &p2, &canon);
        assert_eq!(canonical(&n3, &p3, &[(); 4]).code, base);
        assert_eq!(canonical(&n3, &p3, &[(); 4]).order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn vertices_of_small_gluings() {
        let next = vec![1, 0];
        let partner = vec![1, 0];
        assert_eq!(cycles(&vertex_permutation(&next, &partner)), vec![vec![0], vec![1]]);
        let next = vec![0, 1];
        assert_eq!(cycles(&vertex_permutation(&next, &partner)), vec![vec![0, 1]]);
        let torus_next = vec![1, 2, 3, 0];
        let torus_partner = vec![2, 3, 0, 1];
        assert_eq!(cycles(&vertex_permutation(&torus_next, &torus_partner)).len(), 1);
    }
}
