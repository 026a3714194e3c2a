//! All connected gluings with a given number of segments, up to
//! isomorphism, computed once and cached.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::canonical::{canonical, connected, cycles, relabel, vertex_permutation, Code};

/// Largest segment count the catalog is built for.
pub const MAX_CATALOG_SEGMENTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Gluing {
    pub next: Vec<usize>,
    pub partner: Vec<usize>,
    /// Cylinder boundaries.
    pub faces: Vec<Vec<usize>>,
    /// Corner counts of the equatorial vertices, largest first.
    pub vertex_type: Vec<usize>,
}

impl Gluing {
    fn new(next: Vec<usize>, partner: Vec<usize>) -> Gluing {
        let faces = cycles(&next);
        let mut vertex_type: Vec<usize> = cycles(&vertex_permutation(&next, &partner))
            .iter()
            .map(Vec::len)
            .collect();
        vertex_type.sort_unstable_by(|a, b| b.cmp(a));
        Gluing {
            next,
            partner,
            faces,
            vertex_type,
        }
    }

    #[cfg(test)]
    pub fn genus(&self) -> i64 {
        let edges = self.next.len() / 2;
        let chi = self.vertex_type.len() as i64 - edges as i64 + self.faces.len() as i64;
        (2 - chi) / 2
    }
}

static CATALOG: [OnceLock<Vec<Gluing>>; MAX_CATALOG_SEGMENTS / 2] =
    [const { OnceLock::new() }; MAX_CATALOG_SEGMENTS / 2];

/// Canonical gluings with exactly `segments` segments, in code order.
pub(crate) fn gluings(segments: usize) -> &'static [Gluing] {
    assert!(
        segments >= 2 && segments.is_multiple_of(2) && segments <= MAX_CATALOG_SEGMENTS,
        "catalog holds even segment counts up to {MAX_CATALOG_SEGMENTS}"
    );
    CATALOG[segments / 2 - 1].get_or_init(|| build(segments))
}

fn build(n: usize) -> Vec<Gluing> {
    let partner: Vec<usize> = (0..n).map(|d| d ^ 1).collect();
    // split the permutations of 0..n by the image of dart 0
    let found: Vec<BTreeMap<Code<()>, Gluing>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local = BTreeMap::new();
            let rest: Vec<usize> = (0..n).filter(|&d| d != first).collect();
            let decoration = vec![(); n];
            let mut next = vec![0; n];
            next[0] = first;
            for_each_permutation(rest, |tail| {
                next[1..].copy_from_slice(tail);
                if !connected(&next, &partner) {
                    return;
                }
                let canon = canonical(&next, &partner, &decoration);
                if let std::collections::btree_map::Entry::Vacant(slot) = local.entry(canon.code.clone()) {
                    let (cn, cp) = relabel(&next, &partner, &canon);
                    slot.insert(Gluing::new(cn, cp));
                }
            });
            local
        })
        .collect();
    let mut all = BTreeMap::new();
    for map in found {
        all.extend(map);
    }
    all.into_values().collect()
}

/// Heap's algorithm.
fn for_each_permutation(mut items: Vec<usize>, mut f: impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(&items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(&items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_segments() {
        // the basic example and two hemispheres
        let g = gluings(2);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|x| x.genus() == 0));
    }

    /// Naive oracle: orbit representatives under every relabeling and
    /// mirroring.
    fn naive_count(n: usize) -> usize {
        let partner: Vec<usize> = (0..n).map(|d| d ^ 1).collect();
        let mut relabelings = Vec::new();
        for_each_permutation((0..n).collect(), |p| relabelings.push(p.to_vec()));
        let mut classes = std::collections::BTreeSet::new();
        for next in &relabelings {
            if !connected(next, &partner) {
                continue;
            }
            let mut inv = vec![0; n];
            for (i, &j) in next.iter().enumerate() {
                inv[j] = i;
            }
            let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
            for succ in [next, &inv] {
                for pi in &relabelings {
                    let mut a = vec![0; n];
                    let mut b = vec![0; n];
                    for d in 0..n {
                        a[pi[d]] = pi[succ[d]];
                        b[pi[d]] = pi[partner[d]];
                    }
                    if best.as_ref().is_none_or(|x| (&a, &b) < (&x.0, &x.1)) {
                        best = Some((a, b));
                    }
                }
            }
            classes.insert(best.unwrap());
        }
        classes.len()
    }

    #[test]
    fn catalog_matches_naive_orbits() {
        for n in [2, 4, 6] {
            assert_eq!(gluings(n).len(), naive_count(n), "{n} segments");
        }
    }

    #[test]
    fn torus_appears_once_with_two_edges() {
        let tori = gluings(4).iter().filter(|g| g.genus() == 1).count();
        assert_eq!(tori, 1);
    }

    #[test]
    fn heap_visits_every_permutation() {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(vec![0, 1, 2, 3], |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }
}
