//! Bounded search for a hemispherical witness of an angle distribution.
//!
//! Half-integral angles may sit on the equator (an angle `kπ` vertex with
//! `k` corners) or at a pole; every other angle is a pole. The remaining
//! freedom is a few regular vertices and as many regular poles as the Euler
//! characteristic requires. For each split the catalog of gluings with
//! matching vertex type and cylinder count is scanned; circumferences are
//! assigned to cylinders and the segment lengths solved exactly.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalog::{gluings, Gluing, MAX_CATALOG_SEGMENTS};
use super::lengths::{incidence, positive_lengths};
use super::model::JenkinsStrebelSurface;
use crate::angles::AngleDistribution;
use crate::classifier::MonodromyClass;
use crate::exact::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest number of boundary segments (twice the number of edges).
    pub max_segments: usize,
    /// Largest denominator accepted in the target angles.
    pub max_denominator: u64,
    /// Largest number of added regular equatorial vertices.
    pub max_regular: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        // One regular vertex suffices: with any singular vertex on the net,
        // regular vertices can be erased by merging their two segments.
        SearchBounds {
            max_segments: 8,
            max_denominator: 12,
            max_regular: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found(Box<JenkinsStrebelSurface>),
    /// Nothing found within the bounds; this is not a proof of
    /// non-existence beyond them.
    Exhausted {
        splits: usize,
        gluings: usize,
        bounds: SearchBounds,
    },
}

impl SearchOutcome {
    pub fn surface(&self) -> Option<&JenkinsStrebelSurface> {
        match self {
            SearchOutcome::Found(s) => Some(s),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("witness search needs rational angles")]
    NonRational,
    #[error("search bounds exceeded: {0}")]
    BoundsExceeded(String),
}

/// One way of placing the singularities.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Split {
    /// Corner counts, largest first.
    vertices: Vec<usize>,
    /// Circumferences including regular poles, largest first.
    poles: Vec<Rational>,
    segments: usize,
    regular_vertices: usize,
}

fn splits(genus: u32, turns: &[Rational], bounds: &SearchBounds) -> Vec<Split> {
    let two = Rational::from_integer(2);
    let mut groups: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut fixed_poles = Vec::new();
    for t in turns {
        if (t * two).is_integer() {
            *groups.entry(*t).or_default() += 1;
        } else {
            fixed_poles.push(*t);
        }
    }
    let groups: Vec<(Rational, usize)> = groups.into_iter().rev().collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut vertices = Vec::new();
        let mut poles = fixed_poles.clone();
        for ((t, m), &c) in groups.iter().zip(&counts) {
            let k = (t * two).to_integer() as usize;
            vertices.extend(std::iter::repeat_n(k, c));
            poles.extend(std::iter::repeat_n(*t, m - c));
        }
        for regular in 0..=bounds.max_regular {
            let mut v = vertices.clone();
            v.extend(std::iter::repeat_n(2, regular));
            let corners: usize = v.iter().sum();
            if corners == 0 || !corners.is_multiple_of(2) || corners > bounds.max_segments {
                continue;
            }
            let edges = (corners / 2) as i64;
            let faces = 2 - 2 * genus as i64 - v.len() as i64 + edges;
            let extra = faces - poles.len() as i64;
            if faces < 1 || extra < 0 {
                continue;
            }
            let mut p = poles.clone();
            p.extend(std::iter::repeat_n(Rational::one(), extra as usize));
            p.sort_unstable_by(|a, b| b.cmp(a));
            v.sort_unstable_by(|a, b| b.cmp(a));
            out.push(Split {
                vertices: v,
                poles: p,
                segments: corners,
                regular_vertices: regular,
            });
        }
        let mut i = 0;
        while i < counts.len() {
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
    }
    // small witnesses first
    out.sort_by(|a, b| {
        (a.segments, a.regular_vertices, a.poles.len())
            .cmp(&(b.segments, b.regular_vertices, b.poles.len()))
            .then_with(|| b.vertices.cmp(&a.vertices))
    });
    out.dedup();
    out
}

/// Lexicographic successor of a sequence, for distinct permutations of a
/// multiset.
fn next_permutation(v: &mut [Rational]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn accepts(class: MonodromyClass, found: MonodromyClass) -> bool {
    class == MonodromyClass::DihedralAny || class == found
}

/// Tries every assignment of circumferences to the cylinders of `gluing`.
fn realize(gluing: &Gluing, poles: &[Rational], class: MonodromyClass) -> Option<JenkinsStrebelSurface> {
    let (rows, edge_of) = incidence(&gluing.faces, &gluing.partner);
    let mut assignment: Vec<Rational> = poles.to_vec();
    assignment.sort_unstable();
    loop {
        if let Some(polytope) = positive_lengths(&rows, &assignment) {
            for lengths in polytope.samples() {
                let per_dart: Vec<Rational> = edge_of.iter().map(|&e| lengths[e]).collect();
                let surface = JenkinsStrebelSurface::from_darts(&gluing.faces, &gluing.partner, &per_dart);
                match surface.monodromy_class() {
                    Ok(found) if accepts(class, found) => return Some(surface),
                    _ => {}
                }
            }
        }
        if !next_permutation(&mut assignment) {
            return None;
        }
    }
}

fn target_turns(dist: &AngleDistribution, bounds: &SearchBounds) -> Result<Vec<Rational>, SearchError> {
    let mut turns = Vec::new();
    for angle in dist.singular_angles() {
        let t = angle.turns().ok_or(SearchError::NonRational)?;
        let denominator = t.denom().to_u64().unwrap_or(u64::MAX);
        if denominator > bounds.max_denominator {
            return Err(SearchError::BoundsExceeded(format!(
                "angle denominator {denominator} exceeds {}",
                bounds.max_denominator
            )));
        }
        turns.push(t);
    }
    Ok(turns)
}

/// Searches for a hemispherical surface with the singular angles of `dist`
/// (regular points are dropped) and monodromy in `class`.
pub fn search_witness(
    dist: &AngleDistribution,
    class: MonodromyClass,
    bounds: &SearchBounds,
) -> Result<SearchOutcome, SearchError> {
    if bounds.max_segments > MAX_CATALOG_SEGMENTS {
        return Err(SearchError::BoundsExceeded(format!(
            "at most {MAX_CATALOG_SEGMENTS} segments are supported, {} requested",
            bounds.max_segments
        )));
    }
    let turns = target_turns(dist, bounds)?;
    let target = AngleDistribution::new(dist.genus(), dist.singular_angles())
        .ok()
        .map(|d| d.sorted());
    let candidates = splits(dist.genus(), &turns, bounds);
    let mut scanned = 0;
    for split in &candidates {
        let matching: Vec<&Gluing> = gluings(split.segments)
            .iter()
            .filter(|g| g.vertex_type == split.vertices && g.faces.len() == split.poles.len())
            .collect();
        scanned += matching.len();
        let found = matching.par_iter().find_map_first(|g| {
            let surface = realize(g, &split.poles, class)?;
            // the round trip must reproduce the request exactly
            let back = surface.to_distribution(true).ok()?;
            (back == target).then_some(surface)
        });
        if let Some(surface) = found {
            return Ok(SearchOutcome::Found(Box::new(surface)));
        }
    }
    Ok(SearchOutcome::Exhausted {
        splits: candidates.len(),
        gluings: scanned,
        bounds: *bounds,
    })
}
