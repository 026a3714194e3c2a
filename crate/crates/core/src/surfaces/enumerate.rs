use std::collections::BTreeMap;

use rayon::prelude::*;

use super::canonical::{canonical, cycles, Code};
use super::catalog::{gluings, MAX_CATALOG_SEGMENTS};
use super::lengths::incidence;
use super::model::{JenkinsStrebelSurface, SurfaceError};
use super::search::SearchError;
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_segments: usize,
    /// Allowed segment lengths.
    pub lengths: Vec<Rational>,
    /// When set, every cylinder circumference must be one of these.
    pub circumferences: Option<Vec<Rational>>,
}

/// A surface in canonical form: darts relabeled by the canonical code,
/// every boundary starting at its smallest label.
fn from_code(code: &Code<Rational>) -> JenkinsStrebelSurface {
    let next: Vec<usize> = code.iter().map(|e| e.0).collect();
    let partner: Vec<usize> = code.iter().map(|e| e.1).collect();
    let lengths: Vec<Rational> = code.iter().map(|e| e.2).collect();
    JenkinsStrebelSurface::from_darts(&cycles(&next), &partner, &lengths)
}

/// Canonical representative of a surface: isomorphic surfaces (relabeled,
/// boundaries rotated, or mirrored) have equal canonical forms.
pub fn canonical_form(surface: &JenkinsStrebelSurface) -> Result<JenkinsStrebelSurface, SurfaceError> {
    surface.validate().map_err(SurfaceError::Invalid)?;
    let darts = surface.darts();
    let canon = canonical(&darts.next, &darts.partner, &darts.length);
    Ok(from_code(&canon.code))
}

/// All valid surfaces within the bounds, one per isomorphism class, in
/// canonical order.
pub fn enumerate_surfaces(bounds: &EnumerationBounds) -> Result<Vec<JenkinsStrebelSurface>, SearchError> {
    if bounds.max_segments > MAX_CATALOG_SEGMENTS {
        return Err(SearchError::BoundsExceeded(format!(
            "at most {MAX_CATALOG_SEGMENTS} segments are supported, {} requested",
            bounds.max_segments
        )));
    }
    let mut lengths = bounds.lengths.clone();
    lengths.sort_unstable();
    lengths.dedup();
    if lengths.is_empty() || lengths.iter().any(|l| *l <= Rational::from_integer(0)) {
        return Err(SearchError::BoundsExceeded("segment lengths must be positive".into()));
    }
    let mut all: BTreeMap<Code<Rational>, ()> = BTreeMap::new();
    for segments in (2..=bounds.max_segments).step_by(2) {
        let found: Vec<Vec<Code<Rational>>> = gluings(segments)
            .par_iter()
            .map(|g| {
                let (rows, edge_of) = incidence(&g.faces, &g.partner);
                let edges = segments / 2;
                let mut out = Vec::new();
                let mut choice = vec![0usize; edges];
                loop {
                    let per_dart: Vec<Rational> = edge_of.iter().map(|&e| lengths[choice[e]]).collect();
                    let circumferences_ok = bounds.circumferences.as_ref().is_none_or(|allowed| {
                        rows.iter().all(|row| {
                            let w: Rational = row
                                .iter()
                                .zip(&choice)
                                .map(|(&m, &c)| lengths[c] * Rational::from_integer(m as i128))
                                .sum();
                            allowed.contains(&w)
                        })
                    });
                    if circumferences_ok {
                        let canon = canonical(&g.next, &g.partner, &per_dart);
                        out.push(canon.code);
                    }
                    // odometer over the length choices
                    let mut i = 0;
                    while i < edges {
                        choice[i] += 1;
                        if choice[i] < lengths.len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == edges {
                        break;
                    }
                }
                out
            })
            .collect();
        for codes in found {
            for code in codes {
                all.insert(code, ());
            }
        }
    }
    Ok(all.keys().map(from_code).collect())
}
