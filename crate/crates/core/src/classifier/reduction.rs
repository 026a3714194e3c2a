//! Reduction to residue realizability in strata.
//!
//! A hemispherical surface is a totally real Jenkins-Strebel differential:
//! its equatorial singularities of angle `(2+d)π` are zeros or simple poles
//! of order `d`, while every cylinder is a double pole whose quadratic
//! residue is the square of the cone angle at its center (in turns). Double
//! poles with residue 1 are regular points. A distribution is realizable iff
//! some choice of equatorial singularities gives a residue configuration the
//! stratum realizes.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::Certificate;
use super::literal::coaxial_split;
use super::Singular;
use crate::angles::{integer_signed_sums, Angle, SignedSumWitness};
use crate::exact::Exact;
use crate::strata::{
    abelian_residues_realizable, quad_residues_realizable, AbelianResidueConfig, AbelianStratum, QuadResidueConfig,
    QuadraticStratum, StrataVerdict,
};

/// Strict dihedral: equatorial angles become zeros of a quadratic
/// differential, everything else a double pole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticAssignment {
    pub equatorial: Vec<Angle>,
    pub pole_angles: Vec<Angle>,
    /// Double poles at regular points (residue 1).
    pub added_units: usize,
    pub stratum: QuadraticStratum,
    pub residues: QuadResidueConfig,
}

/// Co-axial: every integer angle `a` becomes a zero of order `a−1` of an
/// Abelian differential; the other angles and `added_units` regular points
/// are simple poles with signed residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianAssignment {
    pub signs: SignedSumWitness,
    pub m: i64,
    pub added_units: usize,
    pub stratum: AbelianStratum,
    pub residues: AbelianResidueConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StratumAssignment {
    Quadratic(QuadraticAssignment),
    Abelian(AbelianAssignment),
}

impl StratumAssignment {
    pub fn stratum_name(&self) -> String {
        match self {
            StratumAssignment::Quadratic(q) => q.stratum.to_string(),
            StratumAssignment::Abelian(a) => a.stratum.to_string(),
        }
    }

    pub fn query(&self) -> StrataVerdict {
        let verdict = match self {
            StratumAssignment::Quadratic(q) => quad_residues_realizable(&q.stratum, &q.residues),
            StratumAssignment::Abelian(a) => abelian_residues_realizable(&a.stratum, &a.residues),
        };
        verdict.expect("assignments are built with matching arity and a primitive stratum")
    }
}

impl fmt::Display for StratumAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumAssignment::Quadratic(q) => write!(f, "stratum {} residues {}", q.stratum, q.residues),
            StratumAssignment::Abelian(a) => write!(
                f,
                "stratum {} residues {} (K={}, M={})",
                a.stratum, a.residues, a.signs.k, a.m
            ),
        }
    }
}

/// Admissible quadratic assignments in canonical order: largest total
/// equatorial order first, then lexicographically by the equatorial angles.
pub fn strict_assignments(genus: u32, angles: &[Angle]) -> Vec<QuadraticAssignment> {
    let mut sorted: Vec<Angle> = angles.iter().filter(|a| !a.is_regular()).cloned().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let n = sorted.len();
    // distinct integer / half-integer values with multiplicity
    let mut groups: Vec<(Angle, usize)> = Vec::new();
    for angle in sorted.iter().filter(|a| a.is_half_integral()) {
        match groups.last_mut() {
            Some((v, m)) if v == angle => *m += 1,
            _ => groups.push((angle.clone(), 1)),
        }
    }
    let g = genus as i64;
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        if let Some(assignment) = build_quadratic(g, &sorted, n, &groups, &counts) {
            out.push(assignment);
        }
        // next count vector
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
    out.sort_by(|x, y| {
        let dx: i64 = x.stratum.orders().iter().sum();
        let dy: i64 = y.stratum.orders().iter().sum();
        dy.cmp(&dx).then_with(|| y.equatorial.cmp(&x.equatorial))
    });
    out
}

fn order_of(angle: &Angle) -> i64 {
    let turns = angle.turns().expect("half-integral angles are rational");
    (turns * 2).to_integer() as i64 - 2
}

fn build_quadratic(
    g: i64,
    sorted: &[Angle],
    n: usize,
    groups: &[(Angle, usize)],
    counts: &[usize],
) -> Option<QuadraticAssignment> {
    let mut equatorial = Vec::new();
    for ((angle, _), count) in groups.iter().zip(counts) {
        equatorial.extend(std::iter::repeat_n(angle.clone(), *count));
    }
    let orders: Vec<i64> = equatorial.iter().map(order_of).collect();
    let total: i64 = orders.iter().sum();
    if total % 2 != 0 {
        return None;
    }
    if g == 0 && !orders.iter().any(|d| d % 2 != 0) {
        return None;
    }
    let t = (total - 4 * g + 4) / 2;
    let pole_count = n - equatorial.len();
    if t < 1 || t < pole_count as i64 {
        return None;
    }
    let mut pole_angles = Vec::with_capacity(pole_count);
    let mut remaining = counts.to_vec();
    for angle in sorted {
        if let Some(i) = groups.iter().position(|(v, _)| v == angle) {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                continue;
            }
        }
        pole_angles.push(angle.clone());
    }
    let added_units = t as usize - pole_count;
    let mut roots: Vec<Exact> = pole_angles.iter().map(|a| a.value().clone()).collect();
    roots.extend(std::iter::repeat_n(Exact::from_integer(1), added_units));
    if roots.iter().all(Exact::is_rational) {
        roots.sort_by_key(|r| r.rational_part());
    }
    let stratum = QuadraticStratum::new(g as u32, orders, t as usize).ok()?;
    let residues = QuadResidueConfig::from_roots(&roots).ok()?;
    Some(QuadraticAssignment {
        equatorial,
        pole_angles,
        added_units,
        stratum,
        residues,
    })
}

/// Abelian assignments, one per integer signed sum `K` with a nonnegative
/// even slack, in increasing `K`.
pub fn coaxial_assignments(genus: u32, angles: &[Angle]) -> Vec<AbelianAssignment> {
    let singular: Vec<Angle> = angles.iter().filter(|a| !a.is_regular()).cloned().collect();
    let (a, c) = coaxial_split(&singular);
    let g = genus as i64;
    let t = a.iter().sum::<i64>() - a.len() as i64 + 2 - 2 * g;
    let p = c.len() as i64;
    let zero_orders: Vec<u32> = a.iter().map(|v| (v - 1) as u32).collect();
    let unit = Exact::from_integer(1);
    let mut out = Vec::new();
    if t < 1 {
        return out;
    }
    for (k, witness) in integer_signed_sums(&c) {
        let m = t - p - k as i64;
        if m < 0 || m % 2 != 0 {
            continue;
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (value, sign) in c.iter().zip(&witness.signs) {
            if *sign > 0 {
                positive.push(value.clone());
            } else {
                negative.push(value.clone());
            }
        }
        positive.extend(std::iter::repeat_n(unit.clone(), (m / 2) as usize));
        negative.extend(std::iter::repeat_n(unit.clone(), (m / 2 + k as i64) as usize));
        let Ok(stratum) = AbelianStratum::new(genus, zero_orders.clone(), t as usize) else {
            continue;
        };
        let Ok(residues) = AbelianResidueConfig::new(positive, negative) else {
            continue;
        };
        out.push(AbelianAssignment {
            signs: witness,
            m,
            added_units: (m + k as i64) as usize,
            stratum,
            residues,
        });
    }
    out
}

fn first_accepting(assignments: Vec<StratumAssignment>) -> (bool, Certificate) {
    let tried = assignments.len();
    let verdicts: Vec<StrataVerdict> = assignments.par_iter().map(StratumAssignment::query).collect();
    if let Some(i) = verdicts.iter().position(|v| v.realizable) {
        return (
            true,
            Certificate::Reduction {
                assignment: assignments[i].clone(),
                strata: verdicts[i].clone(),
            },
        );
    }
    let maximal = assignments.into_iter().zip(verdicts).next();
    (false, Certificate::ReductionExhausted { tried, maximal })
}

pub(crate) fn strict(singular: &Singular) -> (bool, Certificate) {
    let part = &singular.part;
    if singular.genus == 0 {
        if singular.all_even() {
            return (false, Certificate::OutOfScopeTrivialMonodromy);
        }
        if part.n_odd() + part.n_noninteger() < 3 {
            return (
                false,
                Certificate::CyclicMonodromy {
                    n_odd: part.n_odd(),
                    n_noninteger: part.n_noninteger(),
                },
            );
        }
    }
    let assignments = strict_assignments(singular.genus, &singular.angles)
        .into_iter()
        .map(StratumAssignment::Quadratic)
        .collect();
    first_accepting(assignments)
}

pub(crate) fn coaxial(singular: &Singular) -> (bool, Certificate) {
    if singular.genus == 0 && singular.part.n_odd() == 0 && singular.part.n_noninteger() == 0 {
        return (false, Certificate::OutOfScopeTrivialMonodromy);
    }
    let assignments = coaxial_assignments(singular.genus, &singular.angles)
        .into_iter()
        .map(StratumAssignment::Abelian)
        .collect();
    first_accepting(assignments)
}
