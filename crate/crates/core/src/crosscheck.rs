//! Grid sweeps comparing the literal path, the strata reduction and the
//! witness search.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::AngleDistribution;
use crate::classifier::{
    classify, classify_literal, classify_via_strata, is_documented_divergence, Certificate, MonodromyClass, Verdict,
};
use crate::exact::{format_rational, Rational};
use crate::surfaces::{search_witness, SearchBounds, SearchError, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    /// Angle values in turns.
    pub coefficients: Vec<Rational>,
    pub max_angles: usize,
    pub genera: Vec<u32>,
    pub classes: Vec<MonodromyClass>,
    /// Run the witness search on genus-0 cases within these bounds.
    pub oracle: Option<SearchBounds>,
}

/// All multisets of `coefficients` with 1 to `max_angles` elements, each
/// sorted in decreasing order.
pub fn multisets(coefficients: &[Rational], max_angles: usize) -> Vec<Vec<Rational>> {
    let mut values = coefficients.to_vec();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    let mut out = Vec::new();
    fn go(values: &[Rational], start: usize, cur: &mut Vec<Rational>, max: usize, out: &mut Vec<Vec<Rational>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            go(values, i, cur, max, out);
            cur.pop();
        }
    }
    go(&values, 0, &mut Vec::new(), max_angles, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OracleStatus {
    Witness,
    Exhausted,
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub genus: u32,
    #[serde(with = "crate::exact::rational_vec_serde")]
    pub turns: Vec<Rational>,
    pub class: MonodromyClass,
    pub literal: Verdict,
    pub reduction: Verdict,
    pub authoritative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleStatus>,
}

impl CaseReport {
    pub fn paths_agree(&self) -> bool {
        self.literal.realizable == self.reduction.realizable
    }

    pub fn documented(&self) -> bool {
        is_documented_divergence(&self.literal, &self.reduction)
    }

    /// The search contradicts the authoritative verdict.
    pub fn oracle_conflict(&self) -> bool {
        match self.oracle {
            Some(OracleStatus::Witness) => !self.authoritative,
            Some(OracleStatus::Exhausted) => self.authoritative,
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        let turns: Vec<String> = self.turns.iter().map(format_rational).collect();
        format!("g={} {} ({})", self.genus, self.class, turns.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub cases: Vec<CaseReport>,
}

impl CrosscheckReport {
    pub fn divergences(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.paths_agree())
    }

    pub fn undocumented(&self) -> impl Iterator<Item = &CaseReport> {
        self.divergences().filter(|c| !c.documented())
    }

    pub fn oracle_conflicts(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| c.oracle_conflict())
    }

    pub fn is_clean(&self) -> bool {
        self.undocumented().next().is_none() && self.oracle_conflicts().next().is_none()
    }

    /// One row per divergent case, with both certificates.
    pub fn divergence_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case | literal | reduction | documented");
        for c in self.divergences() {
            let _ = writeln!(
                out,
                "{} | {} | {} | {}",
                c.describe(),
                summary(&c.literal),
                summary(&c.reduction),
                if c.documented() { "yes" } else { "NO" }
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let oracle_runs = self
            .cases
            .iter()
            .filter(|c| matches!(c.oracle, Some(OracleStatus::Witness | OracleStatus::Exhausted)))
            .count();
        format!(
            "{} cases, {} divergent ({} undocumented), {} oracle runs, {} oracle conflicts",
            self.cases.len(),
            self.divergences().count(),
            self.undocumented().count(),
            oracle_runs,
            self.oracle_conflicts().count()
        )
    }
}

fn summary(v: &Verdict) -> String {
    let head = if v.realizable { "YES" } else { "NO" };
    format!("{head}: {}", v.certificate)
}

fn oracle(dist: &AngleDistribution, verdict: &Verdict, bounds: &SearchBounds) -> OracleStatus {
    if verdict.certificate == Certificate::OutOfScopeTrivialMonodromy {
        // branched covers of the round sphere; the search still builds some
        return OracleStatus::Skipped {
            reason: "trivial monodromy is out of scope".into(),
        };
    }
    if dist.genus() != 0 {
        return OracleStatus::Skipped {
            reason: "genus above zero".into(),
        };
    }
    if let Some(corners) = equatorial_corners(dist) {
        if corners > bounds.max_segments as i128 {
            return OracleStatus::Skipped {
                reason: format!("{corners} equatorial corners exceed the segment bound"),
            };
        }
    }
    match search_witness(dist, verdict.class, bounds) {
        Ok(SearchOutcome::Found(_)) => OracleStatus::Witness,
        Ok(SearchOutcome::Exhausted { .. }) => OracleStatus::Exhausted,
        Err(SearchError::NonRational) => OracleStatus::Skipped {
            reason: "symbolic angles".into(),
        },
        Err(e) => OracleStatus::Skipped { reason: e.to_string() },
    }
}

/// Corners available to the equatorial net: `2t` summed over the
/// half-integral angles `t` (in turns). Any hemispherical realization has
/// at most this many segments, or two when the net has no singular vertex.
pub fn equatorial_corners(dist: &AngleDistribution) -> Option<i128> {
    let mut total = 0;
    for angle in dist.singular_angles() {
        let doubled = angle.turns()? * Rational::from_integer(2);
        if doubled.is_integer() {
            total += doubled.to_integer();
        }
    }
    Some(total.max(2))
}

pub fn run_case(genus: u32, turns: &[Rational], class: MonodromyClass, bounds: Option<&SearchBounds>) -> CaseReport {
    let dist = AngleDistribution::from_turns(genus, turns).expect("grid angles are positive");
    let verdict = classify(&dist, class);
    CaseReport {
        genus,
        turns: turns.to_vec(),
        class,
        literal: classify_literal(&dist, class),
        reduction: classify_via_strata(&dist, class),
        authoritative: verdict.realizable,
        oracle: bounds.map(|b| oracle(&dist, &verdict, b)),
    }
}

/// Every case of the grid, in grid order.
pub fn crosscheck(grid: &Grid) -> CrosscheckReport {
    let sets = multisets(&grid.coefficients, grid.max_angles);
    let mut jobs = Vec::new();
    for &genus in &grid.genera {
        for turns in &sets {
            for &class in &grid.classes {
                jobs.push((genus, turns, class));
            }
        }
    }
    let cases = jobs
        .par_iter()
        .map(|(genus, turns, class)| run_case(*genus, turns, *class, grid.oracle.as_ref()))
        .collect();
    CrosscheckReport { cases }
}
