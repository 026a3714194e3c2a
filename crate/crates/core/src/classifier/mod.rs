//! Realizability of angle distributions by spherical metrics with co-axial
//! or strict dihedral monodromy.
//!
//! Two independent decision paths are provided. [`classify_literal`] applies
//! the closed-form classification (Gauss-Bonnet type inequalities, the
//! exceptional families and the arithmetic conditions). [`classify_via_strata`]
//! instead enumerates every way of splitting the singularities between the
//! equatorial net and the poles of a hemispherical surface and asks the
//! residue predicates of [`crate::strata`] about each resulting stratum.
//! [`classify`] follows the closed form but hands the arithmetic conditions
//! over to the reduction, which is the authoritative reading of them.
//!
//! Marked regular points (angle exactly 2π) are removed before deciding.

mod certificate;
mod compare;
pub mod families;
mod literal;
mod reduction;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angles::{plain_gb, Angle, AngleDistribution, Partition};
use crate::surfaces::{search_witness, JenkinsStrebelSurface, SearchBounds, SearchError, SearchOutcome};

pub use certificate::{ArithmeticCheck, Certificate, CoaxialArithmetic};
pub use compare::{compare_classes, ComparisonReport};
pub use families::{TorusFamily, TwoOddVariant};
pub use reduction::{
    coaxial_assignments, strict_assignments, AbelianAssignment, QuadraticAssignment, StratumAssignment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonodromyClass {
    Coaxial,
    StrictDihedral,
    DihedralAny,
}

impl MonodromyClass {
    pub const ALL: [MonodromyClass; 3] = [
        MonodromyClass::Coaxial,
        MonodromyClass::StrictDihedral,
        MonodromyClass::DihedralAny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MonodromyClass::Coaxial => "coaxial",
            MonodromyClass::StrictDihedral => "strict-dihedral",
            MonodromyClass::DihedralAny => "dihedral-any",
        }
    }
}

impl fmt::Display for MonodromyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MonodromyClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coaxial" | "co-axial" => Ok(MonodromyClass::Coaxial),
            "strict" | "strict-dihedral" => Ok(MonodromyClass::StrictDihedral),
            "any" | "dihedral" | "dihedral-any" => Ok(MonodromyClass::DihedralAny),
            other => Err(format!(
                "unknown monodromy class `{other}` (expected coaxial, strict or any)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionPath {
    Literal,
    StrataReduction,
}

impl fmt::Display for DecisionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecisionPath::Literal => "literal",
            DecisionPath::StrataReduction => "strata-reduction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub realizable: bool,
    pub class: MonodromyClass,
    pub path: DecisionPath,
    pub certificate: Certificate,
    /// Whether `σ > 2g − 2 + n` holds; `None` when σ involves generators.
    pub plain_gauss_bonnet: Option<bool>,
    /// Marked regular points removed before deciding.
    pub regular_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<JenkinsStrebelSurface>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.realizable {
            "realizable"
        } else {
            "not realizable"
        };
        write!(
            f,
            "{head} ({}, {} path); certificate: {}",
            self.class, self.path, self.certificate
        )?;
        if !self.realizable && self.plain_gauss_bonnet == Some(false) {
            f.write_str("; plain Gauss-Bonnet also fails")?;
        }
        if self.regular_points > 0 {
            write!(f, "; {} regular point(s) ignored", self.regular_points)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifierError {
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Genus and the angles that are not marked regular points.
#[derive(Debug, Clone)]
pub(crate) struct Singular {
    pub genus: u32,
    pub angles: Vec<Angle>,
    pub part: Partition,
}

impl Singular {
    pub fn of(dist: &AngleDistribution) -> Singular {
        // a fixed order keeps certificates independent of the input order
        let mut angles = dist.singular_angles();
        angles.sort();
        let part = Partition::of(&angles);
        Singular {
            genus: dist.genus(),
            angles,
            part,
        }
    }

    pub fn all_even(&self) -> bool {
        self.part.n_odd() == 0 && self.part.n_noninteger() == 0
    }
}

fn finish(
    dist: &AngleDistribution,
    class: MonodromyClass,
    path: DecisionPath,
    outcome: (bool, Certificate),
) -> Verdict {
    let part = Partition::of(dist.angles());
    Verdict {
        realizable: outcome.0,
        class,
        path,
        certificate: outcome.1,
        plain_gauss_bonnet: plain_gb(&part, dist.genus()),
        regular_points: dist.regular_points(),
        witness: None,
    }
}

fn either(dist: &AngleDistribution, path: DecisionPath, coaxial: Verdict, strict: Verdict) -> Verdict {
    let realizable = coaxial.realizable || strict.realizable;
    finish(
        dist,
        MonodromyClass::DihedralAny,
        path,
        (
            realizable,
            Certificate::Either {
                coaxial: Box::new(coaxial),
                strict: Box::new(strict),
            },
        ),
    )
}

/// The authoritative verdict.
pub fn classify(dist: &AngleDistribution, class: MonodromyClass) -> Verdict {
    let singular = Singular::of(dist);
    match class {
        MonodromyClass::Coaxial => finish(dist, class, DecisionPath::Literal, literal::coaxial(&singular)),
        MonodromyClass::StrictDihedral => finish(dist, class, DecisionPath::Literal, literal::strict(&singular, true)),
        MonodromyClass::DihedralAny => either(
            dist,
            DecisionPath::Literal,
            classify(dist, MonodromyClass::Coaxial),
            classify(dist, MonodromyClass::StrictDihedral),
        ),
    }
}

/// The closed-form classification read literally, arithmetic bounds included.
pub fn classify_literal(dist: &AngleDistribution, class: MonodromyClass) -> Verdict {
    let singular = Singular::of(dist);
    match class {
        MonodromyClass::Coaxial => finish(dist, class, DecisionPath::Literal, literal::coaxial(&singular)),
        MonodromyClass::StrictDihedral => finish(dist, class, DecisionPath::Literal, literal::strict(&singular, false)),
        MonodromyClass::DihedralAny => either(
            dist,
            DecisionPath::Literal,
            classify_literal(dist, MonodromyClass::Coaxial),
            classify_literal(dist, MonodromyClass::StrictDihedral),
        ),
    }
}

/// Decides by enumerating stratum assignments; the first accepting one in
/// canonical order is reported.
pub fn classify_via_strata(dist: &AngleDistribution, class: MonodromyClass) -> Verdict {
    let singular = Singular::of(dist);
    match class {
        MonodromyClass::Coaxial => finish(
            dist,
            class,
            DecisionPath::StrataReduction,
            reduction::coaxial(&singular),
        ),
        MonodromyClass::StrictDihedral => {
            finish(dist, class, DecisionPath::StrataReduction, reduction::strict(&singular))
        }
        MonodromyClass::DihedralAny => either(
            dist,
            DecisionPath::StrataReduction,
            classify_via_strata(dist, MonodromyClass::Coaxial),
            classify_via_strata(dist, MonodromyClass::StrictDihedral),
        ),
    }
}

/// [`classify`] plus a hemispherical witness for realizable verdicts.
///
/// Returns the verdict unchanged when the search exhausts its bounds; a
/// realizable verdict without witness therefore means "not found within
/// bounds", never "does not exist".
pub fn classify_with_witness(
    dist: &AngleDistribution,
    class: MonodromyClass,
    bounds: &SearchBounds,
) -> Result<(Verdict, Option<SearchOutcome>), ClassifierError> {
    let mut verdict = classify(dist, class);
    if !verdict.realizable {
        return Ok((verdict, None));
    }
    let target = match (&verdict.certificate, class) {
        (Certificate::Either { coaxial, .. }, MonodromyClass::DihedralAny) if coaxial.realizable => {
            MonodromyClass::Coaxial
        }
        (_, MonodromyClass::DihedralAny) => MonodromyClass::StrictDihedral,
        (_, other) => other,
    };
    let outcome = search_witness(dist, target, bounds)?;
    if let SearchOutcome::Found(surface) = &outcome {
        verdict.witness = Some(surface.as_ref().clone());
    }
    Ok((verdict, Some(outcome)))
}

/// Whether a literal/reduction disagreement is the known one: the literal
/// verdict was decided by the residue arithmetic bound and the reduction
/// answers the other way.
pub fn is_documented_divergence(literal: &Verdict, reduction: &Verdict) -> bool {
    if literal.realizable == reduction.realizable {
        return false;
    }
    match (&literal.certificate, &reduction.certificate) {
        (
            Certificate::Either {
                coaxial: lc,
                strict: ls,
            },
            Certificate::Either {
                coaxial: rc,
                strict: rs,
            },
        ) => {
            let coaxial_ok = lc.realizable == rc.realizable || is_documented_divergence(lc, rc);
            let strict_ok = ls.realizable == rs.realizable || is_documented_divergence(ls, rs);
            coaxial_ok && strict_ok
        }
        (Certificate::ResidueArithmetic(_), _) => true,
        _ => false,
    }
}
