use std::fmt;

use serde::{Deserialize, Serialize};

use super::families::{ThreeOddMatch, TorusFamily, TwoOddMatch, TwoOddVariant};
use super::reduction::StratumAssignment;
use super::Verdict;
use crate::angles::SignedSumWitness;
use crate::exact::{format_rational, Exact, Rational};
use crate::strata::StrataVerdict;

/// Residue arithmetic for two or three odd singularities.
///
/// `weights` are the integer weights of the vector formed by the non-integer
/// angles, the smallest odd angle when there are three, and
/// `units` entries equal to one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticCheck {
    pub units: u64,
    pub scale: Exact,
    pub weights: Vec<u64>,
    pub sum: u64,
    /// The bound as literally stated: `b₁ + b₂` for an even sum, `b₁` for an
    /// odd one.
    #[serde(with = "crate::exact::rational_serde")]
    pub literal_bound: Rational,
    pub literal_pass: bool,
    /// The bound of the even/odd weight exceptions in the maximal stratum:
    /// twice its pole count for an even sum, `2b₁ − 1` for an odd one.
    pub stratum_bound: i64,
    pub stratum_pass: bool,
    /// Verdict of the full strata reduction, when it was consulted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Box<Verdict>>,
}

/// The arithmetic condition for co-axial metrics on the sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoaxialArithmetic {
    pub scale: Exact,
    pub weights: Vec<u64>,
    pub sum: u64,
    pub max_even: i64,
    pub pass: bool,
}

/// The clause that decided a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Certificate {
    /// Every angle is a multiple of 2π on the sphere: the monodromy is
    /// trivial and such metrics are branched covers, outside this
    /// classification.
    OutOfScopeTrivialMonodromy,
    /// Strengthened Gauss-Bonnet: `T ≥ bound`.
    StrengthenedGaussBonnet {
        holds: bool,
        maximal_integral_sum: i64,
        bound: i64,
    },
    TorusFamily {
        family: TorusFamily,
        k: u64,
    },
    /// Strict dihedral in genus at least one outside the torus families.
    StrictHigherGenus {
        maximal_integral_sum: i64,
        bound: i64,
    },
    /// Co-axial without non-integer angles: `Σa − 2g + 2 − n` must be
    /// positive and even.
    CoaxialNoPoles {
        slack: i64,
    },
    /// No signed sum of the non-integer angles is an integer.
    CoaxialNoSignedSum,
    /// Signed sums exist but none leaves a nonnegative even slack `M`.
    CoaxialBudget {
        candidates: Vec<(u64, i64)>,
    },
    /// Accepted by the signed sum `K` with slack `M`.
    CoaxialSignedSum {
        witness: SignedSumWitness,
        m: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        arithmetic: Option<CoaxialArithmetic>,
    },
    /// Every budget-feasible signed sum fails the sphere arithmetic condition.
    CoaxialArithmeticObstruction {
        k: u64,
        m: i64,
        arithmetic: CoaxialArithmetic,
    },
    TooFewOddSingularities {
        n_odd: usize,
    },
    /// At most two singularities with nontrivial local monodromy: the
    /// monodromy is cyclic, hence co-axial.
    CyclicMonodromy {
        n_odd: usize,
        n_noninteger: usize,
    },
    ManyOddSingularities {
        n_odd: usize,
    },
    ThreeOddFamily(ThreeOddMatch),
    OddPairFamily(TwoOddMatch),
    EqualOddFamily(TwoOddMatch),
    /// Non-integer angles not commensurable with the rest of the residue
    /// vector: no arithmetic obstruction applies.
    IncommensurableResidues,
    ResidueArithmetic(ArithmeticCheck),
    /// Accepted via a stratum assignment.
    Reduction {
        assignment: StratumAssignment,
        strata: StrataVerdict,
    },
    /// No admissible assignment is realizable.
    ReductionExhausted {
        tried: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        maximal: Option<(StratumAssignment, StrataVerdict)>,
    },
    Either {
        coaxial: Box<Verdict>,
        strict: Box<Verdict>,
    },
}

impl Certificate {
    /// Short identifier of the clause.
    pub fn id(&self) -> &'static str {
        match self {
            Certificate::OutOfScopeTrivialMonodromy => "out-of-scope-trivial-monodromy",
            Certificate::StrengthenedGaussBonnet { .. } => "strengthened-gauss-bonnet",
            Certificate::TorusFamily { .. } => "torus-family",
            Certificate::StrictHigherGenus { .. } => "strict-higher-genus",
            Certificate::CoaxialNoPoles { .. } => "coaxial-no-poles",
            Certificate::CoaxialNoSignedSum => "coaxial-no-signed-sum",
            Certificate::CoaxialBudget { .. } => "coaxial-budget",
            Certificate::CoaxialSignedSum { .. } => "coaxial-signed-sum",
            Certificate::CoaxialArithmeticObstruction { .. } => "coaxial-arithmetic",
            Certificate::TooFewOddSingularities { .. } => "too-few-odd-singularities",
            Certificate::CyclicMonodromy { .. } => "cyclic-monodromy",
            Certificate::ManyOddSingularities { .. } => "many-odd-singularities",
            Certificate::ThreeOddFamily(_) => "three-odd-family",
            Certificate::OddPairFamily(_) => "odd-pair-family",
            Certificate::EqualOddFamily(_) => "equal-odd-family",
            Certificate::IncommensurableResidues => "incommensurable-residues",
            Certificate::ResidueArithmetic(_) => "residue-arithmetic",
            Certificate::Reduction { .. } => "reduction",
            Certificate::ReductionExhausted { .. } => "reduction-exhausted",
            Certificate::Either { .. } => "either",
        }
    }
}

fn variant_text(variant: TwoOddVariant) -> &'static str {
    match variant {
        TwoOddVariant::PairWithTwoEqual => "2k equal angles plus an equal pair",
        TwoOddVariant::PairWithEqual => "2k equal angles",
        TwoOddVariant::PairWithTwo => "an equal pair",
        TwoOddVariant::EqualSplitSum => "2k+1 equal angles α and β, γ with α = β + γ",
        TwoOddVariant::EqualShiftedSum => "2k+1 equal angles α and β, α + β",
        TwoOddVariant::EqualUnitRelation => "2k+1 equal angles α and β with α + β = 2π or |α − β| = 2π",
        TwoOddVariant::EqualUnitGap => "α, α + 2π",
        TwoOddVariant::EqualUnitSum => "α, β with α + β = 2π",
    }
}

fn list(weights: &[u64]) -> String {
    weights.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::OutOfScopeTrivialMonodromy => {
                f.write_str("all angles are multiples of 2π on the sphere (trivial monodromy, branched covers are not classified here)")
            }
            Certificate::StrengthenedGaussBonnet {
                holds,
                maximal_integral_sum,
                bound,
            } => {
                let rel = if *holds { "≥" } else { "<" };
                write!(f, "strengthened Gauss-Bonnet: T={maximal_integral_sum} {rel} {bound}")
            }
            Certificate::TorusFamily { family, k } => {
                write!(f, "torus exceptional family, {} (k={k})", family.describe(*k))
            }
            Certificate::StrictHigherGenus {
                maximal_integral_sum,
                bound,
            } => write!(
                f,
                "strengthened Gauss-Bonnet holds (T={maximal_integral_sum} ≥ {bound}) outside the torus families"
            ),
            Certificate::CoaxialNoPoles { slack } => {
                write!(f, "no non-integer angles; Σa−2g+2−n = {slack} must be positive and even")
            }
            Certificate::CoaxialNoSignedSum => f.write_str("no signed sum of the non-integer angles is an integer"),
            Certificate::CoaxialBudget { candidates } => {
                let shown: Vec<String> = candidates.iter().map(|(k, m)| format!("K={k}: M={m}")).collect();
                write!(f, "no signed sum leaves a nonnegative even slack ({})", shown.join(", "))
            }
            Certificate::CoaxialSignedSum { witness, m, arithmetic } => {
                write!(f, "signed sum K={} with slack M={m}", witness.k)?;
                if let Some(a) = arithmetic {
                    write!(f, "; weights ({}) sum {} ≥ 2·max a = {}", list(&a.weights), a.sum, 2 * a.max_even)?;
                }
                Ok(())
            }
            Certificate::CoaxialArithmeticObstruction { k, m, arithmetic } => write!(
                f,
                "arithmetic obstruction for every admissible signed sum (e.g. K={k}, M={m}: L={}, weights ({}) sum {} < 2·max a = {})",
                arithmetic.scale,
                list(&arithmetic.weights),
                arithmetic.sum,
                2 * arithmetic.max_even
            ),
            Certificate::TooFewOddSingularities { n_odd } => {
                write!(f, "needs at least two odd singularities on the sphere, found {n_odd}")
            }
            Certificate::CyclicMonodromy { n_odd, n_noninteger } => write!(
                f,
                "only {} singularities with nontrivial local monodromy (nO={n_odd}, nN={n_noninteger}), so the monodromy is co-axial",
                n_odd + n_noninteger
            ),
            Certificate::ManyOddSingularities { n_odd } => {
                write!(f, "{n_odd} odd singularities and strengthened Gauss-Bonnet holds")
            }
            Certificate::ThreeOddFamily(m) => write!(
                f,
                "three-odd exceptional family with k={}, l={}, α={}, β={}",
                m.k, m.l, m.alpha, m.beta
            ),
            Certificate::OddPairFamily(m) => write!(
                f,
                "odd pair {}π, {}π with {} (k={})",
                2 * m.k + 3,
                2 * m.k + 1,
                variant_text(m.variant),
                m.k
            ),
            Certificate::EqualOddFamily(m) => write!(
                f,
                "equal odd pair {}π, {}π with {} (k={})",
                2 * m.k + 3,
                2 * m.k + 3,
                variant_text(m.variant),
                m.k
            ),
            Certificate::IncommensurableResidues => {
                f.write_str("residue vector is not commensurable, no arithmetic obstruction")
            }
            Certificate::ResidueArithmetic(a) => {
                let parity = if a.sum % 2 == 0 { "even" } else { "odd" };
                write!(
                    f,
                    "residue arithmetic: L={}, weights ({}), Σr={} ({parity}); literal bound {} {}; stratum bound {} {}",
                    a.scale,
                    list(&a.weights),
                    a.sum,
                    format_rational(&a.literal_bound),
                    if a.literal_pass { "passes" } else { "fails" },
                    a.stratum_bound,
                    if a.stratum_pass { "passes" } else { "fails" },
                )?;
                if let Some(r) = &a.reduction {
                    write!(f, "; decided by reduction: {}", r.certificate)?;
                }
                Ok(())
            }
            Certificate::Reduction { assignment, strata } => write!(f, "{assignment}: {strata}"),
            Certificate::ReductionExhausted { tried, maximal } => {
                write!(f, "none of {tried} admissible stratum assignments is realizable")?;
                if let Some((assignment, strata)) = maximal {
                    write!(f, "; maximal {assignment}: {strata}")?;
                }
                Ok(())
            }
            Certificate::Either { coaxial, strict } => {
                write!(f, "co-axial: {}; strict: {}", coaxial, strict)
            }
        }
    }
}
