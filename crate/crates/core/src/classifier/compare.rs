use serde::{Deserialize, Serialize};

use super::families::{torus_family, TorusFamily};
use super::{classify, ClassifierError, MonodromyClass, Singular, Verdict};
use crate::angles::AngleDistribution;

/// The three verdicts for one distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub coaxial: Verdict,
    pub strict: Verdict,
    pub any: Verdict,
    /// What the comparison law predicts for the strict verdict given a
    /// co-axial realization; `None` when the co-axial verdict is negative.
    pub predicted_strict: Option<bool>,
}

/// Classifies in all three classes and checks the comparison laws between
/// co-axial and strict dihedral realizability. A violated law is an
/// internal inconsistency.
pub fn compare_classes(dist: &AngleDistribution) -> Result<ComparisonReport, ClassifierError> {
    let coaxial = classify(dist, MonodromyClass::Coaxial);
    let strict = classify(dist, MonodromyClass::StrictDihedral);
    let any = classify(dist, MonodromyClass::DihedralAny);
    if any.realizable != (coaxial.realizable || strict.realizable) {
        return Err(ClassifierError::Inconsistency(format!(
            "{dist}: dihedral-any verdict differs from the disjunction"
        )));
    }
    let predicted_strict = coaxial.realizable.then(|| predicted(dist));
    if let Some(expected) = predicted_strict {
        if expected != strict.realizable {
            return Err(ClassifierError::Inconsistency(format!(
                "{dist}: co-axial realizable, comparison law predicts strict {expected} but classifier says {}",
                strict.realizable
            )));
        }
    }
    Ok(ComparisonReport {
        coaxial,
        strict,
        any,
        predicted_strict,
    })
}

/// Strict realizability implied by a co-axial realization.
fn predicted(dist: &AngleDistribution) -> bool {
    let singular = Singular::of(dist);
    let part = &singular.part;
    match singular.genus {
        0 => part.n_odd() >= 2 && part.n_odd() + part.n_noninteger() >= 3,
        1 => !matches!(
            torus_family(part),
            Some((TorusFamily::EvenAlone | TorusFamily::EvenWithEqualAngles, _))
        ),
        _ => true,
    }
}
