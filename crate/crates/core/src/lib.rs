//! Spherical metrics with dihedral monodromy: angle distributions, residue
//! realizability in strata, the realizability classifier and hemispherical
//! surfaces.

pub mod angles;
pub mod classifier;
pub mod crosscheck;
pub mod exact;
pub mod strata;
pub mod surfaces;

pub use angles::{Angle, AngleDistribution, AngleKind, Partition};
pub use classifier::{
    classify, classify_literal, classify_via_strata, classify_with_witness, compare_classes, Certificate,
    ClassifierError, MonodromyClass, Verdict,
};
pub use exact::{Exact, Rational};
pub use surfaces::{JenkinsStrebelSurface, SearchBounds, SearchOutcome};
