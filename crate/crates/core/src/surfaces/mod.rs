//! Hemispherical surfaces: semi-infinite cylinders (hemispheres of the
//! round sphere) glued along boundary segments. Each equatorial vertex with
//! `k` corners is a cone point of angle `kπ`; the pole of a cylinder of
//! circumference `w` turns is a cone point of angle `2πw`.

mod analysis;
mod canonical;
mod catalog;
mod enumerate;
mod lengths;
mod model;
mod search;

pub use analysis::{monodromy_class, Isometry, Monodromy, SurfaceReport};
pub use catalog::MAX_CATALOG_SEGMENTS;
pub use enumerate::{canonical_form, enumerate_surfaces, EnumerationBounds};
pub use model::{Cylinder, JenkinsStrebelSurface, SurfaceError, ValidationError};
pub use search::{search_witness, SearchBounds, SearchError, SearchOutcome};
