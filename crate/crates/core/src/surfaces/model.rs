use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{format_rational, Rational};

/// A semi-infinite cylinder (a hemisphere) with its boundary segments in
/// cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cylinder {
    /// Circumference in turns; the cone angle at the pole is `2π·w`.
    #[serde(with = "crate::exact::rational_serde")]
    pub w: Rational,
    pub boundary: Vec<String>,
}

/// Hemispherical surface: cylinders glued isometrically along boundary
/// segments, reversing orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JenkinsStrebelSurface {
    pub cylinders: Vec<Cylinder>,
    pub pairs: Vec<(String, String)>,
    #[serde(with = "length_map")]
    pub lengths: BTreeMap<String, Rational>,
}

mod length_map {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(map: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let text: BTreeMap<&String, String> = map.iter().map(|(k, v)| (k, format_rational(v))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Rational>, D::Error> {
        let text = BTreeMap::<String, String>::deserialize(d)?;
        text.into_iter()
            .map(|(k, v)| parse_rational(&v).map(|r| (k, r)).map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "kebab-case")]
pub enum ValidationError {
    #[error("surface has no cylinders")]
    NoCylinders,
    #[error("cylinder {cylinder} has an empty boundary")]
    EmptyBoundary { cylinder: usize },
    #[error("cylinder {cylinder} has non-positive circumference")]
    NonPositiveCircumference { cylinder: usize },
    #[error("segment `{id}` appears more than once on cylinder boundaries")]
    DuplicateSegment { id: String },
    #[error("segment `{id}` is not paired")]
    Unpaired { id: String },
    #[error("segment `{id}` is paired with itself")]
    SelfPaired { id: String },
    #[error("segment `{id}` occurs in more than one pair")]
    PairedTwice { id: String },
    #[error("segment `{id}` is not on any cylinder boundary")]
    UnknownSegment { id: String },
    #[error("segment `{id}` has no length")]
    MissingLength { id: String },
    #[error("segment `{id}` has non-positive length")]
    NonPositiveLength { id: String },
    #[error("paired segments `{a}` and `{b}` have different lengths")]
    LengthMismatch { a: String, b: String },
    #[error("cylinder {cylinder}: segment lengths sum to {found}, circumference is {expected}")]
    CircumferenceMismatch {
        cylinder: usize,
        expected: String,
        found: String,
    },
    #[error("the gluing has {components} connected components")]
    Disconnected { components: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("invalid surface: {}", join(.0))]
    Invalid(Vec<ValidationError>),
    #[error("malformed surface document: {0}")]
    Format(String),
}

fn join(errors: &[ValidationError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Index form: darts are segments, `next` follows a cylinder boundary,
/// `partner` is the gluing involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Darts {
    pub next: Vec<usize>,
    pub partner: Vec<usize>,
    pub cylinder: Vec<usize>,
    /// Position of the dart's start along its cylinder boundary.
    pub offset: Vec<Rational>,
    pub length: Vec<Rational>,
    pub circumference: Vec<Rational>,
}

impl Darts {
    pub fn len(&self) -> usize {
        self.next.len()
    }
}

impl JenkinsStrebelSurface {
    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(text).map_err(|e| SurfaceError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surfaces always serialize")
    }

    /// Checks every well-formedness condition, reporting all violations.
    pub fn validate(&self) -> Result<(), Vec<ValidationError>> {
        let mut errors = Vec::new();
        if self.cylinders.is_empty() {
            errors.push(ValidationError::NoCylinders);
        }
        let mut on_boundary: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, cyl) in self.cylinders.iter().enumerate() {
            if cyl.boundary.is_empty() {
                errors.push(ValidationError::EmptyBoundary { cylinder: i });
            }
            if !cyl.w.is_positive() {
                errors.push(ValidationError::NonPositiveCircumference { cylinder: i });
            }
            for id in &cyl.boundary {
                if on_boundary.insert(id, i).is_some() {
                    errors.push(ValidationError::DuplicateSegment { id: id.clone() });
                }
            }
        }
        let mut partner: BTreeMap<&str, &str> = BTreeMap::new();
        for (a, b) in &self.pairs {
            if a == b {
                errors.push(ValidationError::SelfPaired { id: a.clone() });
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if !on_boundary.contains_key(x.as_str()) {
                    errors.push(ValidationError::UnknownSegment { id: x.clone() });
                }
                if partner.insert(x, y).is_some() {
                    errors.push(ValidationError::PairedTwice { id: x.clone() });
                }
            }
        }
        for id in on_boundary.keys() {
            if !partner.contains_key(id) && !self.pairs.iter().any(|(a, b)| a == id && b == id) {
                errors.push(ValidationError::Unpaired { id: id.to_string() });
            }
            match self.lengths.get(*id) {
                None => errors.push(ValidationError::MissingLength { id: id.to_string() }),
                Some(l) if !l.is_positive() => errors.push(ValidationError::NonPositiveLength { id: id.to_string() }),
                Some(_) => {}
            }
        }
        for id in self.lengths.keys() {
            if !on_boundary.contains_key(id.as_str()) {
                errors.push(ValidationError::UnknownSegment { id: id.clone() });
            }
        }
        for (a, b) in &self.pairs {
            if let (Some(x), Some(y)) = (self.lengths.get(a), self.lengths.get(b)) {
                if x != y {
                    errors.push(ValidationError::LengthMismatch {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            }
        }
        for (i, cyl) in self.cylinders.iter().enumerate() {
            let lengths: Option<Rational> = cyl.boundary.iter().map(|id| self.lengths.get(id).copied()).sum();
            if let Some(total) = lengths {
                if total != cyl.w {
                    errors.push(ValidationError::CircumferenceMismatch {
                        cylinder: i,
                        expected: format_rational(&cyl.w),
                        found: format_rational(&total),
                    });
                }
            }
        }
        if errors.is_empty() {
            let components = self.components();
            if components > 1 {
                errors.push(ValidationError::Disconnected { components });
            }
        }
        errors.sort_by_key(|e| e.to_string());
        errors.dedup();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Connected components of the cylinder graph.
    fn components(&self) -> usize {
        let mut cylinder_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, cyl) in self.cylinders.iter().enumerate() {
            for id in &cyl.boundary {
                cylinder_of.insert(id, i);
            }
        }
        let mut parent: Vec<usize> = (0..self.cylinders.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            parent[x] = root;
            root
        }
        for (a, b) in &self.pairs {
            if let (Some(&x), Some(&y)) = (cylinder_of.get(a.as_str()), cylinder_of.get(b.as_str())) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx] = ry;
            }
        }
        let roots: BTreeSet<usize> = (0..self.cylinders.len()).map(|i| find(&mut parent, i)).collect();
        roots.len()
    }

    pub(crate) fn darts(&self) -> Darts {
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        let mut next = Vec::new();
        let mut cylinder = Vec::new();
        let mut offset = Vec::new();
        let mut length = Vec::new();
        for (c, cyl) in self.cylinders.iter().enumerate() {
            let start = next.len();
            let mut position = Rational::zero();
            for (j, id) in cyl.boundary.iter().enumerate() {
                index.insert(id, start + j);
                next.push(start + (j + 1) % cyl.boundary.len());
                cylinder.push(c);
                offset.push(position);
                let l = self.lengths.get(id).copied().unwrap_or_else(Rational::zero);
                length.push(l);
                position += l;
            }
        }
        let mut partner = vec![usize::MAX; next.len()];
        for (a, b) in &self.pairs {
            let (x, y) = (index[a.as_str()], index[b.as_str()]);
            partner[x] = y;
            partner[y] = x;
        }
        Darts {
            next,
            partner,
            cylinder,
            offset,
            length,
            circumference: self.cylinders.iter().map(|c| c.w).collect(),
        }
    }

    /// Builds a surface from index data, naming segments `a`, `b`, ….
    pub(crate) fn from_darts(faces: &[Vec<usize>], partner: &[usize], length: &[Rational]) -> Self {
        let name = |d: usize| segment_name(d);
        let cylinders = faces
            .iter()
            .map(|face| Cylinder {
                w: face.iter().map(|d| length[*d]).sum(),
                boundary: face.iter().map(|d| name(*d)).collect(),
            })
            .collect();
        let pairs = (0..partner.len())
            .filter(|d| *d < partner[*d])
            .map(|d| (name(d), name(partner[d])))
            .collect();
        let lengths = (0..partner.len()).map(|d| (name(d), length[d])).collect();
        JenkinsStrebelSurface {
            cylinders,
            pairs,
            lengths,
        }
    }

    /// One cylinder of circumference `w` whose boundary halves are glued
    /// together: two cone points of angle π on the equator and one of angle
    /// `2πw` at the pole.
    pub fn basic_example(w: Rational) -> Self {
        let half = w / Rational::from_integer(2);
        JenkinsStrebelSurface {
            cylinders: vec![Cylinder {
                w,
                boundary: vec!["a".into(), "b".into()],
            }],
            pairs: vec![("a".into(), "b".into())],
            lengths: [("a".to_string(), half), ("b".to_string(), half)].into_iter().collect(),
        }
    }

    /// Two hemispheres of circumference `w` glued along their whole boundary.
    pub fn two_hemispheres(w: Rational) -> Self {
        JenkinsStrebelSurface {
            cylinders: vec![
                Cylinder {
                    w,
                    boundary: vec!["a".into()],
                },
                Cylinder {
                    w,
                    boundary: vec!["b".into()],
                },
            ],
            pairs: vec![("a".into(), "b".into())],
            lengths: [("a".to_string(), w), ("b".to_string(), w)].into_iter().collect(),
        }
    }
}

pub(crate) fn segment_name(d: usize) -> String {
    if d < 26 {
        ((b'a' + d as u8) as char).to_string()
    } else {
        format!("s{d}")
    }
}

impl fmt::Display for JenkinsStrebelSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, cyl) in self.cylinders.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "w={} [", format_rational(&cyl.w))?;
            for (j, id) in cyl.boundary.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                let len = self.lengths.get(id).map(format_rational).unwrap_or_else(|| "?".into());
                write!(f, "{id}:{len}")?;
            }
            f.write_str("]")?;
        }
        let pairs: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}~{b}")).collect();
        write!(f, " glued {}", pairs.join(" "))
    }
}
