use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::canonical::{cycles, vertex_permutation};
use super::model::{Darts, JenkinsStrebelSurface, SurfaceError};
use crate::angles::{Angle, AngleDistribution};
use crate::classifier::MonodromyClass;
use crate::exact::{format_rational, parse_rational, Rational};

/// An isometry of the sphere preserving the polar axis, in turn units:
/// `Rotation(t)` is `x ↦ x + t` on the equator, `Flip(s)` is `x ↦ s − x`
/// and swaps the hemispheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Isometry {
    Rotation(Rational),
    Flip(Rational),
}

impl std::str::FromStr for Isometry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |inner: &str| parse_rational(inner).map_err(|e| e.to_string());
        if let Some(inner) = s.strip_prefix("rot(").and_then(|r| r.strip_suffix(')')) {
            Ok(Isometry::rotation(parse(inner)?))
        } else if let Some(inner) = s.strip_prefix("flip(").and_then(|r| r.strip_suffix(')')) {
            Ok(Isometry::flip(parse(inner)?))
        } else {
            Err(format!("not an isometry: `{s}`"))
        }
    }
}

impl Serialize for Isometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn reduce(t: Rational) -> Rational {
    t - t.floor()
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry::Rotation(Rational::zero())
    }

    pub fn rotation(t: Rational) -> Isometry {
        Isometry::Rotation(reduce(t))
    }

    pub fn flip(s: Rational) -> Isometry {
        Isometry::Flip(reduce(s))
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Isometry) -> Isometry {
        use Isometry::*;
        match (self, other) {
            (Rotation(a), Rotation(b)) => Isometry::rotation(a + b),
            (Rotation(a), Flip(s)) => Isometry::flip(s + a),
            (Flip(s), Rotation(a)) => Isometry::flip(s - a),
            (Flip(s), Flip(t)) => Isometry::rotation(s - t),
        }
    }

    pub fn inverse(self) -> Isometry {
        match self {
            Isometry::Rotation(a) => Isometry::rotation(-a),
            flip => flip,
        }
    }

    pub fn is_identity(self) -> bool {
        self == Isometry::identity()
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isometry::Rotation(t) => write!(f, "rot({})", format_rational(t)),
            Isometry::Flip(s) => write!(f, "flip({})", format_rational(s)),
        }
    }
}

/// Monodromy generators of the punctured surface with the class they
/// generate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monodromy {
    pub generators: Vec<Isometry>,
    pub class: MonodromyClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub genus: u32,
    pub segments: usize,
    pub cylinders: usize,
    /// Corner counts `k` of the equatorial vertices (angle `kπ`), largest
    /// first.
    pub equatorial: Vec<usize>,
    /// Circumferences of the cylinders: the pole angles in turns.
    #[serde(with = "crate::exact::rational_vec_serde")]
    pub poles: Vec<Rational>,
    /// The cylinder graph is bipartite, i.e. the differential is the square
    /// of an Abelian one.
    pub is_square: bool,
    /// Distinct cylinder circumferences and segment lengths.
    #[serde(with = "crate::exact::rational_vec_serde")]
    pub periods: Vec<Rational>,
    pub monodromy: Monodromy,
}

impl fmt::Display for SurfaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eq: Vec<String> = self.equatorial.iter().map(|k| format!("{k}π")).collect();
        let poles: Vec<String> = self
            .poles
            .iter()
            .map(|w| format!("2π·{}", format_rational(w)))
            .collect();
        writeln!(f, "genus {}", self.genus)?;
        writeln!(f, "equatorial vertices: {}", eq.join(", "))?;
        writeln!(f, "poles: {}", poles.join(", "))?;
        writeln!(
            f,
            "square of an abelian differential: {}",
            if self.is_square { "yes" } else { "no" }
        )?;
        let gens: Vec<String> = self.monodromy.generators.iter().map(ToString::to_string).collect();
        write!(
            f,
            "monodromy: {} generated by {}",
            self.monodromy.class,
            gens.join(", ")
        )
    }
}

fn genus_of(vertices: usize, edges: usize, faces: usize) -> Result<u32, SurfaceError> {
    let chi = vertices as i64 - edges as i64 + faces as i64;
    if chi > 2 || chi % 2 != 0 {
        return Err(SurfaceError::Format(format!("impossible Euler characteristic {chi}")));
    }
    Ok(((2 - chi) / 2) as u32)
}

/// Whether the cylinder graph is bipartite.
pub(crate) fn bipartite(darts: &Darts, faces: usize) -> bool {
    let mut colour = vec![None; faces];
    let mut adjacent = vec![Vec::new(); faces];
    for d in 0..darts.len() {
        adjacent[darts.cylinder[d]].push(darts.cylinder[darts.partner[d]]);
    }
    for start in 0..faces {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let here = colour[c].expect("queued cylinders are coloured");
            for &o in &adjacent[c] {
                match colour[o] {
                    None => {
                        colour[o] = Some(!here);
                        queue.push_back(o);
                    }
                    Some(x) if x == here => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Developing each cylinder onto the upper hemisphere with longitude equal
/// to the boundary position, crossing a segment into the neighbouring
/// cylinder composes with a flip. The generators are the loops around the
/// poles and one loop per edge outside a spanning tree of the cylinder
/// graph.
#[allow(clippy::needless_range_loop)]
pub(crate) fn monodromy(darts: &Darts, faces: usize) -> Monodromy {
    let crossing = |d: usize| {
        let p = darts.partner[d];
        Isometry::flip(darts.offset[d] + darts.offset[p] + darts.length[d])
    };
    let mut frame: Vec<Option<Isometry>> = vec![None; faces];
    let mut tree_dart = vec![false; darts.len()];
    frame[0] = Some(Isometry::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let g = frame[c].expect("queued cylinders have frames");
        for d in (0..darts.len()).filter(|&d| darts.cylinder[d] == c) {
            let other = darts.cylinder[darts.partner[d]];
            if frame[other].is_none() {
                frame[other] = Some(g.compose(crossing(d)));
                tree_dart[d] = true;
                tree_dart[darts.partner[d]] = true;
                queue.push_back(other);
            }
        }
    }
    let frame: Vec<Isometry> = frame.into_iter().map(|f| f.expect("surface is connected")).collect();
    let mut generators = Vec::new();
    for (c, g) in frame.iter().enumerate() {
        generators.push(
            g.compose(Isometry::rotation(darts.circumference[c]))
                .compose(g.inverse()),
        );
    }
    for d in 0..darts.len() {
        let p = darts.partner[d];
        if d < p && !tree_dart[d] {
            let (c, o) = (darts.cylinder[d], darts.cylinder[p]);
            generators.push(frame[c].compose(crossing(d)).compose(frame[o].inverse()));
        }
    }
    let class = monodromy_class(&generators);
    Monodromy { generators, class }
}

/// Co-axial when the group fixes an axis: either every generator is a
/// rotation about the polar axis, or every generator is the identity or
/// one and the same flip (a half-turn about an equatorial axis).
pub fn monodromy_class(generators: &[Isometry]) -> MonodromyClass {
    if generators.iter().all(|g| matches!(g, Isometry::Rotation(_))) {
        return MonodromyClass::Coaxial;
    }
    let mut flips = generators.iter().filter(|g| !g.is_identity());
    let first = flips.next().copied();
    let equatorial = matches!(first, Some(Isometry::Flip(_))) && flips.all(|g| Some(*g) == first);
    if equatorial {
        MonodromyClass::Coaxial
    } else {
        MonodromyClass::StrictDihedral
    }
}

impl JenkinsStrebelSurface {
    pub fn analyze(&self) -> Result<SurfaceReport, SurfaceError> {
        self.validate().map_err(SurfaceError::Invalid)?;
        let darts = self.darts();
        let faces = self.cylinders.len();
        let vertices = cycles(&vertex_permutation(&darts.next, &darts.partner));
        let mut equatorial: Vec<usize> = vertices.iter().map(Vec::len).collect();
        equatorial.sort_unstable_by(|a, b| b.cmp(a));
        let genus = genus_of(vertices.len(), darts.len() / 2, faces)?;
        let mut poles: Vec<Rational> = self.cylinders.iter().map(|c| c.w).collect();
        poles.sort_unstable_by(|a, b| b.cmp(a));
        let mut periods: Vec<Rational> = poles.iter().chain(self.lengths.values()).copied().collect();
        periods.sort_unstable();
        periods.dedup();
        Ok(SurfaceReport {
            genus,
            segments: darts.len(),
            cylinders: faces,
            equatorial,
            poles,
            is_square: bipartite(&darts, faces),
            periods,
            monodromy: monodromy(&darts, faces),
        })
    }

    pub fn monodromy_class(&self) -> Result<MonodromyClass, SurfaceError> {
        Ok(self.analyze()?.monodromy.class)
    }

    /// Cone angles of the surface: `k/2` turns at an equatorial vertex with
    /// `k` corners, `w` turns at the pole of a cylinder of circumference `w`.
    /// With `drop_regular`, points of angle 2π are omitted; `None` then
    /// means the surface has no singularities at all (the round sphere).
    pub fn to_distribution(&self, drop_regular: bool) -> Result<Option<AngleDistribution>, SurfaceError> {
        let report = self.analyze()?;
        let half = Rational::new(1, 2);
        let turns = report
            .equatorial
            .iter()
            .map(|&k| half * Rational::from_integer(k as i128))
            .chain(report.poles.iter().copied())
            .filter(|t| !(drop_regular && t.is_one()));
        let angles: Vec<Angle> = turns
            .map(|t| Angle::from_turns(t).expect("surface angles are positive"))
            .collect();
        if angles.is_empty() {
            return Ok(None);
        }
        AngleDistribution::new(report.genus, angles)
            .map(|d| Some(d.sorted()))
            .map_err(|e| SurfaceError::Format(e.to_string()))
    }
}
