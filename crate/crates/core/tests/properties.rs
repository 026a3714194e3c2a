use std::collections::BTreeMap;

use proptest::prelude::*;

use dihedral_core::angles::{partition, strengthened_gb};
use dihedral_core::classifier::{classify, classify_via_strata, MonodromyClass};
use dihedral_core::strata::{quad_residues_realizable, QuadResidueConfig, QuadraticStratum};
use dihedral_core::surfaces::{canonical_form, enumerate_surfaces, Cylinder, EnumerationBounds, JenkinsStrebelSurface};
use dihedral_core::{AngleDistribution, Rational};

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn turn() -> impl Strategy<Value = Rational> {
    (1i128..=24, prop::sample::select(vec![1i128, 2, 3, 4, 5, 6])).prop_map(|(n, d)| q(n, d))
}

fn distribution() -> impl Strategy<Value = (u32, Vec<Rational>)> {
    (0u32..=2, prop::collection::vec(turn(), 1..=6))
}

fn census() -> Vec<JenkinsStrebelSurface> {
    enumerate_surfaces(&EnumerationBounds {
        max_segments: 6,
        lengths: vec![q(1, 1), q(2, 1)],
        circumferences: None,
    })
    .unwrap()
}

/// Renames segments, rotates boundaries and reorders cylinders and pairs.
fn relabel(s: &JenkinsStrebelSurface, seed: u64) -> JenkinsStrebelSurface {
    let mut names: Vec<&String> = s.lengths.keys().collect();
    let n = names.len();
    names.rotate_left(seed as usize % n);
    let rename: BTreeMap<&String, String> = names
        .iter()
        .enumerate()
        .map(|(i, old)| (*old, format!("x{i}")))
        .collect();
    let mut cylinders: Vec<Cylinder> = s
        .cylinders
        .iter()
        .map(|c| {
            let mut boundary: Vec<String> = c.boundary.iter().map(|b| rename[b].clone()).collect();
            let shift = (seed as usize / 3) % boundary.len();
            boundary.rotate_left(shift);
            Cylinder { w: c.w, boundary }
        })
        .collect();
    let shift = seed as usize % cylinders.len();
    cylinders.rotate_right(shift);
    let mut pairs: Vec<(String, String)> = s
        .pairs
        .iter()
        .map(|(a, b)| (rename[b].clone(), rename[a].clone()))
        .collect();
    pairs.reverse();
    let lengths = s.lengths.iter().map(|(k, v)| (rename[k].clone(), *v)).collect();
    JenkinsStrebelSurface {
        cylinders,
        pairs,
        lengths,
    }
}

proptest! {
    #[test]
    fn verdicts_ignore_angle_order((genus, turns) in distribution(), seed in any::<u64>()) {
        let base = AngleDistribution::from_turns(genus, &turns).unwrap();
        let mut shuffled = turns.clone();
        let n = shuffled.len();
        shuffled.rotate_left(seed as usize % n);
        shuffled.swap(0, (seed as usize / 7) % n);
        let shuffled = AngleDistribution::from_turns(genus, &shuffled).unwrap();
        for class in MonodromyClass::ALL {
            prop_assert_eq!(classify(&base, class), classify(&shuffled, class));
            prop_assert_eq!(classify_via_strata(&base, class), classify_via_strata(&shuffled, class));
        }
    }

    #[test]
    fn any_is_the_union((genus, turns) in distribution()) {
        let d = AngleDistribution::from_turns(genus, &turns).unwrap();
        let coaxial = classify(&d, MonodromyClass::Coaxial).realizable;
        let strict = classify(&d, MonodromyClass::StrictDihedral).realizable;
        prop_assert_eq!(classify(&d, MonodromyClass::DihedralAny).realizable, coaxial || strict);
    }

    #[test]
    fn strict_needs_strengthened_gauss_bonnet((genus, turns) in distribution()) {
        let d = AngleDistribution::from_turns(genus, &turns).unwrap();
        if classify(&d, MonodromyClass::StrictDihedral).realizable {
            let part = partition(&d);
            prop_assert!(strengthened_gb(&part, genus));
            if genus == 0 {
                prop_assert!(part.n_odd() >= 2);
                prop_assert!(part.n_odd() + part.n_noninteger() >= 3);
            }
        }
    }

    #[test]
    fn residue_verdicts_are_scale_invariant(
        f in prop::collection::vec(1i128..=6, 3),
        num in 1i128..100,
        den in 1i128..100,
    ) {
        let stratum = QuadraticStratum::new(0, vec![1, 1], 3).unwrap();
        let residues: Vec<Rational> = f.iter().map(|x| q(x * x, 16)).collect();
        let config = QuadResidueConfig::from_rationals(&residues).unwrap();
        let scaled = config.scaled(q(num, den)).unwrap();
        prop_assert_eq!(
            quad_residues_realizable(&stratum, &config).unwrap().realizable,
            quad_residues_realizable(&stratum, &scaled).unwrap().realizable
        );
    }

    #[test]
    fn analysis_ignores_labels(index in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let surfaces = census();
        let s = index.get(&surfaces);
        let r = relabel(s, seed);
        prop_assert!(r.validate().is_ok());
        prop_assert_eq!(canonical_form(&r).unwrap(), canonical_form(s).unwrap());
        let (a, b) = (s.analyze().unwrap(), r.analyze().unwrap());
        prop_assert_eq!(a.genus, b.genus);
        prop_assert_eq!(a.equatorial, b.equatorial);
        prop_assert_eq!(a.is_square, b.is_square);
        prop_assert_eq!(a.monodromy.class, b.monodromy.class);
        prop_assert_eq!(s.to_distribution(false).unwrap(), r.to_distribution(false).unwrap());
    }
}

#[test]
fn one_cylinder_torus() {
    // boundary a b a' b' with opposite sides glued
    let names = ["a", "b", "c", "d"];
    let s = JenkinsStrebelSurface {
        cylinders: vec![Cylinder {
            w: q(2, 1),
            boundary: names.iter().map(|n| n.to_string()).collect(),
        }],
        pairs: vec![("a".into(), "c".into()), ("b".into(), "d".into())],
        lengths: names.iter().map(|n| (n.to_string(), q(1, 2))).collect(),
    };
    let r = s.analyze().unwrap();
    assert_eq!(r.genus, 1);
    assert_eq!(r.equatorial, vec![4]);
}

#[test]
fn two_hemispheres_keep_regular_points_on_request() {
    let s = JenkinsStrebelSurface::two_hemispheres(q(5, 4));
    let d = s.to_distribution(false).unwrap().unwrap();
    assert_eq!(
        d,
        AngleDistribution::from_turns(0, &[q(1, 1), q(5, 4), q(5, 4)]).unwrap()
    );
    let d = s.to_distribution(true).unwrap().unwrap();
    assert_eq!(d, AngleDistribution::from_turns(0, &[q(5, 4), q(5, 4)]).unwrap());
}

#[test]
fn two_segment_census_contains_the_basic_example() {
    let surfaces = enumerate_surfaces(&EnumerationBounds {
        max_segments: 2,
        lengths: vec![q(1, 4), q(1, 2), q(1, 1)],
        circumferences: Some(vec![q(1, 2), q(1, 1)]),
    })
    .unwrap();
    let basic = canonical_form(&JenkinsStrebelSurface::basic_example(q(1, 2))).unwrap();
    assert!(surfaces.contains(&basic));
    assert_eq!(surfaces.len(), 4);
}

#[test]
fn four_segment_census_count() {
    let surfaces = enumerate_surfaces(&EnumerationBounds {
        max_segments: 4,
        lengths: vec![q(1, 1), q(2, 1)],
        circumferences: None,
    })
    .unwrap();
    assert_eq!(surfaces.len(), 20);
}

#[test]
fn census_satisfies_the_stratum_equation() {
    for s in census() {
        let r = s.analyze().unwrap();
        let orders: i64 = r.equatorial.iter().map(|&k| k as i64 - 2).sum();
        assert_eq!(orders, 4 * r.genus as i64 - 4 + 2 * r.cylinders as i64, "{s}");
    }
}

/// The identity with pole terms Σ(2w − 2) on the left fails unless the
/// circumferences sum to the number of cylinders.
#[test]
#[ignore = "the pole terms do not belong in the identity; kept to show it fails"]
fn literal_reconciliation_identity() {
    for s in census() {
        let r = s.analyze().unwrap();
        let two = Rational::from_integer(2);
        let lhs: Rational = r
            .equatorial
            .iter()
            .map(|&k| Rational::from_integer(k as i128 - 2))
            .sum::<Rational>()
            + r.poles.iter().map(|w| w * two - two).sum::<Rational>();
        let rhs = Rational::from_integer(4 * r.genus as i128 - 4 + 2 * r.cylinders as i128);
        assert_eq!(lhs, rhs, "{s}");
    }
}
