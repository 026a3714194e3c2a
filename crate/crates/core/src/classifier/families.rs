//! Pattern matchers for the exceptional angle families that no strict
//! dihedral metric realizes. All inputs are partitions with regular points
//! already removed.

use serde::{Deserialize, Serialize};

use crate::angles::{Angle, Partition};
use crate::exact::{Exact, Rational};

/// The four torus families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusFamily {
    /// Turn `2k+1` with `2k` equal non-integer angles, `k ≥ 1`.
    EvenWithEqualAngles,
    /// Turns `(2k+3)/2`, `(2k+1)/2` with `2k` equal non-integer angles, `k ≥ 1`.
    OddPairWithEqualAngles,
    /// Turn `2k+1` alone.
    EvenAlone,
    /// Turns `(2k+3)/2`, `(2k+1)/2` alone.
    OddPairAlone,
}

impl TorusFamily {
    pub fn describe(self, k: u64) -> String {
        match self {
            TorusFamily::EvenWithEqualAngles => {
                format!("angle {}π with {} equal non-integer angles", 4 * k + 2, 2 * k)
            }
            TorusFamily::OddPairWithEqualAngles => format!(
                "angles {}π, {}π with {} equal non-integer angles",
                2 * k + 3,
                2 * k + 1,
                2 * k
            ),
            TorusFamily::EvenAlone => format!("single angle {}π", 4 * k + 2),
            TorusFamily::OddPairAlone => format!("angles {}π, {}π alone", 2 * k + 3, 2 * k + 1),
        }
    }
}

fn all_equal(angles: &[Angle]) -> bool {
    angles.windows(2).all(|w| w[0] == w[1])
}

/// Half-integer `k + 1/2` to `k`, if nonnegative.
fn half_index(b: &Rational) -> Option<u64> {
    let k = (b - Rational::new(1, 2)).to_integer();
    (k >= 0).then_some(k as u64)
}

pub fn torus_family(part: &Partition) -> Option<(TorusFamily, u64)> {
    let c = &part.nonintegers;
    if part.evens.len() == 1 && part.odds.is_empty() {
        let a = part.evens[0];
        if a % 2 == 1 && a >= 1 {
            let k = ((a - 1) / 2) as u64;
            if c.is_empty() {
                return Some((TorusFamily::EvenAlone, k));
            }
            if k >= 1 && c.len() as u64 == 2 * k && all_equal(c) {
                return Some((TorusFamily::EvenWithEqualAngles, k));
            }
        }
        return None;
    }
    if part.evens.is_empty() && part.odds.len() == 2 && part.odds[0] - part.odds[1] == Rational::from_integer(1) {
        let k = half_index(&part.odds[1])?;
        if c.is_empty() {
            return Some((TorusFamily::OddPairAlone, k));
        }
        if k >= 1 && c.len() as u64 == 2 * k && all_equal(c) {
            return Some((TorusFamily::OddPairWithEqualAngles, k));
        }
    }
    None
}

/// Distinct values with multiplicities, in sorted order.
fn multiplicities(angles: &[Angle]) -> Vec<(&Angle, usize)> {
    let mut out: Vec<(&Angle, usize)> = Vec::new();
    for a in angles {
        match out.iter_mut().find(|(v, _)| *v == a) {
            Some(entry) => entry.1 += 1,
            None => out.push((a, 1)),
        }
    }
    out
}

/// Removes `count` copies of `value`, returning the rest.
fn without(angles: &[Angle], value: &Angle, count: usize) -> Vec<Exact> {
    let mut removed = 0;
    angles
        .iter()
        .filter(|a| {
            if *a == value && removed < count {
                removed += 1;
                false
            } else {
                true
            }
        })
        .map(|a| a.value().clone())
        .collect()
}

/// Two equal odd angles `(2k+1)π` (`k ≥ 1`), a smaller odd angle `(2l+1)π`,
/// and `2k` non-integer angles: `2k−1` copies of `α` and one `β` with
/// `α + β = b₃` or `|α − β| = b₃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeOddMatch {
    pub k: u64,
    pub l: u64,
    pub alpha: Exact,
    pub beta: Exact,
}

pub fn three_odd_family(part: &Partition) -> Option<ThreeOddMatch> {
    if !part.evens.is_empty() || part.odds.len() != 3 || part.odds[0] != part.odds[1] {
        return None;
    }
    let k = half_index(&part.odds[0])?;
    let l = half_index(&part.odds[2])?;
    let c = &part.nonintegers;
    if k == 0 || c.len() as u64 != 2 * k {
        return None;
    }
    let b3 = Exact::from_rational(part.odds[2]);
    for (alpha, count) in multiplicities(c) {
        if (count as u64) < 2 * k - 1 {
            continue;
        }
        let rest = without(c, alpha, (2 * k - 1) as usize);
        let beta = &rest[0];
        let alpha = alpha.value();
        if (alpha + beta) == b3 || (alpha - beta) == b3 || (beta - alpha) == b3 {
            return Some(ThreeOddMatch {
                k,
                l,
                alpha: alpha.clone(),
                beta: beta.clone(),
            });
        }
    }
    None
}

/// Which list entry of the two-odd families matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoOddVariant {
    /// `(2k+3)π, (2k+1)π, α×2k, β, β`.
    PairWithTwoEqual,
    /// `(2k+3)π, (2k+1)π, α×2k`.
    PairWithEqual,
    /// `(2k+3)π, (2k+1)π, α, α`.
    PairWithTwo,
    /// `(2k+3)π, (2k+3)π, α×(2k+1), β, γ`, `α = β + γ`.
    EqualSplitSum,
    /// `(2k+3)π, (2k+3)π, α×(2k+1), β, α + β`.
    EqualShiftedSum,
    /// `(2k+3)π, (2k+3)π, α×(2k+1), β` with `α + β = 1` or `|α − β| = 1` in turns.
    EqualUnitRelation,
    /// `(2k+3)π, (2k+3)π, α, α + 2π`.
    EqualUnitGap,
    /// `(2k+3)π, (2k+3)π, α, β` with `α + β = 2π`.
    EqualUnitSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoOddMatch {
    pub variant: TwoOddVariant,
    pub k: u64,
}

/// Odd pair `(2k+3)π, (2k+1)π` with constrained equal angles.
pub fn odd_pair_family(part: &Partition) -> Option<TwoOddMatch> {
    if !part.evens.is_empty() || part.odds.len() != 2 {
        return None;
    }
    if part.odds[0] - part.odds[1] != Rational::from_integer(1) {
        return None;
    }
    let k = half_index(&part.odds[1])?;
    let c = &part.nonintegers;
    let n = c.len() as u64;
    let found = |variant| Some(TwoOddMatch { variant, k });
    if n == 2 && all_equal(c) {
        return found(TwoOddVariant::PairWithTwo);
    }
    if k >= 1 && n == 2 * k && all_equal(c) {
        return found(TwoOddVariant::PairWithEqual);
    }
    if k >= 1 && n == 2 * k + 2 {
        let counts = multiplicities(c);
        let fits = match counts.as_slice() {
            [_] => true,
            [(_, x), (_, y)] => (*x as u64, *y as u64) == (2 * k, 2) || (*x as u64, *y as u64) == (2, 2 * k),
            _ => false,
        };
        if fits {
            return found(TwoOddVariant::PairWithTwoEqual);
        }
    }
    None
}

/// Equal odd angles `(2k+3)π, (2k+3)π` with a sum relation among the rest.
pub fn equal_odd_family(part: &Partition) -> Option<TwoOddMatch> {
    if !part.evens.is_empty() || part.odds.len() != 2 || part.odds[0] != part.odds[1] {
        return None;
    }
    let k = half_index(&part.odds[0])?.checked_sub(1)?;
    let c = &part.nonintegers;
    let n = c.len() as u64;
    let one = Exact::from_integer(1);
    let found = |variant| Some(TwoOddMatch { variant, k });
    let differ_by = |x: &Exact, y: &Exact, d: &Exact| &(x - y) == d || &(y - x) == d;

    if n == 2 {
        let (x, y) = (c[0].value(), c[1].value());
        if differ_by(x, y, &one) {
            return found(TwoOddVariant::EqualUnitGap);
        }
        if (x + y) == one {
            return found(TwoOddVariant::EqualUnitSum);
        }
    }
    let copies = (2 * k + 1) as usize;
    for (alpha, count) in multiplicities(c) {
        if count < copies {
            continue;
        }
        let rest = without(c, alpha, copies);
        let alpha = alpha.value();
        if n == 2 * k + 3 {
            let (x, y) = (&rest[0], &rest[1]);
            if &(x + y) == alpha {
                return found(TwoOddVariant::EqualSplitSum);
            }
            if &(alpha + x) == y || &(alpha + y) == x {
                return found(TwoOddVariant::EqualShiftedSum);
            }
        }
        if n == 2 * k + 2 {
            let beta = &rest[0];
            if (alpha + beta) == one || differ_by(alpha, beta, &one) {
                return found(TwoOddVariant::EqualUnitRelation);
            }
        }
    }
    None
}
