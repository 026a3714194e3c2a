//! Cone angles in turn units (angle / 2π) and the arithmetic predicates the
//! decision procedures consume.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{Exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AngleError {
    #[error("angle {0} is not positive")]
    NonPositive(Exact),
    #[error("a distribution needs at least one angle")]
    Empty,
}

/// A cone angle measured in full turns, so `Angle` 3/4 is the angle 3π/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Exact", into = "Exact")]
pub struct Angle(Exact);

/// Parity class of a cone angle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AngleKind {
    /// Angle in 2πℤ; carries the turn count.
    Even(i64),
    /// Angle in π(2ℤ+1); carries the (half-integer) turn count.
    Odd(Rational),
    /// Angle outside πℤ.
    NonInteger,
}

impl Angle {
    /// Rejects values that are rational and not positive. Values involving
    /// generators are taken to be positive.
    pub fn new(value: Exact) -> Result<Self, AngleError> {
        match value.as_rational() {
            Some(turns) if !turns.is_positive() => Err(AngleError::NonPositive(value)),
            _ => Ok(Angle(value)),
        }
    }

    pub fn from_turns(turns: Rational) -> Result<Self, AngleError> {
        Angle::new(Exact::from_rational(turns))
    }

    pub fn value(&self) -> &Exact {
        &self.0
    }

    pub fn into_value(self) -> Exact {
        self.0
    }

    /// Turn count when the angle is rational.
    pub fn turns(&self) -> Option<Rational> {
        self.0.as_rational()
    }

    pub fn kind(&self) -> AngleKind {
        match self.turns() {
            Some(t) if t.is_integer() => AngleKind::Even(t.to_integer() as i64),
            Some(t) if (t * 2).is_integer() => AngleKind::Odd(t),
            _ => AngleKind::NonInteger,
        }
    }

    /// Whether the angle lies in πℤ, i.e. could sit on the equator.
    pub fn is_half_integral(&self) -> bool {
        !matches!(self.kind(), AngleKind::NonInteger)
    }

    /// Exactly 2π: a regular point of the metric.
    pub fn is_regular(&self) -> bool {
        self.turns() == Some(Rational::one())
    }
}

impl TryFrom<Exact> for Angle {
    type Error = AngleError;
    fn try_from(value: Exact) -> Result<Self, Self::Error> {
        Angle::new(value)
    }
}

impl From<Angle> for Exact {
    fn from(angle: Angle) -> Exact {
        angle.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Genus plus a multiset of cone angles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleDistribution {
    genus: u32,
    angles: Vec<Angle>,
}

impl AngleDistribution {
    pub fn new(genus: u32, angles: Vec<Angle>) -> Result<Self, AngleError> {
        if angles.is_empty() {
            return Err(AngleError::Empty);
        }
        Ok(AngleDistribution { genus, angles })
    }

    /// Convenience constructor from turn counts.
    pub fn from_turns(genus: u32, turns: &[Rational]) -> Result<Self, AngleError> {
        let angles = turns
            .iter()
            .map(|t| Angle::from_turns(*t))
            .collect::<Result<Vec<_>, _>>()?;
        AngleDistribution::new(genus, angles)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn regular_points(&self) -> usize {
        self.angles.iter().filter(|a| a.is_regular()).count()
    }

    /// Angles other than exact 2π.
    pub fn singular_angles(&self) -> Vec<Angle> {
        self.angles.iter().filter(|a| !a.is_regular()).cloned().collect()
    }

    /// Whether every angle is rational.
    pub fn is_rational(&self) -> bool {
        self.angles.iter().all(|a| a.turns().is_some())
    }

    /// Same multiset in a canonical order.
    pub fn sorted(&self) -> AngleDistribution {
        let mut angles = self.angles.clone();
        angles.sort();
        AngleDistribution {
            genus: self.genus,
            angles,
        }
    }
}

impl fmt::Display for AngleDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} (", self.genus)?;
        for (i, angle) in self.angles.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{angle}")?;
        }
        f.write_str(")")
    }
}

/// Even / odd / non-integer split of a distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    /// Integer turn counts of the even angles, descending.
    pub evens: Vec<i64>,
    /// Half-integer turn counts of the odd angles, descending.
    #[serde(with = "crate::exact::rational_vec_serde")]
    pub odds: Vec<Rational>,
    pub nonintegers: Vec<Angle>,
    /// Total sum σ of all turn counts.
    pub sigma: Exact,
    /// Maximal integral sum: the evens plus the 2⌊nO/2⌋ largest odds.
    pub maximal_integral_sum: i64,
}

impl Partition {
    pub fn of(angles: &[Angle]) -> Partition {
        let mut evens = Vec::new();
        let mut odds = Vec::new();
        let mut nonintegers = Vec::new();
        for angle in angles {
            match angle.kind() {
                AngleKind::Even(a) => evens.push(a),
                AngleKind::Odd(b) => odds.push(b),
                AngleKind::NonInteger => nonintegers.push(angle.clone()),
            }
        }
        evens.sort_unstable_by(|a, b| b.cmp(a));
        odds.sort_unstable_by(|a, b| b.cmp(a));
        nonintegers.sort();
        let sigma = angles.iter().map(Angle::value).sum();
        let paired = 2 * (odds.len() / 2);
        let odd_part: Rational = odds[..paired].iter().sum();
        debug_assert!(odd_part.is_integer());
        let maximal_integral_sum = evens.iter().sum::<i64>() + odd_part.to_integer() as i64;
        Partition {
            evens,
            odds,
            nonintegers,
            sigma,
            maximal_integral_sum,
        }
    }

    pub fn n_even(&self) -> usize {
        self.evens.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odds.len()
    }

    pub fn n_noninteger(&self) -> usize {
        self.nonintegers.len()
    }

    pub fn len(&self) -> usize {
        self.n_even() + self.n_odd() + self.n_noninteger()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the sharper of the two inequalities applies.
    pub fn needs_sharp_bound(&self) -> bool {
        self.n_odd().is_multiple_of(2) && self.n_noninteger() == 0
    }

    /// Right-hand side of the strengthened Gauss-Bonnet inequality.
    pub fn strengthened_bound(&self, genus: u32) -> i64 {
        let n = self.len() as i64;
        let g = genus as i64;
        if self.needs_sharp_bound() {
            2 * g + n - 1
        } else {
            2 * g + n - 2
        }
    }
}

pub fn partition(dist: &AngleDistribution) -> Partition {
    Partition::of(dist.angles())
}

/// Strengthened Gauss-Bonnet inequality: `T ≥ 2g+n−1` when the number of odd
/// angles is even and there are no non-integer angles, `T ≥ 2g+n−2` otherwise.
pub fn strengthened_gb(part: &Partition, genus: u32) -> bool {
    part.maximal_integral_sum >= part.strengthened_bound(genus)
}

/// Classical Gauss-Bonnet condition `σ > 2g − 2 + n` for a positive-curvature
/// metric. `None` when σ involves generators.
pub fn plain_gb(part: &Partition, genus: u32) -> Option<bool> {
    let sigma = part.sigma.as_rational()?;
    let bound = Rational::from_integer(2 * genus as i128 - 2 + part.len() as i128);
    Some(sigma > bound)
}

/// `values[i] = scale * weights[i]` with the weights coprime positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDecomposition {
    pub scale: Exact,
    pub weights: Vec<u64>,
}

impl RayDecomposition {
    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }
}

/// Writes positive values as a common scale times coprime integer weights.
///
/// Values involving generators are supported as long as all of them are
/// rational multiples of one another; `None` when they are not commensurable
/// or the list is empty.
pub fn ray_decomposition(values: &[Exact]) -> Option<RayDecomposition> {
    let base = values.first()?;
    let ratios = values.iter().map(|v| v.ratio_to(base)).collect::<Option<Vec<_>>>()?;
    if ratios.iter().any(|r| !r.is_positive()) {
        return None;
    }
    let denom = crate::exact::common_denominator(&ratios);
    let numerators: Vec<i128> = ratios.iter().map(|r| (r * denom).to_integer()).collect();
    let gcd = numerators.iter().fold(0i128, |acc, n| acc.gcd(n));
    let weights = numerators.iter().map(|n| (n / gcd) as u64).collect();
    let scale = base.scale(Rational::new(gcd, denom));
    Some(RayDecomposition { scale, weights })
}

/// Rational-valued convenience wrapper.
pub fn ray_decomposition_rational(values: &[Rational]) -> Option<RayDecomposition> {
    let exact: Vec<Exact> = values.iter().copied().map(Exact::from_rational).collect();
    ray_decomposition(&exact)
}

/// Sign vector realizing a nonnegative integer signed sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedSumWitness {
    pub signs: Vec<i8>,
    pub k: u64,
}

impl SignedSumWitness {
    /// Re-evaluates `Σ ε_j c_j`.
    pub fn evaluate(&self, values: &[Exact]) -> Exact {
        self.signs
            .iter()
            .zip(values)
            .map(|(s, v)| if *s > 0 { v.clone() } else { -v })
            .fold(Exact::zero(), |acc, v| acc + v)
    }
}

/// Every nonnegative integer `K = Σ ε_j c_j` reachable with signs `ε_j = ±1`,
/// each with a witness. The empty list yields `{0}`.
///
/// Runs a reachable-set dynamic program on integer coordinate vectors (the
/// rational part and each generator coefficient, scaled to a common
/// denominator), so generator parts cancel exactly.
pub fn integer_signed_sums(values: &[Exact]) -> BTreeMap<u64, SignedSumWitness> {
    let generators: Vec<String> = {
        let mut names: Vec<String> = values.iter().flat_map(|v| v.generators().map(str::to_string)).collect();
        names.sort();
        names.dedup();
        names
    };
    let mut coefficients = Vec::new();
    for value in values {
        coefficients.push(value.rational_part());
        coefficients.extend(value.irrational_parts().values().copied());
    }
    let denom = crate::exact::common_denominator(&coefficients);
    let to_vector = |value: &Exact| -> Vec<i128> {
        let mut out = Vec::with_capacity(generators.len() + 1);
        out.push((value.rational_part() * denom).to_integer());
        for name in &generators {
            let coeff = value
                .irrational_parts()
                .get(name)
                .copied()
                .unwrap_or_else(Rational::zero);
            out.push((coeff * denom).to_integer());
        }
        out
    };
    let vectors: Vec<Vec<i128>> = values.iter().map(to_vector).collect();

    // reachable vector -> first sign vector reaching it (plus-first order)
    let mut reachable: BTreeMap<Vec<i128>, Vec<i8>> = BTreeMap::new();
    reachable.insert(vec![0; generators.len() + 1], Vec::new());
    for vector in &vectors {
        let mut next: BTreeMap<Vec<i128>, Vec<i8>> = BTreeMap::new();
        for (state, signs) in &reachable {
            for sign in [1i8, -1] {
                let moved: Vec<i128> = state.iter().zip(vector).map(|(s, v)| s + sign as i128 * v).collect();
                next.entry(moved).or_insert_with(|| {
                    let mut s = signs.clone();
                    s.push(sign);
                    s
                });
            }
        }
        reachable = next;
    }

    let mut out = BTreeMap::new();
    for (state, signs) in reachable {
        if state[1..].iter().any(|c| *c != 0) || state[0] % denom != 0 {
            continue;
        }
        let total = state[0] / denom;
        let (k, signs) = if total >= 0 {
            (total as u64, signs)
        } else {
            ((-total) as u64, signs.iter().map(|s| -s).collect())
        };
        out.entry(k).or_insert(SignedSumWitness { signs, k });
    }
    out
}
