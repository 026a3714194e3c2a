//! Closed-form classification.

use super::certificate::{ArithmeticCheck, Certificate, CoaxialArithmetic};
use super::families::{equal_odd_family, odd_pair_family, three_odd_family, torus_family};
use super::{reduction, Singular};
use crate::angles::{integer_signed_sums, ray_decomposition, strengthened_gb, Angle, AngleKind, SignedSumWitness};
use crate::exact::{Exact, Rational};

/// Integer angles (the `a`'s) and all the others (the `c`'s), as used for
/// co-axial monodromy.
pub(crate) fn coaxial_split(angles: &[Angle]) -> (Vec<i64>, Vec<Exact>) {
    let mut a = Vec::new();
    let mut c = Vec::new();
    for angle in angles {
        match angle.kind() {
            AngleKind::Even(v) => a.push(v),
            _ => c.push(angle.value().clone()),
        }
    }
    (a, c)
}

pub(crate) fn coaxial(singular: &Singular) -> (bool, Certificate) {
    let g = singular.genus as i64;
    let (a, c) = coaxial_split(&singular.angles);
    let p = c.len() as i64;
    let base = a.iter().sum::<i64>() - 2 * g + 2 - a.len() as i64;
    if p == 0 {
        if g == 0 {
            return (false, Certificate::OutOfScopeTrivialMonodromy);
        }
        let ok = base > 0 && base % 2 == 0;
        return (ok, Certificate::CoaxialNoPoles { slack: base });
    }
    let sums = integer_signed_sums(&c);
    if sums.is_empty() {
        return (false, Certificate::CoaxialNoSignedSum);
    }
    let max_even = a.iter().copied().max().unwrap_or(0);
    let mut obstruction: Option<Certificate> = None;
    for (k, witness) in &sums {
        let m = base - p - *k as i64;
        if m < 0 || m % 2 != 0 {
            continue;
        }
        if g >= 1 {
            return (true, signed_sum(witness, m, None));
        }
        let mut v = c.clone();
        v.extend(std::iter::repeat_n(Exact::from_integer(1), (m + *k as i64) as usize));
        let Some(ray) = ray_decomposition(&v) else {
            return (true, signed_sum(witness, m, None));
        };
        let sum = ray.weight_sum();
        let arithmetic = CoaxialArithmetic {
            scale: ray.scale,
            weights: ray.weights,
            sum,
            max_even,
            pass: 2 * max_even <= sum as i64,
        };
        if arithmetic.pass {
            return (true, signed_sum(witness, m, Some(arithmetic)));
        }
        obstruction.get_or_insert(Certificate::CoaxialArithmeticObstruction { k: *k, m, arithmetic });
    }
    match obstruction {
        Some(cert) => (false, cert),
        None => (
            false,
            Certificate::CoaxialBudget {
                candidates: sums.keys().map(|k| (*k, base - p - *k as i64)).collect(),
            },
        ),
    }
}

fn signed_sum(witness: &SignedSumWitness, m: i64, arithmetic: Option<CoaxialArithmetic>) -> Certificate {
    Certificate::CoaxialSignedSum {
        witness: witness.clone(),
        m,
        arithmetic,
    }
}

/// Strict dihedral. With `authoritative`, the residue arithmetic is decided
/// by the strata reduction and the closed-form bounds are only reported.
pub(crate) fn strict(singular: &Singular, authoritative: bool) -> (bool, Certificate) {
    let g = singular.genus;
    let part = &singular.part;
    if g == 0 && singular.all_even() {
        return (false, Certificate::OutOfScopeTrivialMonodromy);
    }
    if g == 0 {
        if part.n_odd() < 2 {
            return (false, Certificate::TooFewOddSingularities { n_odd: part.n_odd() });
        }
        if part.n_odd() + part.n_noninteger() < 3 {
            return (
                false,
                Certificate::CyclicMonodromy {
                    n_odd: part.n_odd(),
                    n_noninteger: part.n_noninteger(),
                },
            );
        }
    }
    let bound = part.strengthened_bound(g);
    if !strengthened_gb(part, g) {
        return (
            false,
            Certificate::StrengthenedGaussBonnet {
                holds: false,
                maximal_integral_sum: part.maximal_integral_sum,
                bound,
            },
        );
    }
    if g >= 1 {
        if g == 1 {
            if let Some((family, k)) = torus_family(part) {
                return (false, Certificate::TorusFamily { family, k });
            }
        }
        return (
            true,
            Certificate::StrictHigherGenus {
                maximal_integral_sum: part.maximal_integral_sum,
                bound,
            },
        );
    }
    match part.n_odd() {
        n if n >= 4 => (true, Certificate::ManyOddSingularities { n_odd: n }),
        3 => {
            // both are obstructions; the arithmetic one is reported first
            let verdict = arithmetic(singular, authoritative);
            if !verdict.0 {
                return verdict;
            }
            match three_odd_family(part) {
                Some(m) => (false, Certificate::ThreeOddFamily(m)),
                None => verdict,
            }
        }
        _ => {
            if let Some(m) = odd_pair_family(part) {
                return (false, Certificate::OddPairFamily(m));
            }
            if let Some(m) = equal_odd_family(part) {
                return (false, Certificate::EqualOddFamily(m));
            }
            arithmetic(singular, authoritative)
        }
    }
}

/// The arithmetic condition with two or three odd singularities.
fn arithmetic(singular: &Singular, authoritative: bool) -> (bool, Certificate) {
    let part = &singular.part;
    let n = part.len() as i64;
    let t_sum = part.maximal_integral_sum;
    let units = (t_sum + 2 - n) as u64;
    let (b1, b2) = (part.odds[0], part.odds[1]);

    let mut v: Vec<Exact> = part.nonintegers.iter().map(|c| c.value().clone()).collect();
    if part.n_odd() == 3 {
        v.push(Exact::from_rational(part.odds[2]));
    }
    v.extend(std::iter::repeat_n(Exact::from_integer(1), units as usize));

    let Some(ray) = ray_decomposition(&v) else {
        if authoritative {
            let verdict = reduction::strict(singular);
            if !verdict.0 {
                // the reduction is authoritative; report it directly
                return verdict;
            }
        }
        return (true, Certificate::IncommensurableResidues);
    };
    let sum = ray.weight_sum();
    let sum_q = Rational::from_integer(sum as i128);
    let even = sum % 2 == 0;
    let literal_bound = if even { b1 + b2 } else { b1 };
    let literal_pass = sum_q >= literal_bound;

    // maximal stratum: both largest odd angles and every even angle on the
    // equator; its weight bounds depend only on the odd orders 2b − 2
    let stratum_bound = if even {
        ((b1 + b2) * 2).to_integer() as i64
    } else {
        (b1 * 2).to_integer() as i64 - 1
    };
    let stratum_pass = sum as i64 >= stratum_bound;

    let mut check = ArithmeticCheck {
        units,
        scale: ray.scale,
        weights: ray.weights,
        sum,
        literal_bound,
        literal_pass,
        stratum_bound,
        stratum_pass,
        reduction: None,
    };
    if !authoritative {
        return (literal_pass, Certificate::ResidueArithmetic(check));
    }
    let (ok, cert) = reduction::strict(singular);
    check.reduction = Some(Box::new(super::Verdict {
        realizable: ok,
        class: super::MonodromyClass::StrictDihedral,
        path: super::DecisionPath::StrataReduction,
        certificate: cert,
        plain_gauss_bonnet: None,
        regular_points: 0,
        witness: None,
    }));
    (ok, Certificate::ResidueArithmetic(check))
}
