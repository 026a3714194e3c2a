//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dihedral_core::angles::{partition, strengthened_gb};
use dihedral_core::classifier::{
    classify, classify_via_strata, classify_with_witness, Certificate, MonodromyClass, Verdict,
};
use dihedral_core::crosscheck::{crosscheck, Grid, OracleStatus};
use dihedral_core::strata::{
    abelian_residues_realizable, quad_residues_realizable, AbelianResidueConfig, AbelianStratum, QuadResidueConfig,
    QuadraticStratum,
};
use dihedral_core::surfaces::{
    enumerate_surfaces, EnumerationBounds, JenkinsStrebelSurface, SearchBounds, SearchOutcome,
};
use dihedral_core::{AngleDistribution, Rational};

const STRICT: MonodromyClass = MonodromyClass::StrictDihedral;
const COAXIAL: MonodromyClass = MonodromyClass::Coaxial;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
    /// Failing lines that are reported but do not fail the run.
    documented: bool,
    elapsed: Duration,
}

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn dist(genus: u32, turns: &[Rational]) -> AngleDistribution {
    AngleDistribution::from_turns(genus, turns).unwrap()
}

fn run(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let start = Instant::now();
    let (pass, detail) = f();
    Check {
        name,
        pass,
        detail,
        documented: false,
        elapsed: start.elapsed(),
    }
}

// 1

fn known_examples() -> (bool, String) {
    let mut failures = Vec::new();
    let expect = |failures: &mut Vec<String>, label: &str, got: bool, want: bool| {
        if got != want {
            failures.push(format!("{label}: got {got}"));
        }
    };
    let slow = Duration::from_secs(1);

    let start = Instant::now();
    let sphere = dist(0, &[q(3, 2), q(3, 2), q(3, 2), q(3, 4), q(3, 4)]);
    let reduction = classify_via_strata(&sphere, STRICT);
    expect(
        &mut failures,
        "sphere (3,3,3,3/2,3/2)π strict, reduction",
        reduction.realizable,
        false,
    );
    expect(
        &mut failures,
        "sphere (3,3,3,3/2,3/2)π strict",
        classify(&sphere, STRICT).realizable,
        false,
    );

    let torus = dist(1, &[q(3, 1)]);
    expect(
        &mut failures,
        "torus 6π strict",
        classify(&torus, STRICT).realizable,
        false,
    );
    expect(
        &mut failures,
        "torus 6π coaxial",
        classify(&torus, COAXIAL).realizable,
        true,
    );

    let basic = dist(0, &[q(1, 2), q(1, 2), q(3, 4)]);
    match classify_with_witness(&basic, STRICT, &SearchBounds::default()) {
        Ok((v, Some(SearchOutcome::Found(surface)))) => {
            expect(&mut failures, "sphere (1,1,3/2)π strict", v.realizable, true);
            expect(
                &mut failures,
                "basic witness",
                *surface == JenkinsStrebelSurface::basic_example(q(3, 4)),
                true,
            );
        }
        other => failures.push(format!("basic example: {other:?}")),
    }

    let quad = |genus, orders: Vec<i64>, residues: &[Rational]| {
        let stratum = QuadraticStratum::new(genus, orders, residues.len()).unwrap();
        let config = QuadResidueConfig::from_rationals(residues).unwrap();
        quad_residues_realizable(&stratum, &config).unwrap().realizable
    };
    let one = Rational::from_integer(1);
    let int = Rational::from_integer;
    expect(&mut failures, "Q(4,-2^2) (1,1)", quad(1, vec![4], &[one, one]), false);
    expect(&mut failures, "Q(4,-2^2) (1,2)", quad(1, vec![4], &[one, int(2)]), true);
    expect(
        &mut failures,
        "Q(1,1,-2^3) (1,4,9)",
        quad(0, vec![1, 1], &[one, int(4), int(9)]),
        false,
    );
    expect(
        &mut failures,
        "Q(1,1,-2^3) (9/16,9/16,9/4)",
        quad(0, vec![1, 1], &[q(9, 16), q(9, 16), q(9, 4)]),
        false,
    );
    expect(
        &mut failures,
        "Q(1,1,-2^3) (1,4,16)",
        quad(0, vec![1, 1], &[one, int(4), int(16)]),
        true,
    );

    let abelian = |residues: &[Rational]| {
        let stratum = AbelianStratum::new(0, vec![2], residues.len()).unwrap();
        let config = AbelianResidueConfig::from_signed(residues).unwrap();
        abelian_residues_realizable(&stratum, &config).unwrap().realizable
    };
    expect(
        &mut failures,
        "H(2,-1^4) (1,1,-1,-1)",
        abelian(&[one, one, -one, -one]),
        false,
    );
    expect(
        &mut failures,
        "H(2,-1^4) (2,1,-2,-1)",
        abelian(&[int(2), one, int(-2), -one]),
        true,
    );
    if start.elapsed() > slow * 12 {
        failures.push(format!("took {:?}", start.elapsed()));
    }

    if failures.is_empty() {
        (true, "12 verdicts as expected".into())
    } else {
        (false, failures.join("; "))
    }
}

// 2

fn random_noninteger(rng: &mut ChaCha8Rng, max_turns: i128) -> Rational {
    let den = *[5, 7, 9, 11, 13].choose(rng).unwrap();
    loop {
        let num = rng.gen_range(1..max_turns * den);
        if num % den != 0 {
            return q(num, den);
        }
    }
}

fn noninteger(x: Rational) -> bool {
    x > Rational::from_integer(0) && !(x * Rational::from_integer(2)).is_integer()
}

fn half(n: i128) -> Rational {
    q(n, 2)
}

/// One family instance, or `None` when the random draw violates a side
/// condition (β must be a positive non-integer angle).
type Family = fn(u64, Rational, Rational) -> Option<(u32, Vec<Rational>)>;

fn repeat(x: Rational, n: u64) -> impl Iterator<Item = Rational> {
    std::iter::repeat_n(x, n as usize)
}

fn families() -> Vec<(&'static str, u64, Family)> {
    vec![
        ("torus even alone", 0, |k, _, _| {
            Some((1, vec![Rational::from_integer(2 * k as i128 + 1)]))
        }),
        ("torus even with equal angles", 1, |k, a, _| {
            let mut v = vec![Rational::from_integer(2 * k as i128 + 1)];
            v.extend(repeat(a, 2 * k));
            Some((1, v))
        }),
        ("torus odd pair alone", 0, |k, _, _| {
            Some((1, vec![half(2 * k as i128 + 3), half(2 * k as i128 + 1)]))
        }),
        ("torus odd pair with equal angles", 1, |k, a, _| {
            let mut v = vec![half(2 * k as i128 + 3), half(2 * k as i128 + 1)];
            v.extend(repeat(a, 2 * k));
            Some((1, v))
        }),
        ("three odd, sum", 1, |k, a, l| three_odd(k, a, l, |a, b3| b3 - a)),
        ("three odd, difference", 1, |k, a, l| three_odd(k, a, l, |a, b3| a + b3)),
        ("three odd, reversed difference", 1, |k, a, l| {
            three_odd(k, a, l, |a, b3| a - b3)
        }),
        ("odd pair with two equal", 0, |k, a, _| odd_pair(k, vec![a, a])),
        ("odd pair with 2k equal", 1, |k, a, _| {
            odd_pair(k, repeat(a, 2 * k).collect())
        }),
        ("odd pair with 2k and two equal", 1, |k, a, b| {
            odd_pair(k, repeat(a, 2 * k).chain(repeat(b, 2)).collect())
        }),
        ("equal odd, split sum", 0, |k, a, b| {
            let c = a - b;
            equal_odd(k, repeat(a, 2 * k + 1).chain([b, c]).collect())
        }),
        ("equal odd, shifted sum", 0, |k, a, b| {
            equal_odd(k, repeat(a, 2 * k + 1).chain([b, a + b]).collect())
        }),
        ("equal odd, unit sum", 0, |k, a, _| {
            equal_odd(k, repeat(a, 2 * k + 1).chain([Rational::from_integer(1) - a]).collect())
        }),
        ("equal odd, unit gap", 0, |k, a, _| {
            equal_odd(k, repeat(a, 2 * k + 1).chain([a + Rational::from_integer(1)]).collect())
        }),
        ("equal odd, two angles a unit apart", 0, |k, a, _| {
            equal_odd(k, vec![a, a + Rational::from_integer(1)])
        }),
        ("equal odd, two angles summing to a turn", 0, |k, a, _| {
            equal_odd(k, vec![a, Rational::from_integer(1) - a])
        }),
    ]
}

/// Odd angles `(2k+1)π` twice and `(2l+1)π`, `l ≤ k` drawn from `lseed`.
fn three_odd(
    k: u64,
    a: Rational,
    lseed: Rational,
    beta: fn(Rational, Rational) -> Rational,
) -> Option<(u32, Vec<Rational>)> {
    let l = (lseed * Rational::from_integer(97)).to_integer() as u64 % (k + 1);
    let b3 = half(2 * l as i128 + 1);
    let b = beta(a, b3);
    let mut v = vec![half(2 * k as i128 + 1), half(2 * k as i128 + 1), b3];
    v.extend(repeat(a, 2 * k - 1));
    v.push(b);
    v.iter().all(|x| x > &Rational::from_integer(0)).then_some(())?;
    noninteger(b).then_some((0, v))
}

fn odd_pair(k: u64, rest: Vec<Rational>) -> Option<(u32, Vec<Rational>)> {
    let mut v = vec![half(2 * k as i128 + 3), half(2 * k as i128 + 1)];
    v.extend(rest);
    Some((0, v))
}

fn equal_odd(k: u64, rest: Vec<Rational>) -> Option<(u32, Vec<Rational>)> {
    if !rest.iter().all(|x| noninteger(*x)) {
        return None;
    }
    let mut v = vec![half(2 * k as i128 + 3), half(2 * k as i128 + 3)];
    v.extend(rest);
    Some((0, v))
}

fn is_family(v: &Verdict) -> bool {
    matches!(
        v.certificate,
        Certificate::TorusFamily { .. }
            | Certificate::ThreeOddFamily(_)
            | Certificate::OddPairFamily(_)
            | Certificate::EqualOddFamily(_)
    )
}

fn family_fuzz() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut instances, mut mutated) = (0, 0);
    let mut failures = Vec::new();
    for (name, min_k, family) in families() {
        for k in 0..=3u64 {
            if k < min_k {
                continue;
            }
            let mut drawn = 0;
            let mut attempts = 0;
            while drawn < 20 && attempts < 2000 {
                attempts += 1;
                let a = random_noninteger(&mut rng, 3);
                let b = random_noninteger(&mut rng, 3);
                let Some((genus, turns)) = family(k, a, b) else {
                    continue;
                };
                drawn += 1;
                instances += 1;
                let d = dist(genus, &turns);
                let v = classify(&d, STRICT);
                if v.realizable {
                    failures.push(format!("{name} k={k}: {d} accepted"));
                    continue;
                }

                // perturb a non-integer angle if there is one, else the first
                let mut turns = turns;
                let i = turns.iter().rposition(|x| noninteger(*x)).unwrap_or(0);
                let eps = q(rng.gen_range(1..50), 1009);
                turns[i] += eps;
                let d = dist(genus, &turns);
                let part = partition(&d);
                let lemma = genus > 0 || (part.n_odd() >= 2 && part.n_odd() + part.n_noninteger() >= 3);
                let literal = classify(&d, STRICT);
                if !strengthened_gb(&part, genus) || !lemma || is_family(&literal) {
                    continue;
                }
                mutated += 1;
                let r = classify_via_strata(&d, STRICT);
                if !r.realizable {
                    failures.push(format!("{name} k={k}: mutation {d} rejected: {}", r.certificate));
                }
            }
            if drawn < 20 {
                failures.push(format!("{name} k={k}: only {drawn} valid draws"));
            }
        }
    }
    let detail = format!("{instances} family instances rejected, {mutated} perturbations accepted by the reduction");
    if failures.is_empty() {
        (true, detail)
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        (false, format!("{} failures, e.g. {}", failures.len(), shown.join("; ")))
    }
}

// 3

fn cross_path() -> (bool, String) {
    let coefficients = [q(1, 2), q(3, 4), q(1, 1), q(5, 4), q(3, 2), q(2, 1), q(5, 2), q(3, 1)].to_vec();
    let grid = Grid {
        coefficients,
        max_angles: 5,
        genera: vec![0, 1, 2],
        classes: vec![COAXIAL, STRICT],
        oracle: None,
    };
    let report = crosscheck(&grid);
    let table = report.divergence_table();
    let listed = table.lines().count() - 1 == report.divergences().count();
    let rows: String = table.lines().map(|l| format!("\n    {l}")).collect();
    (report.is_clean() && listed, format!("{}{rows}", report.summary()))
}

// 4

fn oracle() -> (bool, String) {
    let mut coefficients: Vec<Rational> = (1..=16).map(|n| q(n, 4)).collect();
    coefficients.extend([1, 2, 4, 5, 7, 8, 10, 11].map(|n| q(n, 3)));
    let bounds = SearchBounds {
        max_segments: 8,
        ..SearchBounds::default()
    };
    let grid = Grid {
        coefficients,
        max_angles: 5,
        genera: vec![0],
        classes: vec![COAXIAL, STRICT],
        oracle: Some(bounds),
    };
    let report = crosscheck(&grid);
    let ran: Vec<_> = report
        .cases
        .iter()
        .filter(|c| matches!(c.oracle, Some(OracleStatus::Witness | OracleStatus::Exhausted)))
        .collect();
    let witnesses = ran.iter().filter(|c| c.oracle == Some(OracleStatus::Witness)).count();
    let conflicts: Vec<String> = report
        .oracle_conflicts()
        .take(5)
        .map(|c| format!("{} classifier {} search {:?}", c.describe(), c.authoritative, c.oracle))
        .collect();
    let detail = format!(
        "{} distributions within 8 corners, {witnesses} witnesses, {} exhausted, {} conflicts{}",
        ran.len(),
        ran.len() - witnesses,
        report.oracle_conflicts().count(),
        if conflicts.is_empty() {
            String::new()
        } else {
            format!(": {}", conflicts.join("; "))
        }
    );
    (conflicts.is_empty() && !ran.is_empty(), detail)
}

// 5

struct Census {
    surfaces: Vec<JenkinsStrebelSurface>,
}

fn census() -> Census {
    let bounds = EnumerationBounds {
        max_segments: 8,
        lengths: vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)],
        circumferences: None,
    };
    Census {
        surfaces: enumerate_surfaces(&bounds).unwrap(),
    }
}

fn surface_properties(census: &Census) -> (bool, String) {
    let mut failures = Vec::new();
    for s in &census.surfaces {
        if let Err(e) = s.validate() {
            failures.push(format!("{s}: {e:?}"));
            continue;
        }
        let r = s.analyze().unwrap();
        let v = r.equatorial.len() as i64;
        let e = r.segments as i64 / 2;
        let f = r.cylinders as i64;
        let chi = v - e + f;
        if chi % 2 != 0 || chi > 2 || chi != 2 - 2 * r.genus as i64 {
            failures.push(format!("{s}: χ={chi}"));
        }
        if r.is_square && r.equatorial.iter().any(|k| k % 2 != 0) {
            failures.push(format!("{s}: square with odd vertex"));
        }
        // the stratum equation with every cylinder a double pole
        let orders: i64 = r.equatorial.iter().map(|&k| k as i64 - 2).sum();
        if orders != 4 * r.genus as i64 - 4 + 2 * f {
            failures.push(format!("{s}: Σ(k−2)={orders}"));
        }
    }
    let n = census.surfaces.len();
    let detail = format!("{n} surfaces; validity, χ parity, genus, square parity and Σ(k−2) = 4g−4+2·#poles");
    if n < 10_000 {
        failures.push(format!("only {n} surfaces"));
    }
    if failures.is_empty() {
        (true, detail)
    } else {
        (false, failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

/// The identity with the pole terms Σ(2w−2) added, as literally stated.
fn literal_reconciliation(census: &Census) -> (bool, String) {
    let mut bad = 0;
    let mut example = None;
    for s in &census.surfaces {
        let r = s.analyze().unwrap();
        let lhs: Rational = r
            .equatorial
            .iter()
            .map(|&k| Rational::from_integer(k as i128 - 2))
            .sum::<Rational>()
            + r.poles
                .iter()
                .map(|w| w * Rational::from_integer(2) - Rational::from_integer(2))
                .sum::<Rational>();
        let rhs = Rational::from_integer(4 * r.genus as i128 - 4 + 2 * r.cylinders as i128);
        if lhs != rhs {
            bad += 1;
            example.get_or_insert_with(|| format!("{s}: lhs {lhs}, rhs {rhs}"));
        }
    }
    let detail = match example {
        Some(e) => format!(
            "{bad}/{} surfaces violate it; holds only when Σw = #poles, e.g. {e}",
            census.surfaces.len()
        ),
        None => "holds on every surface".into(),
    };
    (bad == 0, detail)
}

// 6

fn invariance() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let values = [
        q(1, 2),
        q(3, 4),
        q(3, 2),
        q(5, 2),
        q(2, 1),
        q(1, 3),
        q(5, 6),
        q(7, 5),
        q(3, 1),
    ];
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let genus = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=6);
        let mut turns: Vec<Rational> = (0..n).map(|_| *values.choose(&mut rng).unwrap()).collect();
        let base = dist(genus, &turns);
        turns.shuffle(&mut rng);
        let shuffled = dist(genus, &turns);
        for class in MonodromyClass::ALL {
            if classify(&base, class) != classify(&shuffled, class)
                || classify_via_strata(&base, class) != classify_via_strata(&shuffled, class)
            {
                failures.push(format!("{class} {shuffled}"));
            }
        }
    }

    let quadratic: Vec<(QuadraticStratum, Vec<Rational>)> = vec![
        (QuadraticStratum::new(1, vec![4], 2).unwrap(), vec![q(1, 1), q(1, 1)]),
        (QuadraticStratum::new(1, vec![4], 2).unwrap(), vec![q(1, 1), q(2, 1)]),
        (
            QuadraticStratum::new(0, vec![1, 1], 3).unwrap(),
            vec![q(1, 1), q(4, 1), q(9, 1)],
        ),
        (
            QuadraticStratum::new(0, vec![1, 1], 3).unwrap(),
            vec![q(9, 16), q(9, 16), q(9, 4)],
        ),
        (
            QuadraticStratum::new(0, vec![1, 1], 3).unwrap(),
            vec![q(1, 1), q(4, 1), q(16, 1)],
        ),
    ];
    let abelian: Vec<(AbelianStratum, Vec<Rational>)> = vec![
        (
            AbelianStratum::new(0, vec![2], 4).unwrap(),
            vec![q(1, 1), q(1, 1), q(-1, 1), q(-1, 1)],
        ),
        (
            AbelianStratum::new(0, vec![2], 4).unwrap(),
            vec![q(2, 1), q(1, 1), q(-2, 1), q(-1, 1)],
        ),
    ];
    for _ in 0..100 {
        let scale = q(rng.gen_range(1..200), rng.gen_range(1..200));
        for (stratum, residues) in &quadratic {
            let config = QuadResidueConfig::from_rationals(residues).unwrap();
            let a = quad_residues_realizable(stratum, &config).unwrap().realizable;
            let b = quad_residues_realizable(stratum, &config.scaled(scale).unwrap())
                .unwrap()
                .realizable;
            if a != b {
                failures.push(format!("{stratum} scaled by {scale}"));
            }
        }
        for (stratum, residues) in &abelian {
            let config = AbelianResidueConfig::from_signed(residues).unwrap();
            let a = abelian_residues_realizable(stratum, &config).unwrap().realizable;
            let b = abelian_residues_realizable(stratum, &config.scaled(scale).unwrap())
                .unwrap()
                .realizable;
            if a != b {
                failures.push(format!("{stratum} scaled by {scale}"));
            }
        }
    }

    let cli = |units: &str, angles: &str, class: &str| -> Option<String> {
        let out = Command::new(env!("CARGO_BIN_EXE_dihedral"))
            .args([
                "--format", "json", "classify", "--class", class, "--units", units, "--angles", angles,
            ])
            .output()
            .ok()?;
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).ok()?;
        Some(doc.to_string())
    };
    let pairs = [
        ("3/2,3/2,3/2,3/4,3/4", "3,3,3,3/2,3/2"),
        ("1/2,1/2,3/4", "1,1,3/2"),
        ("5/2,3/2,3/4,3/4", "5,3,3/2,3/2"),
        ("1/3,1/3", "2/3,2/3"),
    ];
    for (turns, pi) in pairs {
        for class in ["coaxial", "strict", "any"] {
            let a = cli("2pi", turns, class);
            if a.is_none() || a != cli("pi", pi, class) {
                failures.push(format!("units disagree on {turns} {class}"));
            }
        }
    }

    if failures.is_empty() {
        (true, "1000 shuffles, 100 residue scales, 12 unit-mode pairs".into())
    } else {
        (false, failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

fn main() -> ExitCode {
    let mut checks = vec![
        run("1 known examples", known_examples),
        run("2 exceptional-family fuzz", family_fuzz),
        run("3 cross-path agreement", cross_path),
        run("4 oracle at desk scale", oracle),
    ];
    let start = Instant::now();
    let surfaces = census();
    let enumerated = start.elapsed();
    let mut c = run("5 surface properties", || surface_properties(&surfaces));
    c.elapsed += enumerated;
    checks.push(c);
    let mut c = run("5 literal reconciliation identity", || {
        literal_reconciliation(&surfaces)
    });
    c.documented = true;
    checks.push(c);
    checks.push(run("6 invariance", invariance));

    let limits = [("2 ", 60), ("3 ", 600), ("4 ", 1800)];
    let mut ok = true;
    for c in &mut checks {
        if let Some((_, secs)) = limits.iter().find(|(p, _)| c.name.starts_with(p)) {
            if c.elapsed > Duration::from_secs(*secs) {
                c.pass = false;
                c.detail += &format!(" (over the {secs}s budget)");
            }
        }
        let status = match (c.pass, c.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        println!("{status} {} [{:.1}s]: {}", c.name, c.elapsed.as_secs_f64(), c.detail);
        ok &= c.pass || c.documented;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
