//! Strata of meromorphic quadratic and Abelian differentials with at worst
//! double (resp. simple) poles, and exact predicates deciding which
//! configurations of residues they realize.
//!
//! Orders equal to zero denote marked regular points. They are accepted in
//! strata but ignored when matching the exceptional strata, since marking a
//! point never changes which residues a differential can have.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::angles::ray_decomposition;
use crate::exact::{squarefree_decomposition, Exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("expected {expected} residues, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("the stratum has no poles")]
    NoPoles,
    #[error("genus-zero stratum {0} has no odd order, so it contains no primitive differential")]
    NonPrimitive(String),
    #[error("residue {0} is not positive")]
    NonPositiveResidue(String),
}

/// `Q(d_1, …, d_s, -2^p)` on a surface of the given genus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticStratum {
    genus: u32,
    orders: Vec<i64>,
    poles: usize,
}

impl QuadraticStratum {
    pub fn new(genus: u32, mut orders: Vec<i64>, poles: usize) -> Result<Self, StrataError> {
        if let Some(bad) = orders.iter().find(|d| **d < -1) {
            return Err(StrataError::InvalidStratum(format!(
                "order {bad} is not allowed (orders must be at least -1; double poles are counted separately)"
            )));
        }
        let total: i64 = orders.iter().sum::<i64>() - 2 * poles as i64;
        if total != 4 * genus as i64 - 4 {
            return Err(StrataError::InvalidStratum(format!(
                "orders sum to {total}, expected 4g-4 = {}",
                4 * genus as i64 - 4
            )));
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(QuadraticStratum { genus, orders, poles })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// All orders of zeros, simple poles and marked points, descending.
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn poles(&self) -> usize {
        self.poles
    }

    /// Orders with marked points removed.
    pub fn effective_orders(&self) -> Vec<i64> {
        self.orders.iter().copied().filter(|d| *d != 0).collect()
    }

    pub fn odd_orders(&self) -> Vec<i64> {
        self.orders.iter().copied().filter(|d| d % 2 != 0).collect()
    }
}

impl fmt::Display for QuadraticStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q(")?;
        let mut first = true;
        for d in &self.orders {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        if self.poles > 0 {
            if !first {
                f.write_str(",")?;
            }
            if self.poles == 1 {
                f.write_str("-2")?;
            } else {
                write!(f, "-2^{}", self.poles)?;
            }
        }
        f.write_str(")")
    }
}

/// A positive quadratic residue stored as `squarefree * root²`, so its square
/// root `√squarefree · root` stays exact even when the residue is not a
/// perfect square or involves generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadResidue {
    pub squarefree: u64,
    pub root: Exact,
}

impl QuadResidue {
    pub fn from_rational(value: Rational) -> Result<Self, StrataError> {
        if !value.is_positive() {
            return Err(StrataError::NonPositiveResidue(value.to_string()));
        }
        let (squarefree, root) = squarefree_decomposition(&value);
        Ok(QuadResidue {
            squarefree,
            root: Exact::from_rational(root),
        })
    }

    /// The residue `root²` of a cylinder of circumference `root`.
    pub fn square_of(root: &Exact) -> Result<Self, StrataError> {
        match root.as_rational() {
            Some(r) if !r.is_positive() => Err(StrataError::NonPositiveResidue(format!("({r})^2"))),
            Some(r) => QuadResidue::from_rational(r * r),
            None => Ok(QuadResidue {
                squarefree: 1,
                root: root.clone(),
            }),
        }
    }

    /// The residue itself when it is rational.
    pub fn value(&self) -> Option<Rational> {
        self.root
            .as_rational()
            .map(|r| r * r * Rational::from_integer(self.squarefree as i128))
    }
}

impl fmt::Display for QuadResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None if self.squarefree == 1 => write!(f, "({})^2", self.root),
            None => write!(f, "{}*({})^2", self.squarefree, self.root),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadResidueConfig {
    pub residues: Vec<QuadResidue>,
}

impl QuadResidueConfig {
    pub fn new(residues: Vec<QuadResidue>) -> Self {
        QuadResidueConfig { residues }
    }

    pub fn from_rationals(values: &[Rational]) -> Result<Self, StrataError> {
        values
            .iter()
            .map(|v| QuadResidue::from_rational(*v))
            .collect::<Result<Vec<_>, _>>()
            .map(QuadResidueConfig::new)
    }

    /// Residues of cylinders with the given circumferences.
    pub fn from_roots(roots: &[Exact]) -> Result<Self, StrataError> {
        roots
            .iter()
            .map(QuadResidue::square_of)
            .collect::<Result<Vec<_>, _>>()
            .map(QuadResidueConfig::new)
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn scaled(&self, factor: Rational) -> Result<Self, StrataError> {
        if !factor.is_positive() {
            return Err(StrataError::NonPositiveResidue(factor.to_string()));
        }
        let (squarefree, root) = squarefree_decomposition(&factor);
        let residues = self
            .residues
            .iter()
            .map(|r| {
                let product = r.squarefree * squarefree;
                let common = num_integer::gcd(r.squarefree, squarefree);
                let new_squarefree = product / (common * common);
                QuadResidue {
                    squarefree: new_squarefree,
                    root: r.root.scale(root * Rational::from_integer(common as i128)),
                }
            })
            .collect();
        Ok(QuadResidueConfig { residues })
    }
}

impl fmt::Display for QuadResidueConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// `H(a_1, …, a_n, -1^p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianStratum {
    genus: u32,
    zero_orders: Vec<u32>,
    poles: usize,
}

impl AbelianStratum {
    pub fn new(genus: u32, mut zero_orders: Vec<u32>, poles: usize) -> Result<Self, StrataError> {
        let total = zero_orders.iter().map(|a| *a as i64).sum::<i64>() - poles as i64;
        if total != 2 * genus as i64 - 2 {
            return Err(StrataError::InvalidStratum(format!(
                "zero orders minus poles is {total}, expected 2g-2 = {}",
                2 * genus as i64 - 2
            )));
        }
        zero_orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianStratum {
            genus,
            zero_orders,
            poles,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn zero_orders(&self) -> &[u32] {
        &self.zero_orders
    }

    pub fn poles(&self) -> usize {
        self.poles
    }

    pub fn max_zero_order(&self) -> u32 {
        self.zero_orders.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for AbelianStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("H(")?;
        let mut first = true;
        for a in &self.zero_orders {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if self.poles > 0 {
            if !first {
                f.write_str(",")?;
            }
            if self.poles == 1 {
                f.write_str("-1")?;
            } else {
                write!(f, "-1^{}", self.poles)?;
            }
        }
        f.write_str(")")
    }
}

/// Residues at simple poles split by sign: `positive` holds the λ's and
/// `negative` the magnitudes μ of the negative residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianResidueConfig {
    pub positive: Vec<Exact>,
    pub negative: Vec<Exact>,
}

impl AbelianResidueConfig {
    pub fn new(positive: Vec<Exact>, negative: Vec<Exact>) -> Result<Self, StrataError> {
        for value in positive.iter().chain(&negative) {
            if value.rational_sign().is_some_and(|s| s != std::cmp::Ordering::Greater) {
                return Err(StrataError::NonPositiveResidue(value.to_string()));
            }
        }
        Ok(AbelianResidueConfig { positive, negative })
    }

    /// Splits signed rationals; zero entries are rejected.
    pub fn from_signed(values: &[Rational]) -> Result<Self, StrataError> {
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for value in values {
            if value.is_zero() {
                return Err(StrataError::NonPositiveResidue("0".into()));
            }
            if value.is_positive() {
                positive.push(Exact::from_rational(*value));
            } else {
                negative.push(Exact::from_rational(-*value));
            }
        }
        Ok(AbelianResidueConfig { positive, negative })
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> Exact {
        let pos: Exact = self.positive.iter().sum();
        let neg: Exact = self.negative.iter().sum();
        pos - neg
    }

    pub fn scaled(&self, factor: Rational) -> Result<Self, StrataError> {
        AbelianResidueConfig::new(
            self.positive.iter().map(|v| v.scale(factor)).collect(),
            self.negative.iter().map(|v| v.scale(factor)).collect(),
        )
    }
}

impl fmt::Display for AbelianResidueConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for v in &self.positive {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        for v in &self.negative {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "-{v}")?;
            first = false;
        }
        f.write_str(")")
    }
}

/// Which rule decided a residue query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrataClause {
    #[serde(rename = "generic-yes")]
    GenericYes,
    #[serde(rename = "exception-Q(4s,-2^2s)")]
    ExceptionQ4s,
    #[serde(rename = "exception-Q(2s+1,2s-1,-2^2s)")]
    ExceptionQOddPair,
    #[serde(rename = "exception-ABC")]
    ExceptionAbc,
    #[serde(rename = "exception-AABB")]
    ExceptionAabb,
    #[serde(rename = "exception-even-weight")]
    ExceptionEvenWeight,
    #[serde(rename = "exception-odd-weight")]
    ExceptionOddWeight,
    #[serde(rename = "exception-genus0-arith")]
    ExceptionGenus0Arith,
    #[serde(rename = "residue-theorem-violation")]
    ResidueTheoremViolation,
}

impl StrataClause {
    pub fn realizable(self) -> bool {
        self == StrataClause::GenericYes
    }

    pub fn id(self) -> &'static str {
        match self {
            StrataClause::GenericYes => "generic-yes",
            StrataClause::ExceptionQ4s => "exception-Q(4s,-2^2s)",
            StrataClause::ExceptionQOddPair => "exception-Q(2s+1,2s-1,-2^2s)",
            StrataClause::ExceptionAbc => "exception-ABC",
            StrataClause::ExceptionAabb => "exception-AABB",
            StrataClause::ExceptionEvenWeight => "exception-even-weight",
            StrataClause::ExceptionOddWeight => "exception-odd-weight",
            StrataClause::ExceptionGenus0Arith => "exception-genus0-arith",
            StrataClause::ResidueTheoremViolation => "residue-theorem-violation",
        }
    }
}

impl fmt::Display for StrataClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id().strip_prefix("exception-") {
            Some(rest) => write!(f, "exception {rest}"),
            None => f.write_str(self.id()),
        }
    }
}

/// Which of the three sum relations tied `A`, `B`, `C` together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumRelation {
    #[serde(rename = "C=A+B")]
    CIsSum,
    #[serde(rename = "B=A+C")]
    BIsSum,
    /// Not listed explicitly among the classical exceptions; matched for
    /// symmetry in the unordered pair `A`, `B`.
    #[serde(rename = "A=B+C")]
    AIsSum,
}

impl fmt::Display for SumRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumRelation::CIsSum => "C=A+B",
            SumRelation::BIsSum => "B=A+C",
            SumRelation::AIsSum => "A=B+C",
        })
    }
}

/// Parameters matched by the deciding rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrataDetail {
    None,
    /// All residues equal to `residue`.
    EqualResidues {
        residue: QuadResidue,
        s: u32,
    },
    /// Square roots `A`, `B`, `C` (each times `√squarefree`).
    SumOfRoots {
        squarefree: u64,
        a: Exact,
        b: Exact,
        c: Exact,
        relation: SumRelation,
    },
    /// Square roots `A` (twice) and `B` (p−2 times).
    PairAndRest {
        squarefree: u64,
        a: Exact,
        b: Exact,
    },
    /// Residues `L·f_j²` with `L = squarefree·root_scale²`.
    Weights {
        squarefree: u64,
        root_scale: Exact,
        weights: Vec<u64>,
        sum: u64,
        bound: i64,
    },
    /// Residue magnitudes `L·f_j`; `sum` counts the positive side only.
    LinearWeights {
        scale: Exact,
        weights: Vec<u64>,
        sum: u64,
        bound: i64,
    },
    /// Nonzero total residue.
    Total {
        total: Exact,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataVerdict {
    pub realizable: bool,
    pub clause: StrataClause,
    pub detail: StrataDetail,
}

impl StrataVerdict {
    fn new(clause: StrataClause, detail: StrataDetail) -> Self {
        StrataVerdict {
            realizable: clause.realizable(),
            clause,
            detail,
        }
    }

    fn generic() -> Self {
        StrataVerdict::new(StrataClause::GenericYes, StrataDetail::None)
    }
}

impl fmt::Display for StrataVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.realizable {
            "realizable"
        } else {
            "not realizable"
        };
        write!(f, "{head} ({})", self.clause)?;
        match &self.detail {
            StrataDetail::None => Ok(()),
            StrataDetail::EqualResidues { residue, s } => write!(f, ": all residues {residue}, s={s}"),
            StrataDetail::SumOfRoots {
                squarefree,
                a,
                b,
                c,
                relation,
            } => {
                let unit = if *squarefree == 1 {
                    String::new()
                } else {
                    format!("√{squarefree}·")
                };
                write!(f, ": A={unit}{a}, B={unit}{b}, C={unit}{c}, {relation}")
            }
            StrataDetail::PairAndRest { squarefree, a, b } => {
                let unit = if *squarefree == 1 {
                    String::new()
                } else {
                    format!("√{squarefree}·")
                };
                write!(f, ": A={unit}{a}, B={unit}{b}")
            }
            StrataDetail::Weights {
                squarefree,
                root_scale,
                weights,
                sum,
                bound,
            } => {
                let scale = match root_scale.as_rational() {
                    Some(r) => (r * r * Rational::from_integer(*squarefree as i128)).to_string(),
                    None if *squarefree == 1 => format!("({root_scale})^2"),
                    None => format!("{squarefree}*({root_scale})^2"),
                };
                let list: Vec<String> = weights.iter().map(u64::to_string).collect();
                write!(f, ": L={scale}, f=({}), Σf={sum}, bound {bound}", list.join(","))
            }
            StrataDetail::LinearWeights {
                scale,
                weights,
                sum,
                bound,
            } => {
                let list: Vec<String> = weights.iter().map(u64::to_string).collect();
                write!(
                    f,
                    ": L={scale}, f=({}), positive Σf={sum}, bound {bound}",
                    list.join(",")
                )
            }
            StrataDetail::Total { total } => write!(f, ": residues sum to {total}"),
        }
    }
}

fn all_equal<T: PartialEq>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Decides whether `config` is the list of quadratic residues of a primitive
/// differential in `stratum`.
pub fn quad_residues_realizable(
    stratum: &QuadraticStratum,
    config: &QuadResidueConfig,
) -> Result<StrataVerdict, StrataError> {
    let p = stratum.poles();
    if p == 0 {
        return Err(StrataError::NoPoles);
    }
    if config.len() != p {
        return Err(StrataError::ArityMismatch {
            expected: p,
            found: config.len(),
        });
    }
    let odd = stratum.odd_orders();
    if stratum.genus() == 0 && odd.is_empty() {
        return Err(StrataError::NonPrimitive(stratum.to_string()));
    }
    match stratum.genus() {
        0 => Ok(genus_zero_quadratic(stratum, config)),
        1 => Ok(genus_one_quadratic(stratum, config)),
        _ => Ok(StrataVerdict::generic()),
    }
}

fn genus_one_quadratic(stratum: &QuadraticStratum, config: &QuadResidueConfig) -> StrataVerdict {
    let p = stratum.poles() as i64;
    if p % 2 != 0 || !all_equal(&config.residues) {
        return StrataVerdict::generic();
    }
    let s = p / 2;
    let orders = stratum.effective_orders();
    let detail = || StrataDetail::EqualResidues {
        residue: config.residues[0].clone(),
        s: s as u32,
    };
    if orders == [4 * s] {
        return StrataVerdict::new(StrataClause::ExceptionQ4s, detail());
    }
    if orders == [2 * s + 1, 2 * s - 1] {
        return StrataVerdict::new(StrataClause::ExceptionQOddPair, detail());
    }
    StrataVerdict::generic()
}

fn genus_zero_quadratic(stratum: &QuadraticStratum, config: &QuadResidueConfig) -> StrataVerdict {
    let p = stratum.poles() as i64;
    let orders = stratum.effective_orders();
    let odd: Vec<i64> = orders.iter().copied().filter(|d| d % 2 != 0).collect();

    if odd.len() == 2 {
        if let Some(verdict) = weight_exceptions(config, odd[0], odd[1]) {
            return verdict;
        }
    }
    if p % 2 == 1 && p >= 3 && orders == [p - 2, p - 2] {
        if let Some(detail) = sum_of_roots(config) {
            return StrataVerdict::new(StrataClause::ExceptionAbc, detail);
        }
    }
    if p % 2 == 0 && orders == [p - 1, p - 3] {
        if let Some(detail) = pair_and_rest(config) {
            return StrataVerdict::new(StrataClause::ExceptionAabb, detail);
        }
    }
    StrataVerdict::generic()
}

/// Residues of the form `L·f_j²` with `Σf` even and below `b₁ + b₂ + 4`, or
/// odd and at most the largest odd order. The even bound is `2p` when every
/// zero is odd; even-order zeros do not raise it (a hemispherical surface in
/// `Q(2,-1,-1,-2^2)` realizes `(r,r)`).
fn weight_exceptions(config: &QuadResidueConfig, b1: i64, b2: i64) -> Option<StrataVerdict> {
    let (even_bound, max_odd) = (b1 + b2 + 4, b1.max(b2));
    let squarefree = config.residues[0].squarefree;
    if config.residues.iter().any(|r| r.squarefree != squarefree) {
        return None;
    }
    let roots: Vec<Exact> = config.residues.iter().map(|r| r.root.clone()).collect();
    let ray = ray_decomposition(&roots)?;
    let sum = ray.weight_sum();
    let detail = |bound| StrataDetail::Weights {
        squarefree,
        root_scale: ray.scale.clone(),
        weights: ray.weights.clone(),
        sum,
        bound,
    };
    if sum % 2 == 0 && (sum as i64) < even_bound {
        return Some(StrataVerdict::new(
            StrataClause::ExceptionEvenWeight,
            detail(even_bound),
        ));
    }
    if sum % 2 == 1 && (sum as i64) <= max_odd {
        return Some(StrataVerdict::new(StrataClause::ExceptionOddWeight, detail(max_odd)));
    }
    None
}

/// `(A², B², C², …, C²)` with one of `A`, `B`, `C` the sum of the other two.
fn sum_of_roots(config: &QuadResidueConfig) -> Option<StrataDetail> {
    let residues = &config.residues;
    let p = residues.len();
    let squarefree = residues[0].squarefree;
    if residues.iter().any(|r| r.squarefree != squarefree) {
        return None;
    }
    let relations = [SumRelation::CIsSum, SumRelation::BIsSum, SumRelation::AIsSum];
    for relation in relations {
        // try every value as the repeated entry C, scanning from the end so
        // that for p = 3 the largest listed entry is tried as C first
        for c_index in (0..p).rev() {
            let c = &residues[c_index];
            let repeats = residues.iter().filter(|r| *r == c).count();
            if repeats < p - 2 {
                continue;
            }
            let mut rest: Vec<&QuadResidue> = Vec::with_capacity(2);
            let mut skipped = 0;
            for r in residues {
                if r == c && skipped < p - 2 {
                    skipped += 1;
                } else {
                    rest.push(r);
                }
            }
            let (a, b) = (&rest[0].root, &rest[1].root);
            let c = &c.root;
            let holds = match relation {
                SumRelation::CIsSum => &(a + b) == c,
                SumRelation::BIsSum => &(a + c) == b,
                SumRelation::AIsSum => &(b + c) == a,
            };
            if holds {
                return Some(StrataDetail::SumOfRoots {
                    squarefree,
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                    relation,
                });
            }
        }
    }
    None
}

/// `(A², A², B², …, B²)`.
fn pair_and_rest(config: &QuadResidueConfig) -> Option<StrataDetail> {
    let residues = &config.residues;
    let p = residues.len();
    let mut distinct: Vec<(&QuadResidue, usize)> = Vec::new();
    for r in residues {
        match distinct.iter_mut().find(|(v, _)| *v == r) {
            Some(entry) => entry.1 += 1,
            None => distinct.push((r, 1)),
        }
    }
    let detail = |a: &QuadResidue, b: &QuadResidue| {
        (a.squarefree == b.squarefree).then(|| StrataDetail::PairAndRest {
            squarefree: a.squarefree,
            a: a.root.clone(),
            b: b.root.clone(),
        })
    };
    match distinct.as_slice() {
        [(only, _)] => detail(only, only),
        [(x, nx), (y, ny)] => {
            if *nx == 2 && *ny == p - 2 {
                detail(x, y)
            } else if *ny == 2 && *nx == p - 2 {
                detail(y, x)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Decides whether `config` is the residue list of a meromorphic 1-form in
/// `stratum`.
pub fn abelian_residues_realizable(
    stratum: &AbelianStratum,
    config: &AbelianResidueConfig,
) -> Result<StrataVerdict, StrataError> {
    let p = stratum.poles();
    if p == 0 {
        return Err(StrataError::NoPoles);
    }
    if config.len() != p {
        return Err(StrataError::ArityMismatch {
            expected: p,
            found: config.len(),
        });
    }
    let total = config.total();
    if !total.is_zero() {
        return Ok(StrataVerdict::new(
            StrataClause::ResidueTheoremViolation,
            StrataDetail::Total { total },
        ));
    }
    if stratum.genus() >= 1 {
        return Ok(StrataVerdict::generic());
    }
    let magnitudes: Vec<Exact> = config.positive.iter().chain(&config.negative).cloned().collect();
    let Some(ray) = ray_decomposition(&magnitudes) else {
        return Ok(StrataVerdict::generic());
    };
    let positive_sum: u64 = ray.weights[..config.positive.len()].iter().sum();
    let bound = stratum.max_zero_order() as i64;
    let detail = StrataDetail::LinearWeights {
        scale: ray.scale.clone(),
        weights: ray.weights.clone(),
        sum: positive_sum,
        bound,
    };
    let clause = if positive_sum as i64 > bound {
        StrataClause::GenericYes
    } else {
        StrataClause::ExceptionGenus0Arith
    };
    Ok(StrataVerdict::new(clause, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn quad(genus: u32, orders: &[i64], residues: &[Rational]) -> StrataVerdict {
        let stratum = QuadraticStratum::new(genus, orders.to_vec(), residues.len()).unwrap();
        let config = QuadResidueConfig::from_rationals(residues).unwrap();
        quad_residues_realizable(&stratum, &config).unwrap()
    }

    fn abelian(genus: u32, zeros: &[u32], residues: &[Rational]) -> StrataVerdict {
        let stratum = AbelianStratum::new(genus, zeros.to_vec(), residues.len()).unwrap();
        let config = AbelianResidueConfig::from_signed(residues).unwrap();
        abelian_residues_realizable(&stratum, &config).unwrap()
    }

    #[test]
    fn stratum_validation() {
        assert!(QuadraticStratum::new(0, vec![1, 1], 3).is_ok());
        assert!(QuadraticStratum::new(0, vec![1, 1], 2).is_err());
        assert!(QuadraticStratum::new(0, vec![-2, 2], 2).is_err());
        assert!(AbelianStratum::new(0, vec![2], 4).is_ok());
        assert!(AbelianStratum::new(1, vec![2], 4).is_err());
        assert_eq!(
            QuadraticStratum::new(0, vec![1, 1], 3).unwrap().to_string(),
            "Q(1,1,-2^3)"
        );
    }

    #[test]
    fn torus_equal_residues_are_obstructed() {
        let v = quad(1, &[4], &[q(1, 1), q(1, 1)]);
        assert!(!v.realizable);
        assert_eq!(v.clause, StrataClause::ExceptionQ4s);
        assert!(quad(1, &[4], &[q(1, 1), q(2, 1)]).realizable);
        let v = quad(1, &[3, 1], &[q(5, 1), q(5, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionQOddPair);
        // marked points do not hide the exception
        assert_eq!(quad(1, &[4, 0], &[q(1, 1), q(1, 1)]).clause, StrataClause::ExceptionQ4s);
    }

    #[test]
    fn higher_genus_is_unobstructed() {
        assert!(quad(2, &[4, 4], &[q(1, 1), q(1, 1)]).realizable);
    }

    #[test]
    fn sum_of_roots_exception() {
        let v = quad(0, &[1, 1], &[q(1, 1), q(4, 1), q(9, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionAbc);
        match v.detail {
            StrataDetail::SumOfRoots { a, b, c, relation, .. } => {
                assert_eq!((a, b, c), (1.into(), 2.into(), 3.into()));
                assert_eq!(relation, SumRelation::CIsSum);
            }
            other => panic!("unexpected detail {other:?}"),
        }
        // √2 + 2√2 = 3√2
        assert_eq!(
            quad(0, &[1, 1], &[q(2, 1), q(8, 1), q(18, 1)]).clause,
            StrataClause::ExceptionAbc
        );
        // p = 5: C repeated three times
        let v = quad(0, &[3, 3], &[q(1, 1), q(4, 1), q(9, 1), q(9, 1), q(9, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionAbc);
        let v = quad(0, &[3, 3], &[q(1, 1), q(4, 1), q(9, 1), q(9, 1), q(16, 1)]);
        assert!(v.realizable);
    }

    #[test]
    fn even_weight_exception() {
        let v = quad(0, &[1, 1], &[q(9, 16), q(9, 16), q(9, 4)]);
        assert_eq!(v.clause, StrataClause::ExceptionEvenWeight);
        match v.detail {
            StrataDetail::Weights {
                squarefree,
                root_scale,
                weights,
                sum,
                ..
            } => {
                assert_eq!(squarefree, 1);
                assert_eq!(root_scale, Exact::from_rational(q(3, 4)));
                assert_eq!(weights, vec![1, 1, 2]);
                assert_eq!(sum, 4);
            }
            other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn even_zeros_do_not_raise_the_even_bound() {
        // (r, r) in Q(2,-1,-1,-2^2): Σf = 2 is not below b₁ + b₂ + 4 = 2
        assert!(quad(0, &[2, -1, -1], &[q(9, 16), q(9, 16)]).realizable);
        // Q(2,1,1,-2^4): bound 6, not 2p = 8
        assert!(quad(0, &[2, 1, 1], &[q(1, 1), q(1, 1), q(4, 1), q(4, 1)]).realizable);
        let v = quad(0, &[2, 1, 1], &[q(1, 1); 4]);
        assert_eq!(v.clause, StrataClause::ExceptionEvenWeight);
    }

    #[test]
    fn generic_genus_zero_configuration() {
        assert!(quad(0, &[1, 1], &[q(1, 1), q(4, 1), q(16, 1)]).realizable);
    }

    #[test]
    fn odd_weight_exception() {
        // Q(3,-1,-2^3): weights (1,1,1), Σf = 3 ≤ 3
        let v = quad(0, &[3, -1], &[q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionOddWeight);
        // Q(1,1,-2^3) with (1,1,1): Σf=3 odd, bound 1
        assert!(quad(0, &[1, 1], &[q(1, 1), q(1, 1), q(1, 1)]).realizable);
    }

    #[test]
    fn pair_and_rest_exception() {
        // also of even weight, which is reported first
        let v = quad(0, &[1, -1], &[q(2, 1), q(2, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionEvenWeight);
        let v = quad(0, &[1, -1], &[q(2, 1), q(3, 1)]);
        assert!(v.realizable);
        let v = quad(0, &[3, 1], &[q(9, 16), q(9, 16), q(1, 1), q(1, 1)]);
        assert!(!v.realizable);
        assert!(quad(0, &[3, 1], &[q(9, 16), q(1, 4), q(1, 1), q(1, 1)]).realizable);
    }

    #[test]
    fn basic_hemispherical_configuration() {
        assert!(quad(0, &[-1, -1], &[q(9, 16)]).realizable);
    }

    #[test]
    fn non_primitive_genus_zero_is_an_error() {
        let stratum = QuadraticStratum::new(0, vec![2, 2], 4).unwrap();
        let config = QuadResidueConfig::from_rationals(&[q(1, 1); 4]).unwrap();
        assert!(matches!(
            quad_residues_realizable(&stratum, &config),
            Err(StrataError::NonPrimitive(_))
        ));
        let stratum = QuadraticStratum::new(0, vec![1, 1], 3).unwrap();
        let config = QuadResidueConfig::from_rationals(&[q(1, 1); 2]).unwrap();
        assert_eq!(
            quad_residues_realizable(&stratum, &config),
            Err(StrataError::ArityMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn symbolic_residues() {
        let x = Exact::generator("x");
        let stratum = QuadraticStratum::new(0, vec![1, 1], 3).unwrap();
        // (x, x, 2x): of the form L f² with f = (1,1,2)
        let config = QuadResidueConfig::from_roots(&[x.clone(), x.clone(), x.scale(q(2, 1))]).unwrap();
        assert_eq!(
            quad_residues_realizable(&stratum, &config).unwrap().clause,
            StrataClause::ExceptionEvenWeight
        );
        // (x, 1-x, 1): 1 = x + (1-x)
        let config =
            QuadResidueConfig::from_roots(&[x.clone(), &Exact::from_integer(1) - &x, Exact::from_integer(1)]).unwrap();
        assert_eq!(
            quad_residues_realizable(&stratum, &config).unwrap().clause,
            StrataClause::ExceptionAbc
        );
        let config =
            QuadResidueConfig::from_roots(&[x.clone(), Exact::generator("y"), Exact::from_integer(1)]).unwrap();
        assert!(quad_residues_realizable(&stratum, &config).unwrap().realizable);
    }

    #[test]
    fn abelian_examples() {
        let v = abelian(0, &[2], &[q(1, 1), q(1, 1), q(-1, 1), q(-1, 1)]);
        assert_eq!(v.clause, StrataClause::ExceptionGenus0Arith);
        assert!(abelian(0, &[2], &[q(2, 1), q(1, 1), q(-2, 1), q(-1, 1)]).realizable);
        assert!(abelian(1, &[1, 1], &[q(7, 3), q(-7, 3)]).realizable);
        let v = abelian(0, &[2], &[q(1, 1), q(1, 1), q(-1, 1), q(-2, 1)]);
        assert_eq!(v.clause, StrataClause::ResidueTheoremViolation);
        assert!(!v.realizable);
    }

    #[test]
    fn scaling_residues() {
        let config = QuadResidueConfig::from_rationals(&[q(2, 1), q(3, 1)]).unwrap();
        let scaled = config.scaled(q(6, 1)).unwrap();
        let values: Vec<Rational> = scaled.residues.iter().map(|r| r.value().unwrap()).collect();
        assert_eq!(values, vec![q(12, 1), q(18, 1)]);
        assert_eq!(scaled.residues[0], QuadResidue::from_rational(q(12, 1)).unwrap());
    }
}
