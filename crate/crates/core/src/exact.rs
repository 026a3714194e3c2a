//! Exact real numbers of the form `q0 + q1*x1 + ... + qm*xm` where the `qi` are
//! rationals and the `xi` are named formal generators.
//!
//! Generators are assumed linearly independent over the rationals together
//! with 1, so every linear relation between two values is decided by comparing
//! coefficients. Nothing here attempts to decide relations between actual
//! real numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational used throughout the crate.
pub type Rational = num_rational::Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position} in {input:?}")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut cursor = Cursor::new(text);
    cursor.skip_ws();
    let value = cursor.rational()?;
    cursor.skip_ws();
    if !cursor.done() {
        return Err(cursor.error("unexpected trailing input"));
    }
    Ok(value)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for value in values {
            seq.serialize_element(&format_rational(value))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|text| parse_rational(text).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Greatest common divisor of a rational list: the largest rational `g` such
/// that every entry is an integer multiple of `g`. Zero for an empty list.
pub fn rational_gcd(values: &[Rational]) -> Rational {
    let mut numer_gcd: i128 = 0;
    let mut denom_lcm: i128 = 1;
    for value in values {
        numer_gcd = numer_gcd.gcd(value.numer());
        denom_lcm = denom_lcm.lcm(value.denom());
    }
    Rational::new(numer_gcd, denom_lcm)
}

/// Lowest common denominator of a rational list (one for an empty list).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1, |acc, value| acc.lcm(value.denom()))
}

/// Splits a positive rational `r` into `s * q^2` with `s` a squarefree integer
/// and `q` a positive rational.
pub fn squarefree_decomposition(value: &Rational) -> (u64, Rational) {
    assert!(
        value.is_positive(),
        "squarefree decomposition needs a positive rational"
    );
    // r = n/d = (n*d)/d^2
    let numer = *value.numer();
    let denom = *value.denom();
    let product = numer * denom;
    let (squarefree, root) = integer_squarefree(product as u128);
    (squarefree as u64, Rational::new(root as i128, denom))
}

fn integer_squarefree(mut n: u128) -> (u128, u128) {
    let mut squarefree = 1u128;
    let mut root = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut count = 0;
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        for _ in 0..count / 2 {
            root *= p;
        }
        if count % 2 == 1 {
            squarefree *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    squarefree *= n;
    (squarefree, root)
}

/// Square root of a rational when it is a perfect square.
pub fn rational_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_zero() {
        return Some(Rational::zero());
    }
    if value.is_negative() {
        return None;
    }
    let (squarefree, root) = squarefree_decomposition(value);
    (squarefree == 1).then_some(root)
}

/// An exact element of `Q + Q*x1 + ... + Q*xm`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exact {
    rational: Rational,
    irr: BTreeMap<String, Rational>,
}

impl Exact {
    pub fn zero() -> Self {
        Exact::default()
    }

    pub fn from_rational(rational: Rational) -> Self {
        Exact {
            rational,
            irr: BTreeMap::new(),
        }
    }

    pub fn from_integer(value: i128) -> Self {
        Exact::from_rational(Rational::from_integer(value))
    }

    /// The formal generator `name` with coefficient one.
    pub fn generator(name: &str) -> Self {
        let mut irr = BTreeMap::new();
        irr.insert(name.to_string(), Rational::one());
        Exact {
            rational: Rational::zero(),
            irr,
        }
    }

    /// Builds a value from a rational part and generator coefficients;
    /// zero coefficients are dropped.
    pub fn from_parts(rational: Rational, irr: impl IntoIterator<Item = (String, Rational)>) -> Self {
        let mut out = Exact::from_rational(rational);
        for (name, coeff) in irr {
            out.add_generator(&name, coeff);
        }
        out
    }

    pub fn rational_part(&self) -> Rational {
        self.rational
    }

    pub fn irrational_parts(&self) -> &BTreeMap<String, Rational> {
        &self.irr
    }

    pub fn generators(&self) -> impl Iterator<Item = &str> {
        self.irr.keys().map(String::as_str)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irr.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then_some(self.rational)
    }

    /// The value as an integer, when it is one.
    pub fn as_integer(&self) -> Option<i128> {
        self.as_rational()
            .filter(Rational::is_integer)
            .map(|value| value.to_integer())
    }

    /// Sign of a purely rational value; `None` when generators are involved.
    pub fn rational_sign(&self) -> Option<std::cmp::Ordering> {
        self.as_rational().map(|value| value.cmp(&Rational::zero()))
    }

    pub fn scale(&self, factor: Rational) -> Exact {
        if factor.is_zero() {
            return Exact::zero();
        }
        Exact {
            rational: self.rational * factor,
            irr: self.irr.iter().map(|(k, v)| (k.clone(), *v * factor)).collect(),
        }
    }

    /// The rational `q` with `self == q * other`, if any.
    pub fn ratio_to(&self, other: &Exact) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        let q = if !other.rational.is_zero() {
            self.rational / other.rational
        } else {
            let (name, coeff) = other.irr.iter().next()?;
            *self.irr.get(name).unwrap_or(&Rational::zero()) / coeff
        };
        (&other.scale(q) == self).then_some(q)
    }

    fn add_generator(&mut self, name: &str, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.irr.entry(name.to_string()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.irr.remove(name);
        }
    }

    /// Parses `"3/4"`, `"1/3*x"`, `"1/2+2*x-y"`. When `allowed` is given, every
    /// generator name must belong to it.
    pub fn parse(text: &str, allowed: Option<&BTreeSet<String>>) -> Result<Exact, ParseError> {
        let mut cursor = Cursor::new(text);
        let mut out = Exact::zero();
        cursor.skip_ws();
        if cursor.done() {
            return Err(cursor.error("empty value"));
        }
        let mut first = true;
        loop {
            cursor.skip_ws();
            let mut negative = false;
            match cursor.peek() {
                Some('+') => {
                    cursor.bump();
                }
                Some('-') => {
                    cursor.bump();
                    negative = true;
                }
                Some(_) if first => {}
                Some(_) => return Err(cursor.error("expected '+' or '-'")),
                None => break,
            }
            first = false;
            cursor.skip_ws();
            let (coeff, name) = cursor.term(allowed)?;
            let coeff = if negative { -coeff } else { coeff };
            match name {
                Some(name) => out.add_generator(&name, coeff),
                None => out.rational += coeff,
            }
            cursor.skip_ws();
            if cursor.done() {
                break;
            }
        }
        Ok(out)
    }
}

impl From<Rational> for Exact {
    fn from(value: Rational) -> Self {
        Exact::from_rational(value)
    }
}

impl From<i128> for Exact {
    fn from(value: i128) -> Self {
        Exact::from_integer(value)
    }
}

impl FromStr for Exact {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Exact::parse(text, None)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.rational.is_zero() || self.irr.is_empty() {
            write!(f, "{}", self.rational)?;
            wrote = true;
        }
        for (name, coeff) in &self.irr {
            let magnitude = coeff.abs();
            if coeff.is_negative() {
                f.write_str("-")?;
            } else if wrote {
                f.write_str("+")?;
            }
            if magnitude.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{magnitude}*{name}")?;
            }
            wrote = true;
        }
        Ok(())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exact({self})")
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Exact::parse(&text, None).map_err(serde::de::Error::custom)
    }
}

impl AddAssign<&Exact> for Exact {
    fn add_assign(&mut self, rhs: &Exact) {
        self.rational += rhs.rational;
        for (name, coeff) in &rhs.irr {
            self.add_generator(name, *coeff);
        }
    }
}

impl SubAssign<&Exact> for Exact {
    fn sub_assign(&mut self, rhs: &Exact) {
        self.rational -= rhs.rational;
        for (name, coeff) in &rhs.irr {
            self.add_generator(name, -*coeff);
        }
    }
}

impl Add<&Exact> for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(mut self, rhs: Exact) -> Exact {
        self += &rhs;
        self
    }
}

impl Sub<&Exact> for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(mut self, rhs: Exact) -> Exact {
        self -= &rhs;
        self
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        self.scale(-Rational::one())
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl Mul<Rational> for &Exact {
    type Output = Exact;
    fn mul(self, rhs: Rational) -> Exact {
        self.scale(rhs)
    }
}

impl<'a> std::iter::Sum<&'a Exact> for Exact {
    fn sum<I: Iterator<Item = &'a Exact>>(iter: I) -> Exact {
        iter.fold(Exact::zero(), |mut acc, value| {
            acc += value;
            acc
        })
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.text, self.pos, message)
    }

    fn integer(&mut self) -> Result<i128, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(ParseError::new(self.text, start, "expected digits"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(self.text, start, "integer out of range"))
    }

    fn unsigned_rational(&mut self) -> Result<Rational, ParseError> {
        let numer = self.integer()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let denom = self.integer()?;
            if denom == 0 {
                return Err(ParseError::new(self.text, at, "zero denominator"));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        self.skip_ws();
        let value = self.unsigned_rational()?;
        Ok(if negative { -value } else { value })
    }

    fn identifier(&mut self) -> Option<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => self.bump(),
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.bump();
        }
        Some(self.text[start..self.pos].to_string())
    }

    /// `rational`, `rational*name` or `name`.
    fn term(&mut self, allowed: Option<&BTreeSet<String>>) -> Result<(Rational, Option<String>), ParseError> {
        let start = self.pos;
        if let Some(name) = self.identifier() {
            check_generator(self.text, start, &name, allowed)?;
            return Ok((Rational::one(), Some(name)));
        }
        let coeff = self.unsigned_rational()?;
        self.skip_ws();
        if self.peek() == Some('*') {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let name = self
                .identifier()
                .ok_or_else(|| ParseError::new(self.text, at, "expected generator name"))?;
            check_generator(self.text, at, &name, allowed)?;
            return Ok((coeff, Some(name)));
        }
        Ok((coeff, None))
    }
}

fn check_generator(
    text: &str,
    position: usize,
    name: &str,
    allowed: Option<&BTreeSet<String>>,
) -> Result<(), ParseError> {
    match allowed {
        Some(set) if !set.contains(name) => Err(ParseError::new(
            text,
            position,
            format!("undeclared generator {name:?}"),
        )),
        _ => Ok(()),
    }
}
