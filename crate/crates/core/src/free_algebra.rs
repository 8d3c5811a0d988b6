//! Words, polynomials and power series in two classes of Hermitian noncommuting variables.
//!
//! A [`Signature`] fixes how many `a` letters and `x` letters are available. Polynomials
//! are stored canonically as a sorted map from [`Word`] to a nonzero complex coefficient,
//! so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};
use crate::linalg::C64;

/// Coefficients below this modulus are dropped after every arithmetic operation.
pub const ZERO_THRESHOLD: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarClass {
    A,
    X,
}

/// A single variable `a_k` or `x_k` (1-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub class: VarClass,
    pub index: usize,
}

impl Letter {
    pub fn a(index: usize) -> Self {
        Letter {
            class: VarClass::A,
            index,
        }
    }

    pub fn x(index: usize) -> Self {
        Letter {
            class: VarClass::X,
            index,
        }
    }

    pub fn is_x(&self) -> bool {
        self.class == VarClass::X
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            VarClass::A => write!(f, "a{}", self.index),
            VarClass::X => write!(f, "x{}", self.index),
        }
    }
}

impl FromStr for Letter {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self> {
        let class = match s.chars().next() {
            Some('a') => VarClass::A,
            Some('x') => VarClass::X,
            _ => return Err(NcError::parse(0, format!("bad letter `{s}`"))),
        };
        let index: usize = s[1..]
            .parse()
            .map_err(|_| NcError::parse(1, format!("bad letter index in `{s}`")))?;
        if index == 0 {
            return Err(NcError::parse(1, "letter indices are 1-based"));
        }
        Ok(Letter { class, index })
    }
}

/// A finite sequence of letters; the empty word is the unit.
///
/// Words are ordered graded-lexicographically: shorter words first, then letter by
/// letter with `a` letters before `x` letters and ascending index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Number of `x` letters.
    pub fn x_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_x()).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

/// Number of `a` variables and `x` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    #[serde(rename = "g_a")]
    pub arity_a: usize,
    #[serde(rename = "g_x")]
    pub arity_x: usize,
}

impl Signature {
    pub fn new(arity_a: usize, arity_x: usize) -> Self {
        Signature { arity_a, arity_x }
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        let arity = match letter.class {
            VarClass::A => self.arity_a,
            VarClass::X => self.arity_x,
        };
        (1..=arity).contains(&letter.index)
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        for l in word.letters() {
            if !self.contains(l) {
                let arity = match l.class {
                    VarClass::A => self.arity_a,
                    VarClass::X => self.arity_x,
                };
                return Err(NcError::ArityExceeded {
                    letter: l.to_string(),
                    arity,
                });
            }
        }
        Ok(())
    }

    fn check_same(&self, other: &Signature) -> Result<()> {
        if self != other {
            return Err(NcError::SignatureMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.arity_a, self.arity_x)
    }
}

impl FromStr for Signature {
    type Err = NcError;

    /// Parses `"g_a,g_x"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, x) = s
            .split_once(',')
            .ok_or_else(|| NcError::Usage(format!("signature `{s}` is not of the form g_a,g_x")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| NcError::Usage(format!("bad arity `{t}` in signature `{s}`")))
        };
        Ok(Signature::new(parse(a)?, parse(x)?))
    }
}

/// A noncommutative polynomial with complex coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct NcPolynomial {
    signature: Signature,
    terms: BTreeMap<Word, C64>,
}

impl NcPolynomial {
    pub fn zero(signature: Signature) -> Self {
        NcPolynomial {
            signature,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(signature: Signature) -> Self {
        Self::constant(signature, C64::new(1.0, 0.0))
    }

    pub fn constant(signature: Signature, value: C64) -> Self {
        let mut p = Self::zero(signature);
        p.accumulate(Word::unit(), value);
        p.canonicalize()
    }

    pub fn monomial(signature: Signature, word: Word, coeff: C64) -> Result<Self> {
        signature.check_word(&word)?;
        let mut p = Self::zero(signature);
        p.accumulate(word, coeff);
        Ok(p.canonicalize())
    }

    pub fn letter(signature: Signature, letter: Letter) -> Result<Self> {
        Self::monomial(signature, Word::new(vec![letter]), C64::new(1.0, 0.0))
    }

    /// Sums the given terms; repeated words accumulate.
    pub fn from_terms<I>(signature: Signature, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C64)>,
    {
        let mut raw: BTreeMap<Word, C64> = BTreeMap::new();
        for (w, c) in terms {
            signature.check_word(&w)?;
            *raw.entry(w).or_default() += c;
        }
        Ok(NcPolynomial {
            signature,
            terms: prune(raw),
        })
    }

    fn accumulate(&mut self, word: Word, coeff: C64) {
        let entry = self.terms.entry(word).or_default();
        *entry += coeff;
    }

    fn canonicalize(mut self) -> Self {
        self.terms = prune(std::mem::take(&mut self.terms));
        self
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> C64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum word length, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Maximum number of `x` letters in a word, `None` for the zero polynomial.
    pub fn x_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::x_degree).max()
    }

    pub fn add(&self, other: &NcPolynomial) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), *c);
        }
        Ok(out.canonicalize())
    }

    pub fn sub(&self, other: &NcPolynomial) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c * factor)).collect();
        NcPolynomial {
            signature: self.signature,
            terms,
        }
        .canonicalize()
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn mul(&self, other: &NcPolynomial) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        let mut out = Self::zero(self.signature);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.accumulate(u.concat(v), a * b);
            }
        }
        Ok(out.canonicalize())
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.signature);
        for _ in 0..exponent {
            acc = acc.mul(self).expect("same signature");
        }
        acc
    }

    /// The involution: reverse each word and conjugate each coefficient.
    pub fn involute(&self) -> Self {
        let terms = self.terms.iter().map(|(w, c)| (w.reversed(), c.conj())).collect();
        NcPolynomial {
            signature: self.signature,
            terms,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.involute() == *self
    }

    /// Terms with exactly `degree` letters of class `x`.
    pub fn x_homogeneous_part(&self, degree: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.x_degree() == degree)
            .map(|(w, c)| (w.clone(), *c))
            .collect();
        NcPolynomial {
            signature: self.signature,
            terms,
        }
    }

    pub fn x_homogeneous_parts(&self) -> NcPowerSeries {
        MatrixNcPolynomial::scalar(self.clone()).x_homogeneous_parts()
    }
}

fn prune(terms: BTreeMap<Word, C64>) -> BTreeMap<Word, C64> {
    terms.into_iter().filter(|(_, c)| c.norm() >= ZERO_THRESHOLD).collect()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: String,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    signature: Signature,
    terms: Vec<TermJson>,
}

impl From<NcPolynomial> for PolyJson {
    fn from(p: NcPolynomial) -> Self {
        PolyJson {
            signature: p.signature,
            terms: p
                .terms
                .iter()
                .map(|(w, c)| TermJson {
                    word: w.to_string(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for NcPolynomial {
    type Error = NcError;

    fn try_from(json: PolyJson) -> Result<Self> {
        let terms = json
            .terms
            .into_iter()
            .map(|t| Ok((t.word.parse::<Word>()?, C64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        NcPolynomial::from_terms(json.signature, terms)
    }
}

/// An `rows × cols` grid of polynomials over one signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixPolyJson", into = "MatrixPolyJson")]
pub struct MatrixNcPolynomial {
    signature: Signature,
    rows: usize,
    cols: usize,
    entries: Vec<NcPolynomial>,
}

impl MatrixNcPolynomial {
    /// Builds from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<NcPolynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(NcError::Shape(format!(
                "{} entries do not fill a {rows}x{cols} grid",
                entries.len()
            )));
        }
        let signature = entries[0].signature;
        for e in &entries[1..] {
            signature.check_same(&e.signature)?;
        }
        Ok(MatrixNcPolynomial {
            signature,
            rows,
            cols,
            entries,
        })
    }

    pub fn scalar(p: NcPolynomial) -> Self {
        MatrixNcPolynomial {
            signature: p.signature,
            rows: 1,
            cols: 1,
            entries: vec![p],
        }
    }

    pub fn zeros(signature: Signature, rows: usize, cols: usize) -> Self {
        MatrixNcPolynomial {
            signature,
            rows,
            cols,
            entries: vec![NcPolynomial::zero(signature); rows * cols],
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, row: usize, col: usize) -> &NcPolynomial {
        &self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[NcPolynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NcPolynomial::is_zero)
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(NcPolynomial::x_degree).max()
    }

    pub fn add(&self, other: &MatrixNcPolynomial) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        if self.shape() != other.shape() {
            return Err(NcError::Shape(format!(
                "cannot add {:?} and {:?} matrix polynomials",
                self.shape(),
                other.shape()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(p, q)| p.add(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixNcPolynomial { entries, ..*self })
    }

    /// Conjugate transpose with each entry involuted.
    pub fn involute(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.cols {
            for j in 0..self.rows {
                entries.push(self.entry(j, i).involute());
            }
        }
        MatrixNcPolynomial {
            signature: self.signature,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_hermitian(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(NcError::Shape(format!(
                "Hermitian test needs a square matrix polynomial, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.involute() == *self)
    }

    fn map(&self, f: impl Fn(&NcPolynomial) -> NcPolynomial) -> Self {
        MatrixNcPolynomial {
            signature: self.signature,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Splits into parts homogeneous in `x`; part `i` holds exactly the terms with `i`
    /// letters of class `x`. A polynomial converges everywhere, so the series radius is
    /// infinite.
    pub fn x_homogeneous_parts(&self) -> NcPowerSeries {
        let top = self.x_degree().unwrap_or(0);
        let parts = (0..=top).map(|i| self.map(|p| p.x_homogeneous_part(i))).collect();
        NcPowerSeries {
            parts,
            radius: f64::INFINITY,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixPolyJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<NcPolynomial>>,
}

impl From<MatrixNcPolynomial> for MatrixPolyJson {
    fn from(m: MatrixNcPolynomial) -> Self {
        let entries = m.entries.chunks(m.cols).map(<[_]>::to_vec).collect();
        MatrixPolyJson {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl TryFrom<MatrixPolyJson> for MatrixNcPolynomial {
    type Error = NcError;

    fn try_from(json: MatrixPolyJson) -> Result<Self> {
        if json.entries.len() != json.rows || json.entries.iter().any(|r| r.len() != json.cols) {
            return Err(NcError::Shape("entry grid does not match rows/cols".into()));
        }
        MatrixNcPolynomial::new(json.rows, json.cols, json.entries.concat())
    }
}

pub const DEFAULT_SERIES_RADIUS: f64 = 1.0;

/// A truncated `x`-power series `F_0 + F_1 + … + F_d`, part `i` homogeneous of degree `i`
/// in `x`, together with the radius of the `x`-ball on which it is declared convergent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct NcPowerSeries {
    parts: Vec<MatrixNcPolynomial>,
    radius: f64,
}

impl NcPowerSeries {
    pub fn new(parts: Vec<MatrixNcPolynomial>) -> Result<Self> {
        Self::with_radius(parts, DEFAULT_SERIES_RADIUS)
    }

    pub fn with_radius(parts: Vec<MatrixNcPolynomial>, radius: f64) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| NcError::Shape("power series needs at least one part".into()))?;
        if !(radius > 0.0) {
            return Err(NcError::Domain(format!("series radius must be positive, got {radius}")));
        }
        for (i, part) in parts.iter().enumerate() {
            first.signature.check_same(&part.signature)?;
            if part.shape() != first.shape() {
                return Err(NcError::Shape("series parts differ in shape".into()));
            }
            for p in &part.entries {
                if let Some((w, _)) = p.terms().find(|(w, _)| w.x_degree() != i) {
                    return Err(NcError::Domain(format!(
                        "word `{w}` has x-degree {} but sits in part {i}",
                        w.x_degree()
                    )));
                }
            }
        }
        Ok(NcPowerSeries { parts, radius })
    }

    pub fn parts(&self) -> &[MatrixNcPolynomial] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Option<&MatrixNcPolynomial> {
        self.parts.get(i)
    }

    /// Truncation order `d`.
    pub fn order(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn signature(&self) -> Signature {
        self.parts[0].signature
    }

    pub fn shape(&self) -> (usize, usize) {
        self.parts[0].shape()
    }

    /// The polynomial `Σ F_i`.
    pub fn sum(&self) -> MatrixNcPolynomial {
        self.parts[1..]
            .iter()
            .fold(self.parts[0].clone(), |acc, p| acc.add(p).expect("validated parts"))
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    #[serde(default = "default_radius", with = "radius_serde")]
    radius: f64,
    parts: Vec<MatrixNcPolynomial>,
}

fn default_radius() -> f64 {
    DEFAULT_SERIES_RADIUS
}

/// JSON has no infinity; an infinite radius is written as `null`.
mod radius_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &f64, s: S) -> Result<S::Ok, S::Error> {
        if r.is_finite() {
            s.serialize_f64(*r)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

impl From<NcPowerSeries> for SeriesJson {
    fn from(s: NcPowerSeries) -> Self {
        SeriesJson {
            radius: s.radius,
            parts: s.parts,
        }
    }
}

impl TryFrom<SeriesJson> for NcPowerSeries {
    type Error = NcError;

    fn try_from(json: SeriesJson) -> Result<Self> {
        NcPowerSeries::with_radius(json.parts, json.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(a: usize, x: usize) -> Signature {
        Signature::new(a, x)
    }

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn poly(s: Signature, terms: &[(&str, C64)]) -> NcPolynomial {
        NcPolynomial::from_terms(s, terms.iter().map(|(w, c)| (word(w), *c))).unwrap()
    }

    fn hermitian_example(second: f64) -> NcPolynomial {
        let z2_81 = vec!["x2"; 81].join(" ");
        poly(
            sig(0, 2),
            &[
                ("x1 x2", r(8.0)),
                ("x2 x1", r(second)),
                ("x1 x1", r(1.0)),
                (&z2_81, r(1.0)),
            ],
        )
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let s = sig(1, 1);
        assert_eq!(NcPolynomial::constant(s, C64::new(0.0, 0.0)), NcPolynomial::zero(s));
        let zero_word = NcPolynomial::monomial(s, Word::new(vec![Letter::x(1)]), C64::new(0.0, 0.0)).unwrap();
        assert!(zero_word.is_zero());
        assert_eq!(zero_word.term_count(), 0);
    }

    #[test]
    fn hermitian_example_is_fixed_by_involution() {
        let p = hermitian_example(8.0);
        assert_eq!(p.involute(), p);
        assert!(p.is_hermitian());
        assert_eq!(p.degree(), Some(81));
    }

    #[test]
    fn non_hermitian_example() {
        assert!(!hermitian_example(6.0).is_hermitian());
    }

    #[test]
    fn involution_conjugates_coefficients() {
        let p = poly(sig(0, 2), &[("x1 x2", C64::new(0.0, 1.0))]);
        let expected = poly(sig(0, 2), &[("x2 x1", C64::new(0.0, -1.0))]);
        assert_eq!(p.involute(), expected);
        assert_eq!(NcPolynomial::zero(sig(0, 2)).involute(), NcPolynomial::zero(sig(0, 2)));
        assert!(NcPolynomial::one(sig(1, 1)).is_hermitian());
    }

    #[test]
    fn products_do_not_commute() {
        let s = sig(0, 2);
        let z1 = NcPolynomial::letter(s, Letter::x(1)).unwrap();
        let z2 = NcPolynomial::letter(s, Letter::x(2)).unwrap();
        let p = z1.mul(&z2).unwrap();
        let q = z2.mul(&z1).unwrap();
        assert_ne!(p, q);
        assert_eq!(p.mul(&NcPolynomial::one(s)).unwrap(), p);
        let sq = z1.add(&z2).unwrap().pow(2);
        let expected = poly(
            s,
            &[
                ("x1 x1", r(1.0)),
                ("x1 x2", r(1.0)),
                ("x2 x1", r(1.0)),
                ("x2 x2", r(1.0)),
            ],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn homogeneous_parts_split_by_x_count() {
        let s = sig(1, 1);
        let p = poly(s, &[("a1 x1 a1", r(1.0)), ("x1 a1 x1", r(1.0)), ("a1 a1 a1", r(1.0))]);
        let series = p.x_homogeneous_parts();
        assert_eq!(series.order(), 2);
        assert_eq!(series.parts()[0].entry(0, 0), &poly(s, &[("a1 a1 a1", r(1.0))]));
        assert_eq!(series.parts()[1].entry(0, 0), &poly(s, &[("a1 x1 a1", r(1.0))]));
        assert_eq!(series.parts()[2].entry(0, 0), &poly(s, &[("x1 a1 x1", r(1.0))]));
        assert_eq!(series.sum().entry(0, 0), &p);

        let zero = NcPolynomial::zero(s).x_homogeneous_parts();
        assert!(zero.parts().iter().all(MatrixNcPolynomial::is_zero));
    }

    #[test]
    fn signature_errors() {
        let p = NcPolynomial::one(sig(0, 1));
        let q = NcPolynomial::one(sig(1, 1));
        assert!(matches!(p.add(&q), Err(NcError::SignatureMismatch { .. })));
        assert!(matches!(
            NcPolynomial::letter(sig(0, 1), Letter::x(2)),
            Err(NcError::ArityExceeded { .. })
        ));
    }

    #[test]
    fn matrix_hermitian_needs_square_shape() {
        let s = sig(0, 1);
        let x = NcPolynomial::letter(s, Letter::x(1)).unwrap();
        let m = MatrixNcPolynomial::new(1, 2, vec![x.clone(), x.clone()]).unwrap();
        assert!(matches!(m.is_hermitian(), Err(NcError::Shape(_))));

        let ix = x.scale(C64::new(0.0, 1.0));
        let herm = MatrixNcPolynomial::new(2, 2, vec![x.clone(), ix.clone(), ix.neg(), x.mul(&x).unwrap()]).unwrap();
        assert!(herm.is_hermitian().unwrap());
        let not_herm = MatrixNcPolynomial::new(2, 2, vec![x.clone(), ix.clone(), ix, x]).unwrap();
        assert!(!not_herm.is_hermitian().unwrap());
    }

    #[test]
    fn series_rejects_misplaced_terms() {
        let s = sig(0, 1);
        let x = MatrixNcPolynomial::scalar(NcPolynomial::letter(s, Letter::x(1)).unwrap());
        assert!(NcPowerSeries::new(vec![x.clone()]).is_err());
        let series = NcPowerSeries::new(vec![MatrixNcPolynomial::zeros(s, 1, 1), x]).unwrap();
        assert_eq!(series.radius(), DEFAULT_SERIES_RADIUS);
    }

    #[test]
    fn json_layout() {
        let p = poly(sig(1, 2), &[("a1 x2 x2", C64::new(1.5, -2.0)), ("", r(3.0))]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"signature":{"g_a":1,"g_x":2},"terms":[{"word":"","re":3.0,"im":0.0},{"word":"a1 x2 x2","re":1.5,"im":-2.0}]}"#
        );
        let back: NcPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);

        let series = p.x_homogeneous_parts();
        let text = serde_json::to_string(&series).unwrap();
        let back: NcPowerSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, series);
    }

    #[test]
    fn word_order_is_graded_lex_with_a_first() {
        let mut words = [
            word("x1 x1"),
            word("a1"),
            word(""),
            word("x1"),
            word("a2 x1"),
            word("a1 x2"),
        ];
        words.sort();
        let rendered: Vec<String> = words.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["", "a1", "x1", "a1 x2", "a2 x1", "x1 x1"]);
    }
}
