//! Multivariate Laurent-style polynomials over the rationals.
//!
//! A [`Ring`] is `Q[x_1, .., x_n]` localized at a chosen subset of its
//! variables; only those variables may carry negative exponents. Ring
//! homomorphisms between such rings are given by variable substitution
//! ([`RingMap`]).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Coeff = BigRational;

pub fn rational(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("negative exponent on non-inverted variable `{0}`")]
    NegativeExponent(String),
    #[error("variable `{0}` has no image")]
    MissingImage(String),
    #[error("image of inverted variable `{var}` is not a unit: {image}")]
    NonUnitImage { var: String, image: String },
    #[error("`{0}` is not a unit")]
    NotUnit(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Coordinate ring of a chart: the variables in order, and which of them are inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    variables: Vec<String>,
    inverted: Vec<bool>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S, T>(
        variables: impl IntoIterator<Item = S>,
        inverted: impl IntoIterator<Item = T>,
    ) -> Result<Arc<Ring>, RingError>
    where
        S: Into<String>,
        T: AsRef<str>,
    {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        for (i, v) in variables.iter().enumerate() {
            if !valid_name(v) {
                return Err(RingError::InvalidVariableName(v.clone()));
            }
            if variables[..i].contains(v) {
                return Err(RingError::DuplicateVariable(v.clone()));
            }
        }
        let mut flags = vec![false; variables.len()];
        for name in inverted {
            let name = name.as_ref();
            let idx = variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
            flags[idx] = true;
        }
        Ok(Arc::new(Ring {
            variables,
            inverted: flags,
        }))
    }

    /// Polynomial ring without localization.
    pub fn polynomial<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
    ) -> Result<Arc<Ring>, RingError> {
        Ring::new(variables, std::iter::empty::<&str>())
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable(&self, idx: usize) -> &str {
        &self.variables[idx]
    }

    pub fn is_inverted(&self, idx: usize) -> bool {
        self.inverted[idx]
    }

    pub fn inverted_names(&self) -> Vec<String> {
        self.variables
            .iter()
            .zip(&self.inverted)
            .filter(|(_, &inv)| inv)
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, RingError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }

    /// Whether `exps` is a legal exponent vector in this ring.
    pub fn admits(&self, exps: &Monomial) -> bool {
        exps.0.len() == self.nvars()
            && exps
                .0
                .iter()
                .zip(&self.inverted)
                .all(|(&e, &inv)| e >= 0 || inv)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}", self.variables.join(","))?;
        let inv = self.inverted_names();
        if !inv.is_empty() {
            let inv: Vec<String> = inv.iter().map(|v| format!("{v}^-1")).collect();
            write!(f, "; {}", inv.join(","))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<(), RingError> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(RingError::RingMismatch(a.to_string(), b.to_string()))
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Sum of the positive exponents.
    pub fn numerator_degree(&self) -> i64 {
        self.0.iter().filter(|&&e| e > 0).map(|&e| e as i64).sum()
    }

    /// Largest magnitude of a negative exponent (0 if none).
    pub fn max_inverse(&self) -> i64 {
        self.0
            .iter()
            .filter(|&&e| e < 0)
            .map(|&e| -(e as i64))
            .max()
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of a [`Ring`]. Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct LocalizedPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for LocalizedPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for LocalizedPoly {}

impl LocalizedPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        LocalizedPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Coeff::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Coeff) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Self {
        Self::constant(ring, integer(n))
    }

    /// Single term `c * x^exps`. Panics if the exponents are illegal in `ring`.
    pub fn monomial(ring: &Arc<Ring>, exps: Monomial, c: Coeff) -> Self {
        assert!(ring.admits(&exps), "illegal exponent vector {exps:?} in {ring}");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LocalizedPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<Ring>, idx: usize) -> Self {
        let mut e = Monomial::one(ring.nvars());
        e.0[idx] = 1;
        Self::monomial(ring, e, Coeff::one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Self, RingError> {
        Ok(Self::var(ring, ring.index_of(name)?))
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Monomial, Coeff)>,
    ) -> Result<Self, RingError> {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            if m.0.len() != ring.nvars() {
                return Err(RingError::Parse {
                    pos: 0,
                    msg: format!("exponent vector of length {} in {ring}", m.0.len()),
                });
            }
            if let Some(i) = (0..ring.nvars()).find(|&i| m.0[i] < 0 && !ring.is_inverted(i)) {
                return Err(RingError::NegativeExponent(ring.variable(i).to_string()));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest numerator degree among the terms, 0 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(Monomial::numerator_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        LocalizedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// A unit is a single term whose nonzero exponents sit on inverted variables.
    pub fn is_unit(&self) -> bool {
        match self.terms.iter().next() {
            Some((m, _)) if self.terms.len() == 1 => m
                .0
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || self.ring.is_inverted(i)),
            _ => false,
        }
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotUnit(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Ok(Self::monomial(&self.ring, m.inverse(), c.recip()))
    }

    pub fn pow(&self, k: i32) -> Result<Self, RingError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Partial derivative with respect to the variable at `idx`.
    pub fn partial(&self, idx: usize) -> Result<Self, RingError> {
        if idx >= self.ring.nvars() {
            return Err(RingError::UnknownVariable(format!("#{idx}")));
        }
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e != 0 {
                let mut m2 = m.clone();
                m2.0[idx] -= 1;
                out.add_term(m2, c * integer(e as i64));
            }
        }
        Ok(out)
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Self, RingError> {
        self.partial(self.ring.index_of(name)?)
    }

    /// Apply a ring homomorphism. The map's source must be this polynomial's ring.
    pub fn substitute(&self, map: &RingMap) -> Result<Self, RingError> {
        check_ring(&self.ring, &map.source)?;
        let target = &map.target;
        let mut cache: BTreeMap<(usize, i32), LocalizedPoly> = BTreeMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match cache.get(&(i, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = map.images[i].pow(e)?;
                        cache.insert((i, e), f.clone());
                        f
                    }
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn parse(ring: &Arc<Ring>, src: &str) -> Result<Self, RingError> {
        crate::parse::parse_poly(ring, src)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_same_ring(&self.ring, &other.ring);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c } else { c.clone() });
        }
        out
    }
}

fn assert_same_ring(a: &Arc<Ring>, b: &Arc<Ring>) {
    assert!(same_ring(a, b), "ring mismatch: {a} vs {b}");
}

impl<'a> Add<&'a LocalizedPoly> for &'a LocalizedPoly {
    type Output = LocalizedPoly;
    fn add(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a LocalizedPoly> for &'a LocalizedPoly {
    type Output = LocalizedPoly;
    fn sub(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a LocalizedPoly> for &'a LocalizedPoly {
    type Output = LocalizedPoly;
    fn mul(self, rhs: &LocalizedPoly) -> LocalizedPoly {
        assert_same_ring(&self.ring, &rhs.ring);
        let mut out = LocalizedPoly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LocalizedPoly {
    type Output = LocalizedPoly;
    fn neg(self) -> LocalizedPoly {
        LocalizedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

pub(crate) fn fmt_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(ring: &Ring, m: &Monomial) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                ring.variable(i).to_string()
            } else {
                format!("{}^{}", ring.variable(i), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical string: terms in descending graded-lex order, e.g. `x^2 - 3/2*x*y + 1`.
impl fmt::Display for LocalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = fmt_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_coeff(&abs))?;
            }
        }
        Ok(())
    }
}

/// Ring homomorphism `source -> target` determined by the images of the source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    source: Arc<Ring>,
    target: Arc<Ring>,
    images: Vec<LocalizedPoly>,
}

impl RingMap {
    /// Inverted source variables must map to units of the target.
    pub fn new(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        images: Vec<LocalizedPoly>,
    ) -> Result<Self, RingError> {
        if images.len() != source.nvars() {
            let missing = source
                .variables()
                .get(images.len())
                .cloned()
                .unwrap_or_default();
            return Err(RingError::MissingImage(missing));
        }
        for (i, img) in images.iter().enumerate() {
            check_ring(target, img.ring())?;
            if source.is_inverted(i) && !img.is_unit() {
                return Err(RingError::NonUnitImage {
                    var: source.variable(i).to_string(),
                    image: img.to_string(),
                });
            }
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Build from `variable name -> image` pairs.
    pub fn from_named<'a>(
        source: &Arc<Ring>,
        target: &Arc<Ring>,
        named: impl IntoIterator<Item = (&'a str, LocalizedPoly)>,
    ) -> Result<Self, RingError> {
        let mut slots: Vec<Option<LocalizedPoly>> = vec![None; source.nvars()];
        for (name, img) in named {
            let i = source.index_of(name)?;
            slots[i] = Some(img);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| RingError::MissingImage(source.variable(i).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    /// Map sending each source variable to the target variable of the same name.
    pub fn inclusion(source: &Arc<Ring>, target: &Arc<Ring>) -> Result<Self, RingError> {
        let images = source
            .variables()
            .iter()
            .map(|v| LocalizedPoly::var_named(target, v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(ring: &Arc<Ring>) -> Self {
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images: (0..ring.nvars()).map(|i| LocalizedPoly::var(ring, i)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<Ring> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }

    pub fn images(&self) -> &[LocalizedPoly] {
        &self.images
    }

    pub fn apply(&self, p: &LocalizedPoly) -> Result<LocalizedPoly, RingError> {
        p.substitute(self)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &RingMap) -> Result<RingMap, RingError> {
        check_ring(&self.target, &then.source)?;
        let images = self
            .images
            .iter()
            .map(|p| p.substitute(then))
            .collect::<Result<Vec<_>, _>>()?;
        RingMap::new(&self.source, &then.target, images)
    }

    /// Inverse of a map sending every variable to a monic monomial with an
    /// invertible integer exponent matrix. The inverse is built into `into`,
    /// which must have as many variables as the source; `None` if the map is
    /// not of this shape or the inverse images are not legal in `into`.
    pub fn monomial_inverse(&self, into: &Arc<Ring>) -> Option<RingMap> {
        let n = self.source.nvars();
        if self.target.nvars() != n || into.nvars() != n {
            return None;
        }
        let mut rows = Vec::with_capacity(n);
        for img in &self.images {
            let (m, c) = match img.terms().next() {
                Some(t) if img.num_terms() == 1 => t,
                _ => return None,
            };
            if !c.is_one() {
                return None;
            }
            rows.push(m.0.iter().map(|&e| e as i64).collect::<Vec<i64>>());
        }
        // images[i] = prod_j y_j^{rows[i][j]}; invert the integer matrix.
        let inv = invert_unimodular(&rows)?;
        let images = (0..n)
            .map(|j| {
                let exps = Monomial(inv[j].iter().map(|&e| e as i32).collect());
                into.admits(&exps)
                    .then(|| LocalizedPoly::monomial(into, exps, Coeff::one()))
            })
            .collect::<Option<Vec<_>>>()?;
        RingMap::new(&self.target, into, images).ok()
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{} -> {}", self.source.variable(i), p))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Exact inverse of an integer matrix with determinant ±1.
fn invert_unimodular(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Coeff>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Coeff> = row.iter().map(|&e| integer(e)).collect();
            r.extend((0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|c| c.is_integer().then(|| c.to_integer().try_into().ok()).flatten())
                .collect::<Option<Vec<i64>>>()
        })
        .collect()
}
