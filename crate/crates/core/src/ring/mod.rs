//! Exact scalar arithmetic: multivariate Laurent polynomials over the
//! rationals, and integers modulo m for finite-field style searches.
//!
//! A [`LaurentPoly`] is stored sparsely as a map from exponent vectors
//! (one signed exponent per variable, so negative powers are first-class)
//! to nonzero rational coefficients. The map is a `BTreeMap`, so the
//! representation is canonical: two polynomials over the same variable
//! list are equal iff their term maps are equal. Rendering walks the terms
//! in descending lexicographic exponent order, which makes rendered
//! strings canonical as well — multiset invariants downstream rely on
//! this.

mod matrix;
mod parse;

pub use matrix::Matrix;

use crate::error::RingError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Ordered list of variable names, shared between all polynomials of one
/// computation. Core arithmetic requires both operands to carry an equal
/// list; mixing lists is an error rather than a silent re-interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarSet(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    /// Empty variable list: the ring of rational constants.
    pub fn empty() -> Self {
        VarSet(Arc::new(Vec::new()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// Union of two lists, sorted by name.
    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut all: Vec<String> = self.0.iter().chain(other.0.iter()).cloned().collect();
        all.sort();
        all.dedup();
        VarSet(Arc::new(all))
    }

    fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: VarSet,
    terms: BTreeMap<Vec<i32>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(vars: &VarSet) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &VarSet, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, BigRational::from(BigInt::from(c)))
    }

    /// Single term `c * x1^e1 * ... * xk^ek`.
    pub fn monomial(vars: &VarSet, c: BigRational, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable `name` as a polynomial.
    pub fn var(vars: &VarSet, name: &str) -> Result<Self, RingError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| RingError::Parse(format!("unknown variable `{name}`")))?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Ok(Self::monomial(vars, BigRational::one(), exps))
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.vars.len()][..].to_vec())
                .is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Units of this ring are exactly the nonzero single-term polynomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn check_vars(&self, rhs: &Self) -> Result<(), RingError> {
        if self.vars.same(&rhs.vars) {
            Ok(())
        } else {
            Err(RingError::VarMismatch {
                left: self.vars.to_string(),
                right: rhs.vars.to_string(),
            })
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_vars(rhs)?;
        Ok(self.add_raw(rhs))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_vars(rhs)?;
        Ok(self.add_raw(&rhs.neg()))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_vars(rhs)?;
        Ok(self.mul_raw(rhs))
    }

    pub(crate) fn add_raw(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub(crate) fn mul_raw(&self, rhs: &Self) -> Self {
        let mut terms: BTreeMap<Vec<i32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match terms.get_mut(&e) {
                    Some(acc) => {
                        *acc += c;
                        if acc.is_zero() {
                            terms.remove(&e);
                        }
                    }
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Inverse of a unit. Fails with `NotAUnit` on zero or multi-term input.
    pub fn invert(&self) -> Result<Self, RingError> {
        if self.terms.len() != 1 {
            return Err(RingError::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(e.iter().map(|x| -x).collect(), c.recip());
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Integer power; negative exponents require a unit base.
    pub fn pow(&self, k: i64) -> Result<Self, RingError> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut out = Self::one(&self.vars);
        for _ in 0..k.unsigned_abs() {
            out = out.mul_raw(&base);
        }
        Ok(out)
    }

    /// Re-express over a larger variable list (must contain every current
    /// variable). Used when mixing inputs from different documents.
    pub fn extend_vars(&self, vars: &VarSet) -> Result<Self, RingError> {
        let map: Option<Vec<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| vars.index_of(n))
            .collect();
        let map = map.ok_or_else(|| RingError::VarMismatch {
            left: self.vars.to_string(),
            right: vars.to_string(),
        })?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] = x;
            }
            terms.insert(ne, c.clone());
        }
        Ok(LaurentPoly {
            vars: vars.clone(),
            terms,
        })
    }

    /// Parse the canonical text syntax, e.g. `-A^3 + 2*y^2 - 1/2`.
    pub fn parse(text: &str, vars: &VarSet) -> Result<Self, RingError> {
        parse::parse_poly(text, vars)
    }

    /// Variable names appearing in a polynomial string, for building a
    /// `VarSet` before strict parsing.
    pub fn scan_variables(text: &str) -> Vec<String> {
        parse::scan_variables(text)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending lexicographic exponent order
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (vi, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    factors.push(self.vars.names()[vi].clone());
                } else if exp != 0 {
                    factors.push(format!("{}^{}", self.vars.names()[vi], exp));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Integers modulo `m`, the coefficient ring for small-modulus searches.
/// The modulus travels with the value; mixing moduli is a logic error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Zp {
    value: u64,
    modulus: u64,
}

impl Zp {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Zp {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Common interface for the scalars a [`Matrix`] can hold. Context
/// (variable list or modulus) is recovered from an existing value, so
/// `zero`/`one` are instance methods.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_s(&self, rhs: &Self) -> Self;
    fn sub_s(&self, rhs: &Self) -> Self;
    fn mul_s(&self, rhs: &Self) -> Self;
    fn neg_s(&self) -> Self;
    fn is_zero_s(&self) -> bool;
    /// `None` when the value is not a unit of the ring.
    fn invert_s(&self) -> Option<Self>;
    fn render(&self) -> String;
}

impl Scalar for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(&self.vars)
    }
    fn add_s(&self, rhs: &Self) -> Self {
        debug_assert!(self.vars.same(&rhs.vars));
        self.add_raw(rhs)
    }
    fn sub_s(&self, rhs: &Self) -> Self {
        debug_assert!(self.vars.same(&rhs.vars));
        self.add_raw(&rhs.neg())
    }
    fn mul_s(&self, rhs: &Self) -> Self {
        debug_assert!(self.vars.same(&rhs.vars));
        self.mul_raw(rhs)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn invert_s(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Zp {
    fn zero_like(&self) -> Self {
        Zp::new(0, self.modulus)
    }
    fn one_like(&self) -> Self {
        Zp::new(1, self.modulus)
    }
    fn add_s(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Zp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn sub_s(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Zp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn mul_s(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Zp {
            value: (self.value * rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn neg_s(&self) -> Self {
        Zp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn is_zero_s(&self) -> bool {
        self.value == 0
    }
    fn invert_s(&self) -> Option<Self> {
        // extended Euclid; works for composite moduli (inverse exists iff coprime)
        let (mut r0, mut r1) = (self.modulus as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(Zp::new(t0, self.modulus))
    }
    fn render(&self) -> String {
        self.value.to_string()
    }
}
