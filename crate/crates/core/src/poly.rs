//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by monomials under graded
//! lexicographic order, so iteration order, rendering and equality are all
//! canonical.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e))
    }
}

/// Graded lexicographic order with `z1 > z2 > ...`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed number of variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The variable with index `i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
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

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map(|m| m.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with a positive exponent.
    pub fn var_support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient in graded lexicographic order (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Q {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    /// Splits `self = lc * p` with `p` having leading coefficient 1.
    pub fn canonical(&self) -> (Q, SparsePoly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (lc, self.clone());
        }
        let inv = lc.recip();
        (lc, self.scale(&inv))
    }

    pub fn scale(&self, c: &Q) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    fn check_same(&self, other: &SparsePoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "operands have different variable counts"
        );
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(self * other)
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates at a point of length `nvars`.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut powers: Vec<Vec<Q>> = Vec::with_capacity(self.nvars);
        for (i, x) in point.iter().enumerate() {
            let dmax = self.degree_in(i) as usize;
            let mut row = Vec::with_capacity(dmax + 1);
            row.push(Q::one());
            for k in 1..=dmax {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; every image must share one variable space.
    pub fn substitute(&self, images: &[SparsePoly]) -> SparsePoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![SparsePoly::one(p.nvars), p.clone()]).collect();
        for (i, img) in images.iter().enumerate() {
            let dmax = self.degree_in(i) as usize;
            while cache[i].len() <= dmax {
                let next = &cache[i][cache[i].len() - 1] * img;
                cache[i].push(next);
            }
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (mono, c) in &self.terms {
            let mut t = SparsePoly::constant(m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &cache[i][e as usize];
                }
            }
            for (tm, tc) in t.terms {
                *acc.entry(tm).or_insert_with(Q::zero) += tc;
            }
        }
        let mut out = SparsePoly::zero(m);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// Sum of the terms of total degree exactly `k`.
    pub fn hom_component(&self, k: u32) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * Q::from_integer(e.into()));
        }
        out
    }

    /// Returns `h` with `self = g * h`, or `None` when `g` does not divide `self`.
    pub fn exact_divide(&self, g: &SparsePoly) -> Result<Option<SparsePoly>> {
        if self.nvars != g.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: g.nvars });
        }
        let (glm, glc) = match g.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let ginv = glc.recip();
        // Cheap necessary conditions before the long division.
        for i in 0..self.nvars {
            if !self.is_zero() && g.degree_in(i) > self.degree_in(i) {
                return Ok(None);
            }
        }
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = match rm.div(&glm) {
                Some(qm) => qm,
                None => return Ok(None),
            };
            let qc = rc * &ginv;
            for (tm, tc) in &g.terms {
                rem.add_term(tm.mul(&qm), -(tc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }

    pub fn divides(&self, f: &SparsePoly) -> Result<bool> {
        Ok(f.exact_divide(self)?.is_some())
    }

    /// Re-indexes variables: variable `i` of `self` becomes variable `map[i]` of a space of size `nvars`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = SparsePoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in variable `i`, indexed by power.
    pub fn coeffs_in(&self, i: usize) -> Vec<SparsePoly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![SparsePoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let k = m2.0[i] as usize;
            m2.0[i] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// Rational coefficients of a univariate polynomial (ascending powers).
    pub fn to_univariate(&self, i: usize) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); self.degree_in(i) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            out[m.0[i] as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(nvars: usize, i: usize, coeffs: &[Q]) -> SparsePoly {
        let mut out = SparsePoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0u32; nvars];
            e[i] = k as u32;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

/// Canonical order on polynomials: by total degree, then by descending term sequence.
impl Ord for SparsePoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars
            .cmp(&other.nvars)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| {
                let mut a = self.terms();
                let mut b = other.terms();
                loop {
                    match (a.next(), b.next()) {
                        (None, None) => return Ordering::Equal,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(_), None) => return Ordering::Greater,
                        (Some((ma, ca)), Some((mb, cb))) => {
                            let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                            if o != Ordering::Equal {
                                return o;
                            }
                        }
                    }
                }
            })
    }
}

impl PartialOrd for SparsePoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_same(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_same(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_same(rhs);
        if self.is_zero() || rhs.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        SparsePoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-Q::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render_poly(self))
    }
}
