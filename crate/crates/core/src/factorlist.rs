//! Factor lists with a canonical scalar.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::Result;
use crate::parse::render_poly_with;
use crate::poly::SparsePoly;
use crate::rational::{render_q, Q};

/// `scalar * prod(factor^multiplicity)`, factors normalized to graded-lex leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    pub scalar: Q,
    pub factors: Vec<(SparsePoly, u32)>,
}

impl FactorList {
    pub fn new(scalar: Q) -> Self {
        FactorList { scalar, factors: Vec::new() }
    }

    /// Builds a list from arbitrary factors: each is normalized, equal factors are merged and
    /// the list is sorted.
    pub fn from_factors(scalar: Q, factors: impl IntoIterator<Item = (SparsePoly, u32)>) -> Self {
        let mut out = FactorList::new(scalar);
        for (g, e) in factors {
            out.push(&g, e);
        }
        out
    }

    /// Adds `g^e`, merging with an associate already present.
    pub fn push(&mut self, g: &SparsePoly, e: u32) {
        if e == 0 {
            return;
        }
        let (_, g) = g.canonical();
        match self.factors.iter_mut().find(|(h, _)| *h == g) {
            Some(slot) => slot.1 += e,
            None => self.factors.push((g, e)),
        }
        self.factors.sort();
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn multiplicity_of(&self, g: &SparsePoly) -> u32 {
        let (_, g) = g.canonical();
        self.factors.iter().find(|(h, _)| *h == g).map(|x| x.1).unwrap_or(0)
    }

    /// `scalar * prod(factor^multiplicity)` in `nvars` variables.
    pub fn expand(&self, nvars: usize) -> Result<SparsePoly> {
        let mut acc = SparsePoly::constant(nvars, self.scalar.clone());
        for (g, e) in &self.factors {
            acc = acc.try_mul(&g.pow(*e))?;
        }
        Ok(acc)
    }

    pub fn to_json_with<S: AsRef<str>>(&self, names: &[S]) -> Value {
        json!({
            "scalar": render_q(&self.scalar),
            "factors": self.factors.iter().map(|(g, e)| json!({
                "poly": render_poly_with(g, names),
                "multiplicity": e,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = format!("scalar: {}\n", render_q(&self.scalar));
        for (g, e) in &self.factors {
            out.push_str(&format!("({})^{}\n", render_poly_with(g, names), e));
        }
        out
    }
}

impl Default for FactorList {
    fn default() -> Self {
        FactorList::new(Q::one())
    }
}

/// Graded-lex leading coefficient, or zero for the zero polynomial.
pub(crate) fn scalar_of(f: &SparsePoly) -> Q {
    if f.is_zero() {
        Q::zero()
    } else {
        f.leading_coeff()
    }
}
