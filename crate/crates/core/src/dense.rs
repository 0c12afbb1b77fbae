//! Dense trivariate polynomials in `(x, y, t)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

/// Coefficient grid indexed by the exponents `(i, j, k)` of `x^i y^j t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly3 {
    dims: [usize; 3],
    coeffs: Vec<Q>,
}

impl DensePoly3 {
    /// Zero polynomial with room for degrees up to `dims` in each variable.
    pub fn zero(dims: [usize; 3]) -> Self {
        let len = (dims[0] + 1) * (dims[1] + 1) * (dims[2] + 1);
        DensePoly3 { dims, coeffs: vec![Q::zero(); len] }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn cells(&self) -> usize {
        self.coeffs.len()
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.dims[1] + 1) + j) * (self.dims[2] + 1) + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.coeffs[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Q) {
        let ix = self.idx(i, j, k);
        self.coeffs[ix] = c;
    }

    pub fn add_at(&mut self, i: usize, j: usize, k: usize, c: &Q) {
        let ix = self.idx(i, j, k);
        self.coeffs[ix] += c;
    }

    /// Nonzero entries as `((i, j, k), coefficient)`.
    pub fn nonzero(&self) -> impl Iterator<Item = ([usize; 3], &Q)> + '_ {
        let (dy, dt) = (self.dims[1] + 1, self.dims[2] + 1);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(ix, c)| ([ix / (dy * dt), (ix / dt) % dy, ix % dt], c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Actual degrees in `x`, `y`, `t`.
    pub fn degrees(&self) -> [usize; 3] {
        let mut d = [0; 3];
        for (e, _) in self.nonzero() {
            for v in 0..3 {
                d[v] = d[v].max(e[v]);
            }
        }
        d
    }

    /// Shrinks the grid to the actual degrees.
    pub fn trimmed(&self) -> DensePoly3 {
        let d = self.degrees();
        if d == self.dims {
            return self.clone();
        }
        let mut out = DensePoly3::zero(d);
        for (e, c) in self.nonzero() {
            out.set(e[0], e[1], e[2], c.clone());
        }
        out
    }

    /// Converts a polynomial in at most three variables; variable 0 is `x`, 1 is `y`, 2 is `t`.
    pub fn from_sparse(p: &SparsePoly) -> Result<DensePoly3> {
        if p.nvars() > 3 {
            return Err(Error::VariableCountMismatch { left: p.nvars(), right: 3 });
        }
        let mut dims = [0usize; 3];
        for v in 0..p.nvars() {
            dims[v] = p.degree_in(v) as usize;
        }
        let mut out = DensePoly3::zero(dims);
        for (m, c) in p.terms() {
            let mut e = [0usize; 3];
            for v in 0..p.nvars() {
                e[v] = m.0[v] as usize;
            }
            out.set(e[0], e[1], e[2], c.clone());
        }
        Ok(out)
    }

    /// Sparse view in three variables `(x, y, t)`.
    pub fn to_sparse(&self) -> SparsePoly {
        let mut out = SparsePoly::zero(3);
        for (e, c) in self.nonzero() {
            out.add_term(Monomial(vec![e[0] as u32, e[1] as u32, e[2] as u32]), c.clone());
        }
        out
    }

    /// Coefficient of the highest power of `x`, as a polynomial in `(y, t)`.
    pub fn lc_x(&self) -> Vec<([usize; 2], Q)> {
        let dx = self.degrees()[0];
        self.nonzero()
            .filter(|(e, _)| e[0] == dx)
            .map(|(e, c)| ([e[1], e[2]], c.clone()))
            .collect()
    }

    /// The leading coefficient in `x` if it is a nonzero constant.
    pub fn constant_lc_x(&self) -> Option<Q> {
        let lc = self.lc_x();
        if lc.len() == 1 && lc[0].0 == [0, 0] {
            Some(lc[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_monic_x(&self) -> bool {
        self.constant_lc_x().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn scale(&self, c: &Q) -> DensePoly3 {
        DensePoly3 { dims: self.dims, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Specializes `y = y0, t = t0`, returning ascending coefficients in `x`.
    pub fn eval_yt(&self, y0: &Q, t0: &Q) -> Vec<Q> {
        let ypow = powers(y0, self.dims[1]);
        let tpow = powers(t0, self.dims[2]);
        let mut out = vec![Q::zero(); self.dims[0] + 1];
        for (e, c) in self.nonzero() {
            out[e[0]] += c * &ypow[e[1]] * &tpow[e[2]];
        }
        while out.len() > 1 && out.last().map(|c| c.is_zero()).unwrap_or(false) {
            out.pop();
        }
        out
    }

    /// Exchanges the roles of `y` and `t`.
    pub fn swap_yt(&self) -> DensePoly3 {
        let mut out = DensePoly3::zero([self.dims[0], self.dims[2], self.dims[1]]);
        for (e, c) in self.nonzero() {
            out.set(e[0], e[2], e[1], c.clone());
        }
        out
    }
}

pub(crate) fn powers(x: &Q, d: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(Q::one());
    for k in 1..=d {
        let next = &out[k - 1] * x;
        out.push(next);
    }
    out
}
