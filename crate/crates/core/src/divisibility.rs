//! Divisibility: exact division and the reduction of `g | f` to a polynomial identity.
//!
//! With `g(a) != 0`, `g | f` holds iff `f(z + a) = g(z + a) * h(z)` where
//!
//! ```text
//! h(z) = sum_{b in S} f(b z + a) sum_i c_{b,i} g(b z + a)^i,   S = {1, .., 2d^2 + 1}.
//! ```
//!
//! The constants come from `1/G = (1/g(a)) sum_{j<=d} u^j`, `u = 1 - G/g(a)`, expanded in
//! powers of `G`, and from weights `mu_b` with `sum_b mu_b b^k = [k <= d]` for `k <= 2d^2`,
//! which keep exactly the homogeneous components of degree at most `d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::pit::find_nonzero_point_whitebox;
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

/// Exact quotient `f / g` when `g | f`.
pub fn divides_exact(f: &SparsePoly, g: &SparsePoly) -> Result<Option<SparsePoly>> {
    f.exact_divide(g)
}

/// The identity deciding `g | f`, with everything needed to inspect it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessIdentity {
    pub alpha: Vec<Q>,
    pub betas: Vec<Q>,
    /// `mu_b`, indexed like `betas`.
    pub weights: Vec<Q>,
    /// `a_i`, `i = 0..=d`: the truncated inverse of `g(z + alpha)` in powers of itself.
    pub inverse_series: Vec<Q>,
    pub h_tilde: SparsePoly,
    pub holds: bool,
}

impl WitnessIdentity {
    /// `c[b][i] = mu_b a_i`, indexed like `betas`, `i = 0..=d`.
    pub fn constants(&self) -> Vec<Vec<Q>> {
        self.weights.iter().map(|m| self.inverse_series.iter().map(|a| m * a).collect()).collect()
    }

    /// `h(z - a)`, the quotient `f / g` when the identity holds.
    pub fn quotient(&self) -> SparsePoly {
        shift(&self.h_tilde, &self.alpha.iter().map(|a| -a.clone()).collect::<Vec<_>>(), &Q::one())
    }
}

/// `p(b z + a)`.
fn shift(p: &SparsePoly, a: &[Q], b: &Q) -> SparsePoly {
    let n = p.nvars();
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let mut img = SparsePoly::zero(n);
            img.add_term(Monomial::var(n, i), b.clone());
            img.add_term(Monomial::one(n), a[i].clone());
            img
        })
        .collect();
    p.substitute(&images)
}

fn truncate(p: &SparsePoly, d: u32) -> SparsePoly {
    let mut out = SparsePoly::zero(p.nvars());
    for (m, c) in p.terms() {
        if m.degree() <= d {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

fn mul_trunc(a: &SparsePoly, b: &SparsePoly, d: u32) -> SparsePoly {
    let mut out = SparsePoly::zero(a.nvars());
    for (ma, ca) in a.terms() {
        let da = ma.degree();
        if da > d {
            continue;
        }
        for (mb, cb) in b.terms() {
            if da + mb.degree() <= d {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
    }
    out
}

fn binom(n: usize, k: usize) -> Q {
    let mut c = Q::one();
    for j in 0..k {
        c = c * Q::from_integer((n - j).into()) / Q::from_integer((j + 1).into());
    }
    c
}

/// Weights `mu_b` over integer `betas` with `sum_b mu_b b^k = [k <= d]` for `k < betas.len()`.
///
/// The inverse of the transposed Vandermonde matrix holds the coefficients of the Lagrange
/// basis, so `mu_b` is the sum of the coefficients of degree `<= d` of
/// `prod_{c != b} (x - c) / (b - c)`. Betas must be nonzero and distinct.
fn truncation_weights(betas: &[BigInt], d: u32) -> Vec<Q> {
    // Master polynomial prod_c (x - c), ascending.
    let mut master = vec![BigInt::one()];
    for c in betas {
        let mut next = vec![BigInt::zero(); master.len() + 1];
        for (k, m) in master.iter().enumerate() {
            next[k + 1] += m;
            next[k] -= m * c;
        }
        master = next;
    }
    let keep = (d as usize + 1).min(betas.len());
    par::map(betas, |b| {
        // Low coefficients of master / (x - b), exact since b is a root.
        let mut qk = -&master[0] / b;
        let mut sum = qk.clone();
        for m in master.iter().take(keep).skip(1) {
            qk = (&qk - m) / b;
            sum += &qk;
        }
        let denom = betas.iter().filter(|c| *c != b).fold(BigInt::one(), |acc, c| acc * (b - c));
        Q::new(sum, denom)
    })
}

/// Builds the identity for `g | f`; `d` bounds both degrees.
pub fn divisibility_witness(f: &SparsePoly, g: &SparsePoly) -> Result<WitnessIdentity> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if f.nvars() != g.nvars() {
        return Err(Error::VariableCountMismatch { left: f.nvars(), right: g.nvars() });
    }
    let n = f.nvars();
    let d = f.degree().max(g.degree()).max(1);
    let alpha = find_nonzero_point_whitebox(g, d)?.point;
    let g_alpha = g.eval(&alpha);
    assert!(!g_alpha.is_zero(), "witness point is a root of g");
    let ints: Vec<BigInt> = (1..=2 * d * d + 1).map(BigInt::from).collect();
    let betas: Vec<Q> = ints.iter().cloned().map(Q::from_integer).collect();
    // 1/G truncated = sum_i a_i G^i,  a_i = (1/g(a)) sum_{j=i}^{d} C(j,i) (-1/g(a))^i.
    let inv = g_alpha.recip();
    let neg_inv = -inv.clone();
    let a: Vec<Q> = (0..=d as usize)
        .map(|i| {
            let s: Q = (i..=d as usize).map(|j| binom(j, i)).fold(Q::zero(), |acc, c| acc + c);
            &inv * s * num_traits::pow::pow(neg_inv.clone(), i)
        })
        .collect();
    let mu = truncation_weights(&ints, d);
    // f(bz + a) = f~(bz) with f~ = f(z + a), so the summand for b is the truncated product
    // H = f~ sum_i a_i g~^i with its degree-k component scaled by mu_b b^k. Summing over b
    // degree by degree gives the factors sum_b mu_b b^k.
    let one = Q::one();
    let ft = shift(f, &alpha, &one);
    let gt = truncate(&shift(g, &alpha, &one), d);
    let mut series = SparsePoly::zero(n);
    let mut gpow = SparsePoly::one(n);
    for ai in &a {
        series = &series + &gpow.scale(ai);
        gpow = mul_trunc(&gpow, &gt, d);
    }
    let base = mul_trunc(&ft, &series, d);
    // sum_b mu_b b^k over the common denominator of the weights.
    let common = mu.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    let numers: Vec<BigInt> = mu.iter().map(|m| m.numer() * (&common / m.denom())).collect();
    let weight: Vec<Q> = par::map_range(d as usize + 1, |k| {
        let s = ints.iter().zip(&numers).fold(BigInt::zero(), |acc, (b, m)| acc + m * num_traits::pow::pow(b.clone(), k));
        Q::new(s, common.clone())
    });
    let mut h_tilde = SparsePoly::zero(n);
    for (m, c) in base.terms() {
        h_tilde.add_term(m.clone(), c * &weight[m.degree() as usize]);
    }
    let rhs = &shift(g, &alpha, &one) * &h_tilde;
    let holds = (&ft - &rhs).is_zero();
    Ok(WitnessIdentity { alpha, betas, weights: mu, inverse_series: a, h_tilde, holds })
}

/// Which procedure decides divisibility by a constant-degree polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DivBackend {
    #[default]
    Exact,
    Witness,
}

/// Divisibility by a polynomial of degree at most `delta`.
pub fn constant_degree_divides(f: &SparsePoly, g: &SparsePoly, delta: u32, backend: DivBackend) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if g.degree() > delta {
        return Err(Error::PromiseViolation(format!("divisor degree {} exceeds {delta}", g.degree())));
    }
    match backend {
        DivBackend::Exact => Ok(divides_exact(f, g)?.is_some()),
        DivBackend::Witness => Ok(divisibility_witness(f, g)?.holds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly_n;

    fn p(s: &str) -> SparsePoly {
        parse_poly_n(s, 2).unwrap()
    }

    #[test]
    fn basic_verdicts() {
        let f = p("z1^2 - z2^2");
        let g = p("z1 + z2");
        assert_eq!(divides_exact(&f, &g).unwrap(), Some(p("z1 - z2")));
        let w = divisibility_witness(&f, &g).unwrap();
        assert!(w.holds);
        assert_eq!(w.quotient(), p("z1 - z2"));
        assert!(!divisibility_witness(&p("z1^2 + 1"), &p("z1 + 1")).unwrap().holds);
        assert_eq!(divides_exact(&p("z1^2 + 1"), &p("z1 + 1")).unwrap(), None);
    }

    /// h-tilde must equal the degree-<=d truncation of F / G as a power series.
    #[test]
    fn matches_truncated_series() {
        for (fs, gs) in [("z1^2*z2 + 3*z2 - 1", "z1 + 2*z2 + 1"), ("z1^3 - z2", "z1*z2 - 1"), ("z1^2 + 1", "z1 + 1")] {
            let f = p(fs);
            let g = p(gs);
            let w = divisibility_witness(&f, &g).unwrap();
            let d = f.degree().max(g.degree());
            let fa = shift(&f, &w.alpha, &Q::one());
            let ga = shift(&g, &w.alpha, &Q::one());
            let g0 = ga.constant_term();
            // Series inverse by Newton-free recursion: 1/G = sum_j (1 - G/g0)^j / g0.
            let u = &SparsePoly::one(2) - &ga.scale(&g0.recip());
            let mut inv = SparsePoly::zero(2);
            let mut up = SparsePoly::one(2);
            for _ in 0..=d {
                inv = &inv + &up;
                up = mul_trunc(&up, &u, d);
            }
            let inv = inv.scale(&g0.recip());
            assert_eq!(w.h_tilde, mul_trunc(&fa, &inv, d), "{fs} / {gs}");
        }
    }

    /// Without truncation the weighted sum over the betas gives the same polynomial.
    #[test]
    fn untruncated_assembly_agrees() {
        let f = p("z1^2 - z2^2");
        let g = p("z1 + z2");
        let w = divisibility_witness(&f, &g).unwrap();
        let mut full = SparsePoly::zero(2);
        for (b, cs) in w.betas.iter().zip(&w.constants()) {
            let fb = shift(&f, &w.alpha, b);
            let gb = shift(&g, &w.alpha, b);
            let mut gp = SparsePoly::one(2);
            for c in cs {
                full = &full + &(&fb * &gp).scale(c);
                gp = &gp * &gb;
            }
        }
        assert_eq!(full, w.h_tilde);
    }

    #[test]
    fn backends_and_degree_guard() {
        let f = p("z1^3 + z1*z2 + z1");
        let g = p("z1");
        assert!(constant_degree_divides(&f, &g, 1, DivBackend::Exact).unwrap());
        assert!(constant_degree_divides(&f, &g, 1, DivBackend::Witness).unwrap());
        assert!(matches!(constant_degree_divides(&f, &p("z1^2"), 1, DivBackend::Exact), Err(Error::PromiseViolation(_))));
        assert_eq!(constant_degree_divides(&f, &SparsePoly::zero(2), 1, DivBackend::Exact), Err(Error::DivisionByZero));
    }
}
