//! Base factorizer: exact factorization in one, two and three variables.

pub mod crt;
pub mod modarith;
pub mod multivar;
pub mod ntt;
pub mod univariate;
pub mod zpoly;

use num_traits::{One, Zero};

use crate::config::Config;
use crate::dense::DensePoly3;
use crate::error::{Error, Result};
use crate::factorlist::{scalar_of, FactorList};
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

pub use multivar::factor_monic;

/// Complete factorization of a univariate polynomial given by ascending coefficients.
pub fn factor_univariate_q(coeffs: &[Q]) -> Result<FactorList> {
    let f = univariate::qtrim(coeffs.to_vec());
    if f.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    let p = SparsePoly::from_univariate(1, 0, &f);
    let (_, fs) = univariate::factor_q(&f);
    Ok(FactorList::from_factors(scalar_of(&p), fs.into_iter().map(|(g, k)| (SparsePoly::from_univariate(1, 0, &g), k))))
}

fn dense_list(f: &DensePoly3, cfg: &Config) -> Result<FactorList> {
    let (_, fs) = factor_monic(f, cfg)?;
    Ok(FactorList::from_factors(scalar_of(&f.to_sparse()), fs.into_iter().map(|(g, k)| (g.to_sparse(), k))))
}

/// Factors a polynomial in `(x, y)` monic in `x`, as a three-variable `(x, y, t)` list.
pub fn factor_bivariate(f: &DensePoly3, cfg: &Config) -> Result<FactorList> {
    if f.degrees()[2] != 0 {
        return Err(Error::Internal("bivariate input depends on t".into()));
    }
    dense_list(f, cfg)
}

/// Factors a polynomial in `(x, y, t)` whose leading coefficient in `x` is constant.
pub fn factor_trivariate(f: &DensePoly3, cfg: &Config) -> Result<FactorList> {
    dense_list(f, cfg)
}

/// Factors any polynomial depending on at most three variables, in its own variable space.
///
/// A variable with constant leading coefficient is used as `x` when one exists; otherwise
/// the other variables are sheared by `v_j -> v_j + a_j x` first and the shear is undone
/// on the factors.
pub fn factor_lowvar(f: &SparsePoly, cfg: &Config) -> Result<FactorList> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    let support = f.var_support();
    if support.is_empty() {
        return Ok(FactorList::new(f.constant_term()));
    }
    if support.len() > 3 {
        return Err(Error::Cap(format!("dense factorization needs at most 3 variables, got {}", support.len())));
    }
    let k = support.len();
    // Compress to k variables.
    let mut back = vec![0usize; n];
    for (j, &v) in support.iter().enumerate() {
        back[v] = j;
    }
    let g = f.embed(k, &back);
    let monic_var = (0..k).find(|&i| {
        let d = g.degree_in(i);
        g.terms().filter(|(m, _)| m.0[i] == d).count() == 1 && g.terms().any(|(m, _)| m.0[i] == d && m.degree() == d)
    });
    let (x, shear) = match monic_var {
        Some(i) => (i, vec![Q::zero(); k]),
        None => (0, shear_for(&g)),
    };
    // Order: x first, then the remaining variables.
    let mut order: Vec<usize> = vec![x];
    order.extend((0..k).filter(|&i| i != x));
    let mut to3 = vec![0usize; k];
    for (pos, &v) in order.iter().enumerate() {
        to3[v] = pos;
    }
    let sheared = apply_shear(&g, x, &shear, false);
    let dense = DensePoly3::from_sparse(&sheared.embed(3, &to3))?;
    let (_, fs) = factor_monic(&dense, cfg)?;
    let mut from3 = vec![0usize; 3];
    for (v, &pos) in to3.iter().enumerate() {
        from3[pos] = v;
    }
    // Unused slots of the three-variable space never appear in the factors.
    for pos in k..3 {
        from3[pos] = 0;
    }
    let factors = fs.into_iter().map(|(h, e)| {
        let h = h.to_sparse().embed(k, &from3);
        let h = apply_shear(&h, x, &shear, true);
        let mut full = vec![0usize; k];
        for (j, &v) in support.iter().enumerate() {
            full[j] = v;
        }
        (h.embed(n, &full), e)
    });
    Ok(FactorList::from_factors(scalar_of(f), factors))
}

/// `v_j -> v_j + a_j x` (or its inverse), `a_x = 0`.
fn apply_shear(g: &SparsePoly, x: usize, a: &[Q], inverse: bool) -> SparsePoly {
    if a.iter().all(|c| c.is_zero()) {
        return g.clone();
    }
    let k = g.nvars();
    let images: Vec<SparsePoly> = (0..k)
        .map(|j| {
            let mut img = SparsePoly::var(k, j);
            if j != x && !a[j].is_zero() {
                let c = if inverse { -a[j].clone() } else { a[j].clone() };
                img.add_term(Monomial::var(k, x), c);
            }
            img
        })
        .collect();
    g.substitute(&images)
}

/// Shear coefficients making variable 0 carry a constant leading coefficient.
fn shear_for(g: &SparsePoly) -> Vec<Q> {
    let k = g.nvars();
    let top = g.hom_component(g.degree());
    let d = g.degree() as i64;
    // The top component is nonzero at some point (1, a_1, .., a_{k-1}) with a_j in 0..=d.
    let mut a = vec![0i64; k];
    loop {
        let mut pt: Vec<Q> = a.iter().map(|&v| Q::from_integer(v.into())).collect();
        pt[0] = Q::one();
        if !top.eval(&pt).is_zero() {
            return a.iter().map(|&v| Q::from_integer(v.into())).collect();
        }
        let mut i = 1;
        loop {
            assert!(i < k, "top component vanishes on the whole grid");
            a[i] += 1;
            if a[i] <= d {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

/// Whether a nonconstant polynomial in at most three variables is irreducible over Q.
pub fn is_irreducible_lowvar(f: &SparsePoly, cfg: &Config) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.degree() == 1 {
        return Ok(true);
    }
    let l = factor_lowvar(f, cfg)?;
    Ok(l.len() == 1 && l.factors[0].1 == 1)
}

/// Squarefree decomposition: pairwise coprime parts with exponents and a rational content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub content: Q,
    pub parts: Vec<(SparsePoly, u32)>,
}

/// Squarefree decomposition of a polynomial in at most three variables, grouped from its
/// complete factorization.
pub fn squarefree_decomposition(f: &SparsePoly, cfg: &Config) -> Result<SquarefreeDecomposition> {
    let l = factor_lowvar(f, cfg)?;
    let mut parts: Vec<(SparsePoly, u32)> = Vec::new();
    for (g, e) in &l.factors {
        match parts.iter_mut().find(|(_, k)| k == e) {
            Some(slot) => slot.0 = &slot.0 * g,
            None => parts.push((g.clone(), *e)),
        }
    }
    parts.sort_by_key(|p| p.1);
    Ok(SquarefreeDecomposition { content: l.scalar, parts })
}
