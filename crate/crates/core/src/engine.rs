//! Factor extraction: constant-degree factors through the projection to three variables,
//! and sparse factors through projection oracles and sparse interpolation.

use num_traits::{One, Zero};

use crate::config::Config;
use crate::dense::DensePoly3;
use crate::divisibility::{constant_degree_divides, DivBackend};
use crate::error::{Error, Result};
use crate::factor::factor_monic;
use crate::factorlist::{scalar_of, FactorList};
use crate::irredproj::{su_membership, IrredProjOracle, ProjectionPair};
use crate::isolation::{psi_invert, psi_map, IsolationScheme};
use crate::par;
use crate::pit::{find_nonzero_point_whitebox, interpolation_plan, sparse_interpolate};
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

/// `z -> alpha x + z`, normalized by the value of the top component at `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicShift {
    pub alpha: Vec<Q>,
    pub normalizer: Q,
}

/// `g(alpha x + z)` in the variables `(x, z_1..z_n)`.
pub fn shift_into_x(g: &SparsePoly, alpha: &[Q]) -> SparsePoly {
    let n = g.nvars();
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let mut img = SparsePoly::var(n + 1, i + 1);
            img.add_term(Monomial::var(n + 1, 0), alpha[i].clone());
            img
        })
        .collect();
    g.substitute(&images)
}

/// A point with nonzero coordinates where the top homogeneous component of `f` is nonzero.
pub fn monic_point(f: &SparsePoly) -> Result<MonicShift> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let top = f.hom_component(f.degree());
    let alpha = find_nonzero_point_whitebox(&top, f.degree())?.point;
    let normalizer = top.eval(&alpha);
    Ok(MonicShift { alpha, normalizer })
}

/// Returns the shift and `f(alpha x + z) / Hom_d[f](alpha)`, monic in `x` of degree `deg f`.
pub fn monicize(f: &SparsePoly) -> Result<(MonicShift, SparsePoly)> {
    let shift = monic_point(f)?;
    let fa = shift_into_x(f, &shift.alpha).scale(&shift.normalizer.recip());
    Ok((shift, fa))
}

/// Undoes [`monicize`] up to a scalar: for `g_hat = g(alpha x + z) / c`, setting `x = 0`
/// leaves `g / c`.
pub fn unmonicize(g_hat: &SparsePoly, _shift: &MonicShift) -> SparsePoly {
    let n = g_hat.nvars() - 1;
    let mut out = SparsePoly::zero(n);
    for (m, c) in g_hat.terms() {
        if m.0[0] == 0 {
            out.add_term(Monomial(m.0[1..].to_vec()), c.clone());
        }
    }
    out
}

/// Irreducible factors of `Psi(f_alpha)` of `x`-degree at most `delta`.
#[derive(Clone, Debug)]
pub struct ProjectedFactorSet {
    pub shift: MonicShift,
    pub scheme: IsolationScheme,
    pub image_dims: [usize; 3],
    /// All factors of the image with multiplicities.
    pub all: Vec<(DensePoly3, u32)>,
    /// Those with `deg_x <= delta`.
    pub low: Vec<(DensePoly3, u32)>,
}

pub fn projected_factoring(f: &SparsePoly, delta: u32, cfg: &Config) -> Result<ProjectedFactorSet> {
    if delta == 0 {
        return Err(Error::Config("delta must be at least 1".into()));
    }
    let (shift, fa) = monicize(f)?;
    let scheme = IsolationScheme::for_projection(f.nvars(), delta, cfg)?;
    let image = psi_map(&fa, &scheme, cfg)?;
    debug_assert_eq!(image.dims()[0] as u32, f.degree());
    let (_, all) = factor_monic(&image, cfg)?;
    let low = all.iter().filter(|(g, _)| g.dims()[0] as u32 <= delta).cloned().collect();
    Ok(ProjectedFactorSet { shift, scheme, image_dims: image.dims(), all, low })
}

/// Factorization under the promise that every irreducible factor has degree at most `delta`.
pub fn factor_constant_degree_promise(f: &SparsePoly, delta: u32, cfg: &Config) -> Result<FactorList> {
    let set = projected_factoring(f, delta, cfg)?;
    if set.low.len() != set.all.len() {
        return Err(Error::PromiseViolation(format!("the input has an irreducible factor of degree above {delta}")));
    }
    let mut out = FactorList::new(scalar_of(f));
    for (gt, e) in &set.low {
        let g_hat = psi_invert(gt, &set.scheme, delta, cfg)
            .map_err(|err| Error::PromiseViolation(format!("projected factor has no preimage: {err}")))?;
        out.push(&unmonicize(&g_hat, &set.shift), *e);
    }
    if out.expand(f.nvars())? != *f {
        return Err(Error::PromiseViolation("recovered factors do not multiply back to the input".into()));
    }
    Ok(out)
}

/// All irreducible factors of degree at most `delta`, with multiplicities.
pub fn constant_degree_factors(f: &SparsePoly, delta: u32, backend: DivBackend, cfg: &Config) -> Result<FactorList> {
    let set = projected_factoring(f, delta, cfg)?;
    let mut out = FactorList::new(scalar_of(f));
    for (gt, _) in &set.low {
        let g_hat = match psi_invert(gt, &set.scheme, delta, cfg) {
            Ok(g) => g,
            Err(Error::NotInCodomain(_)) => continue,
            Err(e) => return Err(e),
        };
        let g = unmonicize(&g_hat, &set.shift).canonical().1;
        if g.is_constant() || g.degree() > delta || out.multiplicity_of(&g) > 0 {
            continue;
        }
        if !constant_degree_divides(f, &g, delta, backend)? {
            continue;
        }
        let e = factor_multiplicity(f, &g)?;
        out.push(&g, e);
    }
    Ok(out)
}

/// Multiplicity of an irreducible `g` in `f`: the least `e` with `g` not dividing the
/// `e`-th derivative of `f` in the first variable of `g`.
pub fn factor_multiplicity(f: &SparsePoly, g: &SparsePoly) -> Result<u32> {
    if g.is_constant() {
        return Err(Error::ConstantInput);
    }
    let z = g.var_support()[0];
    let mut h = f.clone();
    for e in 0..=f.degree_in(z) + 1 {
        if h.exact_divide(g)?.is_none() {
            return Ok(e);
        }
        h = h.derivative(z);
    }
    Err(Error::Internal("multiplicity search ran past the degree".into()))
}

/// Multiplicity by repeated exact division.
pub fn multiplicity_by_division(f: &SparsePoly, g: &SparsePoly) -> Result<u32> {
    if g.is_constant() {
        return Err(Error::ConstantInput);
    }
    let mut h = f.clone();
    let mut e = 0;
    while let Some(q) = h.exact_divide(g)? {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        h = q;
        e += 1;
    }
    Ok(e)
}

/// `f(alpha x + beta y + delta t + gamma)` as a dense polynomial in `(x, y, t)`.
pub fn project(f: &SparsePoly, alpha: &[Q], beta: &[Q], delta: Option<&[Q]>, gamma: &[Q]) -> Result<DensePoly3> {
    let n = f.nvars();
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let mut img = SparsePoly::zero(3);
            img.add_term(Monomial(vec![1, 0, 0]), alpha[i].clone());
            img.add_term(Monomial(vec![0, 1, 0]), beta[i].clone());
            if let Some(d) = delta {
                img.add_term(Monomial(vec![0, 0, 1]), d[i].clone());
            }
            img.add_term(Monomial(vec![0, 0, 0]), gamma[i].clone());
            img
        })
        .collect();
    DensePoly3::from_sparse(&f.substitute(&images))
}

/// Irreducibility test through a projection oracle: `f` is irreducible iff some listed
/// pair keeps `f(alpha x + beta t + gamma)` irreducible.
pub fn sparse_irreducible_test(f: &SparsePoly, oracle: &dyn IrredProjOracle, cfg: &Config) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.degree() == 1 {
        return Ok(true);
    }
    let shift = monic_point(f)?;
    irreducible_with(f, &shift.alpha, oracle, None, cfg)
}

fn projection_irreducible(f: &SparsePoly, alpha: &[Q], pair: &ProjectionPair, cfg: &Config) -> Result<bool> {
    let fh = project(f, alpha, &pair.beta, None, &pair.gamma)?.trimmed();
    if fh.dims()[0] as u32 != f.degree() {
        return Ok(false);
    }
    let (_, fs) = factor_monic(&fh, cfg)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

fn irreducible_with(
    f: &SparsePoly,
    alpha: &[Q],
    oracle: &dyn IrredProjOracle,
    first: Option<&ProjectionPair>,
    cfg: &Config,
) -> Result<bool> {
    if let Some(p) = first {
        if projection_irreducible(f, alpha, p, cfg)? {
            return Ok(true);
        }
    }
    for pair in oracle.pairs(alpha)? {
        if projection_irreducible(f, alpha, &pair, cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the sparse factor search.
#[derive(Clone, Debug)]
pub struct SparseFactors {
    /// In-class sparse irreducible factors with multiplicities.
    pub list: FactorList,
    /// Further irreducible factors met on the way (outside the class).
    pub others: Vec<(SparsePoly, u32)>,
    pub pairs_tried: usize,
    /// True when the search stopped because every projected factor was accounted for.
    pub early_exit: bool,
    pub diagnostics: Vec<String>,
}

struct Known {
    poly: SparsePoly,
    mult: u32,
    in_class: bool,
}

fn monic_x(g: &DensePoly3) -> DensePoly3 {
    match g.constant_lc_x() {
        Some(c) if !c.is_one() => g.scale(&c.recip()),
        _ => g.clone(),
    }
}

fn slice_t0(g: &DensePoly3) -> DensePoly3 {
    let [dx, dy, _] = g.dims();
    let mut out = DensePoly3::zero([dx, dy, 0]);
    for (e, c) in g.nonzero() {
        if e[2] == 0 {
            out.set(e[0], e[1], 0, c.clone());
        }
    }
    out.trimmed()
}

/// Remaining multiplicities of the bivariate factors once the known factors are divided out.
fn unexplained(
    f_hat: &[(DensePoly3, u32)],
    known: &[Known],
    alpha: &[Q],
    pair: &ProjectionPair,
    cfg: &Config,
) -> Result<Vec<u32>> {
    let mut left: Vec<u32> = f_hat.iter().map(|x| x.1).collect();
    for k in known {
        let ph = project(&k.poly, alpha, &pair.beta, None, &pair.gamma)?.trimmed();
        let (_, fs) = factor_monic(&ph, cfg)?;
        for (h, m) in fs {
            if let Some(j) = f_hat.iter().position(|(g, _)| *g == h) {
                left[j] = left[j].saturating_sub(m * k.mult);
            }
        }
    }
    Ok(left)
}

/// Sparse irreducible factors of `f` in the oracle's class with at most `s` terms.
pub fn sparse_factors(f: &SparsePoly, s: usize, oracle: &dyn IrredProjOracle, cfg: &Config) -> Result<SparseFactors> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if s == 0 {
        return Err(Error::Config("sparsity bound must be positive".into()));
    }
    let n = f.nvars();
    let d = f.degree();
    let shift = monic_point(f)?;
    let alpha = &shift.alpha;
    let plan = interpolation_plan(s, n, d);
    let bound = oracle.degree_bound().unwrap_or(d);
    let mut known: Vec<Known> = Vec::new();
    let mut diagnostics = Vec::new();
    let mut pairs_tried = 0;
    let mut early = false;
    for pair in oracle.pairs(alpha)? {
        pairs_tried += 1;
        let f_hat = project(f, alpha, &pair.beta, None, &pair.gamma)?.trimmed();
        let (_, fh) = factor_monic(&f_hat, cfg)?;
        let left = unexplained(&fh, &known, alpha, &pair, cfg)?;
        let todo: Vec<usize> = (0..fh.len()).filter(|&j| left[j] > 0 && fh[j].0.dims()[0] as u32 <= bound).collect();
        if todo.is_empty() {
            if cfg.early_exit {
                early = true;
                break;
            }
            continue;
        }
        // Values g(omega) (up to one scalar per j) from the trivariate lifts.
        let gamma = &pair.gamma;
        let per_omega: Vec<Result<Vec<Option<Q>>>> = par::map(&plan.points, |omega| {
            let dir: Vec<Q> = omega.iter().zip(gamma).map(|(w, g)| w - g).collect();
            let fw = project(f, alpha, &pair.beta, Some(&dir), gamma)?.trimmed();
            let (_, fws) = factor_monic(&fw, cfg)?;
            let slices: Vec<DensePoly3> = fws.iter().map(|(g, _)| monic_x(&slice_t0(g))).collect();
            Ok(todo
                .iter()
                .map(|&j| {
                    let hits: Vec<usize> = (0..fws.len()).filter(|&i| slices[i] == fh[j].0).collect();
                    let i = match hits.len() {
                        0 => return None,
                        1 => hits[0],
                        _ => {
                            let same: Vec<usize> = hits.into_iter().filter(|&i| fws[i].1 == fh[j].1).collect();
                            if same.len() != 1 {
                                return None;
                            }
                            same[0]
                        }
                    };
                    let g = &fws[i].0;
                    let [_, _, dt] = g.dims();
                    Some((0..=dt).fold(Q::zero(), |acc, c| acc + g.get(0, 0, c)))
                })
                .collect())
        });
        let mut table = Vec::with_capacity(per_omega.len());
        for r in per_omega {
            table.push(r?);
        }
        for (col, &j) in todo.iter().enumerate() {
            let values: Option<Vec<Q>> = table.iter().map(|row| row[col].clone()).collect();
            let Some(values) = values else {
                diagnostics.push(format!("pair {pairs_tried}: projected factor {j} has no consistent lift"));
                continue;
            };
            let p = match sparse_interpolate(&values, s, n, d) {
                Ok(p) => p,
                Err(Error::InterpolationFailure(_)) => continue,
                Err(e) => return Err(e),
            };
            if p.is_constant() {
                continue;
            }
            let p = p.canonical().1;
            if known.iter().any(|k| k.poly == p) {
                continue;
            }
            if f.exact_divide(&p)?.is_none() {
                continue;
            }
            let in_class = oracle.contains(&p);
            // The projection of p at this pair is the irreducible factor it came from.
            let ph = monic_x(&project(&p, alpha, &pair.beta, None, &pair.gamma)?.trimmed());
            let certified = ph.dims()[0] as u32 == p.degree() && ph == fh[j].0;
            let irreducible = if certified {
                true
            } else if !in_class {
                false
            } else if oracle.name() == "su" && su_membership(&p) && p.var_support().len() >= 3 {
                true
            } else {
                irreducible_with(&p, alpha, oracle, Some(&pair), cfg)?
            };
            if !irreducible {
                continue;
            }
            let mult = factor_multiplicity(f, &p)?;
            known.push(Known { poly: p, mult, in_class });
        }
        if cfg.early_exit {
            let left = unexplained(&fh, &known, alpha, &pair, cfg)?;
            if (0..fh.len()).all(|j| left[j] == 0 || fh[j].0.dims()[0] as u32 > bound) {
                early = true;
                break;
            }
        }
    }
    if !early {
        diagnostics.push(format!("all {pairs_tried} projection pairs examined"));
    }
    let mut list = FactorList::new(scalar_of(f));
    let mut others = Vec::new();
    for k in known {
        if k.in_class {
            list.push(&k.poly, k.mult);
        } else {
            others.push((k.poly, k.mult));
        }
    }
    others.sort();
    Ok(SparseFactors { list, others, pairs_tried, early_exit: early, diagnostics })
}
