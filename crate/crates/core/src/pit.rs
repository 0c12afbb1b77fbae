//! Identity testing, nonzero points and sparse interpolation from prime-power evaluations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor::univariate;
use crate::isolation::monomials_up_to;
use crate::par;
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

/// Finite point set on which every nonzero polynomial of the class is nonzero somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    pub n: usize,
    pub d: u32,
    pub points: Vec<Vec<Q>>,
}

/// The grid `{1, .., d+1}^n` in lexicographic order.
pub fn trivial_hitting_set(n: usize, d: u32) -> HittingSet {
    let mut points = Vec::new();
    let mut cur = vec![1u32; n];
    loop {
        points.push(cur.iter().map(|&c| Q::from_integer(c.into())).collect());
        let mut i = n;
        loop {
            if i == 0 {
                return HittingSet { n, d, points };
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] <= d + 1 {
                break;
            }
            cur[i] = 1;
        }
    }
}

/// Zero test for a polynomial in sparse representation.
pub fn sparse_pit(f: &SparsePoly) -> bool {
    f.is_zero()
}

/// Fixes variable `i` to `c`.
pub fn partial_eval(f: &SparsePoly, i: usize, c: &Q) -> SparsePoly {
    let d = f.degree_in(i) as usize;
    let mut pw = Vec::with_capacity(d + 1);
    pw.push(Q::one());
    for k in 1..=d {
        let next = &pw[k - 1] * c;
        pw.push(next);
    }
    let mut out = SparsePoly::zero(f.nvars());
    for (m, coeff) in f.terms() {
        let mut m2 = m.clone();
        let e = m2.0[i] as usize;
        m2.0[i] = 0;
        out.add_term(m2, coeff * &pw[e]);
    }
    out
}

/// Result of a nonzero-point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonzeroPoint {
    pub point: Vec<Q>,
    /// Number of identity tests (whitebox) or evaluations (blackbox) spent.
    pub probes: usize,
}

/// Self-reduction: variable by variable, the first value in `1..=d+1` that keeps the
/// partially evaluated polynomial nonzero.
pub fn find_nonzero_point_whitebox(f: &SparsePoly, d: u32) -> Result<NonzeroPoint> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = d.max(f.degree());
    let mut g = f.clone();
    let mut point = Vec::with_capacity(f.nvars());
    let mut probes = 0;
    for i in 0..f.nvars() {
        let mut chosen = None;
        for v in 1..=d as i64 + 1 {
            let c = Q::from_integer(v.into());
            let h = partial_eval(&g, i, &c);
            probes += 1;
            if !sparse_pit(&h) {
                chosen = Some((c, h));
                break;
            }
        }
        let (c, h) = chosen.ok_or_else(|| Error::Internal("self-reduction found no value".into()))?;
        point.push(c);
        g = h;
    }
    Ok(NonzeroPoint { point, probes })
}

/// Scans `hs` for a point where `eval` is nonzero, then shifts it off the coordinate
/// hyperplanes by `t in {M+1, .., M+d+1}` added to every coordinate, `M` the absolute
/// value of the smallest coordinate.
pub fn find_nonzero_point_blackbox(eval: impl Fn(&[Q]) -> Q, d: u32, hs: &HittingSet) -> Result<NonzeroPoint> {
    let mut probes = 0;
    let a = hs
        .points
        .iter()
        .find(|p| {
            probes += 1;
            !eval(p).is_zero()
        })
        .ok_or(Error::ZeroPolynomial)?
        .clone();
    if a.iter().all(|c| !c.is_zero()) {
        return Ok(NonzeroPoint { point: a, probes });
    }
    let m = a.iter().min().cloned().unwrap_or_default().abs();
    for j in 0..=d as i64 {
        let t = &m + Q::from_integer((j + 1).into());
        let b: Vec<Q> = a.iter().map(|c| c + &t).collect();
        probes += 1;
        if !eval(&b).is_zero() {
            return Ok(NonzeroPoint { point: b, probes });
        }
    }
    Err(Error::Internal("shifted point search failed; degree bound too small".into()))
}

/// Evaluation points `(p_1^i, .., p_n^i)` for `i = 0..2s`, `p_k` the k-th prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPlan {
    pub s: usize,
    pub n: usize,
    pub d: u32,
    pub primes: Vec<u64>,
    pub points: Vec<Vec<Q>>,
}

pub fn first_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if (2..c).take_while(|k| k * k <= c).all(|k| c % k != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

pub fn interpolation_plan(s: usize, n: usize, d: u32) -> EvaluationPlan {
    let primes = first_primes(n);
    let mut points = Vec::with_capacity(2 * s);
    let mut cur: Vec<BigInt> = vec![BigInt::one(); n];
    for _ in 0..2 * s {
        points.push(cur.iter().map(|c| Q::from_integer(c.clone())).collect());
        for (c, &p) in cur.iter_mut().zip(&primes) {
            *c *= p;
        }
    }
    EvaluationPlan { s, n, d, primes, points }
}

impl EvaluationPlan {
    /// Plan points as JSON arrays of rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points
                .iter()
                .map(|p| serde_json::Value::Array(p.iter().map(|c| crate::rational::render_q(c).into()).collect()))
                .collect(),
        )
    }

    /// Values of `f` at every plan point, evaluated in parallel.
    pub fn evaluate(&self, f: &SparsePoly) -> Vec<Q> {
        par::map(&self.points, |p| f.eval(p))
    }
}

/// Shortest linear recurrence of `seq` over Q; returns `C` with `C[0] = 1` and
/// `sum_j C[j] seq[i-j] = 0` for all valid `i`.
pub fn berlekamp_massey(seq: &[Q]) -> Vec<Q> {
    let mut c = vec![Q::one()];
    let mut b = vec![Q::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Q::one();
    for i in 0..seq.len() {
        let mut disc = seq[i].clone();
        for j in 1..=l {
            if let Some(cj) = c.get(j) {
                disc += cj * &seq[i - j];
            }
        }
        if disc.is_zero() {
            m += 1;
            continue;
        }
        let coef = &disc / &bd;
        let old = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Q::zero());
        }
        for (j, bj) in b.iter().enumerate() {
            c[j + m] -= &coef * bj;
        }
        if 2 * l <= i {
            l = i + 1 - l;
            b = old;
            bd = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, Q::zero());
    c
}

fn horner(f: &[Q], x: &Q) -> Q {
    f.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Exponents of `v` over the designated primes, if `v` is a product of them.
fn exponents_of(v: &BigInt, primes: &[u64]) -> Option<Vec<u32>> {
    if !v.is_positive() {
        return None;
    }
    let mut r = v.clone();
    let mut out = vec![0u32; primes.len()];
    for (k, &p) in primes.iter().enumerate() {
        let p = BigInt::from(p);
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                break;
            }
            r = q;
            out[k] += 1;
        }
    }
    r.is_one().then_some(out)
}

/// Solves `sum_j c_j b_j^i = v_i`, `i < b.len()`, by elimination over Q.
fn solve_transposed_vandermonde(b: &[Q], v: &[Q]) -> Option<Vec<Q>> {
    let l = b.len();
    let mut rows: Vec<Vec<Q>> = (0..l)
        .map(|i| {
            let mut row: Vec<Q> = b.iter().map(|x| num_traits::pow::pow(x.clone(), i)).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    for col in 0..l {
        let piv = (col..l).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, piv);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..l {
            if r != col && !rows[r][col].is_zero() {
                let k = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &k * y;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[l].clone()).collect())
}

/// Recovers the polynomial with at most `s` terms and degree at most `d` from its values on
/// [`interpolation_plan`]`(s, n, d)`.
pub fn sparse_interpolate(values: &[Q], s: usize, n: usize, d: u32) -> Result<SparsePoly> {
    let fail = |m: String| Err(Error::InterpolationFailure(m));
    if values.len() != 2 * s {
        return fail(format!("expected {} values, got {}", 2 * s, values.len()));
    }
    if values.iter().all(|v| v.is_zero()) {
        return Ok(SparsePoly::zero(n));
    }
    let conn = berlekamp_massey(values);
    let l = conn.len() - 1;
    if l > s {
        return fail(format!("recurrence of length {l} exceeds sparsity {s}"));
    }
    // Locator: z^l C(1/z), ascending coefficients.
    let locator: Vec<Q> = conn.iter().rev().cloned().collect();
    let primes = first_primes(n);
    let roots = locator_roots(&locator, &primes, n, d, l).ok_or_else(|| {
        Error::InterpolationFailure("term locator does not split into distinct positive integer roots".into())
    })?;
    let mut monos = Vec::with_capacity(l);
    for r in &roots {
        match exponents_of(r, &primes) {
            Some(e) if e.iter().sum::<u32>() <= d => monos.push(e),
            _ => return fail(format!("locator root {r} is not a monomial of degree <= {d}")),
        }
    }
    let bq: Vec<Q> = roots.iter().map(|r| Q::from_integer(r.clone())).collect();
    let coeffs = solve_transposed_vandermonde(&bq, &values[..l])
        .ok_or_else(|| Error::InterpolationFailure("singular Vandermonde system".into()))?;
    let f = SparsePoly::from_terms(n, monos.into_iter().zip(coeffs));
    let plan = interpolation_plan(s, n, d);
    if plan.evaluate(&f) != values {
        return fail("recovered polynomial does not reproduce the values".into());
    }
    Ok(f)
}

/// Roots of the locator: candidate monomial values first, full factorization otherwise.
fn locator_roots(locator: &[Q], primes: &[u64], n: usize, d: u32, l: usize) -> Option<Vec<BigInt>> {
    let small = (1..=d as usize).try_fold(1usize, |acc, k| acc.checked_mul(n + k).map(|x| x / k));
    if matches!(small, Some(c) if c <= 50_000) {
        let cands: Vec<BigInt> = monomials_up_to(n, d)
            .into_iter()
            .map(|e| e.iter().zip(primes).fold(BigInt::one(), |acc, (&k, &p)| acc * num_traits::pow::pow(BigInt::from(p), k as usize)))
            .collect();
        let hits: Vec<BigInt> = cands.into_iter().filter(|b| horner(locator, &Q::from_integer(b.clone())).is_zero()).collect();
        if hits.len() == l {
            return Some(hits);
        }
    }
    let roots = univariate::integer_roots(locator)?;
    (roots.len() == l).then_some(roots)
}

/// Monomial helper for tests and callers building interpolation inputs.
pub fn monomial_value(e: &Monomial, point: &[Q]) -> Q {
    e.0.iter().zip(point).fold(Q::one(), |acc, (&k, x)| acc * num_traits::pow::pow(x.clone(), k as usize))
}
