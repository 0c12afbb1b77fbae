//! Isolating primes, the weighted substitution `z_i -> y^{w_i}` and the three-variable
//! projection `Psi(g) = g(x, y^{w_1} t + y^{w'_1}, ..., y^{w_n} t + y^{w'_n})`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::config::Config;
use crate::dense::DensePoly3;
use crate::error::{Error, Result};
use crate::factor::modarith::is_prime_u64;
use crate::poly::{Monomial, SparsePoly};
use crate::rational::Q;

/// Weights `w_i = (delta+1)^(i-1) mod p` that separate all monomials of degree at most `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationScheme {
    pub n: usize,
    pub delta: u32,
    pub p: u64,
    pub w: Vec<u64>,
    pub w_prime: Vec<u64>,
    /// y-exponent under `w` -> exponent vector, over all monomials of degree <= delta.
    table: HashMap<u64, Vec<u32>>,
    /// Same for `w'`.
    table_prime: HashMap<u64, Vec<u32>>,
}

#[derive(Serialize)]
struct SchemeJson<'a> {
    n: usize,
    delta: u32,
    p: u64,
    w: &'a [u64],
    w_prime: &'a [u64],
}

/// All exponent vectors in `n` variables with total degree at most `delta`.
pub fn monomials_up_to(n: usize, delta: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, delta, &mut vec![0; n], &mut out);
    out
}

/// Number of monomials of degree at most `delta` in `n` variables, saturating.
fn monomial_count(n: usize, delta: u32) -> usize {
    // binom(n + delta, delta)
    let mut c: u128 = 1;
    for k in 1..=delta as u128 {
        c = c * (n as u128 + k) / k;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

fn weights(count: usize, delta: u32, p: u64) -> Vec<u64> {
    let mut w = Vec::with_capacity(count);
    let mut cur = 1 % p;
    for _ in 0..count {
        w.push(cur);
        cur = ((cur as u128 * (delta as u128 + 1)) % p as u128) as u64;
    }
    w
}

fn dot(e: &[u32], w: &[u64]) -> u64 {
    e.iter().zip(w).map(|(&a, &b)| a as u64 * b).sum()
}

/// Whether `e -> sum e_i w_i mod p` is injective on the given exponent vectors.
pub fn is_injective(monos: &[Vec<u32>], w: &[u64], p: u64) -> bool {
    let mut seen = HashSet::with_capacity(monos.len());
    monos.iter().all(|e| seen.insert(dot(e, w) % p))
}

/// Exhaustive pairwise form of [`is_injective`], for cross-checking.
pub fn is_injective_pairwise(monos: &[Vec<u32>], w: &[u64], p: u64) -> bool {
    for (i, a) in monos.iter().enumerate() {
        for b in &monos[i + 1..] {
            if dot(a, w) % p == dot(b, w) % p {
                return false;
            }
        }
    }
    true
}

/// Smallest prime `p >= max(2, extra_capacity)` whose weights are injective on monomials of
/// degree at most `delta` in `n` variables.
fn scan_prime(n: usize, delta: u32, extra_capacity: u64, max_monomials: usize) -> Result<(u64, Vec<u64>)> {
    if n == 0 || delta == 0 {
        return Err(Error::Config("isolation needs n >= 1 and delta >= 1".into()));
    }
    let count = monomial_count(n, delta);
    if count > max_monomials {
        return Err(Error::Cap(format!(
            "{count} monomials of degree <= {delta} in {n} variables exceed max_scheme_monomials = {max_monomials}"
        )));
    }
    let monos = monomials_up_to(n, delta);
    // ((delta+1)^3 n^(2 delta + 1))^2, saturating; only a safety ceiling.
    let ceiling = {
        let base = (delta as f64 + 1.0).powi(3) * (n as f64).powi(2 * delta as i32 + 1);
        (base * base).min(1e18) as u64
    };
    let mut p = extra_capacity.max(2);
    loop {
        if p > ceiling.max(1 << 20) {
            return Err(Error::Internal(format!("no isolating prime below {p}")));
        }
        if is_prime_u64(p) {
            let w = weights(n, delta, p);
            if is_injective(&monos, &w, p) {
                return Ok((p, w));
            }
        }
        p += 1;
    }
}

fn table_for(n: usize, delta: u32, w: &[u64]) -> HashMap<u64, Vec<u32>> {
    monomials_up_to(n, delta).into_iter().map(|e| (dot(&e, w), e)).collect()
}

/// Isolating scheme for `n` variables and degree bound `delta`; `w'` equals `w`.
pub fn find_isolating_prime(n: usize, delta: u32, extra_capacity: u64) -> Result<IsolationScheme> {
    find_isolating_prime_capped(n, delta, extra_capacity, Config::default().max_scheme_monomials)
}

pub fn find_isolating_prime_capped(n: usize, delta: u32, extra_capacity: u64, max_monomials: usize) -> Result<IsolationScheme> {
    let (p, w) = scan_prime(n, delta, extra_capacity, max_monomials)?;
    let table = table_for(n, delta, &w);
    Ok(IsolationScheme { n, delta, p, w: w.clone(), w_prime: w, table_prime: table.clone(), table })
}

impl IsolationScheme {
    /// Scheme for the projection: one isolating instance over `2n` variables, split into the
    /// first `n` weights `w` and the last `n` weights `w'`.
    ///
    /// The degree bound of the joint instance is `cfg.psi_scheme_degree` (default `delta`).
    pub fn for_projection(n: usize, delta: u32, cfg: &Config) -> Result<IsolationScheme> {
        if delta > cfg.max_delta {
            return Err(Error::Cap(format!("delta = {delta} exceeds max_delta = {}", cfg.max_delta)));
        }
        let joint = cfg.psi_scheme_degree.unwrap_or(delta).max(delta);
        let (p, all) = scan_prime(2 * n, joint, 1, cfg.max_scheme_monomials)?;
        let w = all[..n].to_vec();
        let w_prime = all[n..].to_vec();
        Ok(IsolationScheme {
            n,
            delta,
            p,
            table: table_for(n, delta, &w),
            table_prime: table_for(n, delta, &w_prime),
            w,
            w_prime,
        })
    }

    pub fn max_weight(&self) -> u64 {
        self.w.iter().chain(&self.w_prime).copied().max().unwrap_or(0)
    }

    /// Re-checks injectivity of both weight vectors on monomials of degree <= delta.
    pub fn verify(&self) -> bool {
        let monos = monomials_up_to(self.n, self.delta);
        is_injective_pairwise(&monos, &self.w, self.p) && is_injective_pairwise(&monos, &self.w_prime, self.p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SchemeJson { n: self.n, delta: self.delta, p: self.p, w: &self.w, w_prime: &self.w_prime })
            .expect("plain data")
    }
}

/// Splits `f` into `(k, e, c)` = `(x-degree, z-exponents, coefficient)`; with `has_x` the
/// first variable is `x`.
fn split_x(f: &SparsePoly, has_x: bool) -> impl Iterator<Item = (u32, &[u32], &Q)> {
    f.terms().map(move |(m, c)| if has_x { (m.0[0], &m.0[1..], c) } else { (0, &m.0[..], c) })
}

fn check_arity(f: &SparsePoly, n: usize) -> Result<bool> {
    if f.nvars() == n {
        Ok(false)
    } else if f.nvars() == n + 1 {
        Ok(true)
    } else {
        Err(Error::VariableCountMismatch { left: f.nvars(), right: n })
    }
}

/// `z_i -> y^{w_i}`. A polynomial in `n` variables maps to one in `y`; a polynomial in
/// `(x, z_1..z_n)` maps to one in `(x, y)`.
pub fn apply_phi(f: &SparsePoly, scheme: &IsolationScheme) -> Result<SparsePoly> {
    let has_x = check_arity(f, scheme.n)?;
    let nv = if has_x { 2 } else { 1 };
    let mut out = SparsePoly::zero(nv);
    for (k, e, c) in split_x(f, has_x) {
        let j = dot(e, &scheme.w) as u32;
        let m = if has_x { vec![k, j] } else { vec![j] };
        out.add_term(Monomial(m), c.clone());
    }
    Ok(out)
}

/// Inverse of [`apply_phi`] on polynomials of degree at most `delta`.
pub fn recover_from_phi(h: &SparsePoly, scheme: &IsolationScheme, delta: u32) -> Result<SparsePoly> {
    let has_x = match h.nvars() {
        1 => false,
        2 => true,
        n => return Err(Error::VariableCountMismatch { left: n, right: 1 }),
    };
    let n = scheme.n;
    let mut out = SparsePoly::zero(if has_x { n + 1 } else { n });
    for (m, c) in h.terms() {
        let (k, j) = if has_x { (m.0[0], m.0[1]) } else { (0, m.0[0]) };
        let e = scheme
            .table
            .get(&(j as u64))
            .ok_or_else(|| Error::NotInCodomain(format!("y^{j} is not the image of a monomial of degree <= {}", scheme.delta)))?;
        let deg: u32 = k + e.iter().sum::<u32>();
        if deg > delta {
            return Err(Error::NotInCodomain(format!("preimage of y^{j} has degree {deg} > {delta}")));
        }
        let mut v = Vec::with_capacity(out.nvars());
        if has_x {
            v.push(k);
        }
        v.extend_from_slice(e);
        out.add_term(Monomial(v), c.clone());
    }
    Ok(out)
}

/// Grid dimensions of `Psi(f)` for `f` in `(x, z_1..z_n)`.
pub fn psi_dims(f: &SparsePoly, scheme: &IsolationScheme) -> [usize; 3] {
    let mut d = [0usize; 3];
    for (m, _) in f.terms() {
        let e = &m.0[1..];
        d[0] = d[0].max(m.0[0] as usize);
        let y: u64 = e.iter().zip(scheme.w.iter().zip(&scheme.w_prime)).map(|(&k, (&a, &b))| k as u64 * a.max(b)).sum();
        d[1] = d[1].max(y as usize);
        d[2] = d[2].max(e.iter().sum::<u32>() as usize);
    }
    d
}

fn binomials(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 0..n {
        let next = &row[k as usize] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Dense image `Psi(f)` of a polynomial in `(x, z_1..z_n)`.
pub fn psi_map(f: &SparsePoly, scheme: &IsolationScheme, cfg: &Config) -> Result<DensePoly3> {
    if f.nvars() != scheme.n + 1 {
        return Err(Error::VariableCountMismatch { left: f.nvars(), right: scheme.n + 1 });
    }
    let dims = psi_dims(f, scheme);
    let cells = (dims[0] + 1).saturating_mul(dims[1] + 1).saturating_mul(dims[2] + 1);
    if cells > cfg.max_dense_cells {
        return Err(Error::Cap(format!(
            "projection grid {}x{}x{} = {cells} cells exceeds max_dense_cells = {}",
            dims[0] + 1,
            dims[1] + 1,
            dims[2] + 1,
            cfg.max_dense_cells
        )));
    }
    let mut out = DensePoly3::zero(dims);
    let mut binom_cache: HashMap<u32, Vec<BigInt>> = HashMap::new();
    for (m, c) in f.terms() {
        let k = m.0[0] as usize;
        // Product over i of (y^{w_i} t + y^{w'_i})^{e_i}, as a sparse map (y, t) -> integer.
        let mut acc: Vec<((u64, u32), BigInt)> = vec![((0, 0), BigInt::from(1))];
        for (i, &e) in m.0[1..].iter().enumerate() {
            if e == 0 {
                continue;
            }
            let row = binom_cache.entry(e).or_insert_with(|| binomials(e)).clone();
            let mut next: HashMap<(u64, u32), BigInt> = HashMap::new();
            for ((y, t), a) in &acc {
                for (j, b) in row.iter().enumerate() {
                    let j = j as u32;
                    let key = (y + j as u64 * scheme.w[i] + (e - j) as u64 * scheme.w_prime[i], t + j);
                    *next.entry(key).or_insert_with(BigInt::zero) += a * b;
                }
            }
            acc = next.into_iter().collect();
        }
        for ((y, t), a) in acc {
            out.add_at(k, y as usize, t as usize, &(c * Q::from_integer(a)));
        }
    }
    Ok(out.trimmed())
}

/// Inverse of [`psi_map`] on polynomials monic in `x` of degree at most `delta`: reads the
/// `t = 0` slice through the `w'` table, then verifies the candidate maps back to `h`.
pub fn psi_invert(h: &DensePoly3, scheme: &IsolationScheme, delta: u32, cfg: &Config) -> Result<SparsePoly> {
    let n = scheme.n;
    let mut g = SparsePoly::zero(n + 1);
    for (e, c) in h.nonzero() {
        if e[2] != 0 {
            continue;
        }
        let z = scheme
            .table_prime
            .get(&(e[1] as u64))
            .ok_or_else(|| Error::NotInCodomain(format!("y^{} is not the image of a monomial of degree <= {}", e[1], scheme.delta)))?;
        let deg = e[0] as u32 + z.iter().sum::<u32>();
        if deg > delta {
            return Err(Error::NotInCodomain(format!("candidate term has degree {deg} > {delta}")));
        }
        let mut v = vec![e[0] as u32];
        v.extend_from_slice(z);
        g.add_term(Monomial(v), c.clone());
    }
    if g.is_zero() {
        return Err(Error::NotInCodomain("empty t = 0 slice".into()));
    }
    let back = psi_map(&g, scheme, cfg)?;
    if back != h.trimmed() {
        return Err(Error::NotInCodomain("projection of the candidate differs".into()));
    }
    Ok(g)
}
