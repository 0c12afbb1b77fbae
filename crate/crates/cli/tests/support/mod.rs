//! Shared pieces for the acceptance run: random constructions, an irreducibility
//! certificate that does not touch the library factorizer, and the division gate.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparsefac::{Monomial, SparsePoly};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn nonzero(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    loop {
        let c = rng.gen_range(-r..=r);
        if c != 0 {
            return c;
        }
    }
}

/// Exponent vectors of total degree exactly `k` in `n` variables.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Random polynomial with up to `terms` terms of degree at most `d` (exactly `d` in one term).
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: u32, terms: usize) -> SparsePoly {
    loop {
        let mut f = SparsePoly::zero(n);
        let top = monomials_of_degree(n, d);
        f.add_term(Monomial(top[rng.gen_range(0..top.len())].clone()), q(nonzero(rng, 3)));
        for _ in 1..terms {
            let k = rng.gen_range(0..=d);
            let ms = monomials_of_degree(n, k);
            f.add_term(Monomial(ms[rng.gen_range(0..ms.len())].clone()), q(nonzero(rng, 3)));
        }
        if f.degree() == d {
            return f;
        }
    }
}

/// Rank of a rational matrix.
pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// A quadratic whose homogenization has rank at least 3 is irreducible even over C.
pub fn quadratic_certified(g: &SparsePoly) -> bool {
    if g.degree() != 2 {
        return false;
    }
    let n = g.nvars() + 1;
    let mut m = vec![vec![Q::zero(); n]; n];
    let half = Q::new(1.into(), 2.into());
    for (mono, c) in g.terms() {
        let mut idx: Vec<usize> = Vec::new();
        for (i, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                idx.push(i + 1);
            }
        }
        while idx.len() < 2 {
            idx.push(0);
        }
        let (a, b) = (idx[0], idx[1]);
        if a == b {
            m[a][a] += c;
        } else {
            m[a][b] += c * &half;
            m[b][a] += c * &half;
        }
    }
    rank(m) >= 3
}

/// Random irreducible of degree 1 or 2 in `n` variables, with a certificate.
pub fn random_low_irreducible(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> SparsePoly {
    loop {
        let terms = rng.gen_range(2..=5);
        let g = random_poly(rng, n, deg, terms);
        if g.is_constant() {
            continue;
        }
        let univariate_ok = n == 1 && univariate_irreducible_by_patterns(&g.to_univariate(0).unwrap()) == Some(true);
        if deg == 1 || quadratic_certified(&g) || univariate_ok {
            return g.canonical().1;
        }
    }
}

/// Degree-3 irreducible: `c z_j + q(other variables)` with `deg q = 3`, which is primitive
/// of degree one in `z_j`, or a sum of univariates in three variables.
pub fn random_cubic_irreducible(rng: &mut ChaCha8Rng, n: usize) -> SparsePoly {
    if n >= 3 && rng.gen_bool(0.5) {
        let vars = pick_distinct(rng, n, 3);
        let mut h = SparsePoly::zero(n);
        for (k, &v) in vars.iter().enumerate() {
            let d = if k == 0 { 3 } else { rng.gen_range(1..=3) };
            h = &h + &univariate_in(rng, n, v, d);
        }
        return h.canonical().1;
    }
    let j = rng.gen_range(0..n);
    loop {
        let mut h = SparsePoly::zero(n);
        h.add_term(Monomial::var(n, j), q(nonzero(rng, 3)));
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(0..=3u32);
            let mut e = vec![0u32; n];
            let others: Vec<usize> = (0..n).filter(|&v| v != j).collect();
            for _ in 0..k {
                e[others[rng.gen_range(0..others.len())]] += 1;
            }
            h.add_term(Monomial(e), q(nonzero(rng, 3)));
        }
        if h.degree() == 3 && h.degree_in(j) == 1 {
            return h.canonical().1;
        }
    }
}

pub fn pick_distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        v.swap(i, j);
    }
    v.truncate(k);
    v
}

/// Random univariate polynomial in variable `v`, degree exactly `d`, no constant term.
pub fn univariate_in(rng: &mut ChaCha8Rng, n: usize, v: usize, d: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(n);
    for k in 1..=d {
        if k == d || rng.gen_bool(0.5) {
            let mut e = vec![0u32; n];
            e[v] = k;
            p.add_term(Monomial(e), q(nonzero(rng, 3)));
        }
    }
    p
}

pub fn product(n: usize, fs: &[(SparsePoly, u32)]) -> SparsePoly {
    fs.iter().fold(SparsePoly::one(n), |acc, (g, e)| &acc * &g.pow(*e))
}

/// `(canonical factor, exponent)` sorted, for comparing lists.
pub fn normalized(fs: &[(SparsePoly, u32)]) -> Vec<(SparsePoly, u32)> {
    let mut v: Vec<(SparsePoly, u32)> = fs.iter().map(|(g, e)| (g.canonical().1, *e)).collect();
    v.sort();
    v
}

// ---- independent irreducibility certificate ----

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn deg(a: &[u64]) -> usize {
    a.len() - 1
}

fn is_zero_p(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = deg(m);
    let inv = powmod(m[dm], p - 2, p);
    while r.len() > dm && !is_zero_p(&r) {
        let k = r.len() - 1;
        let c = (r[k] as u128 * inv as u128 % p as u128) as u64;
        if c != 0 {
            for i in 0..=dm {
                let s = (c as u128 * m[i] as u128 % p as u128) as u64;
                r[k - dm + i] = (r[k - dm + i] + p - s) % p;
            }
        }
        r.pop();
    }
    trim(if r.is_empty() { vec![0] } else { r })
}

fn quo(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = deg(m);
    if r.len() <= dm {
        return vec![0];
    }
    let mut qv = vec![0u64; r.len() - dm];
    let inv = powmod(m[dm], p - 2, p);
    for k in (dm..r.len()).rev() {
        let c = (r[k] as u128 * inv as u128 % p as u128) as u64;
        qv[k - dm] = c;
        for i in 0..=dm {
            let s = (c as u128 * m[i] as u128 % p as u128) as u64;
            r[k - dm + i] = (r[k - dm + i] + p - s) % p;
        }
    }
    trim(qv)
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    rem(&out, m, p)
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_p(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Degrees of the irreducible factors of a squarefree `f` mod `p`.
fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let x = vec![0, 1];
    let mut h = rem(&x, &f, p);
    let mut i = 1;
    while deg(&f) >= 2 * i {
        let mut hp = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                hp = mulmod(&hp, &base, &f, p);
            }
            base = mulmod(&base, &base, &f, p);
            e >>= 1;
        }
        h = hp;
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let g = gcd_p(&f, &trim(hx), p);
        if deg(&g) > 0 {
            for _ in 0..deg(&g) / i {
                out.push(i);
            }
            f = quo(&f, &g, p);
            h = rem(&h, &f, p);
        }
        i += 1;
    }
    if deg(&f) > 0 {
        out.push(deg(&f));
    }
    out
}

fn subset_sums(ds: &[usize]) -> Vec<bool> {
    let total: usize = ds.iter().sum();
    let mut can = vec![false; total + 1];
    can[0] = true;
    for &d in ds {
        for s in (d..=total).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 101u64;
    while out.len() < count {
        if (2..c).take_while(|k| k * k <= c).all(|k| c % k != 0) {
            out.push(c);
        }
        c += 2;
    }
    out
}

/// Irreducibility of a univariate rational polynomial (ascending coefficients) from factor
/// degree patterns mod several primes. `None` when no pattern rules out a proper factor.
pub fn univariate_irreducible_by_patterns(coeffs: &[Q]) -> Option<bool> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return None;
    }
    if d == 1 {
        return Some(true);
    }
    let den = sparsefac::rational::lcm_denoms(c.iter());
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let mut possible = vec![true; d + 1];
    let mut used = 0;
    for p in small_primes(80) {
        let pb = BigInt::from(p);
        let red: Vec<u64> = ints.iter().map(|a| ((a % &pb + &pb) % &pb).to_u64().unwrap()).collect();
        if red[d] == 0 {
            continue;
        }
        let f = trim(red);
        let df: Vec<u64> = (1..f.len()).map(|i| (f[i] as u128 * i as u128 % p as u128) as u64).collect();
        if deg(&gcd_p(&f, &trim(df), p)) > 0 {
            continue;
        }
        let can = subset_sums(&factor_degrees(&f, p));
        for k in 1..d {
            possible[k] &= can[k];
        }
        used += 1;
        if (1..d).all(|k| !possible[k]) {
            return Some(true);
        }
        if used >= 40 {
            break;
        }
    }
    if d <= 5 {
        return kronecker_irreducible(&ints);
    }
    None
}

fn eval_int(c: &[BigInt], x: i64) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn positive_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    out
}

/// Remainder of `a` by `b` over Q (ascending coefficients).
fn rem_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] / &b[db];
        for i in 0..=db {
            let v = &c * &b[i];
            r[k - db + i] -= v;
        }
        r.pop();
    }
    r
}

/// Kronecker's method: `Some(true)` when no factor of degree `1..=deg/2` exists.
/// `None` when the values at the sample points are too large to enumerate divisors.
fn kronecker_irreducible(c: &[BigInt]) -> Option<bool> {
    let d = c.len() - 1;
    let m = d / 2;
    let mut pts: Vec<(i64, BigInt)> = Vec::new();
    for k in (0..40i64).flat_map(|k| [k, -k - 1]) {
        let v = eval_int(c, k);
        if !v.is_zero() {
            pts.push((k, v));
        }
    }
    pts.sort_by_key(|(_, v)| v.magnitude().clone());
    pts.truncate(m + 1);
    let mut divs: Vec<Vec<i64>> = Vec::new();
    for (_, v) in &pts {
        let a = v.magnitude().to_u64().filter(|&a| a <= 1_000_000_000_000)?;
        divs.push(positive_divisors(a).into_iter().map(|x| x as i64).collect());
    }
    let f: Vec<Q> = c.iter().cloned().map(Q::from_integer).collect();
    for deg_h in 1..=m {
        let use_pts = &pts[..deg_h + 1];
        let mut idx = vec![0usize; deg_h + 1];
        let mut signs = 0u32;
        loop {
            // First value positive: h and -h are the same factor.
            let vals: Vec<i64> = (0..=deg_h)
                .map(|i| {
                    let v = divs[i][idx[i]];
                    if i > 0 && (signs >> (i - 1)) & 1 == 1 { -v } else { v }
                })
                .collect();
            let h = lagrange(use_pts.iter().map(|p| p.0).collect::<Vec<_>>().as_slice(), &vals);
            if h.len() == deg_h + 1 && rem_q(&f, &h).iter().all(|x| x.is_zero()) {
                return Some(false);
            }
            signs += 1;
            if signs < (1 << deg_h) {
                continue;
            }
            signs = 0;
            let mut i = 0;
            loop {
                if i > deg_h {
                    break;
                }
                idx[i] += 1;
                if idx[i] < divs[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i > deg_h {
                break;
            }
        }
    }
    Some(true)
}

/// Interpolating polynomial through `(xs[i], ys[i])`, trimmed, ascending.
fn lagrange(xs: &[i64], ys: &[i64]) -> Vec<Q> {
    let n = xs.len();
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        let mut basis = vec![q(1)];
        let mut denom = q(1);
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * q(xs[j]);
            }
            basis = next;
            denom *= q(xs[i] - xs[j]);
        }
        let s = q(ys[i]) / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * &s;
        }
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// Irreducibility certificate for a multivariate polynomial: a line `z = c u + e` with
/// `Hom[g](c) != 0` whose restriction is irreducible shows `g` is irreducible.
pub fn certify_irreducible(g: &SparsePoly, rng: &mut ChaCha8Rng) -> bool {
    let n = g.nvars();
    let d = g.degree();
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let top = g.hom_component(d);
    for _ in 0..40 {
        let c: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-4..=4))).collect();
        if top.eval(&c).is_zero() {
            continue;
        }
        let e: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-4..=4))).collect();
        let images: Vec<SparsePoly> = (0..n)
            .map(|i| {
                let mut img = SparsePoly::zero(1);
                img.add_term(Monomial(vec![1]), c[i].clone());
                img.add_term(Monomial(vec![0]), e[i].clone());
                img
            })
            .collect();
        let r = g.substitute(&images);
        let coeffs = r.to_univariate(0).expect("one variable");
        if univariate_irreducible_by_patterns(&coeffs) == Some(true) {
            return true;
        }
    }
    false
}

/// Collects every emitted `(g, e)` with its input and checks `g^e | f`, `g^(e+1) ∤ f`.
#[derive(Default)]
pub struct Gate {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Gate {
    pub fn check(&mut self, f: &SparsePoly, g: &SparsePoly, e: u32) {
        self.checked += 1;
        let ok = e >= 1
            && f.exact_divide(&g.pow(e)).map(|r| r.is_some()).unwrap_or(false)
            && f.exact_divide(&g.pow(e + 1)).map(|r| r.is_none()).unwrap_or(false);
        if !ok {
            self.violations.push(format!("{g} ^ {e} against {f}"));
        }
    }

    pub fn check_all(&mut self, f: &SparsePoly, fs: &[(SparsePoly, u32)]) {
        for (g, e) in fs {
            self.check(f, g, *e);
        }
    }
}
