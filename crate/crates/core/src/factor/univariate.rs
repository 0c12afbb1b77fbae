//! Univariate factorization over the rationals.
//!
//! Squarefree decomposition (Yun) over Q, then for each squarefree part:
//! Berlekamp modulo a small prime, multifactor quadratic Hensel lifting over
//! the integers and recombination of lifted factors by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modarith::{small_primes, ModArith, Plain};
use super::zpoly;
use crate::rational::Q;

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<Q>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

pub fn qtrim(mut a: QPoly) -> QPoly {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with a positive leading coefficient.
pub fn primitive(a: &[BigInt]) -> ZPoly {
    let a = ztrim(a.to_vec());
    if a.is_empty() {
        return a;
    }
    let mut c = content(&a);
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

/// Writes `f = scalar * F` with `F` primitive over Z and `lc(F) > 0`.
pub fn q_to_z(f: &[Q]) -> (Q, ZPoly) {
    let f = qtrim(f.to_vec());
    if f.is_empty() {
        return (Q::zero(), Vec::new());
    }
    let l = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = f.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let prim = primitive(&ints);
    let scalar = &f.last().unwrap().clone() / Q::from_integer(prim.last().unwrap().clone());
    (scalar, prim)
}

fn z_to_monic_q(a: &[BigInt]) -> QPoly {
    let lc = Q::from_integer(a.last().unwrap().clone());
    a.iter().map(|c| Q::from_integer(c.clone()) / &lc).collect()
}

fn zderiv(a: &[BigInt]) -> ZPoly {
    a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Pseudo-remainder of `a` by `b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, y) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * y;
        }
        r = ztrim(r);
    }
    r
}

/// Primitive gcd over Z with positive leading coefficient.
pub fn zgcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive(&prem(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// Exact quotient `a / b` over Z, or `None` if `b` does not divide `a` over Z.
pub fn zdivexact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let a = ztrim(a.to_vec());
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rest) = r[k + db].div_rem(lb);
        if !rest.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[k + j] -= &c * y;
            }
        }
        q[k] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Squarefree decomposition over Q: monic `P_k` with `f = lc * prod P_k^k`.
pub fn yun_q(f: &[Q]) -> Vec<(QPoly, u32)> {
    let (_, fz) = q_to_z(f);
    if fz.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let d = zderiv(&fz);
    let a0 = zgcd(&fz, &d);
    // b and c must carry the same rational scale for c - b' to be meaningful.
    let (mut b, mut c) = div_pair(&fz, &d, &a0);
    let mut k = 1;
    loop {
        let dd = zsub(&c, &zderiv(&b));
        let a = if dd.iter().all(|x| x.is_zero()) { primitive(&b) } else { zgcd(&b, &dd) };
        if a.len() > 1 {
            out.push((z_to_monic_q(&a), k));
        }
        let (nb, nc) = div_pair(&b, &dd, &a);
        if nb.len() <= 1 {
            break;
        }
        b = nb;
        c = nc;
        k += 1;
    }
    out
}

/// `(u / a, v / a)` over Q with one common scale, reduced by the joint content.
fn div_pair(u: &[BigInt], v: &[BigInt], a: &[BigInt]) -> (ZPoly, ZPoly) {
    let lb = a.last().unwrap().abs();
    let e = u.len().max(v.len()).saturating_sub(a.len()) + 1;
    let scale = num_traits::pow::pow(lb, e);
    let div = |x: &[BigInt]| -> ZPoly {
        let x = ztrim(x.to_vec());
        if x.is_empty() {
            return x;
        }
        let scaled: ZPoly = x.iter().map(|c| c * &scale).collect();
        zdivexact(&scaled, a).expect("exact division over Q")
    };
    let mut p = div(u);
    let mut q = div(v);
    let g = p.iter().chain(q.iter()).fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut().chain(q.iter_mut()) {
            *c /= &g;
        }
    }
    (p, q)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(x - y);
    }
    ztrim(out)
}

fn reduce_mod<F: ModArith>(f: &F, a: &[BigInt]) -> zpoly::Poly {
    zpoly::trim(a.iter().map(|c| f.from_bigint(c)).collect())
}

/// Berlekamp factorization of a monic squarefree polynomial over a small prime field.
pub fn berlekamp<F: ModArith>(f: &F, u: &[u64]) -> Vec<zpoly::Poly> {
    let n = u.len() - 1;
    if n <= 1 {
        return vec![u.to_vec()];
    }
    let p = f.modulus();
    let x = vec![0, f.one()];
    let xp = zpoly::powmod(f, &x, p, u);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = vec![f.one()];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = zpoly::rem(f, &zpoly::mul(f, &cur, &xp), u);
    }
    // a[j][i] = Q[i][j] - delta_ij; nullspace vectors are coefficient vectors of g with g^p = g.
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { f.sub(rows[i][j], f.one()) } else { rows[i][j] }).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..n).find(|&i| a[i][col] != 0) else { continue };
        a.swap(r, piv);
        let inv = f.inv(a[r][col]);
        for c in 0..n {
            a[r][c] = f.mul(a[r][c], inv);
        }
        for i in 0..n {
            if i != r && a[i][col] != 0 {
                let m = a[i][col];
                for c in 0..n {
                    let v = f.mul(m, a[r][c]);
                    a[i][c] = f.sub(a[i][c], v);
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let k = free.len();
    if k == 1 {
        return vec![u.to_vec()];
    }
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u64; n];
        v[fc] = f.one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(a[row][fc]);
        }
        basis.push(zpoly::trim(v));
    }
    let mut factors = vec![u.to_vec()];
    for v in basis.iter().filter(|v| v.len() > 1) {
        if factors.len() == k {
            break;
        }
        let mut next = Vec::new();
        for w in factors {
            if w.len() <= 2 {
                next.push(w);
                continue;
            }
            let mut w = w;
            for s in 0..p {
                if w.len() <= 2 {
                    break;
                }
                let mut vs = v.clone();
                vs[0] = f.sub(vs[0], f.enter(s));
                let g = zpoly::gcd(f, &w, &zpoly::trim(vs));
                if g.len() > 1 && g.len() < w.len() {
                    w = zpoly::divrem(f, &w, &g).0;
                    next.push(g);
                }
            }
            next.push(w);
        }
        factors = next;
    }
    factors.sort();
    factors
}

fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

fn pmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| modp(c, m)).collect())
}

fn pmul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    pmod(&zmul(a, b), m)
}

fn padd_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    pmod(&v, m)
}

fn psub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let v: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    pmod(&v, m)
}

/// Division by a monic polynomial modulo `m`.
fn pdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = pmod(a, m);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[k + j] = modp(&(&r[k + j] - &c * y), m);
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (ztrim(q), ztrim(r))
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible leading coefficient");
    e.x.mod_floor(m)
}

/// One quadratic Hensel step: inputs valid mod `m`, outputs valid mod `m2` (with `m2 | m^2`).
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = psub_mod(f, &pmul_mod(g, h, m2), m2);
    let (q, r) = pdivrem_monic(&pmul_mod(s, &e, m2), h, m2);
    let g2 = padd_mod(&padd_mod(g, &pmul_mod(t, &e, m2), m2), &pmul_mod(&q, g, m2), m2);
    let h2 = padd_mod(h, &r, m2);
    let b = psub_mod(
        &padd_mod(&pmul_mod(s, &g2, m2), &pmul_mod(t, &h2, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let (c, d) = pdivrem_monic(&pmul_mod(s, &b, m2), &h2, m2);
    let s2 = psub_mod(s, &d, m2);
    let t2 = psub_mod(&psub_mod(t, &pmul_mod(t, &b, m2), m2), &pmul_mod(&c, &g2, m2), m2);
    (g2, h2, s2, t2)
}

fn to_z(f: &Plain, a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(f.leave(c))).collect()
}

/// Lifts monic factors `fs` of `target` mod p to monic factors mod `pk`.
fn multifactor_lift(target: &[BigInt], fs: &[zpoly::Poly], field: &Plain, pk: &BigInt) -> Vec<ZPoly> {
    let p = BigInt::from(field.modulus());
    if fs.len() == 1 {
        let lc_inv = inv_mod(target.last().unwrap(), pk);
        return vec![pmod(&target.iter().map(|c| c * &lc_inv).collect::<ZPoly>(), pk)];
    }
    let mid = fs.len() / 2;
    let lc = field.from_bigint(target.last().unwrap());
    let mut g0 = vec![lc];
    for u in &fs[..mid] {
        g0 = zpoly::mul(field, &g0, u);
    }
    let mut h0 = vec![field.one()];
    for u in &fs[mid..] {
        h0 = zpoly::mul(field, &h0, u);
    }
    let (one, s0, t0) = zpoly::xgcd(field, &g0, &h0);
    debug_assert_eq!(one, vec![field.one()]);
    let (mut g, mut h, mut s, mut t) = (to_z(field, &g0), to_z(field, &h0), to_z(field, &s0), to_z(field, &t0));
    let mut m = p.clone();
    while &m < pk {
        let m2 = (&m * &m).min(pk.clone());
        let step = hensel_step(target, &g, &h, &s, &t, &m2);
        g = step.0;
        h = step.1;
        s = step.2;
        t = step.3;
        m = m2;
    }
    let mut out = multifactor_lift(&g, &fs[..mid], field, pk);
    out.extend(multifactor_lift(&h, &fs[mid..], field, pk));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) < n {
        r + 1
    } else {
        r
    }
}

/// Irreducible factors over Z of a primitive squarefree polynomial with positive leading coefficient.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // Try a few good primes and keep the one with the fewest modular factors.
    let mut best: Option<(Plain, Vec<zpoly::Poly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if p >= 1 << 31 {
            break;
        }
        let field = Plain::new(p);
        if field.from_bigint(&lc) == 0 {
            continue;
        }
        let fp = zpoly::monic(&field, &reduce_mod(&field, f));
        if !zpoly::is_squarefree(&field, &fp) {
            continue;
        }
        let fs = berlekamp(&field, &fp);
        if fs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map(|(_, b)| fs.len() < b.len()).unwrap_or(true) {
            best = Some((field, fs));
        }
        tried += 1;
        if tried >= 3 {
            break;
        }
    }
    let (field, fs) = best.expect("a squarefree reduction exists");
    let p = BigInt::from(field.modulus());
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * isqrt_ceil(&norm2) * lc.abs() * 2 + 1;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
    }
    let lifted = multifactor_lift(f, &fs, &field, &pk);
    recombine(f, lifted, &pk)
}

fn recombine(f: &[BigInt], lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in subsets(remaining.len(), size) {
            // Degree filter avoids most trial divisions.
            let d: usize = subset.iter().map(|&i| remaining[i].len() - 1).sum();
            if d >= current.len() - 1 {
                continue;
            }
            let lc = current.last().unwrap().clone();
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = pmul_mod(&g, &remaining[i], pk);
            }
            let g = primitive(&symmetric(&g, pk));
            if let Some(q) = zdivexact(&current, &g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                current = primitive(&q);
                let mut k = 0;
                remaining.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
            }
            None => size += 1,
        }
    }
    if current.len() > 1 {
        found.push(current);
    }
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Factorization over Q: `f = scalar * prod g_i^{e_i}` with monic irreducible `g_i`,
/// sorted by degree then coefficients.
pub fn factor_q(f: &[Q]) -> (Q, Vec<(QPoly, u32)>) {
    let f = qtrim(f.to_vec());
    let scalar = f.last().cloned().unwrap_or_else(Q::zero);
    let mut out = Vec::new();
    for (part, k) in yun_q(&f) {
        let (_, pz) = q_to_z(&part);
        for g in factor_squarefree_z(&pz) {
            out.push((z_to_monic_q(&g), k));
        }
    }
    out.sort_by(|a, b| {
        a.0.len().cmp(&b.0.len()).then_with(|| {
            a.0.iter().rev().cmp(b.0.iter().rev())
        })
    });
    (scalar, out)
}

/// Integer roots of a polynomial that splits into linear factors over Q, if it does.
pub fn integer_roots(f: &[Q]) -> Option<Vec<BigInt>> {
    let (_, fs) = factor_q(f);
    let mut roots = Vec::new();
    for (g, k) in fs {
        if g.len() != 2 || k != 1 {
            return None;
        }
        let r = -&g[0];
        if !r.is_integer() {
            return None;
        }
        roots.push(r.to_integer());
    }
    Some(roots)
}

pub fn qpoly_mul(a: &[Q], b: &[Q]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

pub fn degree_u32(a: &[Q]) -> u32 {
    a.len().saturating_sub(1).to_u32().unwrap_or(u32::MAX)
}
