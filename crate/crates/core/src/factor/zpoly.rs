//! Dense univariate polynomials over a prime field.
//!
//! A polynomial is a `Vec<u64>` of residues in the field's internal form,
//! lowest degree first, with no trailing zeros; the zero polynomial is empty.

use super::modarith::ModArith;

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, or `None` for zero.
pub fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(f.add(x, y));
    }
    trim(out)
}

pub fn sub<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(f.sub(x, y));
    }
    trim(out)
}

pub fn scale<F: ModArith>(f: &F, a: &[u64], c: u64) -> Poly {
    if c == 0 {
        return Vec::new();
    }
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// `acc += a * b`, growing `acc` as needed (result not trimmed).
pub fn mul_acc<F: ModArith>(f: &F, acc: &mut Poly, a: &[u64], b: &[u64]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if acc.len() < a.len() + b.len() - 1 {
        acc.resize(a.len() + b.len() - 1, 0);
    }
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = f.add(acc[i + j], f.mul(x, y));
        }
    }
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> (Poly, Poly) {
    let db = deg(b).expect("division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let inv = f.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + db], inv);
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, y));
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic<F: ModArith>(f: &F, a: &[u64]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(f, a, f.inv(lc)),
    }
}

/// Monic greatest common divisor (zero if both are zero).
pub fn gcd<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn xgcd<F: ModArith>(f: &F, a: &[u64], b: &[u64]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(&lc) => {
            let inv = f.inv(lc);
            (scale(f, &r0, inv), scale(f, &s0, inv), scale(f, &t0, inv))
        }
    }
}

pub fn derivative<F: ModArith>(f: &F, a: &[u64]) -> Poly {
    let mut out = Vec::with_capacity(a.len().saturating_sub(1));
    for (i, &c) in a.iter().enumerate().skip(1) {
        out.push(f.mul(c, f.enter(i as u64 % f.modulus())));
    }
    trim(out)
}

pub fn eval<F: ModArith>(f: &F, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `base^e mod m`.
pub fn powmod<F: ModArith>(f: &F, base: &[u64], mut e: u64, m: &[u64]) -> Poly {
    let mut result = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    result
}

pub fn is_squarefree<F: ModArith>(f: &F, a: &[u64]) -> bool {
    let d = derivative(f, a);
    if d.is_empty() {
        return deg(a).map(|k| k == 0).unwrap_or(false);
    }
    gcd(f, a, &d).len() == 1
}

/// Squarefree decomposition of a monic polynomial: `a = prod P_k^k`, entry `k-1` is `P_k`.
///
/// Valid when the characteristic exceeds the degree.
pub fn yun<F: ModArith>(f: &F, a: &[u64]) -> Vec<Poly> {
    let a = monic(f, a);
    if deg(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let da = derivative(f, &a);
    let mut out = Vec::new();
    let c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut y = divrem(f, &da, &c).0;
    let mut z = sub(f, &y, &derivative(f, &w));
    loop {
        let g = gcd(f, &w, &z);
        out.push(g.clone());
        w = divrem(f, &w, &g).0;
        if deg(&w).unwrap_or(0) == 0 {
            break;
        }
        y = divrem(f, &z, &g).0;
        z = sub(f, &y, &derivative(f, &w));
    }
    while out.last().map(|p| p.len() == 1).unwrap_or(false) {
        out.pop();
    }
    out
}
