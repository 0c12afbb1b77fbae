//! Modular factorization of polynomials in `(x, y, t)` that are monic in `x`.
//!
//! One pass modulo a transform-friendly prime `q`:
//!
//! 1. squarefree parts `P_m` from pointwise Yun on a grid of `y`/`t` points,
//!    interpolated back (skipped when one image is already squarefree);
//! 2. a point `(y0, t0)` where the rational univariate image has the generic
//!    squarefree shape, and the irreducible factors of that image over Q;
//! 3. `y`-adic Hensel lifting at `t = t0` and recombination of the lifted
//!    factors, accepted by a degree test that makes the product identity exact;
//! 4. evaluation at `L > deg_y` points `y_j`, `t`-adic lifting at each point,
//!    recombination of the bivariate blocks and interpolation in `y`.
//!
//! The block structure found modulo the first prime is replayed modulo further
//! primes; images are combined by CRT and rational reconstruction. The result
//! is accepted once the product of the primes exceeds twice a height bound on
//! both sides of `f * prod(c_i^m_i) = prod((c_i C_i)^m_i)`. Together with the
//! per-prime identities this proves the factorization over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::crt::{rational_reconstruct, Crt};
use super::modarith::ModArith;
use super::ntt::Ntt;
use super::univariate::{self, QPoly};
use super::zpoly::{self, Poly};
use crate::config::Config;
use crate::dense::DensePoly3;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::Q;

type XPoly = Poly;
type Series = Vec<XPoly>;
type Bad = &'static str;

/// Residues of a trivariate polynomial on a dense grid.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Grid3 {
    d: [usize; 3],
    v: Vec<u64>,
}

impl Grid3 {
    fn zero(d: [usize; 3]) -> Self {
        Grid3 { d, v: vec![0; (d[0] + 1) * (d[1] + 1) * (d[2] + 1)] }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * (self.d[1] + 1) + b) * (self.d[2] + 1) + c
    }

    #[inline]
    fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.v[self.idx(a, b, c)]
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize, c: usize, x: u64) {
        let i = self.idx(a, b, c);
        self.v[i] = x;
    }

    fn degrees(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for a in 0..=self.d[0] {
            for b in 0..=self.d[1] {
                for c in 0..=self.d[2] {
                    if self.get(a, b, c) != 0 {
                        out[0] = out[0].max(a);
                        out[1] = out[1].max(b);
                        out[2] = out[2].max(c);
                    }
                }
            }
        }
        out
    }

    fn trimmed(&self) -> Grid3 {
        let d = self.degrees();
        if d == self.d {
            return self.clone();
        }
        let mut out = Grid3::zero(d);
        for a in 0..=d[0] {
            for b in 0..=d[1] {
                for c in 0..=d[2] {
                    out.set(a, b, c, self.get(a, b, c));
                }
            }
        }
        out
    }

    fn from_dense<F: ModArith>(f: &DensePoly3, field: &F) -> Option<Grid3> {
        let mut g = Grid3::zero(f.dims());
        for (e, c) in f.nonzero() {
            g.set(e[0], e[1], e[2], field.from_q(c)?);
        }
        Some(g)
    }

    /// Coefficients of `x^a t^c` as a series in `y`.
    fn y_series(&self, a: usize, c: usize) -> Vec<u64> {
        (0..=self.d[1]).map(|b| self.get(a, b, c)).collect()
    }
}

/// Evaluation data shared by one pass: `L` coset points in `y` and `T+1` points in `t`.
struct Points {
    l: usize,
    coset: u64,
    tpts: Vec<u64>,
    /// Inverse Vandermonde matrix of `tpts`.
    vinv: Vec<Vec<u64>>,
}

impl Points {
    fn new(ntt: &Ntt, e: usize, t: usize, attempt: u64) -> Self {
        let f = &ntt.f;
        let l = (e + 1).next_power_of_two().max(2);
        // Pseudo-random points: small structured values can all sit on the same bad curve.
        let q = f.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(q ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let coset = f.enter(rng.gen_range(2..q));
        let mut tpts: Vec<u64> = Vec::with_capacity(t + 1);
        while tpts.len() <= t {
            let v = f.enter(rng.gen_range(2..q));
            if !tpts.contains(&v) {
                tpts.push(v);
            }
        }
        let n = tpts.len();
        // Gauss-Jordan on [V | I].
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = Vec::with_capacity(2 * n);
                let mut p = f.one();
                for _ in 0..n {
                    row.push(p);
                    p = f.mul(p, tpts[i]);
                }
                for j in 0..n {
                    row.push(if i == j { f.one() } else { 0 });
                }
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r][col] != 0).expect("distinct points");
            m.swap(col, piv);
            let inv = f.inv(m[col][col]);
            for x in m[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for r in 0..n {
                if r != col && m[r][col] != 0 {
                    let k = m[r][col];
                    for j in 0..2 * n {
                        let v = f.mul(k, m[col][j]);
                        m[r][j] = f.sub(m[r][j], v);
                    }
                }
            }
        }
        let vinv = m.into_iter().map(|row| row[n..].to_vec()).collect();
        Points { l, coset, tpts, vinv }
    }

    /// Coefficients in `t` from values at `tpts`.
    fn interp_t(&self, f: &impl ModArith, vals: &[u64]) -> Vec<u64> {
        self.vinv
            .iter()
            .map(|row| row.iter().zip(vals).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }
}

/// Values of every `(x^a t^c)` y-series of `g` at the coset points: `out[a][c][j]`.
fn eval_y(ntt: &Ntt, g: &Grid3, pts: &Points) -> Vec<Vec<Vec<u64>>> {
    let [da, _, dc] = g.d;
    let cells: Vec<(usize, usize)> = (0..=da).flat_map(|a| (0..=dc).map(move |c| (a, c))).collect();
    let vals = par::map(&cells, |&(a, c)| {
        let s = g.y_series(a, c);
        if s.iter().all(|&x| x == 0) {
            vec![0; pts.l]
        } else {
            ntt.eval_coset(&s, pts.coset, pts.l)
        }
    });
    let mut out = vec![vec![Vec::new(); dc + 1]; da + 1];
    for ((a, c), v) in cells.into_iter().zip(vals) {
        out[a][c] = v;
    }
    out
}

/// `g(x, y_j, t)` as a series in `t` from precomputed values.
fn point_series(yv: &[Vec<Vec<u64>>], j: usize) -> Series {
    let da = yv.len() - 1;
    let dc = yv[0].len() - 1;
    (0..=dc).map(|c| zpoly::trim((0..=da).map(|a| yv[a][c][j]).collect())).collect()
}

fn eval_series_at<F: ModArith>(f: &F, s: &Series, t: u64) -> XPoly {
    let mut acc: XPoly = Vec::new();
    for coeff in s.iter().rev() {
        acc = zpoly::add(f, &zpoly::scale(f, &acc, t), coeff);
    }
    acc
}

/// Taylor shift `t -> t + a` of a short series with polynomial coefficients.
fn shift_series<F: ModArith>(f: &F, s: &Series, a: u64) -> Series {
    let mut c = s.clone();
    let n = c.len();
    if a == 0 {
        return c;
    }
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let add = zpoly::scale(f, &c[j + 1], a);
            c[j] = zpoly::add(f, &c[j], &add);
        }
    }
    c
}

fn series_mul_trunc<F: ModArith>(f: &F, a: &Series, b: &Series, prec: usize) -> Series {
    let mut out: Series = vec![Vec::new(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_empty() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            zpoly::mul_acc(f, &mut out[i + j], x, y);
        }
    }
    out.into_iter().map(zpoly::trim).collect()
}


/// Lifts `s[0] = g0 * h0` to `s = G * H mod (var)^prec`, `g0`, `h0` monic and coprime.
fn lift2<F: ModArith>(f: &F, s: &Series, g0: &XPoly, h0: &XPoly, prec: usize) -> std::result::Result<(Series, Series), Bad> {
    let (g, sigma, tau) = zpoly::xgcd(f, g0, h0);
    if g != vec![f.one()] {
        return Err("factors not coprime");
    }
    let mut gs: Series = vec![g0.clone()];
    let mut hs: Series = vec![h0.clone()];
    let mut e: XPoly = Vec::new();
    for k in 1..prec {
        e.clear();
        if let Some(sk) = s.get(k) {
            e.extend_from_slice(sk);
        }
        let mut conv: XPoly = Vec::new();
        for i in 1..k {
            zpoly::mul_acc(f, &mut conv, &gs[i], &hs[k - i]);
        }
        let ek = zpoly::sub(f, &e, &zpoly::trim(conv));
        if ek.is_empty() {
            gs.push(Vec::new());
            hs.push(Vec::new());
            continue;
        }
        let a = zpoly::rem(f, &zpoly::mul(f, &tau, &ek), g0);
        let b = zpoly::rem(f, &zpoly::mul(f, &sigma, &ek), h0);
        gs.push(a);
        hs.push(b);
    }
    Ok((gs, hs))
}

/// Multifactor lifting by successive two-factor splits.
fn lift_multi<F: ModArith>(f: &F, s: &Series, us: &[XPoly], prec: usize) -> std::result::Result<Vec<Series>, Bad> {
    let mut out = Vec::with_capacity(us.len());
    let mut current: Series = s.iter().take(prec).cloned().collect();
    current.resize(prec, Vec::new());
    for i in 0..us.len() - 1 {
        let mut h0 = vec![f.one()];
        for u in &us[i + 1..] {
            h0 = zpoly::mul(f, &h0, u);
        }
        let (g, h) = lift2(f, &current, &us[i], &h0, prec)?;
        out.push(g);
        current = h;
    }
    out.push(current);
    Ok(out)
}

/// Packs a series with x-degree below `k` into one polynomial: index `b * k + a`.
fn pack(s: &Series, k: usize) -> Vec<u64> {
    let mut out = vec![0u64; s.len() * k];
    for (b, xp) in s.iter().enumerate() {
        for (a, &c) in xp.iter().enumerate() {
            out[b * k + a] = c;
        }
    }
    out
}

fn unpack(p: &[u64], k: usize, prec: usize) -> Series {
    (0..prec)
        .map(|b| {
            let lo = (b * k).min(p.len());
            let hi = ((b + 1) * k).min(p.len());
            zpoly::trim(p[lo..hi].to_vec())
        })
        .collect()
}

/// Product of packed series truncated to `prec` terms.
fn packed_product(ntt: &Ntt, items: &[&Vec<u64>], k: usize, prec: usize) -> Vec<u64> {
    let mut acc = vec![ntt.f.one()];
    for it in items {
        let mut p = ntt.convolve(&acc, it);
        p.truncate(prec * k);
        acc = p;
    }
    acc
}

/// Zassenhaus-style recombination over `n` items in increasing subset size.
/// `accept(subset, rest)` returns the block image when the subset is a factor.
fn recombine<C>(
    n: usize,
    known: Option<&[Vec<usize>]>,
    mut accept: impl FnMut(&[usize], &[usize]) -> Option<C>,
    mut last: impl FnMut(&[usize]) -> C,
) -> std::result::Result<(Vec<Vec<usize>>, Vec<C>), Bad> {
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut images = Vec::new();
    if let Some(known) = known {
        for (i, blk) in known.iter().enumerate() {
            let rest: Vec<usize> = remaining.iter().copied().filter(|x| !blk.contains(x)).collect();
            if i + 1 == known.len() {
                if !rest.is_empty() {
                    return Err("known partition does not cover");
                }
                images.push(last(blk));
            } else {
                images.push(accept(blk, &rest).ok_or("known block rejected")?);
            }
            blocks.push(blk.clone());
            remaining = rest;
        }
        return Ok((blocks, images));
    }
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for sub in univariate::subsets(remaining.len(), size) {
            let s: Vec<usize> = sub.iter().map(|&i| remaining[i]).collect();
            let rest: Vec<usize> = remaining.iter().copied().filter(|x| !s.contains(x)).collect();
            if let Some(img) = accept(&s, &rest) {
                hit = Some((s, rest, img));
                break;
            }
        }
        match hit {
            Some((s, rest, img)) => {
                blocks.push(s);
                images.push(img);
                remaining = rest;
            }
            None => size += 1,
        }
    }
    if !remaining.is_empty() {
        images.push(last(&remaining));
        blocks.push(remaining);
    }
    Ok((blocks, images))
}

/// Structure found modulo the first prime and replayed modulo later primes.
#[derive(Clone, Debug)]
struct Plan {
    sig: Vec<usize>,
    y0: u64,
    t0: u64,
    parts: Vec<PartPlan>,
}

#[derive(Clone, Debug)]
struct PartPlan {
    m: u32,
    labels: Vec<QPoly>,
    biv: Vec<Vec<usize>>,
    tri: Vec<Vec<usize>>,
    block_degs: Vec<[usize; 3]>,
}

fn signature(parts: &[Poly]) -> Vec<usize> {
    parts.iter().map(|p| p.len().saturating_sub(1)).collect()
}

/// Squarefree parts modulo q: `(m, P_m)` for every nonconstant part.
fn squarefree_parts(
    ntt: &Ntt,
    fq: &Grid3,
    pts: &Points,
    want: Option<&[usize]>,
) -> std::result::Result<(Vec<usize>, Vec<(u32, Grid3)>), Bad> {
    let f = &ntt.f;
    let [dd, e, t] = fq.d;
    let yv = eval_y(ntt, fq, pts);
    let at = |j: usize, k: usize| -> XPoly {
        let s = point_series(&yv, j);
        eval_series_at(f, &s, pts.tpts[k])
    };
    let probe = at(0, 0);
    let sqf = probe.len() == dd + 1 && zpoly::is_squarefree(f, &probe);
    if sqf || want == Some(&[dd][..]) {
        if !sqf && want.is_some() {
            // A squarefree f has squarefree images at all but finitely many points.
            let ok = (1..pts.l.min(8)).any(|j| zpoly::is_squarefree(f, &at(j, 0)));
            if !ok {
                return Err("no squarefree image");
            }
        }
        return Ok((vec![dd], vec![(1, fq.clone())]));
    }
    let npts = pts.l * (t + 1);
    let decomp: Vec<Vec<Poly>> = par::map_range(npts, |ix| zpoly::yun(f, &at(ix / (t + 1), ix % (t + 1))));
    let sigs: Vec<Vec<usize>> = decomp.iter().map(|p| signature(p)).collect();
    let generic = sigs.iter().max().cloned().unwrap_or_default();
    if let Some(w) = want {
        if w != generic.as_slice() {
            return Err("squarefree shape differs");
        }
    }
    if sigs.iter().any(|s| s != &generic) {
        return Err("bad point");
    }
    let mut parts = Vec::new();
    for (mi, &dm) in generic.iter().enumerate() {
        if dm == 0 {
            continue;
        }
        let mut g = Grid3::zero([dm, pts.l - 1, t]);
        for a in 0..dm {
            // t-interpolation at each y point, then y-interpolation per (a, c).
            let per_j: Vec<Vec<u64>> = (0..pts.l)
                .map(|j| {
                    let vals: Vec<u64> = (0..=t)
                        .map(|k| decomp[j * (t + 1) + k][mi].get(a).copied().unwrap_or(0))
                        .collect();
                    pts.interp_t(f, &vals)
                })
                .collect();
            for c in 0..=t {
                let vals: Vec<u64> = per_j.iter().map(|v| v[c]).collect();
                let ys = ntt.interp_coset(&vals, pts.coset);
                for (b, &x) in ys.iter().enumerate() {
                    g.set(a, b, c, x);
                }
            }
        }
        g.set(dm, 0, 0, f.one());
        let g = g.trimmed();
        parts.push(((mi + 1) as u32, g));
    }
    let sy: usize = parts.iter().map(|(m, g)| *m as usize * g.d[1]).sum();
    let st: usize = parts.iter().map(|(m, g)| *m as usize * g.d[2]).sum();
    if sy > e || st > t {
        return Err("squarefree degrees inconsistent");
    }
    Ok((generic, parts))
}

/// `P(x, y0, t0)` modulo q.
fn specialize<F: ModArith>(f: &F, g: &Grid3, y0: u64, t0: u64) -> XPoly {
    let y0 = f.enter(y0);
    let t0 = f.enter(t0);
    let mut out = vec![0u64; g.d[0] + 1];
    for a in 0..=g.d[0] {
        let mut acc = 0;
        for b in (0..=g.d[1]).rev() {
            let mut inner = 0;
            for c in (0..=g.d[2]).rev() {
                inner = f.add(f.mul(inner, t0), g.get(a, b, c));
            }
            acc = f.add(f.mul(acc, y0), inner);
        }
        out[a] = acc;
    }
    zpoly::trim(out)
}

fn scan_points(t: usize) -> impl Iterator<Item = (u64, u64)> {
    (0u64..48).flat_map(move |s| {
        let tmax = if t == 0 { 0 } else { s };
        (0..=tmax).map(move |t0| (s - t0, t0))
    })
}

/// Factors one squarefree part modulo q; returns block images.
#[allow(clippy::too_many_arguments)]
fn factor_part(
    ntt: &Ntt,
    pm: &Grid3,
    labels: &[XPoly],
    y0: u64,
    t0: u64,
    pts: &Points,
    known: Option<(&[Vec<usize>], &[Vec<usize>])>,
) -> std::result::Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Grid3>), Bad> {
    let f = &ntt.f;
    let [dm, em, tm] = pm.d;
    let r = labels.len();
    if r == 1 {
        return Ok((vec![vec![0]], vec![vec![0]], vec![pm.clone()]));
    }
    // Bivariate image at t = t0, shifted to y -> y + y0.
    let t0e = f.enter(t0);
    let y0e = f.enter(y0);
    let prec = em + 1;
    let mut biv_series: Series = vec![Vec::new(); prec];
    {
        let cols: Vec<Vec<u64>> = par::map_range(dm + 1, |a| {
            let ys: Vec<u64> = (0..=em)
                .map(|b| (0..=tm).rev().fold(0, |acc, c| f.add(f.mul(acc, t0e), pm.get(a, b, c))))
                .collect();
            ntt.taylor_shift(&ys, y0e)
        });
        for (b, slot) in biv_series.iter_mut().enumerate() {
            *slot = zpoly::trim((0..=dm).map(|a| cols[a][b]).collect());
        }
    }
    let mut prod0 = vec![f.one()];
    for u in labels {
        prod0 = zpoly::mul(f, &prod0, u);
    }
    if prod0 != biv_series[0] {
        return Err("labels do not match the specialization");
    }
    let lifted = lift_multi(f, &biv_series, labels, prec)?;
    let k = dm + 1;
    let packed: Vec<Vec<u64>> = lifted.iter().map(|s| pack(s, k)).collect();
    let packed_degree = |p: &[u64]| p.iter().rposition(|&c| c != 0).map(|i| i / k).unwrap_or(0);
    let product = |idx: &[usize]| {
        let items: Vec<&Vec<u64>> = idx.iter().map(|&i| &packed[i]).collect();
        packed_product(ntt, &items, k, prec)
    };
    let (biv_blocks, biv_packed) = recombine(
        r,
        known.map(|k| k.0),
        |s, rest| {
            let a = product(s);
            let b = product(rest);
            if packed_degree(&a) + packed_degree(&b) <= em {
                Some(a)
            } else {
                None
            }
        },
        |rest| product(rest),
    )?;
    let neg_y0 = f.neg(y0e);
    // Unshift every bivariate block back to y.
    let biv_grids: Vec<Grid3> = biv_packed
        .iter()
        .map(|p| {
            let s = unpack(p, k, prec);
            let dx = s[0].len() - 1;
            let mut g = Grid3::zero([dx, em, 0]);
            for a in 0..=dx {
                let ys: Vec<u64> = s.iter().map(|xp| xp.get(a).copied().unwrap_or(0)).collect();
                let back = ntt.taylor_shift(&ys, neg_y0);
                for (b, &v) in back.iter().enumerate() {
                    g.set(a, b, 0, v);
                }
            }
            g.trimmed()
        })
        .collect();
    if tm == 0 {
        let tri: Vec<Vec<usize>> = (0..biv_grids.len()).map(|i| vec![i]).collect();
        if let Some((_, kt)) = known {
            if kt != tri.as_slice() {
                return Err("known trivariate partition differs");
            }
        }
        return Ok((biv_blocks, tri, biv_grids));
    }
    if biv_grids.len() == 1 {
        return Ok((biv_blocks, vec![vec![0]], vec![pm.clone()]));
    }
    // Pointwise t-adic lifting at the y coset points.
    let pv = eval_y(ntt, pm, pts);
    let bv: Vec<Vec<Vec<Vec<u64>>>> = biv_grids.iter().map(|g| eval_y(ntt, g, pts)).collect();
    let tprec = tm + 1;
    let lifted_pts: Vec<std::result::Result<Vec<Series>, Bad>> = par::map_range(pts.l, |j| {
        let s = shift_series(f, &point_series(&pv, j), t0e);
        let us: Vec<XPoly> = bv.iter().map(|v| point_series(v, j)[0].clone()).collect();
        lift_multi(f, &s, &us, tprec)
    });
    let mut lifted_t = Vec::with_capacity(pts.l);
    for x in lifted_pts {
        lifted_t.push(x.map_err(|_| "bad point")?);
    }
    let neg_t0 = f.neg(t0e);
    let interp_product = |idx: &[usize]| -> Grid3 {
        let vals: Vec<Series> = par::map_range(pts.l, |j| {
            let mut acc: Series = vec![vec![f.one()]];
            for &i in idx {
                acc = series_mul_trunc(f, &acc, &lifted_t[j][i], tprec);
            }
            acc.resize(tprec, Vec::new());
            shift_series(f, &acc, neg_t0)
        });
        let dx = vals[0].iter().map(|c| c.len()).max().unwrap_or(1) - 1;
        let mut g = Grid3::zero([dx, pts.l - 1, tm]);
        for a in 0..=dx {
            for c in 0..=tm {
                let col: Vec<u64> = vals.iter().map(|s| s[c].get(a).copied().unwrap_or(0)).collect();
                if col.iter().all(|&v| v == 0) {
                    continue;
                }
                let ys = ntt.interp_coset(&col, pts.coset);
                for (b, &v) in ys.iter().enumerate() {
                    g.set(a, b, c, v);
                }
            }
        }
        g.trimmed()
    };
    let (tri_blocks, tri_images) = recombine(
        biv_grids.len(),
        known.map(|k| k.1),
        |s, rest| {
            let a = interp_product(s);
            let b = interp_product(rest);
            if a.d[1] + b.d[1] <= em && a.d[2] + b.d[2] <= tm {
                Some(a)
            } else {
                None
            }
        },
        |rest| interp_product(rest),
    )?;
    Ok((biv_blocks, tri_blocks, tri_images))
}

/// One modular pass. Without a plan it searches for one.
fn run_pass(
    f: &DensePoly3,
    ntt: &Ntt,
    plan: Option<&Plan>,
) -> std::result::Result<(Plan, Vec<Grid3>), Bad> {
    let field = &ntt.f;
    let fq = Grid3::from_dense(f, field).ok_or("denominator vanishes")?;
    let [_, e, t] = fq.d;
    let mut last_err = "no attempt";
    for attempt in 0..3u64 {
        let pts = Points::new(ntt, e, t, attempt);
        let (sig, parts) = match squarefree_parts(ntt, &fq, &pts, plan.map(|p| p.sig.as_slice())) {
            Ok(x) => x,
            Err("bad point") => {
                last_err = "bad point";
                continue;
            }
            Err(other) => return Err(other),
        };
        let (y0, t0, part_labels): (u64, u64, Vec<Vec<QPoly>>) = match plan {
            Some(p) => (p.y0, p.t0, p.parts.iter().map(|pp| pp.labels.clone()).collect()),
            None => {
                let mut found = None;
                for (y0, t0) in scan_points(t) {
                    let u = f.eval_yt(&Q::from_integer(y0.into()), &Q::from_integer(t0.into()));
                    let ys = univariate::yun_q(&u);
                    let mut s = vec![0usize; ys.iter().map(|(_, k)| *k as usize).max().unwrap_or(0)];
                    for (p, k) in &ys {
                        s[*k as usize - 1] = p.len() - 1;
                    }
                    if s != sig {
                        continue;
                    }
                    let labels: Vec<Vec<QPoly>> = parts
                        .iter()
                        .map(|(m, _)| {
                            let (um, _) = ys.iter().find(|(_, k)| k == m).expect("shape matches");
                            let (_, uz) = univariate::q_to_z(um);
                            let mut ls: Vec<QPoly> = univariate::factor_squarefree_z(&uz)
                                .into_iter()
                                .map(|g| {
                                    let lc = Q::from_integer(g.last().unwrap().clone());
                                    g.iter().map(|c| Q::from_integer(c.clone()) / &lc).collect()
                                })
                                .collect();
                            ls.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
                            ls
                        })
                        .collect();
                    found = Some((y0, t0, labels));
                    break;
                }
                found.ok_or("no admissible specialization point")?
            }
        };
        let mut images = Vec::new();
        let mut part_plans = Vec::new();
        for (pi, (m, pm)) in parts.iter().enumerate() {
            let labels = &part_labels[pi];
            let mut lq = Vec::with_capacity(labels.len());
            for l in labels {
                let mut v = Vec::with_capacity(l.len());
                for c in l {
                    v.push(field.from_q(c).ok_or("label denominator vanishes")?);
                }
                lq.push(zpoly::trim(v));
            }
            let mut prod = vec![field.one()];
            for u in &lq {
                prod = zpoly::mul(field, &prod, u);
            }
            if !zpoly::is_squarefree(field, &prod) {
                return Err("labels not coprime modulo q");
            }
            if specialize(field, pm, y0, t0) != prod {
                return Err("specialization mismatch");
            }
            let known = plan.map(|p| (p.parts[pi].biv.as_slice(), p.parts[pi].tri.as_slice()));
            let (biv, tri, imgs) = match factor_part(ntt, pm, &lq, y0, t0, &pts, known) {
                Ok(x) => x,
                Err("bad point") => {
                    last_err = "bad point";
                    images.clear();
                    part_plans.clear();
                    break;
                }
                Err(other) => return Err(other),
            };
            let block_degs: Vec<[usize; 3]> = imgs.iter().map(|g| g.d).collect();
            if let Some(p) = plan {
                if p.parts[pi].block_degs != block_degs {
                    return Err("block degrees differ");
                }
            }
            part_plans.push(PartPlan { m: *m, labels: labels.clone(), biv, tri, block_degs });
            images.extend(imgs);
        }
        if part_plans.len() != parts.len() {
            continue;
        }
        return Ok((Plan { sig, y0, t0, parts: part_plans }, images));
    }
    Err(last_err)
}

/// Rational candidates from the accumulated residues, if every coefficient reconstructs.
fn reconstruct(shapes: &[[usize; 3]], residues: &[Vec<Vec<u64>>], crt: &Crt) -> Option<Vec<DensePoly3>> {
    let m = crt.modulus();
    let nprimes = residues.len();
    let out: Vec<Option<DensePoly3>> = par::map_range(shapes.len(), |bi| {
        let d = shapes[bi];
        let mut g = DensePoly3::zero(d);
        let cells = (d[0] + 1) * (d[1] + 1) * (d[2] + 1);
        let mut rs = vec![0u64; nprimes];
        for ix in 0..cells {
            for (p, r) in rs.iter_mut().enumerate() {
                *r = residues[p][bi][ix];
            }
            if rs.iter().all(|&x| x == 0) {
                continue;
            }
            let v = rational_reconstruct(&crt.combine(&rs), m)?;
            let (a, b, c) = (ix / ((d[1] + 1) * (d[2] + 1)), (ix / (d[2] + 1)) % (d[1] + 1), ix % (d[2] + 1));
            g.set(a, b, c, v);
        }
        Some(g)
    });
    out.into_iter().collect()
}

/// Twice the larger height bound of the two sides of the integer identity.
fn certificate_bound(f: &DensePoly3, factors: &[(DensePoly3, u32)]) -> BigInt {
    let lf = f.nonzero().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let lfq = Q::from_integer(lf.clone());
    let ha = f.nonzero().map(|(_, c)| (c * &lfq).to_integer().abs()).max().unwrap_or_default();
    let mut lhs = ha;
    let mut rhs = lf;
    for (g, m) in factors {
        let c = g.nonzero().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
        let cq = Q::from_integer(c.clone());
        let norm1: BigInt = g.nonzero().map(|(_, x)| (x * &cq).to_integer().abs()).sum();
        for _ in 0..*m {
            lhs *= &c;
            rhs *= &norm1;
        }
    }
    lhs.max(rhs) * 2
}

fn residues_of(g: &Grid3, field: &impl ModArith) -> Vec<u64> {
    g.v.iter().map(|&x| field.leave(x)).collect()
}

fn consistent(cands: &[DensePoly3], images: &[Grid3], field: &impl ModArith) -> bool {
    cands.iter().zip(images).all(|(c, img)| {
        if c.dims() != img.d {
            return false;
        }
        match Grid3::from_dense(c, field) {
            Some(g) => g == *img,
            None => false,
        }
    })
}

/// Irreducible factors of `f` (monic in `x`, degree in `y` positive) with multiplicities.
fn factor_engine(f: &DensePoly3, cfg: &Config) -> Result<Vec<(DensePoly3, u32)>> {
    let mut prime_idx = 0usize;
    let schedule = |k: usize| k <= 4 || k.is_power_of_two() || (k % 4 == 0 && k >= 8);
    for _restart in 0..6 {
        // First prime: search.
        let (plan, first) = loop {
            if prime_idx >= cfg.max_primes {
                return Err(Error::Cap(format!("more than {} primes needed", cfg.max_primes)));
            }
            let ntt = Ntt::for_index(prime_idx);
            prime_idx += 1;
            if let Ok(x) = run_pass(f, &ntt, None) {
                break (x, ntt.f);
            }
        };
        let (plan, images) = plan;
        let shapes: Vec<[usize; 3]> = images.iter().map(|g| g.d).collect();
        let mults: Vec<u32> = plan.parts.iter().flat_map(|p| p.tri.iter().map(move |_| p.m)).collect();
        let mut primes = vec![first.modulus()];
        let mut residues: Vec<Vec<Vec<u64>>> = vec![images.iter().map(|g| residues_of(g, &first)).collect()];
        let mut candidate: Option<(Vec<DensePoly3>, BigInt)> = None;
        let mut failures = 0;
        loop {
            let crt = Crt::new(&primes);
            if let Some((_, bound)) = &candidate {
                if crt.modulus() > bound {
                    let (cands, _) = candidate.unwrap();
                    return Ok(cands.into_iter().zip(mults).collect());
                }
            } else if schedule(primes.len()) {
                if let Some(cands) = reconstruct(&shapes, &residues, &crt) {
                    let with_m: Vec<(DensePoly3, u32)> = cands.iter().cloned().zip(mults.iter().copied()).collect();
                    let bound = certificate_bound(f, &with_m);
                    if crt.modulus() > &bound {
                        return Ok(with_m);
                    }
                    candidate = Some((cands, bound));
                }
            }
            if prime_idx >= cfg.max_primes {
                return Err(Error::Cap(format!("more than {} primes needed", cfg.max_primes)));
            }
            let ntt = Ntt::for_index(prime_idx);
            prime_idx += 1;
            match run_pass(f, &ntt, Some(&plan)) {
                Ok((_, imgs)) => {
                    if let Some((cands, _)) = &candidate {
                        if !consistent(cands, &imgs, &ntt.f) {
                            candidate = None;
                        }
                    }
                    primes.push(ntt.f.modulus());
                    residues.push(imgs.iter().map(|g| residues_of(g, &ntt.f)).collect());
                }
                Err(_) => {
                    failures += 1;
                    if failures > 3 {
                        break;
                    }
                }
            }
        }
    }
    Err(Error::Internal("modular factorization did not stabilise".into()))
}

/// Sort key shared by all factor lists of this module.
fn sort_factors(fs: &mut [(DensePoly3, u32)]) {
    fs.sort_by(|a, b| a.0.to_sparse().cmp(&b.0.to_sparse()).then(a.1.cmp(&b.1)));
}

/// Factors a polynomial in `(x, y, t)` whose leading coefficient in `x` is a nonzero constant.
///
/// Returns `(scalar, [(g_i, e_i)])` with `f = scalar * prod g_i^e_i`, each `g_i`
/// monic in `x` and irreducible over Q.
pub fn factor_monic(f: &DensePoly3, cfg: &Config) -> Result<(Q, Vec<(DensePoly3, u32)>)> {
    let f = f.trimmed();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let [dx, dy, dt] = f.dims();
    if dx == 0 {
        if dy == 0 && dt == 0 {
            return Ok((f.get(0, 0, 0).clone(), Vec::new()));
        }
        return Err(Error::NotMonic);
    }
    let lc = f.constant_lc_x().ok_or(Error::NotMonic)?;
    if f.cells() > cfg.max_dense_cells {
        return Err(Error::Cap(format!(
            "dense grid of {} cells exceeds max_dense_cells = {}",
            f.cells(),
            cfg.max_dense_cells
        )));
    }
    let g = f.scale(&lc.recip());
    let mut out = if dy == 0 && dt == 0 {
        let coeffs: Vec<Q> = (0..=dx).map(|a| g.get(a, 0, 0).clone()).collect();
        let (_, fs) = univariate::factor_q(&coeffs);
        fs.into_iter()
            .map(|(p, k)| {
                let mut d = DensePoly3::zero([p.len() - 1, 0, 0]);
                for (a, c) in p.into_iter().enumerate() {
                    d.set(a, 0, 0, c);
                }
                (d, k)
            })
            .collect()
    } else if dy == 0 {
        factor_engine(&g.swap_yt(), cfg)?.into_iter().map(|(p, k)| (p.swap_yt(), k)).collect()
    } else {
        factor_engine(&g, cfg)?
    };
    let out_trimmed: Vec<(DensePoly3, u32)> = out.drain(..).map(|(p, k)| (p.trimmed(), k)).collect();
    let mut out = out_trimmed;
    sort_factors(&mut out);
    Ok((lc, out))
}

/// Multiplies a factor list back together over Q (used by tests and debug checks).
pub fn expand(scalar: &Q, fs: &[(DensePoly3, u32)]) -> DensePoly3 {
    let mut acc = crate::poly::SparsePoly::constant(3, scalar.clone());
    for (g, k) in fs {
        acc = &acc * &g.to_sparse().pow(*k);
    }
    DensePoly3::from_sparse(&acc).expect("three variables").trimmed()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_expression_vars, parse_poly_vars};

    const XYT: [&str; 3] = ["x", "y", "t"];

    fn d(s: &str) -> DensePoly3 {
        DensePoly3::from_sparse(&parse_expression_vars(s, &XYT).unwrap()).unwrap()
    }

    fn check(s: &str, expect: usize) -> Vec<(DensePoly3, u32)> {
        let f = d(s);
        let (c, fs) = factor_monic(&f, &Config::default()).unwrap();
        assert_eq!(expand(&c, &fs), f.trimmed(), "recomposition of {s}");
        assert_eq!(fs.len(), expect, "factor count of {s}: {fs:?}");
        fs
    }

    #[test]
    fn bivariate_products() {
        check("(x - y^2)*(x + y^2)", 2);
        check("(x^2 + y^3 + 1)*(x - y)", 2);
        check("x^2 + y^2 + 1", 1);
        check("(x^2 - 2*y^2)*(x + 3*y + 1)^2", 2);
    }

    #[test]
    fn trivariate_products() {
        check("(x + y*t + 1)*(x^2 - y - t)", 2);
        check("(x^2 + y*t^2 + y^3)*(x + t)^2*(x - y)", 3);
        check("x^3 + y*t + t^2*y^2 + 1", 1);
        check("(x^2 + x*y + t)*(x - t^2)", 2);
    }

    #[test]
    fn specialization_splits_but_polynomial_does_not() {
        // x^2 - y*t is irreducible, but every bivariate specialization at t = t0 > 0 stays so
        // while y0 = 0 is degenerate.
        check("x^2 - y*t", 1);
        check("x^4 - y^2*t^2 - 2*y*t - 1", 2);
    }

    #[test]
    fn only_t_dependence_is_handled_by_swapping() {
        check("(x - t^2)*(x + t)", 2);
    }

    #[test]
    fn non_monic_input_is_rejected() {
        let f = DensePoly3::from_sparse(&parse_poly_vars("y*x^2 + 1", &XYT).unwrap()).unwrap();
        assert_eq!(factor_monic(&f, &Config::default()), Err(Error::NotMonic));
    }
}
