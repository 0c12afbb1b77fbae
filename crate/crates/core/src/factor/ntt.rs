//! Number-theoretic transforms over primes `q = c * 2^32 + 1 < 2^62`.

use std::sync::Mutex;

use super::modarith::{is_prime_u64, ModArith, Mont};

const TWO_ADICITY: u32 = 32;

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The `k`-th transform-friendly prime, in decreasing order.
pub fn ntt_prime(k: usize) -> u64 {
    let mut cache = PRIMES.lock().unwrap();
    let mut c = match cache.last() {
        Some(&q) => (q - 1) >> TWO_ADICITY,
        None => 1 << 30,
    };
    while cache.len() <= k {
        c -= 1;
        let q = (c << TWO_ADICITY) + 1;
        if is_prime_u64(q) {
            cache.push(q);
        }
    }
    cache[k]
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime field together with a generator of its multiplicative group.
#[derive(Clone, Copy, Debug)]
pub struct Ntt {
    pub f: Mont,
    gen: u64,
}

impl Ntt {
    pub fn new(q: u64) -> Self {
        let f = Mont::new(q);
        let factors = prime_factors(q - 1);
        let mut g = 2;
        loop {
            let ge = f.enter(g);
            if factors.iter().all(|&r| f.pow(ge, (q - 1) / r) != f.one()) {
                return Ntt { f, gen: ge };
            }
            g += 1;
        }
    }

    pub fn for_index(k: usize) -> Self {
        Self::new(ntt_prime(k))
    }

    /// A primitive `n`-th root of unity; `n` must be a power of two up to 2^32.
    pub fn root(&self, n: usize) -> u64 {
        assert!(n.is_power_of_two() && n.trailing_zeros() <= TWO_ADICITY);
        self.f.pow(self.gen, (self.f.modulus() - 1) / n as u64)
    }

    fn transform(&self, a: &mut [u64], invert: bool) {
        let n = a.len();
        assert!(n.is_power_of_two());
        let f = &self.f;
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = self.root(len);
            if invert {
                w = f.inv(w);
            }
            let half = len / 2;
            let mut tw = Vec::with_capacity(half);
            let mut cur = f.one();
            for _ in 0..half {
                tw.push(cur);
                cur = f.mul(cur, w);
            }
            for chunk in a.chunks_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k];
                    let v = f.mul(hi[k], tw[k]);
                    lo[k] = f.add(u, v);
                    hi[k] = f.sub(u, v);
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = f.inv(f.enter(n as u64));
            for x in a.iter_mut() {
                *x = f.mul(*x, ninv);
            }
        }
    }

    /// In place: `a[j] <- sum_i a[i] w^(ij)` with `w = root(a.len())`.
    pub fn forward(&self, a: &mut [u64]) {
        self.transform(a, false)
    }

    pub fn inverse(&self, a: &mut [u64]) {
        self.transform(a, true)
    }

    /// Product of two polynomials.
    pub fn convolve(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let out_len = a.len() + b.len() - 1;
        if a.len().min(b.len()) <= 32 {
            let mut out = vec![0u64; out_len];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = self.f.add(out[i + j], self.f.mul(x, y));
                }
            }
            return out;
        }
        let n = out_len.next_power_of_two();
        let mut fa = a.to_vec();
        fa.resize(n, 0);
        let mut fb = b.to_vec();
        fb.resize(n, 0);
        self.forward(&mut fa);
        self.forward(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.f.mul(*x, *y);
        }
        self.inverse(&mut fa);
        fa.truncate(out_len);
        fa
    }

    /// Values of `coeffs` at `c * w^j` for `j < n`; requires `coeffs.len() <= n`.
    pub fn eval_coset(&self, coeffs: &[u64], c: u64, n: usize) -> Vec<u64> {
        assert!(coeffs.len() <= n);
        let mut a = Vec::with_capacity(n);
        let mut cp = self.f.one();
        for &x in coeffs {
            a.push(self.f.mul(x, cp));
            cp = self.f.mul(cp, c);
        }
        a.resize(n, 0);
        self.forward(&mut a);
        a
    }

    /// Inverse of [`Ntt::eval_coset`].
    pub fn interp_coset(&self, values: &[u64], c: u64) -> Vec<u64> {
        let mut a = values.to_vec();
        self.inverse(&mut a);
        let cinv = self.f.inv(c);
        let mut cp = self.f.one();
        for x in a.iter_mut() {
            *x = self.f.mul(*x, cp);
            cp = self.f.mul(cp, cinv);
        }
        a
    }

    /// Coefficients of `p(y + a)`.
    pub fn taylor_shift(&self, p: &[u64], a: u64) -> Vec<u64> {
        let n = p.len();
        if n <= 1 || a == 0 {
            return p.to_vec();
        }
        let f = &self.f;
        if n <= 48 {
            let mut c = p.to_vec();
            for i in 0..n {
                for j in (i..n - 1).rev() {
                    c[j] = f.add(c[j], f.mul(a, c[j + 1]));
                }
            }
            return c;
        }
        let mut fact = Vec::with_capacity(n);
        fact.push(f.one());
        for i in 1..n {
            fact.push(f.mul(fact[i - 1], f.enter(i as u64)));
        }
        let mut inv_fact = vec![0u64; n];
        inv_fact[n - 1] = f.inv(fact[n - 1]);
        for i in (1..n).rev() {
            inv_fact[i - 1] = f.mul(inv_fact[i], f.enter(i as u64));
        }
        let u: Vec<u64> = (0..n).map(|i| f.mul(p[n - 1 - i], fact[n - 1 - i])).collect();
        let mut v = Vec::with_capacity(n);
        let mut ap = f.one();
        for inv in inv_fact.iter() {
            v.push(f.mul(ap, *inv));
            ap = f.mul(ap, a);
        }
        let w = self.convolve(&u, &v);
        (0..n).map(|k| f.mul(w[n - 1 - k], inv_fact[k])).collect()
    }
}
