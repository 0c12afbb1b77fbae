//! Word-sized modular arithmetic.
//!
//! [`Mont`] serves the 62-bit primes of the multivariate engine in
//! Montgomery form; [`Plain`] serves the small primes of univariate
//! factoring. Both hand out residues in their own internal representation,
//! converted with `enter` / `leave`.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::rational::Q;

pub trait ModArith: Copy + Send + Sync {
    fn modulus(&self) -> u64;
    fn one(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    /// Canonical residue into internal form.
    fn enter(&self, a: u64) -> u64;
    /// Internal form back to the canonical residue in `[0, q)`.
    fn leave(&self, a: u64) -> u64;

    fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element (the modulus is prime).
    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.modulus() - 2)
    }

    fn from_i64(&self, a: i64) -> u64 {
        let q = self.modulus() as i128;
        self.enter((a as i128).rem_euclid(q) as u64)
    }

    fn from_bigint(&self, a: &BigInt) -> u64 {
        let q = self.modulus();
        let r = (a.magnitude() % q).to_u64().unwrap_or(0);
        let r = if a.sign() == Sign::Minus && r != 0 { q - r } else { r };
        self.enter(r)
    }

    /// Reduction of a rational; `None` when the denominator vanishes mod q.
    fn from_q(&self, a: &Q) -> Option<u64> {
        let d = self.from_bigint(a.denom());
        if d == 0 {
            return None;
        }
        if a.numer().is_zero() {
            return Some(0);
        }
        Some(self.mul(self.from_bigint(a.numer()), self.inv(d)))
    }
}

/// Montgomery arithmetic modulo an odd prime below 2^62.
#[derive(Clone, Copy, Debug)]
pub struct Mont {
    q: u64,
    nprime: u64,
    r2: u64,
    one: u64,
}

impl Mont {
    pub fn new(q: u64) -> Self {
        assert!(q % 2 == 1 && q < (1 << 62), "modulus must be odd and below 2^62");
        let mut inv: u64 = q;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % q as u128) as u64;
        let r2 = ((r as u128 * r as u128) % q as u128) as u64;
        let mut m = Mont { q, nprime: inv.wrapping_neg(), r2, one: 0 };
        m.one = m.enter(1);
        m
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.nprime);
        let u = ((t + m as u128 * self.q as u128) >> 64) as u64;
        if u >= self.q {
            u - self.q
        } else {
            u
        }
    }
}

impl ModArith for Mont {
    #[inline(always)]
    fn modulus(&self) -> u64 {
        self.q
    }

    #[inline(always)]
    fn one(&self) -> u64 {
        self.one
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    fn enter(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }
}

/// Textbook arithmetic modulo a prime below 2^32.
#[derive(Clone, Copy, Debug)]
pub struct Plain {
    p: u64,
}

impl Plain {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32));
        Plain { p }
    }
}

impl ModArith for Plain {
    fn modulus(&self) -> u64 {
        self.p
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn enter(&self, a: u64) -> u64 {
        a % self.p
    }
    fn leave(&self, a: u64) -> u64 {
        a
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, a);
            }
            a = mulm(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in increasing order starting at 2.
pub fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}
