//! Chinese remaindering over word-sized primes and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    r
}

/// Garner's algorithm for a fixed list of distinct primes.
#[derive(Clone, Debug)]
pub struct Crt {
    primes: Vec<u64>,
    /// `(q_0 ... q_{i-1})^{-1} mod q_i`.
    inv_prefix: Vec<u64>,
    modulus: BigInt,
}

impl Crt {
    pub fn new(primes: &[u64]) -> Self {
        let mut inv_prefix = Vec::with_capacity(primes.len());
        let mut modulus = BigInt::one();
        for (i, &q) in primes.iter().enumerate() {
            let mut prod = 1 % q;
            for &p in &primes[..i] {
                prod = mulmod(prod, p % q, q);
            }
            inv_prefix.push(powmod(prod, q - 2, q));
            modulus *= q;
        }
        Crt { primes: primes.to_vec(), inv_prefix, modulus }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// The unique value in `[0, M)` with the given residues.
    pub fn combine(&self, residues: &[u64]) -> BigInt {
        debug_assert_eq!(residues.len(), self.primes.len());
        if residues.iter().all(|&r| r == 0) {
            return BigInt::zero();
        }
        let k = self.primes.len();
        let mut digits = Vec::with_capacity(k);
        for i in 0..k {
            let q = self.primes[i];
            // Value of the mixed-radix prefix modulo q.
            let mut acc = 0u64;
            let mut radix = 1 % q;
            for (j, &d) in digits.iter().enumerate() {
                acc = (acc + mulmod(d, radix, q)) % q;
                radix = mulmod(radix, self.primes[j] % q, q);
            }
            let diff = (residues[i] % q + q - acc) % q;
            digits.push(mulmod(diff, self.inv_prefix[i], q));
        }
        let mut out = BigInt::zero();
        for i in (0..k).rev() {
            out = out * self.primes[i] + digits[i];
        }
        out
    }
}

/// Smallest-height rational `n/d` congruent to `r` modulo `m`, with `|n|, d <= sqrt(m/2)`.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Q> {
    let r = r.mod_floor(m);
    if r.is_zero() {
        return Some(Q::zero());
    }
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), r);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    let (n, d) = if s1.is_negative() { (-r1, -s1) } else { (r1, s1) };
    if !n.gcd(&d).is_one() || !d.gcd(m).is_one() {
        return None;
    }
    Some(Q::new(n, d))
}
