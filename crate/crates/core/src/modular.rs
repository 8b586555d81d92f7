//! Small helpers for arithmetic in the prime field and in Z/p^2Z.

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn check_odd_prime(p: u32) -> Result<()> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    Ok(())
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo the prime `p`. Panics on `a ≡ 0`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    let a = a % p;
    assert!(a != 0, "zero has no inverse mod {p}");
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

/// `a / b` in F_p.
pub fn div_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a % p) as u64 * inv_mod(b, p) as u64 % p as u64) as u32
}

pub fn sub_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a % m) + m - (b % m)) % m
}

pub fn neg_mod(a: u32, m: u32) -> u32 {
    (m - a % m) % m
}

/// C(α, 2) for a residue α in F_p, p odd: α(α−1)/2 computed with the inverse of 2.
/// Agrees with the integer binomial C(n, 2) for every lift n ≡ α.
pub fn binom2(alpha: u32, p: u32) -> u32 {
    let a = alpha % p;
    let prod = a as u64 * ((a + p - 1) % p) as u64 % p as u64;
    (prod * inv_mod(2, p) as u64 % p as u64) as u32
}

/// Writes `k = p^v * j` with `p ∤ j` and returns `(v, j)`.
pub fn split_p_power(mut k: u32, p: u32) -> (u32, u32) {
    let mut v = 0;
    while k % p == 0 {
        k /= p;
        v += 1;
    }
    (v, k)
}

/// p-adic valuation of a residue mod p^2 (0, 1, or 2 for zero).
pub fn valuation_p2(value: u32, p: u32) -> u32 {
    if value % (p * p) == 0 {
        2
    } else if value % p == 0 {
        1
    } else {
        0
    }
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
