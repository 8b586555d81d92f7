//! Truncated power series over the prime field F_p.
//!
//! A series carries its precision `N`: it is known modulo `t^N`, and the
//! coefficient vector always has exactly `N` entries. Binary operations
//! truncate to the smaller precision of their operands.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{check_prime, inv_mod, sub_mod};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct FpSeries {
    p: u32,
    coeffs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    p: u32,
    precision: usize,
    coeffs: Vec<u32>,
}

impl TryFrom<SeriesRepr> for FpSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        if repr.coeffs.len() != repr.precision {
            return Err(Error::PrecisionTooSmall {
                have: repr.coeffs.len(),
                need: repr.precision,
            });
        }
        FpSeries::new(repr.p, repr.coeffs)
    }
}

impl From<FpSeries> for SeriesRepr {
    fn from(s: FpSeries) -> Self {
        SeriesRepr {
            p: s.p,
            precision: s.coeffs.len(),
            coeffs: s.coeffs,
        }
    }
}

impl FpSeries {
    /// Builds a series from reduced coefficients; index `i` holds the coefficient of `t^i`.
    pub fn new(p: u32, coeffs: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.is_empty() {
            return Err(Error::ZeroPrecision);
        }
        if let Some((degree, &value)) = coeffs.iter().enumerate().find(|(_, &c)| c >= p) {
            return Err(Error::UnreducedCoefficient { degree, value, p });
        }
        Ok(FpSeries { p, coeffs })
    }

    /// Builds a series from arbitrary integers, reducing each mod p.
    pub fn from_ints(p: u32, ints: &[i64]) -> Result<Self> {
        let coeffs = ints
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u32)
            .collect();
        FpSeries::new(p, coeffs)
    }

    /// Trusted constructor for internal use: `p` prime, coefficients reduced, nonempty.
    pub(crate) fn from_raw(p: u32, coeffs: Vec<u32>) -> Self {
        debug_assert!(!coeffs.is_empty() && coeffs.iter().all(|&c| c < p));
        FpSeries { p, coeffs }
    }

    pub fn zero(p: u32, precision: usize) -> Result<Self> {
        FpSeries::new(p, vec![0; precision])
    }

    pub fn one(p: u32, precision: usize) -> Result<Self> {
        let mut coeffs = vec![0; precision];
        if let Some(c) = coeffs.first_mut() {
            *c = 1;
        }
        FpSeries::new(p, coeffs)
    }

    /// The monomial `t` (precision must be at least 1; at precision 1 it is 0).
    pub fn t(p: u32, precision: usize) -> Result<Self> {
        let mut coeffs = vec![0; precision];
        if precision > 1 {
            coeffs[1] = 1;
        }
        FpSeries::new(p, coeffs)
    }

    /// `1 + t^j` at the given precision.
    pub fn basis_unit(p: u32, j: usize, precision: usize) -> Result<Self> {
        let mut coeffs = vec![0; precision];
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        coeffs[0] = 1;
        if j < precision {
            coeffs[j] = (coeffs[j] + 1) % p;
        }
        FpSeries::new(p, coeffs)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        if precision > self.precision() {
            return Err(Error::PrecisionTooSmall {
                have: self.precision(),
                need: precision,
            });
        }
        Ok(FpSeries::from_raw(
            self.p,
            self.coeffs[..precision].to_vec(),
        ))
    }

    /// Extends the precision by appending zero coefficients.
    ///
    /// The result claims knowledge the input did not have; callers use it
    /// only where the extra coefficients provably do not matter.
    pub fn pad_zeros(&self, precision: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if precision > coeffs.len() {
            coeffs.resize(precision, 0);
        }
        FpSeries::from_raw(self.p, coeffs)
    }

    fn check_same_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|i| (self.coeffs[i] + other.coeffs[i]) % self.p)
            .collect();
        Ok(FpSeries::from_raw(self.p, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|i| sub_mod(self.coeffs[i], other.coeffs[i], self.p))
            .collect();
        Ok(FpSeries::from_raw(self.p, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let p = self.p as u64;
        let mut acc = vec![0u64; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in other.coeffs[..n - i].iter().enumerate() {
                acc[i + k] += a as u64 * b as u64;
            }
            // keep the accumulator small for large p
            if p > 1 << 16 {
                acc.iter_mut().for_each(|c| *c %= p);
            }
        }
        FpSeries::from_raw(self.p, acc.into_iter().map(|c| (c % p) as u32).collect())
    }

    /// `f(g(t))`, truncated to the smaller precision. Requires `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_same_p(g)?;
        if g.coeffs[0] != 0 {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.precision().min(g.precision());
        let g = FpSeries::from_raw(self.p, g.coeffs[..n].to_vec());
        let mut result = FpSeries::from_raw(self.p, vec![0; n]);
        result.coeffs[0] = self.coeffs[n - 1];
        for i in (0..n - 1).rev() {
            result = result.mul_unchecked(&g);
            result.coeffs[0] = (result.coeffs[0] + self.coeffs[i]) % self.p;
        }
        Ok(result)
    }

    /// Multiplicative inverse modulo `t^N`. Requires an invertible constant term.
    pub fn mul_inverse(&self) -> Result<Self> {
        let p = self.p;
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Err(Error::NotInvertible);
        }
        let inv0 = inv_mod(c0, p) as u64;
        let n = self.precision();
        let mut w = vec![0u32; n];
        w[0] = inv0 as u32;
        for k in 1..n {
            let mut s = 0u64;
            for i in 1..=k {
                s += self.coeffs[i] as u64 * w[k - i] as u64 % p as u64;
            }
            let neg = (p as u64 - s % p as u64) % p as u64;
            w[k] = (neg * inv0 % p as u64) as u32;
        }
        Ok(FpSeries::from_raw(p, w))
    }

    /// Nonnegative integer power by square-and-multiply.
    pub fn pow_int(&self, mut e: u64) -> Self {
        let mut result = FpSeries::from_raw(self.p, {
            let mut c = vec![0; self.precision()];
            c[0] = 1;
            c
        });
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Divides in place by `1 + t^k`.
    pub(crate) fn div_by_binomial_in_place(&mut self, k: usize) {
        let p = self.p;
        for i in k..self.coeffs.len() {
            self.coeffs[i] = sub_mod(self.coeffs[i], self.coeffs[i - k], p);
        }
    }
}

impl std::fmt::Display for FpSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{}) over F_{}", self.precision(), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, c: &[i64]) -> FpSeries {
        FpSeries::from_ints(p, c).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(3, &[1, 1]).add(&s(3, &[2, 1])).unwrap(), s(3, &[0, 2]));
        let f = s(5, &[1, 4, 2, 3]);
        assert_eq!(f.add(&FpSeries::zero(5, 4).unwrap()).unwrap(), f);
        let sum = s(3, &[1, 0, 2, 0]).add(&s(3, &[2, 0, 1, 0])).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.precision(), 4);
    }

    #[test]
    fn add_truncates_and_checks_modulus() {
        let a = s(3, &[1, 1, 1]);
        let b = s(3, &[1, 1]);
        assert_eq!(a.add(&b).unwrap().precision(), 2);
        assert_eq!(a.add(&s(5, &[1])), Err(Error::ModulusMismatch(3, 5)));
        assert_eq!(a.mul(&s(5, &[1])), Err(Error::ModulusMismatch(3, 5)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            s(3, &[1, 1, 0, 0]).mul(&s(3, &[1, 0, 1, 0])).unwrap(),
            s(3, &[1, 1, 1, 1])
        );
        assert_eq!(s(3, &[1, 1, 0, 0]).pow_int(3), s(3, &[1, 0, 0, 1]));
        let f = s(7, &[3, 0, 6, 1]);
        assert_eq!(f.mul(&FpSeries::one(7, 4).unwrap()).unwrap(), f);
    }

    #[test]
    fn compose_examples() {
        let f = s(3, &[1, 0, 1, 0]);
        let g = s(3, &[0, 1, 1, 0]);
        assert_eq!(f.compose(&g).unwrap(), s(3, &[1, 0, 1, 2]));
        let t = FpSeries::t(3, 4).unwrap();
        assert_eq!(f.compose(&t).unwrap(), f);
        assert_eq!(t.compose(&g).unwrap(), g);
        assert_eq!(
            f.compose(&s(3, &[1, 1, 0, 0])),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn inverse_examples() {
        let z = s(3, &[1, 1, 0, 0]);
        assert_eq!(z.mul_inverse().unwrap(), s(3, &[1, 2, 1, 2]));
        assert_eq!(
            FpSeries::one(3, 4).unwrap().mul_inverse().unwrap(),
            FpSeries::one(3, 4).unwrap()
        );
        assert!(z.mul(&z.mul_inverse().unwrap()).unwrap().is_one());
        assert_eq!(s(3, &[0, 1]).mul_inverse(), Err(Error::NotInvertible));
        // non-unit constant term
        let w = s(5, &[3, 1, 4]);
        assert!(w.mul(&w.mul_inverse().unwrap()).unwrap().is_one());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(s(3, &[1, 1, 0, 0, 0]).pow_int(3), s(3, &[1, 0, 0, 1, 0]));
        assert!(s(3, &[1, 2, 2]).pow_int(0).is_one());
        assert_eq!(s(3, &[1, 0, 1, 0, 0]).pow_int(2), s(3, &[1, 0, 2, 0, 1]));
    }

    #[test]
    fn division_by_binomial() {
        let mut z = s(5, &[1, 3, 2, 0, 4, 1]);
        let orig = z.clone();
        z.div_by_binomial_in_place(2);
        let back = z.mul(&FpSeries::basis_unit(5, 2, 6).unwrap()).unwrap();
        assert_eq!(back, orig);
    }

    #[test]
    fn construction_validates() {
        assert_eq!(FpSeries::new(4, vec![1]), Err(Error::NotPrime(4)));
        assert_eq!(FpSeries::new(3, vec![]), Err(Error::ZeroPrecision));
        assert!(matches!(
            FpSeries::new(3, vec![0, 3]),
            Err(Error::UnreducedCoefficient { .. })
        ));
        // p = 2 is accepted at this layer
        assert!(FpSeries::new(2, vec![1, 1]).is_ok());
    }

    #[test]
    fn json_shape() {
        let z = s(3, &[1, 2, 0]);
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"p":3,"precision":3,"coeffs":[1,2,0]}"#);
        let back: FpSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
        assert!(
            serde_json::from_str::<FpSeries>(r#"{"p":3,"precision":2,"coeffs":[1,2,0]}"#).is_err()
        );
        assert!(serde_json::from_str::<FpSeries>(r#"{"p":3,"precision":1,"coeffs":[5]}"#).is_err());
    }
}
