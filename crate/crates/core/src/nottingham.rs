//! The Nottingham group over F_p: series `t(1 + α₁t + α₂t² + …)` under
//! composition, together with the homomorphism onto `(F_p × F_p, ⊕)` that
//! reads off `(α₁, α₂)` and the coset decomposition it induces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpseries::FpSeries;
use crate::modular::{binom2, check_prime, div_mod, neg_mod, sub_mod};

/// An element `u(t) = t + α₁t² + α₂t³ + …` known modulo `t^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct NottinghamElement {
    series: FpSeries,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    kind: String,
    p: u32,
    precision: usize,
    coeffs: Vec<u32>,
}

impl TryFrom<ElementRepr> for NottinghamElement {
    type Error = Error;

    fn try_from(repr: ElementRepr) -> Result<Self> {
        if repr.kind != "nottingham" {
            return Err(Error::NotNottingham("kind must be \"nottingham\""));
        }
        if repr.coeffs.len() != repr.precision {
            return Err(Error::PrecisionTooSmall {
                have: repr.coeffs.len(),
                need: repr.precision,
            });
        }
        NottinghamElement::new(FpSeries::new(repr.p, repr.coeffs)?)
    }
}

impl From<NottinghamElement> for ElementRepr {
    fn from(u: NottinghamElement) -> Self {
        let p = u.p();
        let precision = u.precision();
        ElementRepr {
            kind: "nottingham".into(),
            p,
            precision,
            coeffs: u.series.coeffs().to_vec(),
        }
    }
}

/// Result of [`NottinghamElement::depth`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    /// `u ≡ t` at the full known precision.
    Infinite,
}

impl NottinghamElement {
    pub fn new(series: FpSeries) -> Result<Self> {
        if series.precision() < 2 {
            return Err(Error::PrecisionTooSmall {
                have: series.precision(),
                need: 2,
            });
        }
        if series.coeff(0) != 0 {
            return Err(Error::NotNottingham("constant term must be 0"));
        }
        if series.coeff(1) != 1 {
            return Err(Error::NotNottingham("coefficient of t must be 1"));
        }
        Ok(NottinghamElement { series })
    }

    pub(crate) fn from_series_unchecked(series: FpSeries) -> Self {
        debug_assert!(series.coeff(0) == 0 && series.coeff(1) == 1);
        NottinghamElement { series }
    }

    /// `t(1 + α₁t + α₂t² + …)` at the given precision; missing αᵢ are zero,
    /// extra ones are dropped.
    pub fn from_unit_coeffs(p: u32, alphas: &[u32], precision: usize) -> Result<Self> {
        check_prime(p)?;
        if precision < 2 {
            return Err(Error::PrecisionTooSmall {
                have: precision,
                need: 2,
            });
        }
        let mut coeffs = vec![0u32; precision];
        coeffs[1] = 1;
        for (i, &a) in alphas.iter().enumerate() {
            if i + 2 < precision {
                coeffs[i + 2] = a % p;
            }
        }
        Ok(NottinghamElement {
            series: FpSeries::from_raw(p, coeffs),
        })
    }

    pub fn identity(p: u32, precision: usize) -> Result<Self> {
        NottinghamElement::from_unit_coeffs(p, &[], precision)
    }

    /// `t(1 + c·t^k)`.
    pub fn monomial_shift(p: u32, k: usize, c: u32, precision: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NotNottingham("shift degree must be positive"));
        }
        let mut alphas = vec![0u32; k];
        alphas[k - 1] = c % p;
        NottinghamElement::from_unit_coeffs(p, &alphas, precision)
    }

    /// `g(k) = t(1 + k·t²)`, the coset representatives.
    pub fn g(p: u32, k: u32, precision: usize) -> Result<Self> {
        NottinghamElement::monomial_shift(p, 2, k, precision)
    }

    pub fn p(&self) -> u32 {
        self.series.p()
    }

    pub fn precision(&self) -> usize {
        self.series.precision()
    }

    pub fn series(&self) -> &FpSeries {
        &self.series
    }

    /// The coefficient αᵢ of `t^{i+1}` (so α₁ is the coefficient of t²).
    pub fn alpha(&self, i: usize) -> u32 {
        self.series.coeff(i + 1)
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision < 2 {
            return Err(Error::PrecisionTooSmall {
                have: precision,
                need: 2,
            });
        }
        Ok(NottinghamElement {
            series: self.series.truncate(precision)?,
        })
    }

    /// `u(t)/t`, a principal unit of precision one less.
    pub fn unit_part(&self) -> FpSeries {
        FpSeries::from_raw(self.p(), self.series.coeffs()[1..].to_vec())
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.depth(), Depth::Infinite)
    }

    /// `self ∘ other`, i.e. `self(other(t))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let s = self.series.compose(&other.series)?;
        Ok(NottinghamElement::from_series_unchecked(s))
    }

    /// The compositional inverse, solved one degree at a time.
    pub fn inverse(&self) -> Self {
        let p = self.p();
        let n = self.precision();
        let mut v = NottinghamElement::identity(p, n).expect("valid identity");
        for k in 2..n {
            let w = self
                .series
                .compose(&v.series)
                .expect("same p, zero constant term");
            let c = w.coeff(k);
            if c != 0 {
                let mut coeffs = v.series.coeffs().to_vec();
                coeffs[k] = sub_mod(coeffs[k], c, p);
                v = NottinghamElement::from_series_unchecked(FpSeries::from_raw(p, coeffs));
            }
        }
        v
    }

    /// `w ∘ self ∘ w⁻¹`.
    pub fn conjugate_by(&self, w: &Self) -> Result<Self> {
        w.compose(self)?.compose(&w.inverse())
    }

    /// Largest `d` with `u(t) ≡ t mod t^{d+1}`.
    pub fn depth(&self) -> Depth {
        match self
            .series
            .coeffs()
            .iter()
            .enumerate()
            .skip(2)
            .find(|(_, &c)| c != 0)
        {
            Some((i, _)) => Depth::Finite(i - 1),
            None => Depth::Infinite,
        }
    }

    /// Order of the image in the finite quotient modulo `t^n`.
    pub fn order_in_quotient(&self, n: usize) -> Result<u64> {
        let u = self.truncate(n)?;
        let mut power = u.clone();
        let mut k = 1u64;
        while !power.is_identity() {
            power = power.compose(&u)?;
            k += 1;
        }
        Ok(k)
    }

    /// `Φ(u) = (α, β)` where `u = t(1 + αt + βt² + …)`.
    pub fn phi(&self) -> Result<PhiImage> {
        if self.precision() < 4 {
            return Err(Error::PrecisionTooSmall {
                have: self.precision(),
                need: 4,
            });
        }
        Ok(PhiImage {
            p: self.p(),
            a: self.alpha(1),
            b: self.alpha(2),
        })
    }

    /// Membership in `𝔑(x₁,x₂)`: `(x₁/x₂)α − C(α,2) + β ≡ 0 (mod p)`.
    pub fn in_coset_set(&self, x1: u32, x2: u32) -> Result<bool> {
        Ok(self.coset_index(x1, x2)? == 0)
    }

    /// The unique `k` with `u ∈ 𝔑(x₁,x₂)·g(k)`.
    pub fn coset_index(&self, x1: u32, x2: u32) -> Result<u32> {
        let p = self.p();
        if x2 % p == 0 {
            return Err(Error::ZeroX2);
        }
        let phi = self.phi()?;
        Ok(coset_value(p, x1, x2, phi.a, phi.b))
    }
}

/// `(x₁/x₂)α − C(α,2) + β` in F_p.
pub(crate) fn coset_value(p: u32, x1: u32, x2: u32, alpha: u32, beta: u32) -> u32 {
    let ratio = div_mod(x1, x2, p);
    let term = (ratio as u64 * alpha as u64 % p as u64) as u32;
    (sub_mod(term, binom2(alpha, p), p) + beta) % p
}

impl std::fmt::Display for NottinghamElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.series.fmt(f)
    }
}

/// An element of `(F_p × F_p, ⊕)` with `(a,b) ⊕ (c,d) = (a+c, b+d+2ac)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhiImage {
    p: u32,
    pub a: u32,
    pub b: u32,
}

impl PhiImage {
    pub fn new(p: u32, a: u32, b: u32) -> Self {
        PhiImage {
            p,
            a: a % p,
            b: b % p,
        }
    }

    pub fn identity(p: u32) -> Self {
        PhiImage { p, a: 0, b: 0 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn oplus(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        let p = self.p as u64;
        let a = (self.a + other.a) as u64 % p;
        let b = (self.b as u64 + other.b as u64 + 2 * self.a as u64 * other.a as u64) % p;
        Ok(PhiImage {
            p: self.p,
            a: a as u32,
            b: b as u32,
        })
    }

    /// `(−a, −b + 2a²)`.
    pub fn inverse(&self) -> Self {
        let p = self.p;
        let two_a2 = (2 * self.a as u64 * self.a as u64 % p as u64) as u32;
        PhiImage {
            p,
            a: neg_mod(self.a, p),
            b: (neg_mod(self.b, p) + two_a2) % p,
        }
    }
}

/// All `p^{N−2}` representatives `t(1 + α₁t + … + α_{N−2}t^{N−2})` of the
/// quotient modulo `t^N`, lexicographic with α₁ varying fastest.
pub fn enumerate_quotient(p: u32, n: usize) -> Result<QuotientIter> {
    check_prime(p)?;
    if n < 2 {
        return Err(Error::PrecisionTooSmall { have: n, need: 2 });
    }
    Ok(QuotientIter {
        p,
        digits: vec![0; n - 2],
        done: false,
    })
}

pub fn quotient_size(p: u32, n: usize) -> u64 {
    (p as u64).pow(n.saturating_sub(2) as u32)
}

pub struct QuotientIter {
    p: u32,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for QuotientIter {
    type Item = NottinghamElement;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.digits.len() + 2;
        let item =
            NottinghamElement::from_unit_coeffs(self.p, &self.digits, n).expect("valid digits");
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.p {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: u32, alphas: &[u32], n: usize) -> NottinghamElement {
        NottinghamElement::from_unit_coeffs(p, alphas, n).unwrap()
    }

    #[test]
    fn compose_examples() {
        let u = el(3, &[1], 4);
        let v = el(3, &[2], 4);
        let uv = u.compose(&v).unwrap();
        assert_eq!(uv, el(3, &[0, 1], 4));
        let phi = uv.phi().unwrap();
        assert_eq!((phi.a, phi.b), (0, 1));
        assert_eq!(phi, u.phi().unwrap().oplus(&v.phi().unwrap()).unwrap());
        let t = NottinghamElement::identity(3, 4).unwrap();
        assert_eq!(u.compose(&t).unwrap(), u);
        assert_eq!(t.compose(&v).unwrap(), v);
    }

    #[test]
    fn inverse_examples() {
        let t = NottinghamElement::identity(3, 6).unwrap();
        assert_eq!(t.inverse(), t);
        let u = el(3, &[1], 6);
        assert!(u.compose(&u.inverse()).unwrap().is_identity());
        assert!(u.inverse().compose(&u).unwrap().is_identity());
        assert_eq!(u.inverse().inverse(), u);
        let w = el(7, &[3, 5, 0, 6, 1, 2], 9);
        assert!(w.compose(&w.inverse()).unwrap().is_identity());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(
            NottinghamElement::monomial_shift(3, 5, 1, 8)
                .unwrap()
                .depth(),
            Depth::Finite(5)
        );
        assert_eq!(
            NottinghamElement::identity(3, 8).unwrap().depth(),
            Depth::Infinite
        );
        assert_eq!(
            NottinghamElement::monomial_shift(5, 3, 2, 8)
                .unwrap()
                .depth(),
            Depth::Finite(3)
        );
    }

    #[test]
    fn order_examples() {
        let geometric = el(3, &[1; 28], 30);
        assert_eq!(geometric.order_in_quotient(30).unwrap(), 3);
        assert_eq!(
            NottinghamElement::identity(3, 5)
                .unwrap()
                .order_in_quotient(5)
                .unwrap(),
            1
        );
        assert_eq!(el(3, &[1], 3).order_in_quotient(3).unwrap(), 3);
        assert!(el(3, &[1], 3).order_in_quotient(4).is_err());
    }

    #[test]
    fn phi_examples() {
        let phi = el(3, &[1, 1], 4).phi().unwrap();
        assert_eq!((phi.a, phi.b), (1, 1));
        assert_eq!(
            NottinghamElement::identity(3, 4).unwrap().phi().unwrap(),
            PhiImage::identity(3)
        );
        for k in 0..5 {
            let phi = NottinghamElement::g(5, k, 6).unwrap().phi().unwrap();
            assert_eq!((phi.a, phi.b), (0, k));
        }
        assert!(el(3, &[1], 3).phi().is_err());
    }

    #[test]
    fn oplus_examples() {
        let x = PhiImage::new(3, 1, 1);
        assert_eq!(
            x.oplus(&PhiImage::new(3, 2, 1)).unwrap(),
            PhiImage::identity(3)
        );
        assert_eq!(x.oplus(&PhiImage::identity(3)).unwrap(), x);
        for p in [3u32, 5, 7] {
            for a in 0..p {
                for b in 0..p {
                    let x = PhiImage::new(p, a, b);
                    assert_eq!(x.oplus(&x.inverse()).unwrap(), PhiImage::identity(p));
                }
            }
        }
        assert!(x.oplus(&PhiImage::new(5, 1, 1)).is_err());
    }

    #[test]
    fn coset_examples() {
        assert!(el(3, &[1], 4).in_coset_set(0, 1).unwrap());
        for x1 in 0..3 {
            for x2 in 1..3 {
                assert!(NottinghamElement::identity(3, 4)
                    .unwrap()
                    .in_coset_set(x1, x2)
                    .unwrap());
                assert!(!NottinghamElement::g(3, 1, 4)
                    .unwrap()
                    .in_coset_set(x1, x2)
                    .unwrap());
                for k in 0..3 {
                    assert_eq!(
                        NottinghamElement::g(3, k, 4)
                            .unwrap()
                            .coset_index(x1, x2)
                            .unwrap(),
                        k
                    );
                }
            }
        }
        assert_eq!(el(3, &[1, 1], 4).coset_index(1, 1).unwrap(), 2);
        assert_eq!(el(3, &[1], 4).in_coset_set(1, 0), Err(Error::ZeroX2));
    }

    #[test]
    fn quotient_enumeration() {
        let q: Vec<_> = enumerate_quotient(3, 3).unwrap().collect();
        assert_eq!(q, vec![el(3, &[], 3), el(3, &[1], 3), el(3, &[2], 3)]);
        assert_eq!(enumerate_quotient(3, 4).unwrap().count(), 9);
        let q: Vec<_> = enumerate_quotient(5, 2).unwrap().collect();
        assert_eq!(q, vec![NottinghamElement::identity(5, 2).unwrap()]);
        // α₁ varies fastest
        let q: Vec<_> = enumerate_quotient(3, 4).unwrap().take(4).collect();
        assert_eq!(q[3], el(3, &[0, 1], 4));
    }

    #[test]
    fn validation_and_json() {
        let bad = FpSeries::new(3, vec![0, 2, 1]).unwrap();
        assert!(NottinghamElement::new(bad).is_err());
        let u = el(5, &[1, 4], 5);
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"nottingham","p":5,"precision":5,"coeffs":[0,1,1,4,0]}"#
        );
        assert_eq!(serde_json::from_str::<NottinghamElement>(&json).unwrap(), u);
        let wrong_kind = json.replace("nottingham", "series");
        assert!(serde_json::from_str::<NottinghamElement>(&wrong_kind).is_err());
    }
}
