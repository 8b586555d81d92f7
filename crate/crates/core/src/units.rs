//! Coordinates of principal units on the basis `E_j = 1 + t^j`, `p ∤ j`.
//!
//! Exponents are kept modulo p². A unit is decomposed by peeling: the lowest
//! nonzero coefficient `a` of `t^k`, `k = p^v·j`, is removed by dividing by
//! `(1 + t^k)^a = E_j^{a·p^v}`, which contributes `a·p^v` to the exponent of
//! `E_j` (nothing once `v ≥ 2`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpseries::FpSeries;
use crate::modular::{check_prime, split_p_power};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExponentsRepr", into = "ExponentsRepr")]
pub struct UnitExponents {
    p: u32,
    bound: u32,
    exps: BTreeMap<u32, u32>,
}

#[derive(Serialize, Deserialize)]
struct ExponentsRepr {
    p: u32,
    bound: u32,
    exps: BTreeMap<String, u32>,
}

impl TryFrom<ExponentsRepr> for UnitExponents {
    type Error = Error;

    fn try_from(repr: ExponentsRepr) -> Result<Self> {
        let mut exps = BTreeMap::new();
        for (k, v) in repr.exps {
            let j: u32 = k.parse().map_err(|_| Error::InvalidIndex {
                index: 0,
                bound: repr.bound,
            })?;
            exps.insert(j, v);
        }
        UnitExponents::new(repr.p, repr.bound, exps)
    }
}

impl From<UnitExponents> for ExponentsRepr {
    fn from(e: UnitExponents) -> Self {
        ExponentsRepr {
            p: e.p,
            bound: e.bound,
            exps: e
                .exps
                .into_iter()
                .map(|(j, v)| (j.to_string(), v))
                .collect(),
        }
    }
}

/// Modulus in which the exponent of `E_j` is meaningful in `U₁/U_{bound+1}`:
/// the order of `E_j` there, capped at p².
pub fn exponent_modulus(p: u32, bound: u32, j: u32) -> u32 {
    if j * p > bound {
        p
    } else {
        p * p
    }
}

impl UnitExponents {
    pub fn new(p: u32, bound: u32, exps: BTreeMap<u32, u32>) -> Result<Self> {
        check_prime(p)?;
        let p2 = p * p;
        let mut clean = BTreeMap::new();
        for (j, v) in exps {
            if j == 0 || j > bound || j % p == 0 {
                return Err(Error::InvalidIndex { index: j, bound });
            }
            if v >= p2 {
                return Err(Error::InvalidValue {
                    index: j,
                    value: v,
                    modulus: p2,
                });
            }
            if v != 0 {
                clean.insert(j, v);
            }
        }
        Ok(UnitExponents {
            p,
            bound,
            exps: clean,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn get(&self, j: u32) -> u32 {
        self.exps.get(&j).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&j, &v)| (j, v))
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// The group law on exponent vectors: componentwise addition modulo
    /// [`exponent_modulus`]. Mirrors multiplication of the units.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.bound != other.bound {
            return Err(Error::PrecisionTooSmall {
                have: self.bound.min(other.bound) as usize,
                need: self.bound.max(other.bound) as usize,
            });
        }
        let mut exps = BTreeMap::new();
        for j in (1..=self.bound).filter(|j| j % self.p != 0) {
            let modulus = exponent_modulus(self.p, self.bound, j);
            let v = (self.get(j) + other.get(j)) % modulus;
            if v != 0 {
                exps.insert(j, v);
            }
        }
        Ok(UnitExponents {
            p: self.p,
            bound: self.bound,
            exps,
        })
    }
}

/// Peels `work` (a principal unit, precision ≥ bound+1) in place and writes
/// exponents mod p² into `out`, indexed by `j` (length ≥ bound+1).
pub(crate) fn peel(work: &mut FpSeries, bound: usize, out: &mut [u32]) {
    let p = work.p();
    let p2 = p * p;
    out.iter_mut().for_each(|c| *c = 0);
    for k in 1..=bound {
        let a = work.coeff(k);
        if a == 0 {
            continue;
        }
        let (v, j) = split_p_power(k as u32, p);
        if v < 2 {
            let contrib = a * p.pow(v);
            out[j as usize] = (out[j as usize] + contrib) % p2;
        }
        for _ in 0..a {
            work.div_by_binomial_in_place(k);
        }
    }
}

/// Exponents `c_j mod p²` with `z ≡ ∏ E_j^{c_j}` modulo `U_{bound+1}`.
pub fn decompose(z: &FpSeries, bound: u32) -> Result<UnitExponents> {
    if z.coeff(0) != 1 {
        return Err(Error::NotPrincipalUnit);
    }
    let need = bound as usize + 1;
    if z.precision() < need {
        return Err(Error::PrecisionTooSmall {
            have: z.precision(),
            need,
        });
    }
    let mut work = z.truncate(need)?;
    let mut out = vec![0u32; need];
    peel(&mut work, bound as usize, &mut out);
    let exps = out
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j as u32, c))
        .collect();
    Ok(UnitExponents {
        p: z.p(),
        bound,
        exps,
    })
}

/// `∏ E_j^{c_j}` at the given precision, factors in increasing `j`.
pub fn recompose(e: &UnitExponents, precision: usize) -> Result<FpSeries> {
    let need = e.bound as usize + 1;
    if precision < need {
        return Err(Error::PrecisionTooSmall {
            have: precision,
            need,
        });
    }
    let mut acc = FpSeries::one(e.p, precision)?;
    for (j, c) in e.iter() {
        let factor = FpSeries::basis_unit(e.p, j as usize, precision)?.pow_int(c as u64);
        acc = acc.mul_unchecked(&factor);
    }
    Ok(acc)
}
