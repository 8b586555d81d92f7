//! Characters `χ: U₁ → Z/p²Z` stored by their values `χ(E_j)` on the basis
//! `E_j = 1 + t^j`, `p ∤ j ≤ bound`, together with the Nottingham action
//! `(u·χ)(f) = χ(f ∘ u)`, break sequences, standard expansions and indicators.
//!
//! Orientation of the action: `act(u ∘ v, χ) = act(u, act(v, χ))`.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TypeViolation};
use crate::fpseries::FpSeries;
use crate::modular::{check_odd_prime, div_mod, gcd, pow_mod, sub_mod, valuation_p2};
use crate::nottingham::NottinghamElement;
use crate::units::{decompose, peel};

/// Indices `1 ≤ j ≤ bound` with `p ∤ j`, ascending.
pub fn support(p: u32, bound: u32) -> Vec<u32> {
    (1..=bound).filter(|j| j % p != 0).collect()
}

/// Position of `j` in [`support`].
fn position(p: u32, j: u32) -> usize {
    (j - 1 - (j - 1) / p) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CharacterRepr", into = "CharacterRepr")]
pub struct Character {
    p: u32,
    bound: u32,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    p: u32,
    bound: u32,
    coeffs: BTreeMap<String, u32>,
}

impl TryFrom<CharacterRepr> for Character {
    type Error = Error;

    fn try_from(repr: CharacterRepr) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, v) in repr.coeffs {
            let j: u32 = k.trim().parse().map_err(|_| Error::InvalidIndex {
                index: 0,
                bound: repr.bound,
            })?;
            coeffs.insert(j, v);
        }
        Character::new(repr.p, repr.bound, &coeffs)
    }
}

impl From<Character> for CharacterRepr {
    fn from(c: Character) -> Self {
        let coeffs = c
            .iter()
            .filter(|&(_, v)| v != 0)
            .map(|(j, v)| (j.to_string(), v))
            .collect();
        CharacterRepr {
            p: c.p,
            bound: c.bound,
            coeffs,
        }
    }
}

impl Character {
    /// Builds `χ` from its nonzero values; absent indices are zero.
    pub fn new(p: u32, bound: u32, coeffs: &BTreeMap<u32, u32>) -> Result<Self> {
        check_odd_prime(p)?;
        let mut values = vec![0u32; support(p, bound).len()];
        for (&j, &v) in coeffs {
            if j == 0 || j > bound || j % p == 0 {
                return Err(Error::InvalidIndex { index: j, bound });
            }
            values[position(p, j)] = v;
        }
        Character::from_values(p, bound, values)
    }

    /// Builds `χ` from values listed in [`support`] order.
    pub fn from_values(p: u32, bound: u32, values: Vec<u32>) -> Result<Self> {
        check_odd_prime(p)?;
        let supp = support(p, bound);
        if values.len() != supp.len() {
            return Err(Error::InvalidIndex {
                index: values.len() as u32,
                bound,
            });
        }
        let p2 = p * p;
        for (&j, &v) in supp.iter().zip(&values) {
            if v >= p2 {
                return Err(Error::InvalidValue {
                    index: j,
                    value: v,
                    modulus: p2,
                });
            }
            // E_j has order p in U_1/U_{bound+1} when j·p > bound
            if j * p > bound && v % p != 0 {
                return Err(Error::NotContinuous {
                    index: j,
                    value: v,
                    bound,
                });
            }
        }
        Ok(Character { p, bound, values })
    }

    pub(crate) fn from_values_unchecked(p: u32, bound: u32, values: Vec<u32>) -> Self {
        Character { p, bound, values }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// `χ(E_j)`; zero for indices outside the support.
    pub fn get(&self, j: u32) -> u32 {
        if j == 0 || j > self.bound || j % self.p == 0 {
            0
        } else {
            self.values[position(self.p, j)]
        }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `(j, χ(E_j))` over the support.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        support(self.p, self.bound)
            .into_iter()
            .zip(self.values.iter().copied())
    }
}

impl std::fmt::Display for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .filter(|&(_, v)| v != 0)
            .map(|(j, v)| format!("{v}·Z{j}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `χ(z)` for a principal unit `z` of precision at least `bound + 1`.
pub fn evaluate(chi: &Character, z: &FpSeries) -> Result<u32> {
    if z.p() != chi.p {
        return Err(Error::ModulusMismatch(chi.p, z.p()));
    }
    let e = decompose(z, chi.bound)?;
    let p2 = (chi.p * chi.p) as u64;
    let total = e
        .iter()
        .map(|(j, c)| c as u64 * chi.get(j) as u64 % p2)
        .sum::<u64>()
        % p2;
    Ok(total as u32)
}

/// The linear map `χ ↦ u·χ` in the coordinates of [`support`]: row `j` holds
/// the exponents of `E_j ∘ u = 1 + u(t)^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMatrix {
    p2: u32,
    dim: usize,
    entries: Vec<u32>,
}

impl ActionMatrix {
    pub fn new(u: &NottinghamElement, bound: u32) -> Result<Self> {
        let p = u.p();
        let need = bound as usize + 1;
        if u.precision() < need {
            return Err(Error::PrecisionTooSmall {
                have: u.precision(),
                need,
            });
        }
        let supp = support(p, bound);
        let dim = supp.len();
        let base = u.truncate(need)?.series().clone();
        let mut power = base.clone();
        let mut buf = vec![0u32; need];
        let mut entries = Vec::with_capacity(dim * dim);
        for j in 1..=bound {
            if j > 1 {
                power = power.mul_unchecked(&base);
            }
            if j % p == 0 {
                continue;
            }
            let mut coeffs = power.coeffs().to_vec();
            coeffs[0] = 1;
            let mut work = FpSeries::from_raw(p, coeffs);
            peel(&mut work, bound as usize, &mut buf);
            entries.extend(supp.iter().map(|&i| buf[i as usize]));
        }
        Ok(ActionMatrix {
            p2: p * p,
            dim,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, values: &[u32], out: &mut [u32]) {
        let p2 = self.p2 as u64;
        for (r, row) in self.entries.chunks_exact(self.dim).enumerate() {
            let s: u64 = row
                .iter()
                .zip(values)
                .map(|(&a, &b)| a as u64 * b as u64)
                .sum();
            out[r] = (s % p2) as u32;
        }
    }
}

/// `u·χ`, the character `f ↦ χ(f ∘ u)`.
pub fn act(u: &NottinghamElement, chi: &Character) -> Result<Character> {
    if u.p() != chi.p {
        return Err(Error::ModulusMismatch(chi.p, u.p()));
    }
    let m = ActionMatrix::new(u, chi.bound)?;
    let mut out = vec![0u32; chi.values.len()];
    m.apply(&chi.values, &mut out);
    Ok(Character::from_values_unchecked(chi.p, chi.bound, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BreakSequence {
    pub b0: u32,
    pub b1: u32,
}

impl std::fmt::Display for BreakSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{},{}>", self.b0, self.b1)
    }
}

/// Which of the admissibility conditions fails for `<b0,b1>`, if any.
pub fn type_violation(p: u32, b0: u32, b1: u32) -> Option<TypeViolation> {
    if gcd(p, b0) != 1 {
        Some(TypeViolation::FirstBreakDivisible)
    } else if b1 < p * b0 {
        Some(TypeViolation::SecondBreakTooSmall)
    } else if b1 > p * b0 && gcd(p, b1) != 1 {
        Some(TypeViolation::SecondBreakDivisible)
    } else {
        None
    }
}

pub fn validate_type(p: u32, b0: u32, b1: u32) -> bool {
    type_violation(p, b0, b1).is_none()
}

pub fn check_type(p: u32, b0: u32, b1: u32) -> Result<()> {
    match type_violation(p, b0, b1) {
        None => Ok(()),
        Some(violation) => Err(Error::InvalidType {
            p,
            b0,
            b1,
            violation,
        }),
    }
}

/// `b⁽⁰⁾` is the largest `j` with `χ(E_j)` a unit; `b⁽¹⁾` the largest `b`
/// such that `χ(U_b)` still contains `p`, i.e. the max over nonzero values of
/// `j` (value divisible by p) or `j·p` (unit value, via `E_j^p = 1 + t^{jp}`).
fn break_of_values(p: u32, supp: &[u32], values: &[u32]) -> Option<BreakSequence> {
    let mut b0 = None;
    let mut b1 = 0;
    for (&j, &v) in supp.iter().zip(values) {
        match valuation_p2(v, p) {
            0 => {
                b0 = Some(j);
                b1 = b1.max(j * p);
            }
            1 => b1 = b1.max(j),
            _ => {}
        }
    }
    b0.map(|b0| BreakSequence { b0, b1 })
}

pub fn break_sequence(chi: &Character) -> Result<BreakSequence> {
    let supp = support(chi.p, chi.bound);
    let bs = break_of_values(chi.p, &supp, &chi.values).ok_or(Error::NotSurjective)?;
    check_type(chi.p, bs.b0, bs.b1)?;
    Ok(bs)
}

/// `χ = x₁𝔷₁ + x₂𝔷₂ + Σ a_j·p·𝔷_j` for a character of type `<2,m>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardExpansion {
    pub p: u32,
    pub m: u32,
    pub x1: u32,
    pub x2: u32,
    /// `a_j` mod p for `p ∤ j ≤ m`; `a_1`, `a_2` are the p-digits of `χ(E_1)`, `χ(E_2)`.
    pub a: BTreeMap<u32, u32>,
}

impl StandardExpansion {
    pub fn a(&self, j: u32) -> u32 {
        self.a.get(&j).copied().unwrap_or(0)
    }

    /// The indicator, a complete invariant for weak equivalence.
    pub fn indicator(&self) -> Indicator {
        let (p, m, x1, x2) = (self.p, self.m, self.x1, self.x2);
        let pu = p as u64;
        let ratio = div_mod(x1, x2, p);
        match m % p {
            0 => {
                let num = pow_mod(self.a(m - 1) as u64, pu, pu) as u32;
                let den = ((m - 1) % p) as u64 * pow_mod(x2 as u64, pu, pu) % pu;
                let q = sub_mod(ratio, div_mod(num, den as u32, p), p);
                Indicator::M0 { x2, q }
            }
            1 => Indicator::M1 { x2, am: self.a(m) },
            _ => {
                let am = self.a(m);
                let den = ((m - 1) % p) as u64 * am as u64 % pu;
                let q = sub_mod(ratio, div_mod(self.a(m - 1), den as u32, p), p);
                Indicator::Mid { x2, am, q }
            }
        }
    }
}

pub fn standard_expansion(chi: &Character) -> Result<StandardExpansion> {
    let bs = break_sequence(chi)?;
    if bs.b0 != 2 {
        return Err(Error::WrongType {
            expected_b0: 2,
            expected_b1: bs.b1,
            found_b0: bs.b0,
            found_b1: bs.b1,
        });
    }
    let p = chi.p;
    let v1 = chi.get(1);
    let v2 = chi.get(2);
    let mut a = BTreeMap::new();
    a.insert(1, v1 / p);
    a.insert(2, v2 / p);
    for j in support(p, bs.b1).into_iter().filter(|&j| j >= 3) {
        a.insert(j, chi.get(j) / p);
    }
    Ok(StandardExpansion {
        p,
        m: bs.b1,
        x1: v1 % p,
        x2: v2 % p,
        a,
    })
}

/// Indicator of a character of type `<2,m>`, one shape per residue of `m` mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IndicatorRepr", into = "IndicatorRepr")]
pub enum Indicator {
    /// `m ≡ 0`: `[x₂, x₁/x₂ − a_{m−1}^p/((m−1)x₂^p)]`.
    M0 { x2: u32, q: u32 },
    /// `m ≢ 0,1`: `[x₂, a_m, x₁/x₂ − a_{m−1}/((m−1)a_m)]`.
    Mid { x2: u32, am: u32, q: u32 },
    /// `m ≡ 1`: `[x₂, a_m]`.
    M1 { x2: u32, am: u32 },
}

#[derive(Serialize, Deserialize)]
struct IndicatorRepr {
    case: String,
    values: Vec<u32>,
}

impl Indicator {
    pub fn case(&self) -> &'static str {
        match self {
            Indicator::M0 { .. } => "m0",
            Indicator::Mid { .. } => "mid",
            Indicator::M1 { .. } => "m1",
        }
    }

    pub fn values(&self) -> Vec<u32> {
        match *self {
            Indicator::M0 { x2, q } => vec![x2, q],
            Indicator::Mid { x2, am, q } => vec![x2, am, q],
            Indicator::M1 { x2, am } => vec![x2, am],
        }
    }

    /// The last coordinate, `ind₀`.
    pub fn last(&self) -> u32 {
        *self.values().last().expect("nonempty")
    }
}

impl TryFrom<IndicatorRepr> for Indicator {
    type Error = String;

    fn try_from(r: IndicatorRepr) -> std::result::Result<Self, String> {
        match (r.case.as_str(), r.values.as_slice()) {
            ("m0", &[x2, q]) => Ok(Indicator::M0 { x2, q }),
            ("mid", &[x2, am, q]) => Ok(Indicator::Mid { x2, am, q }),
            ("m1", &[x2, am]) => Ok(Indicator::M1 { x2, am }),
            _ => Err(format!(
                "bad indicator: case {} with {} values",
                r.case,
                r.values.len()
            )),
        }
    }
}

impl From<Indicator> for IndicatorRepr {
    fn from(i: Indicator) -> Self {
        IndicatorRepr {
            case: i.case().into(),
            values: i.values(),
        }
    }
}

impl std::fmt::Display for Indicator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.values())
    }
}

pub fn indicator(chi: &Character) -> Result<Indicator> {
    Ok(standard_expansion(chi)?.indicator())
}

/// Indicator for type `<1,m>` over the prime field, where the trace is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IndicatorRepr", into = "IndicatorRepr")]
pub enum Indicator1m {
    /// `m = p`: `[a₀, a_{p−1}/a₀^{p−1}]`.
    AtP { a0: u32, trace: u32 },
    /// `m ≡ 1`: `[a₀, a_m, 0]`.
    M1 { a0: u32, am: u32 },
    /// otherwise: `[a₀, a_m, a₀a_{m−1}/a_m]`.
    Other { a0: u32, am: u32, trace: u32 },
}

impl Indicator1m {
    pub fn case(&self) -> &'static str {
        match self {
            Indicator1m::AtP { .. } => "p",
            Indicator1m::M1 { .. } => "m1",
            Indicator1m::Other { .. } => "other",
        }
    }

    pub fn values(&self) -> Vec<u32> {
        match *self {
            Indicator1m::AtP { a0, trace } => vec![a0, trace],
            Indicator1m::M1 { a0, am } => vec![a0, am, 0],
            Indicator1m::Other { a0, am, trace } => vec![a0, am, trace],
        }
    }
}

impl TryFrom<IndicatorRepr> for Indicator1m {
    type Error = String;

    fn try_from(r: IndicatorRepr) -> std::result::Result<Self, String> {
        match (r.case.as_str(), r.values.as_slice()) {
            ("p", &[a0, trace]) => Ok(Indicator1m::AtP { a0, trace }),
            ("m1", &[a0, am, 0]) => Ok(Indicator1m::M1 { a0, am }),
            ("other", &[a0, am, trace]) => Ok(Indicator1m::Other { a0, am, trace }),
            _ => Err(format!(
                "bad <1,m> indicator: case {} with {} values",
                r.case,
                r.values.len()
            )),
        }
    }
}

impl From<Indicator1m> for IndicatorRepr {
    fn from(i: Indicator1m) -> Self {
        IndicatorRepr {
            case: i.case().into(),
            values: i.values(),
        }
    }
}

pub fn indicator_1m(chi: &Character) -> Result<Indicator1m> {
    let bs = break_sequence(chi)?;
    if bs.b0 != 1 {
        return Err(Error::WrongType {
            expected_b0: 1,
            expected_b1: bs.b1,
            found_b0: bs.b0,
            found_b1: bs.b1,
        });
    }
    let p = chi.p;
    let m = bs.b1;
    let a0 = chi.get(1) % p;
    let digit = |j: u32| {
        if j == 1 {
            chi.get(1) / p
        } else {
            chi.get(j) / p
        }
    };
    Ok(if m == p {
        let den = pow_mod(a0 as u64, (p - 1) as u64, p as u64) as u32;
        Indicator1m::AtP {
            a0,
            trace: div_mod(digit(p - 1), den, p),
        }
    } else if m % p == 1 {
        Indicator1m::M1 { a0, am: digit(m) }
    } else {
        let am = digit(m);
        let num = (a0 as u64 * digit(m - 1) as u64 % p as u64) as u32;
        Indicator1m::Other {
            a0,
            am,
            trace: div_mod(num, am, p),
        }
    })
}

/// The finite set of characters supported on `j ≤ m` whose values at
/// `j > b0` are multiples of p, indexed in mixed radix so that index order is
/// lexicographic order on value vectors.
#[derive(Debug, Clone)]
pub struct CharacterSpace {
    p: u32,
    b0: u32,
    m: u32,
    support: Vec<u32>,
    radix: Vec<u32>,
    size: u64,
}

impl CharacterSpace {
    pub fn new(p: u32, b0: u32, m: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if !(1..=2).contains(&b0) {
            return Err(Error::UnsupportedType(b0));
        }
        check_type(p, b0, m)?;
        let support = support(p, m);
        let radix: Vec<u32> = support
            .iter()
            .map(|&j| if j <= b0 { p * p } else { p })
            .collect();
        let size = radix.iter().map(|&r| r as u64).product();
        Ok(CharacterSpace {
            p,
            b0,
            m,
            support,
            radix,
            size,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn b0(&self) -> u32 {
        self.b0
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn encode(&self, values: &[u32]) -> u32 {
        let mut idx = 0u64;
        for ((&v, &r), &j) in values.iter().zip(&self.radix).zip(&self.support) {
            let digit = if j <= self.b0 { v } else { v / self.p };
            debug_assert!(j <= self.b0 || v % self.p == 0);
            idx = idx * r as u64 + digit as u64;
        }
        idx as u32
    }

    pub fn decode(&self, index: u32, out: &mut [u32]) {
        let mut idx = index as u64;
        for i in (0..self.radix.len()).rev() {
            let r = self.radix[i] as u64;
            let digit = (idx % r) as u32;
            idx /= r;
            out[i] = if self.support[i] <= self.b0 {
                digit
            } else {
                digit * self.p
            };
        }
    }

    pub fn character(&self, index: u32) -> Character {
        let mut values = vec![0u32; self.dim()];
        self.decode(index, &mut values);
        Character::from_values_unchecked(self.p, self.m, values)
    }

    /// Allowed values at each position for characters of type `<b0,m>`.
    fn allowed_values(&self) -> Vec<Vec<u32>> {
        let (p, b0, m) = (self.p, self.b0, self.m);
        self.support
            .iter()
            .map(|&j| {
                if j < b0 {
                    (0..p * p).collect()
                } else if j == b0 {
                    (0..p * p).filter(|v| v % p != 0).collect()
                } else if j == m && m % p != 0 {
                    (1..p).map(|d| d * p).collect()
                } else {
                    (0..p).map(|d| d * p).collect()
                }
            })
            .collect()
    }

    /// Number of characters in the constraint product (before the break filter).
    pub fn constraint_count(&self) -> u64 {
        self.allowed_values()
            .iter()
            .map(|v| v.len() as u64)
            .product()
    }

    /// Indices of all characters of type `<b0,m>`, ascending.
    pub fn members(&self) -> Vec<u32> {
        let allowed = self.allowed_values();
        let target = BreakSequence {
            b0: self.b0,
            b1: self.m,
        };
        let mut out = Vec::new();
        let mut digits = vec![0usize; allowed.len()];
        let mut values: Vec<u32> = allowed.iter().map(|a| a[0]).collect();
        loop {
            if break_of_values(self.p, &self.support, &values) == Some(target) {
                out.push(self.encode(&values));
            }
            // odometer, last position fastest
            let mut i = allowed.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < allowed[i].len() {
                    values[i] = allowed[i][digits[i]];
                    break;
                }
                digits[i] = 0;
                values[i] = allowed[i][0];
            }
        }
    }

    /// A uniformly random character of type `<b0,m>`.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Character {
        let allowed = self.allowed_values();
        let target = BreakSequence {
            b0: self.b0,
            b1: self.m,
        };
        loop {
            let values: Vec<u32> = allowed
                .iter()
                .map(|a| a[rng.random_range(0..a.len())])
                .collect();
            if break_of_values(self.p, &self.support, &values) == Some(target) {
                return Character::from_values_unchecked(self.p, self.m, values);
            }
        }
    }
}

/// All characters of type `<b0,m>`, in lexicographic order of their values.
pub fn enumerate_characters(p: u32, b0: u32, m: u32) -> Result<Vec<Character>> {
    let space = CharacterSpace::new(p, b0, m)?;
    Ok(space
        .members()
        .into_iter()
        .map(|i| space.character(i))
        .collect())
}

/// The set of indicator values realized by characters of type `<2,m>`.
///
/// The indicator only reads `x₁, x₂, a_{m−1}, a_m`, so these are varied over
/// their allowed ranges with every other coordinate zero.
pub fn realizable_indicators(p: u32, m: u32) -> Result<BTreeSet<Indicator>> {
    check_odd_prime(p)?;
    check_type(p, 2, m)?;
    let am_range: Vec<u32> = if m % p == 0 {
        vec![0]
    } else {
        (1..p).collect()
    };
    let mut out = BTreeSet::new();
    for x1 in 0..p {
        for x2 in 1..p {
            for a_prev in 0..p {
                for &am in &am_range {
                    let mut coeffs = BTreeMap::from([(1, x1), (2, x2)]);
                    if (m - 1) % p != 0 {
                        coeffs.insert(m - 1, a_prev * p);
                    } else if a_prev != 0 {
                        continue;
                    }
                    if m % p != 0 {
                        coeffs.insert(m, am * p);
                    }
                    let chi = Character::new(p, m, &coeffs)?;
                    out.insert(indicator(&chi)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(p: u32, bound: u32, pairs: &[(u32, u32)]) -> Character {
        Character::new(p, bound, &pairs.iter().copied().collect()).unwrap()
    }

    fn el(p: u32, alphas: &[u32], n: usize) -> NottinghamElement {
        NottinghamElement::from_unit_coeffs(p, alphas, n).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let c = chi(3, 7, &[(1, 1), (2, 1), (7, 3)]);
        let z = FpSeries::from_ints(3, &[1, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(evaluate(&c, &z).unwrap(), 3);
        assert_eq!(evaluate(&c, &FpSeries::one(3, 8).unwrap()).unwrap(), 0);
        for (j, v) in c.iter() {
            assert_eq!(
                evaluate(&c, &FpSeries::basis_unit(3, j as usize, 8).unwrap()).unwrap(),
                v
            );
        }
        assert!(evaluate(&c, &FpSeries::one(3, 7).unwrap()).is_err());
    }

    #[test]
    fn act_examples() {
        let c = chi(3, 7, &[(1, 1), (2, 1), (7, 3)]);
        assert_eq!(
            act(&NottinghamElement::identity(3, 8).unwrap(), &c).unwrap(),
            c
        );
        let moved = act(&el(3, &[1], 8), &c).unwrap();
        assert_eq!(moved.get(1) % 3, 2);
        assert_eq!(moved.get(7), 3);
        assert!(act(&el(3, &[1], 7), &c).is_err());
    }

    #[test]
    fn break_sequence_examples() {
        assert_eq!(
            break_sequence(&chi(3, 7, &[(2, 1), (7, 3)])).unwrap(),
            BreakSequence { b0: 2, b1: 7 }
        );
        // E_2^3 = 1 + t^6 carries the second break when nothing larger does
        assert_eq!(
            break_sequence(&chi(3, 6, &[(2, 1)])).unwrap(),
            BreakSequence { b0: 2, b1: 6 }
        );
        assert_eq!(
            break_sequence(&chi(3, 6, &[(2, 1), (5, 3)])).unwrap(),
            BreakSequence { b0: 2, b1: 6 }
        );
        // 𝔷_1 alone has type <1,p>
        assert_eq!(
            break_sequence(&chi(3, 3, &[(1, 1)])).unwrap(),
            BreakSequence { b0: 1, b1: 3 }
        );
        assert_eq!(
            break_sequence(&chi(3, 7, &[(4, 3)])),
            Err(Error::NotSurjective)
        );
        // a unit at index 1 with bound 1 does not vanish on U_2
        assert!(matches!(
            Character::new(3, 1, &BTreeMap::from([(1, 1)])),
            Err(Error::NotContinuous { .. })
        ));
        assert!(Character::new(3, 6, &BTreeMap::from([(6, 3)])).is_err());
    }

    #[test]
    fn validate_type_examples() {
        assert!(validate_type(3, 2, 6));
        assert!(!validate_type(3, 2, 5));
        assert!(!validate_type(3, 2, 9));
        assert!(validate_type(3, 2, 7));
        assert!(!validate_type(3, 3, 10));
        assert_eq!(
            type_violation(3, 2, 5),
            Some(TypeViolation::SecondBreakTooSmall)
        );
        let msg = check_type(3, 2, 5).unwrap_err().to_string();
        assert!(msg.contains("b1 >= p*b0"), "{msg}");
    }

    #[test]
    fn standard_expansion_examples() {
        let se = standard_expansion(&chi(3, 7, &[(1, 4), (2, 1), (7, 3)])).unwrap();
        assert_eq!((se.x1, se.x2, se.a(1), se.a(2), se.a(7)), (1, 1, 1, 0, 1));
        let se = standard_expansion(&chi(3, 7, &[(2, 7), (7, 3)])).unwrap();
        assert_eq!((se.x2, se.a(2)), (1, 2));
        assert!(matches!(
            standard_expansion(&chi(3, 3, &[(1, 1)])),
            Err(Error::WrongType { .. })
        ));
    }

    #[test]
    fn indicator_examples() {
        let i = indicator(&chi(3, 7, &[(2, 1), (7, 3)])).unwrap();
        assert_eq!(i, Indicator::M1 { x2: 1, am: 1 });
        let i = indicator(&chi(3, 8, &[(2, 1), (8, 3)])).unwrap();
        assert_eq!(i.values(), vec![1, 1, 0]);
        let i = indicator(&chi(3, 6, &[(1, 1), (2, 1)])).unwrap();
        assert_eq!(i, Indicator::M0 { x2: 1, q: 1 });
        // q = x1/x2 − a_{m−1}/((m−1)a_m) = 2/1 − 1/(7·2) = 2 − 1/2 = 2 − 2 = 0 mod 3
        let i = indicator(&chi(3, 8, &[(1, 2), (2, 1), (7, 3), (8, 6)])).unwrap();
        assert_eq!(i, Indicator::Mid { x2: 1, am: 2, q: 0 });
    }

    #[test]
    fn indicator_1m_examples() {
        assert_eq!(
            indicator_1m(&chi(3, 3, &[(1, 1), (2, 6)]))
                .unwrap()
                .values(),
            vec![1, 2]
        );
        assert_eq!(
            indicator_1m(&chi(3, 4, &[(1, 2), (4, 3)]))
                .unwrap()
                .values(),
            vec![2, 1, 0]
        );
        assert_eq!(
            indicator_1m(&chi(3, 5, &[(1, 1), (5, 3)]))
                .unwrap()
                .values(),
            vec![1, 1, 0]
        );
        assert!(indicator_1m(&chi(3, 7, &[(2, 1), (7, 3)])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_characters(3, 2, 7).unwrap().len(), 972);
        assert_eq!(enumerate_characters(3, 2, 6).unwrap().len(), 486);
        let space = CharacterSpace::new(3, 2, 6).unwrap();
        assert_eq!(space.constraint_count(), 486);
        let all = enumerate_characters(3, 2, 6).unwrap();
        assert!(all.contains(&chi(3, 6, &[(2, 1)])));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_characters(3, 2, 5).is_err());
        assert_eq!(enumerate_characters(3, 1, 3).unwrap().len(), 18);
        assert_eq!(enumerate_characters(3, 1, 4).unwrap().len(), 36);
        assert_eq!(enumerate_characters(3, 1, 5).unwrap().len(), 108);
    }

    /// Counts characters of type `<b0,m>` by scanning every value vector in
    /// (Z/p²Z)^support and applying the break-sequence definition.
    fn count_by_definition(p: u32, b0: u32, m: u32) -> usize {
        let dim = support(p, m).len();
        let p2 = p * p;
        let mut count = 0;
        for idx in 0..(p2 as u64).pow(dim as u32) {
            let mut rest = idx;
            let values: Vec<u32> = (0..dim)
                .map(|_| {
                    let v = (rest % p2 as u64) as u32;
                    rest /= p2 as u64;
                    v
                })
                .collect();
            let Ok(c) = Character::from_values(p, m, values) else {
                continue;
            };
            if break_sequence(&c).ok() == Some(BreakSequence { b0, b1: m }) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_matches_definition_scan() {
        for (p, b0, m) in [
            (3, 2, 6),
            (3, 2, 7),
            (3, 2, 8),
            (3, 1, 3),
            (3, 1, 4),
            (3, 1, 5),
            (5, 1, 5),
        ] {
            assert_eq!(
                enumerate_characters(p, b0, m).unwrap().len(),
                count_by_definition(p, b0, m),
                "p={p} <{b0},{m}>"
            );
        }
    }

    #[test]
    fn space_roundtrip() {
        let space = CharacterSpace::new(5, 2, 11).unwrap();
        let mut buf = vec![0; space.dim()];
        for idx in [0u32, 1, 17, 4242, (space.size() - 1) as u32] {
            space.decode(idx, &mut buf);
            assert_eq!(space.encode(&buf), idx);
        }
    }

    #[test]
    fn indicator_counts() {
        assert_eq!(realizable_indicators(3, 6).unwrap().len(), 6);
        assert_eq!(realizable_indicators(3, 7).unwrap().len(), 4);
        assert_eq!(realizable_indicators(3, 8).unwrap().len(), 12);
    }

    #[test]
    fn json_shapes() {
        let c = chi(3, 7, &[(1, 4), (2, 1), (7, 3)]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"p":3,"bound":7,"coeffs":{"1":4,"2":1,"7":3}}"#);
        assert_eq!(serde_json::from_str::<Character>(&json).unwrap(), c);
        let i = Indicator::Mid { x2: 1, am: 2, q: 0 };
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"case":"mid","values":[1,2,0]}"#);
        assert_eq!(serde_json::from_str::<Indicator>(&json).unwrap(), i);
        assert!(serde_json::from_str::<Indicator>(r#"{"case":"m1","values":[1]}"#).is_err());
    }
}
