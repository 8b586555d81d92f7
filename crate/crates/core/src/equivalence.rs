//! Weak and strict equivalence of characters.
//!
//! Weak classes are orbits under the Nottingham action; strict classes are
//! generated by the moves `χ → u·χ` with `χ(u/t) ≡ 0`. Both are computed by
//! union-find over an explicit enumeration of a character type and checked
//! against the indicator invariants.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{
    act, break_sequence, check_type, indicator, indicator_1m, standard_expansion, ActionMatrix,
    Character, CharacterSpace, Indicator, Indicator1m,
};
use crate::error::{Error, Result};
use crate::modular::check_odd_prime;
use crate::nottingham::{enumerate_quotient, quotient_size, NottinghamElement};
use crate::units::decompose;

/// Default cap on the number of action evaluations of one computation.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Weak,
    Strict,
}

/// Which kernel condition defines a strict move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `χ(u/t) ≡ 0 (mod p)`.
    ModP,
    /// `χ(u/t) = 0` in `Z/p²Z`.
    ModP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Indicator,
    BruteForce,
    Both,
}

pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

/// Limits and hooks for the brute-force computations.
#[derive(Clone)]
pub struct Options {
    /// Maximum number of action evaluations.
    pub budget: u64,
    /// Permit `p ≥ 5`.
    pub allow_large: bool,
    /// Called with `(done, total)` character counts as work completes.
    pub progress: Option<ProgressFn>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: DEFAULT_BUDGET,
            allow_large: false,
            progress: None,
        }
    }
}

impl std::fmt::Debug for Options {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Options")
            .field("budget", &self.budget)
            .field("allow_large", &self.allow_large)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

impl Options {
    fn admit(&self, p: u32, m: u32, needed: u64) -> Result<()> {
        if p >= 5 && !self.allow_large {
            return Err(Error::LargeInstance { p, m });
        }
        if needed > self.budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakClass {
    pub indicator: Option<Indicator>,
    pub size: u64,
    pub representative: Character,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictClass {
    pub representative: Character,
    pub size: u64,
    /// Index into `weak_classes`.
    pub weak_class: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub indicator_1m: Option<Indicator1m>,
}

/// A disagreement between a computed partition and an expected property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFailure {
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<(Character, Character)>,
}

impl VerificationFailure {
    fn new(check: &str, detail: String, witness: Option<(Character, Character)>) -> Self {
        VerificationFailure {
            check: check.into(),
            detail,
            witness,
        }
    }
}

impl std::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)?;
        if let Some((a, b)) = &self.witness {
            write!(f, " (witness: {a} | {b})")?;
        }
        Ok(())
    }
}

/// Partition of one character type into weak and (optionally) strict classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub p: u32,
    pub m: u32,
    pub b0: u32,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub criterion: Option<Criterion>,
    pub method: Method,
    pub character_count: u64,
    pub weak_count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weak_count_closed_form: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strict_count: Option<u64>,
    pub weak_classes: Vec<WeakClass>,
    pub strict_classes: Vec<StrictClass>,
    pub failures: Vec<VerificationFailure>,
}

pub const CSV_HEADER: &str = "p,m,case,weak_count,strict_count,lower_bound,upper_bound";

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Name of the residue case of `m`: `m0`, `mid`, `m1` for type `<2,m>`,
    /// `1m-p`, `1m-m1`, `1m-other` for type `<1,m>`.
    pub fn case(&self) -> String {
        let (p, m) = (self.p, self.m);
        if self.b0 == 2 {
            match m % p {
                0 => "m0",
                1 => "m1",
                _ => "mid",
            }
            .into()
        } else if m == p {
            "1m-p".into()
        } else if m % p == 1 {
            "1m-m1".into()
        } else {
            "1m-other".into()
        }
    }

    /// One CSV row matching [`CSV_HEADER`]. The bounds bracket the strict count.
    pub fn csv_row(&self) -> String {
        let strict = self.strict_count.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.m,
            self.case(),
            self.weak_count,
            strict,
            self.weak_count,
            self.p as u64 * self.weak_count
        )
    }

    /// Largest number of strict classes inside one weak class.
    pub fn max_split(&self) -> u64 {
        let mut per_weak = vec![0u64; self.weak_classes.len()];
        for s in &self.strict_classes {
            per_weak[s.weak_class] += 1;
        }
        per_weak.into_iter().max().unwrap_or(0)
    }
}

/// `p(p−1)` if `m ≡ 0`, `(p−1)²` if `m ≡ 1`, `p(p−1)²` otherwise.
pub fn d_weak_closed_form(p: u32, m: u32) -> Result<u64> {
    check_odd_prime(p)?;
    check_type(p, 2, m)?;
    let (p, q) = (p as u64, p as u64 - 1);
    Ok(match m as u64 % p {
        0 => p * q,
        1 => q * q,
        _ => p * q * q,
    })
}

fn same_type_2m(chi: &Character, psi: &Character) -> Result<()> {
    let a = break_sequence(chi)?;
    let b = break_sequence(psi)?;
    if chi.p() != psi.p() {
        return Err(Error::ModulusMismatch(chi.p(), psi.p()));
    }
    if a.b0 != 2 || a != b {
        return Err(Error::WrongType {
            expected_b0: 2,
            expected_b1: a.b1,
            found_b0: b.b0,
            found_b1: b.b1,
        });
    }
    Ok(())
}

/// Weak equivalence read off the indicators.
pub fn weak_equiv_indicator(chi: &Character, psi: &Character) -> Result<bool> {
    same_type_2m(chi, psi)?;
    Ok(indicator(chi)? == indicator(psi)?)
}

/// `u/t` as a unit of precision `bound + 1`, zero-padded if `u` is one short.
fn unit_part_for(u: &NottinghamElement, bound: u32) -> Result<crate::FpSeries> {
    let need = bound as usize + 1;
    let w = u.unit_part();
    if w.precision() >= need {
        w.truncate(need)
    } else if w.precision() + 1 == need {
        Ok(w.pad_zeros(need))
    } else {
        Err(Error::PrecisionTooSmall {
            have: u.precision(),
            need: need + 1,
        })
    }
}

/// `χ(u/t) ≡ 0 (mod p)`. Needs `u` modulo `t^{m+1}`; the missing coefficient
/// of `u/t` at `t^m` only moves `χ(u/t)` by a multiple of p.
pub fn strict_edge(chi: &Character, u: &NottinghamElement) -> Result<bool> {
    let w = unit_part_for(u, chi.bound())?;
    Ok(crate::characters::evaluate(chi, &w)? % chi.p() == 0)
}

/// `χ(u/t) = 0` in `Z/p²Z`. Needs `u` modulo `t^{m+2}`.
pub fn strict_edge_strong(chi: &Character, u: &NottinghamElement) -> Result<bool> {
    let need = chi.bound() as usize + 2;
    if u.precision() < need {
        return Err(Error::PrecisionTooSmall {
            have: u.precision(),
            need,
        });
    }
    let w = unit_part_for(u, chi.bound())?;
    Ok(crate::characters::evaluate(chi, &w)? == 0)
}

/// `{u·χ : u ∈ 𝔑(x₁,x₂)}` over the quotient modulo `t^{m+1}`.
pub fn coset_orbit(chi: &Character, options: &Options) -> Result<BTreeSet<Character>> {
    let e = standard_expansion(chi)?;
    let (p, m) = (chi.p(), e.m);
    let n = m as usize + 1;
    options.admit(p, m, quotient_size(p, n))?;
    let mut out = BTreeSet::new();
    for u in enumerate_quotient(p, n)? {
        if u.in_coset_set(e.x1, e.x2)? {
            out.insert(act(&u, chi)?);
        }
    }
    Ok(out)
}

/// Whether `ψ = u·χ` for some `u ∈ 𝔑(x₁(χ), x₂(χ))`.
pub fn strict_via_coset(chi: &Character, psi: &Character, options: &Options) -> Result<bool> {
    same_type_2m(chi, psi)?;
    Ok(coset_orbit(chi, options)?.contains(psi))
}

/// Precomputed data for acting by one element on a character type.
struct Move {
    matrix: ActionMatrix,
    /// Exponents of `u/t` in support order and the modulus of the kernel test;
    /// `None` for unconditional moves.
    kernel: Option<(Vec<u32>, u32)>,
}

impl Move {
    fn new(
        u: &NottinghamElement,
        space: &CharacterSpace,
        criterion: Option<Criterion>,
    ) -> Result<Self> {
        let m = space.m();
        let p = space.p();
        let matrix = ActionMatrix::new(u, m)?;
        let kernel = match criterion {
            None => None,
            Some(c) => {
                let e = decompose(&unit_part_for(u, m)?, m)?;
                let coeffs = space.support().iter().map(|&j| e.get(j)).collect();
                Some((coeffs, if c == Criterion::ModP { p } else { p * p }))
            }
        };
        Ok(Move { matrix, kernel })
    }

    fn allows(&self, values: &[u32], p2: u64) -> bool {
        match &self.kernel {
            None => true,
            Some((coeffs, modulus)) => {
                let s: u64 = coeffs
                    .iter()
                    .zip(values)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p2) % *modulus as u64 == 0
            }
        }
    }
}

fn build_moves(
    elements: Vec<NottinghamElement>,
    space: &CharacterSpace,
    criterion: Option<Criterion>,
) -> Result<Vec<Move>> {
    elements
        .par_iter()
        .map(|u| Move::new(u, space, criterion))
        .collect()
}

/// The members of a character type with an index lookup.
struct Members {
    space: CharacterSpace,
    indices: Vec<u32>,
    position: HashMap<u32, u32>,
}

impl Members {
    fn new(space: CharacterSpace) -> Self {
        let indices = space.members();
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        Members {
            space,
            indices,
            position,
        }
    }

    fn len(&self) -> usize {
        self.indices.len()
    }

    fn character(&self, pos: usize) -> Character {
        self.space.character(self.indices[pos])
    }

    /// Position of a value vector, or `None` if it is not of this type.
    fn locate(&self, values: &[u32]) -> Option<u32> {
        let p = self.space.p();
        let b0 = self.space.b0();
        let fits = self
            .space
            .support()
            .iter()
            .zip(values)
            .all(|(&j, &v)| j <= b0 || v % p == 0);
        if !fits {
            return None;
        }
        self.position.get(&self.space.encode(values)).copied()
    }
}

/// Result of joining every member with its images under a set of moves.
struct Joined {
    uf: UnionFind<u32>,
    /// A member whose image left the type, with that image.
    escape: Option<(u32, Vec<u32>)>,
}

fn merge(mut a: Joined, b: Joined) -> Joined {
    for i in 0..a.uf.len() as u32 {
        a.uf.union(i, b.uf.find(i));
    }
    if a.escape.is_none() {
        a.escape = b.escape;
    }
    a
}

fn join_all(members: &Members, moves: &[Move], progress: Option<&ProgressFn>) -> Joined {
    let n = members.len();
    let p2 = (members.space.p() * members.space.p()) as u64;
    let dim = members.space.dim();
    let done = AtomicU64::new(0);
    let chunk = n.div_ceil(4 * rayon::current_num_threads()).max(64);
    let positions: Vec<u32> = (0..n as u32).collect();
    positions
        .par_chunks(chunk)
        .map(|block| {
            let mut joined = Joined {
                uf: UnionFind::new(n),
                escape: None,
            };
            let mut values = vec![0u32; dim];
            let mut image = vec![0u32; dim];
            for &pos in block {
                members
                    .space
                    .decode(members.indices[pos as usize], &mut values);
                for mv in moves {
                    if !mv.allows(&values, p2) {
                        continue;
                    }
                    mv.matrix.apply(&values, &mut image);
                    match members.locate(&image) {
                        Some(target) => {
                            joined.uf.union(pos, target);
                        }
                        None => {
                            if joined.escape.is_none() {
                                joined.escape = Some((pos, image.clone()));
                            }
                        }
                    }
                }
            }
            let total = done.fetch_add(block.len() as u64, Ordering::Relaxed) + block.len() as u64;
            if let Some(f) = progress {
                f(total, n as u64);
            }
            joined
        })
        .reduce(
            || Joined {
                uf: UnionFind::new(n),
                escape: None,
            },
            merge,
        )
}

/// Class label per member, classes numbered by their smallest member.
fn labels(uf: &UnionFind<u32>, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut label_of_root: HashMap<u32, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut labels = Vec::with_capacity(n);
    for pos in 0..n {
        let root = uf.find(pos as u32);
        let next = reps.len();
        let l = *label_of_root.entry(root).or_insert(next);
        if l == next {
            reps.push(pos);
        }
        labels.push(l);
    }
    (labels, reps)
}

fn escape_failure(
    members: &Members,
    escape: Option<(u32, Vec<u32>)>,
) -> Option<VerificationFailure> {
    escape.map(|(pos, image)| {
        let from = members.character(pos as usize);
        let detail = match Character::from_values(from.p(), from.bound(), image.clone()) {
            Ok(img) => {
                let to = break_sequence(&img)
                    .map(|b| b.to_string())
                    .unwrap_or_else(|e| e.to_string());
                format!("image of {from} has type {to}")
            }
            Err(e) => format!("image of {from} is not a character: {e}"),
        };
        let witness = Character::from_values(from.p(), from.bound(), image)
            .ok()
            .map(|img| (from, img));
        VerificationFailure::new("type-preserved", detail, witness)
    })
}

fn generators(p: u32, m: u32) -> Result<Vec<NottinghamElement>> {
    (1..=m as usize)
        .map(|k| NottinghamElement::monomial_shift(p, k, 1, m as usize + 1))
        .collect()
}

/// Weak classes as computed partition plus per-class bookkeeping.
struct WeakPartition {
    labels: Vec<usize>,
    classes: Vec<WeakClass>,
    failures: Vec<VerificationFailure>,
}

fn weak_partition(members: &Members, options: &Options) -> Result<WeakPartition> {
    let (p, m) = (members.space.p(), members.space.m());
    let gens = generators(p, m)?;
    let moves = build_moves(gens, &members.space, None)?;
    let joined = join_all(members, &moves, options.progress.as_ref());
    let mut failures: Vec<VerificationFailure> =
        escape_failure(members, joined.escape).into_iter().collect();
    let (labels, reps) = labels(&joined.uf, members.len());
    let mut sizes = vec![0u64; reps.len()];
    for &l in &labels {
        sizes[l] += 1;
    }
    let typed = members.space.b0() == 2;
    let mut classes: Vec<WeakClass> = reps
        .iter()
        .zip(&sizes)
        .map(|(&r, &size)| {
            let representative = members.character(r);
            let indicator = if typed {
                indicator(&representative).ok()
            } else {
                None
            };
            WeakClass {
                indicator,
                size,
                representative,
            }
        })
        .collect();
    if typed {
        // indicator constant on orbits, distinct across orbits
        let mut first_with: BTreeMap<Indicator, usize> = BTreeMap::new();
        for (pos, &l) in labels.iter().enumerate() {
            let chi = members.character(pos);
            let ind = indicator(&chi)?;
            if Some(ind) != classes[l].indicator {
                failures.push(VerificationFailure::new(
                    "indicator-invariant",
                    format!(
                        "indicator {ind} differs from {} within one orbit",
                        classes[l].indicator.unwrap()
                    ),
                    Some((classes[l].representative.clone(), chi)),
                ));
                classes[l].indicator = None;
            }
        }
        for (l, class) in classes.iter().enumerate() {
            if let Some(ind) = class.indicator {
                if let Some(&other) = first_with.get(&ind) {
                    failures.push(VerificationFailure::new(
                        "indicator-complete",
                        format!("two orbits share indicator {ind}"),
                        Some((
                            classes[other].representative.clone(),
                            class.representative.clone(),
                        )),
                    ));
                } else {
                    first_with.insert(ind, l);
                }
            }
        }
    }
    Ok(WeakPartition {
        labels,
        classes,
        failures,
    })
}

fn weak_budget(count: u64, m: u32) -> u64 {
    count * m as u64
}

fn check_weak_count(report: &mut ClassReport) {
    if let Some(expected) = report.weak_count_closed_form {
        if expected != report.weak_count {
            report.failures.push(VerificationFailure::new(
                "weak-count",
                format!("{} orbits, closed form gives {expected}", report.weak_count),
                None,
            ));
        }
    }
}

/// Weak orbits of type `<2,m>` under the generators `t(1 + t^k)`, `1 ≤ k ≤ m`.
pub fn weak_orbits_bruteforce(p: u32, m: u32, options: &Options) -> Result<ClassReport> {
    let space = CharacterSpace::new(p, 2, m)?;
    options.admit(p, m, weak_budget(space.size(), m))?;
    let members = Members::new(space);
    let weak = weak_partition(&members, options)?;
    let mut report = ClassReport {
        p,
        m,
        b0: 2,
        relation: Relation::Weak,
        criterion: None,
        method: Method::Both,
        character_count: members.len() as u64,
        weak_count: weak.classes.len() as u64,
        weak_count_closed_form: Some(d_weak_closed_form(p, m)?),
        strict_count: None,
        weak_classes: weak.classes,
        strict_classes: Vec::new(),
        failures: weak.failures,
    };
    check_weak_count(&mut report);
    Ok(report)
}

/// Weak classes of type `<2,m>` grouped by indicator alone, without acting.
pub fn weak_classes_by_indicator(p: u32, m: u32) -> Result<ClassReport> {
    let space = CharacterSpace::new(p, 2, m)?;
    let members = Members::new(space);
    let mut groups: BTreeMap<Indicator, (usize, u64)> = BTreeMap::new();
    for pos in 0..members.len() {
        let ind = indicator(&members.character(pos))?;
        groups.entry(ind).or_insert((pos, 0)).1 += 1;
    }
    let mut weak_classes: Vec<WeakClass> = groups
        .into_iter()
        .map(|(ind, (pos, size))| WeakClass {
            indicator: Some(ind),
            size,
            representative: members.character(pos),
        })
        .collect();
    weak_classes.sort_by(|a, b| a.representative.values().cmp(b.representative.values()));
    let mut report = ClassReport {
        p,
        m,
        b0: 2,
        relation: Relation::Weak,
        criterion: None,
        method: Method::Indicator,
        character_count: members.len() as u64,
        weak_count: weak_classes.len() as u64,
        weak_count_closed_form: Some(d_weak_closed_form(p, m)?),
        strict_count: None,
        weak_classes,
        strict_classes: Vec::new(),
        failures: Vec::new(),
    };
    check_weak_count(&mut report);
    Ok(report)
}

/// Precision of the quotient on which strict moves are enumerated.
fn strict_precision(m: u32, criterion: Criterion) -> usize {
    match criterion {
        Criterion::ModP => m as usize + 1,
        Criterion::ModP2 => m as usize + 2,
    }
}

/// Strict classes, generated by all moves `χ → u·χ` over the finite quotient
/// with the chosen kernel condition on `χ(u/t)`.
pub fn strict_classes_bruteforce(
    p: u32,
    m: u32,
    criterion: Criterion,
    options: &Options,
) -> Result<ClassReport> {
    strict_classes(p, 2, m, criterion, options)
}

/// Strict classes of type `<1,m>`, compared against the fibres of the indicator.
pub fn strict_classes_1m(p: u32, m: u32, options: &Options) -> Result<ClassReport> {
    strict_classes(p, 1, m, Criterion::ModP, options)
}

fn strict_classes(
    p: u32,
    b0: u32,
    m: u32,
    criterion: Criterion,
    options: &Options,
) -> Result<ClassReport> {
    let space = CharacterSpace::new(p, b0, m)?;
    let n = strict_precision(m, criterion);
    let q = quotient_size(p, n);
    options.admit(p, m, space.size() * q + weak_budget(space.size(), m))?;
    let members = Members::new(space);
    let weak = weak_partition(&members, options)?;
    let elements: Vec<NottinghamElement> = enumerate_quotient(p, n)?.collect();
    let moves = build_moves(elements, &members.space, Some(criterion))?;
    let joined = join_all(&members, &moves, options.progress.as_ref());
    let mut failures = weak.failures;
    failures.extend(escape_failure(&members, joined.escape));
    let (labels, reps) = labels(&joined.uf, members.len());

    let mut sizes = vec![0u64; reps.len()];
    for &l in &labels {
        sizes[l] += 1;
    }
    let mut strict_classes: Vec<StrictClass> = reps
        .iter()
        .zip(&sizes)
        .map(|(&r, &size)| StrictClass {
            representative: members.character(r),
            size,
            weak_class: weak.labels[r],
            indicator_1m: None,
        })
        .collect();

    for (pos, &l) in labels.iter().enumerate() {
        if weak.labels[pos] != strict_classes[l].weak_class {
            failures.push(VerificationFailure::new(
                "strict-refines-weak",
                "a strict class meets two weak classes".into(),
                Some((
                    strict_classes[l].representative.clone(),
                    members.character(pos),
                )),
            ));
            break;
        }
    }

    let weak_count = weak.classes.len() as u64;
    let strict_count = strict_classes.len() as u64;
    let mut report = ClassReport {
        p,
        m,
        b0,
        relation: Relation::Strict,
        criterion: Some(criterion),
        method: if b0 == 1 {
            Method::Both
        } else {
            Method::BruteForce
        },
        character_count: members.len() as u64,
        weak_count,
        weak_count_closed_form: if b0 == 2 {
            Some(d_weak_closed_form(p, m)?)
        } else {
            None
        },
        strict_count: Some(strict_count),
        weak_classes: weak.classes,
        strict_classes: Vec::new(),
        failures,
    };

    if b0 == 2 {
        check_weak_count(&mut report);
        if strict_count < weak_count || strict_count > p as u64 * weak_count {
            report.failures.push(VerificationFailure::new(
                "strict-bounds",
                format!(
                    "{strict_count} strict classes outside [{weak_count}, {}]",
                    p as u64 * weak_count
                ),
                None,
            ));
        }
    } else {
        // indicator fibres must coincide with strict classes
        let mut class_of: BTreeMap<Indicator1m, usize> = BTreeMap::new();
        for (l, class) in strict_classes.iter_mut().enumerate() {
            let ind = indicator_1m(&class.representative)?;
            class.indicator_1m = Some(ind);
            if let Some(&other) = class_of.get(&ind) {
                report.failures.push(VerificationFailure::new(
                    "indicator-1m-complete",
                    format!(
                        "two strict classes share indicator {}",
                        format_values(&ind.values())
                    ),
                    Some((members.character(reps[other]), members.character(reps[l]))),
                ));
            } else {
                class_of.insert(ind, l);
            }
        }
        for (pos, &l) in labels.iter().enumerate() {
            let chi = members.character(pos);
            let ind = indicator_1m(&chi)?;
            if Some(ind) != strict_classes[l].indicator_1m {
                report.failures.push(VerificationFailure::new(
                    "indicator-1m-invariant",
                    "indicator differs within one strict class".into(),
                    Some((strict_classes[l].representative.clone(), chi)),
                ));
                break;
            }
        }
    }
    report.strict_classes = strict_classes;
    let split = report.max_split();
    if split > p as u64 {
        report.failures.push(VerificationFailure::new(
            "split-bound",
            format!("a weak class splits into {split} strict classes"),
            None,
        ));
    }
    Ok(report)
}

fn format_values(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Checks that every pair in a strict class is joined by a single move, i.e.
/// that the move relation is already transitive. Returns a pair that is not.
pub fn strict_closure_gap(
    p: u32,
    m: u32,
    options: &Options,
) -> Result<Option<(Character, Character)>> {
    let space = CharacterSpace::new(p, 2, m)?;
    let n = strict_precision(m, Criterion::ModP);
    options.admit(p, m, 2 * space.size() * quotient_size(p, n))?;
    let members = Members::new(space);
    let elements: Vec<NottinghamElement> = enumerate_quotient(p, n)?.collect();
    let moves = build_moves(elements, &members.space, Some(Criterion::ModP))?;
    let joined = join_all(&members, &moves, options.progress.as_ref());
    let (labels, reps) = labels(&joined.uf, members.len());
    let mut sizes = vec![0usize; reps.len()];
    for &l in &labels {
        sizes[l] += 1;
    }
    let p2 = (p * p) as u64;
    let found = (0..members.len()).into_par_iter().find_map_any(|pos| {
        let chi = members.character(pos);
        let mut reached = BTreeSet::new();
        let mut image = vec![0u32; members.space.dim()];
        for mv in &moves {
            if mv.allows(chi.values(), p2) {
                mv.matrix.apply(chi.values(), &mut image);
                if let Some(target) = members.locate(&image) {
                    reached.insert(target);
                }
            }
        }
        if reached.len() == sizes[labels[pos]] {
            return None;
        }
        (0..members.len() as u32)
            .find(|q| labels[*q as usize] == labels[pos] && !reached.contains(q))
            .map(|q| (chi, members.character(q as usize)))
    });
    Ok(found)
}

/// Compares the orbits of the generators `t(1+t^k)` with orbits of the full
/// quotient group. Returns a pair joined by one but not the other.
pub fn generators_match_full_group(
    p: u32,
    m: u32,
    options: &Options,
) -> Result<Option<(Character, Character)>> {
    let space = CharacterSpace::new(p, 2, m)?;
    let n = m as usize + 1;
    options.admit(p, m, space.size() * (quotient_size(p, n) + m as u64))?;
    let members = Members::new(space);
    let weak = weak_partition(&members, options)?;
    let elements: Vec<NottinghamElement> = enumerate_quotient(p, n)?.collect();
    let moves = build_moves(elements, &members.space, None)?;
    let joined = join_all(&members, &moves, None);
    let (full, _) = labels(&joined.uf, members.len());
    // both labelings number classes by smallest member, so equal partitions give equal labels
    Ok(full
        .iter()
        .zip(&weak.labels)
        .position(|(a, b)| a != b)
        .map(|pos| {
            let other = (0..members.len())
                .find(|&q| (full[q] == full[pos]) != (weak.labels[q] == weak.labels[pos]))
                .unwrap_or(pos);
            (members.character(pos), members.character(other))
        }))
}

/// Every character of a type with the label of its class; labels number
/// classes in order of their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub characters: Vec<Character>,
    pub labels: Vec<usize>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&l| l + 1)
    }

    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }
}

/// Weak orbits of type `<b0,m>`, one label per character.
pub fn weak_partition_labels(p: u32, b0: u32, m: u32, options: &Options) -> Result<Partition> {
    let space = CharacterSpace::new(p, b0, m)?;
    options.admit(p, m, weak_budget(space.size(), m))?;
    let members = Members::new(space);
    let weak = weak_partition(&members, options)?;
    let characters = (0..members.len()).map(|i| members.character(i)).collect();
    Ok(Partition {
        characters,
        labels: weak.labels,
    })
}

/// Strict classes of type `<b0,m>`, one label per character.
pub fn strict_partition_labels(
    p: u32,
    b0: u32,
    m: u32,
    criterion: Criterion,
    options: &Options,
) -> Result<Partition> {
    let space = CharacterSpace::new(p, b0, m)?;
    let n = strict_precision(m, criterion);
    options.admit(p, m, space.size() * quotient_size(p, n))?;
    let members = Members::new(space);
    let elements: Vec<NottinghamElement> = enumerate_quotient(p, n)?.collect();
    let moves = build_moves(elements, &members.space, Some(criterion))?;
    let joined = join_all(&members, &moves, options.progress.as_ref());
    let (labels, _) = labels(&joined.uf, members.len());
    let characters = (0..members.len()).map(|i| members.character(i)).collect();
    Ok(Partition { characters, labels })
}

/// Whether two reports describe the same strict partition.
pub fn same_strict_partition(a: &ClassReport, b: &ClassReport) -> bool {
    let key = |r: &ClassReport| -> Vec<(Vec<u32>, u64)> {
        r.strict_classes
            .iter()
            .map(|c| (c.representative.values().to_vec(), c.size))
            .collect()
    };
    a.strict_count == b.strict_count && key(a) == key(b)
}
