//! Named verification suites. Each suite runs a batch of checks and reports
//! pass/fail per check with a witness on failure.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characters::{
    act, check_type, realizable_indicators, standard_expansion, validate_type, CharacterSpace,
};
use crate::equivalence::{
    d_weak_closed_form, generators_match_full_group, strict_classes_1m, strict_classes_bruteforce,
    strict_closure_gap, strict_partition_labels, weak_orbits_bruteforce, ClassReport, Criterion,
    Options,
};
use crate::error::Result;
use crate::modular::{check_odd_prime, div_mod};
use crate::nottingham::{enumerate_quotient, NottinghamElement, PhiImage};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CorollaryWeakCounts,
    TheoremStrictBounds,
    LemmaCoarse,
    PropPhi,
    LemmaLubinCriterion,
    #[serde(rename = "thm-1m")]
    Thm1m,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::CorollaryWeakCounts,
        Suite::TheoremStrictBounds,
        Suite::LemmaCoarse,
        Suite::PropPhi,
        Suite::LemmaLubinCriterion,
        Suite::Thm1m,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::CorollaryWeakCounts => "corollary-weak-counts",
            Suite::TheoremStrictBounds => "theorem-strict-bounds",
            Suite::LemmaCoarse => "lemma-coarse",
            Suite::PropPhi => "prop-phi",
            Suite::LemmaLubinCriterion => "lemma-lubin-criterion",
            Suite::Thm1m => "thm-1m",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!(
                    "unknown suite '{s}' (expected one of: {})",
                    names.join(", ")
                )
            })
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    fn new(
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
        witness: Option<String>,
    ) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            witness,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)?;
        if let Some(w) = &self.witness {
            write!(f, " [witness: {w}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub p: u32,
    /// Restrict to one value of m where the suite ranges over several.
    pub m: Option<u32>,
    pub seed: u64,
    /// Randomized trials per case arm.
    pub trials: usize,
    pub options: Options,
}

impl SuiteConfig {
    pub fn new(p: u32) -> Self {
        SuiteConfig {
            p,
            m: None,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            options: Options::default(),
        }
    }

    fn ms(&self, default: Vec<u32>) -> Vec<u32> {
        match self.m {
            Some(m) => vec![m],
            None => default,
        }
    }
}

/// Admissible `m` for type `<2,m>` with `2p ≤ m ≤ hi`.
fn second_breaks(p: u32, hi: u32) -> Vec<u32> {
    (2 * p..=hi).filter(|&m| validate_type(p, 2, m)).collect()
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    check_odd_prime(config.p)?;
    let checks = match suite {
        Suite::CorollaryWeakCounts => corollary_weak_counts(config)?,
        Suite::TheoremStrictBounds => theorem_strict_bounds(config)?,
        Suite::LemmaCoarse => lemma_coarse(config)?,
        Suite::PropPhi => prop_phi(config.p)?,
        Suite::LemmaLubinCriterion => lemma_lubin_criterion(config)?,
        Suite::Thm1m => thm_1m(config)?,
    };
    let seed = (suite == Suite::LemmaCoarse).then_some(config.seed);
    Ok(SuiteReport {
        suite,
        p: config.p,
        seed,
        checks,
    })
}

fn report_checks(name: &str, report: &ClassReport) -> Check {
    let witness = report.failures.first().map(|f| f.to_string());
    let mut detail = format!("weak_count = {}", report.weak_count);
    if let Some(expected) = report.weak_count_closed_form {
        detail.push_str(&format!(" (closed form {expected})"));
    }
    if let Some(s) = report.strict_count {
        detail.push_str(&format!(
            ", strict_count = {s}, max split {}",
            report.max_split()
        ));
    }
    Check::new(name, report.passed(), detail, witness)
}

fn corollary_weak_counts(config: &SuiteConfig) -> Result<Vec<Check>> {
    let p = config.p;
    let mut checks = Vec::new();
    for m in config.ms(second_breaks(p, 4 * p - 1)) {
        let report = weak_orbits_bruteforce(p, m, &config.options)?;
        checks.push(report_checks(&format!("orbits m={m}"), &report));
    }
    if config.m.is_none_or(|m| m == 2 * p) {
        let gap = generators_match_full_group(p, 2 * p, &config.options)?;
        checks.push(Check::new(
            format!("generators m={}", 2 * p),
            gap.is_none(),
            "orbits of t(1+t^k) equal orbits of the full quotient",
            gap.map(|(a, b)| format!("{a} | {b}")),
        ));
    }
    for m in second_breaks(p, 3 * p + 2) {
        let realized = realizable_indicators(p, m)?.len() as u64;
        let expected = d_weak_closed_form(p, m)?;
        checks.push(Check::new(
            format!("indicator count m={m}"),
            realized == expected,
            format!("{realized} realizable indicators, closed form {expected}"),
            None,
        ));
    }
    Ok(checks)
}

fn theorem_strict_bounds(config: &SuiteConfig) -> Result<Vec<Check>> {
    let p = config.p;
    let mut checks = Vec::new();
    for m in config.ms(second_breaks(p, 2 * p + 2)) {
        let report = strict_classes_bruteforce(p, m, Criterion::ModP, &config.options)?;
        checks.push(report_checks(&format!("strict m={m}"), &report));
    }
    if config.m.is_none_or(|m| m == 2 * p) {
        let gap = strict_closure_gap(p, 2 * p, &config.options)?;
        checks.push(Check::new(
            format!("transitive m={}", 2 * p),
            gap.is_none(),
            "closure of the strict moves adds no pairs",
            gap.map(|(a, b)| format!("{a} | {b}")),
        ));
    }
    Ok(checks)
}

fn lemma_lubin_criterion(config: &SuiteConfig) -> Result<Vec<Check>> {
    let p = config.p;
    let mut checks = Vec::new();
    for m in config.ms(vec![2 * p + 1]) {
        let weak = strict_partition_labels(p, 2, m, Criterion::ModP, &config.options)?;
        let strong = strict_partition_labels(p, 2, m, Criterion::ModP2, &config.options)?;
        let mismatch = (0..weak.labels.len()).find(|&i| weak.labels[i] != strong.labels[i]);
        checks.push(Check::new(
            format!("criterion m={m}"),
            mismatch.is_none(),
            format!(
                "{} classes mod p, {} classes mod p^2",
                weak.class_count(),
                strong.class_count()
            ),
            mismatch.map(|i| weak.characters[i].to_string()),
        ));
    }
    Ok(checks)
}

fn thm_1m(config: &SuiteConfig) -> Result<Vec<Check>> {
    let p = config.p;
    let default: Vec<u32> = (p..2 * p).filter(|&m| validate_type(p, 1, m)).collect();
    let mut checks = Vec::new();
    for m in config.ms(default) {
        let report = strict_classes_1m(p, m, &config.options)?;
        checks.push(report_checks(&format!("<1,{m}>"), &report));
    }
    Ok(checks)
}

fn prop_phi(p: u32) -> Result<Vec<Check>> {
    let elements: Vec<NottinghamElement> = enumerate_quotient(p, 4)?.collect();
    let mut hom_witness = None;
    let mut pairs = 0u64;
    for u in &elements {
        for v in &elements {
            pairs += 1;
            let lhs = u.compose(v)?.phi()?;
            let rhs = u.phi()?.oplus(&v.phi()?)?;
            if lhs != rhs && hom_witness.is_none() {
                hom_witness = Some(format!("{u} , {v}"));
            }
        }
    }
    let mut checks = vec![Check::new(
        "homomorphism",
        hom_witness.is_none(),
        format!("{pairs} pairs"),
        hom_witness,
    )];

    // membership straight from the defining congruence
    let defining = |x1: u32, x2: u32, phi: PhiImage| {
        let pu = p as u64;
        let ratio = div_mod(x1, x2, p) as u64;
        let binom = (phi.a as u64 * (phi.a as u64 + pu - 1) % pu) * div_mod(1, 2, p) as u64 % pu;
        (ratio * phi.a as u64 + pu - binom + phi.b as u64) % pu == 0
    };
    let mut partition_witness = None;
    let mut memberships = 0u64;
    for x1 in 0..p {
        for x2 in 1..p {
            for u in &elements {
                let hits: Vec<u32> = (0..p)
                    .filter(|&k| {
                        let g_inv = NottinghamElement::g(p, k, 4).expect("valid").inverse();
                        let w = u.compose(&g_inv).expect("same p");
                        defining(x1, x2, w.phi().expect("precision 4"))
                    })
                    .collect();
                memberships += 1;
                let index = u.coset_index(x1, x2)?;
                if (hits.len() != 1 || hits[0] != index) && partition_witness.is_none() {
                    partition_witness = Some(format!("x1={x1} x2={x2} u={u} cosets {hits:?}"));
                }
            }
        }
    }
    checks.push(Check::new(
        "coset partition",
        partition_witness.is_none(),
        format!("{memberships} (x1, x2, u) triples, each in exactly one coset"),
        partition_witness,
    ));
    Ok(checks)
}

struct Arm {
    name: &'static str,
    ms: Vec<u32>,
}

fn lemma_coarse(config: &SuiteConfig) -> Result<Vec<Check>> {
    let p = config.p;
    if let Some(m) = config.m {
        check_type(p, 2, m)?;
    }
    let all = second_breaks(p, 4 * p - 1);
    let arms = [
        Arm {
            name: "(a) indices 1, 2",
            ms: all.clone(),
        },
        Arm {
            name: "(b) index m",
            ms: all.iter().copied().filter(|m| m % p != 0).collect(),
        },
        Arm {
            name: "(c) index m-1",
            ms: all.iter().copied().filter(|m| m % p > 1).collect(),
        },
        Arm {
            name: "(d) index m-1, m = 2p",
            ms: vec![2 * p],
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = Vec::new();
    for (arm_index, arm) in arms.iter().enumerate() {
        let ms: Vec<u32> = match config.m {
            Some(m) => arm.ms.iter().copied().filter(|&x| x == m).collect(),
            None => arm.ms.clone(),
        };
        if ms.is_empty() {
            continue;
        }
        let spaces = ms
            .iter()
            .map(|&m| CharacterSpace::new(p, 2, m))
            .collect::<Result<Vec<_>>>()?;
        let mut witness = None;
        let mut failures = 0usize;
        for _ in 0..config.trials {
            let space = &spaces[rng.random_range(0..spaces.len())];
            let m = space.m();
            let chi = space.random_member(&mut rng);
            let alphas: Vec<u32> = (0..m).map(|_| rng.random_range(0..p)).collect();
            let u = NottinghamElement::from_unit_coeffs(p, &alphas, m as usize + 1)?;
            let psi = act(&u, &chi)?;
            let e = standard_expansion(&chi)?;
            let alpha = u.alpha(1);
            let mul = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
            let ok = match arm_index {
                0 => psi.get(1) % p == (e.x1 + mul(alpha, e.x2)) % p && psi.get(2) % p == e.x2,
                1 => psi.get(m) == p * e.a(m),
                2 => {
                    psi.get(m - 1) == p * ((e.a(m - 1) + mul(mul((m - 1) % p, alpha), e.a(m))) % p)
                }
                _ => psi.get(m - 1) == p * ((e.a(m - 1) + mul(mul((m - 1) % p, alpha), e.x2)) % p),
            };
            if !ok {
                failures += 1;
                witness.get_or_insert_with(|| format!("m={m} chi={chi} u={u} image={psi}"));
            }
        }
        checks.push(Check::new(
            arm.name,
            failures == 0,
            format!("{} randomized pairs, {failures} failures", config.trials),
            witness,
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn second_break_ranges() {
        assert_eq!(second_breaks(3, 11), vec![6, 7, 8, 10, 11]);
        assert_eq!(second_breaks(3, 11).len(), 5);
    }

    #[test]
    fn phi_suite_passes_at_three() {
        let r = run_suite(Suite::PropPhi, &SuiteConfig::new(3)).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert!(r.checks[0].detail.starts_with("81 pairs"));
    }

    #[test]
    fn coarse_suite_is_reproducible() {
        let mut cfg = SuiteConfig::new(3);
        cfg.trials = 50;
        let a = run_suite(Suite::LemmaCoarse, &cfg).unwrap();
        let b = run_suite(Suite::LemmaCoarse, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{:?}", a.checks);
    }
}
