use nottingham_torsion::characters::{act, enumerate_characters, standard_expansion};
use nottingham_torsion::equivalence::{
    coset_orbit, generators_match_full_group, same_strict_partition, strict_classes_1m,
    strict_classes_bruteforce, strict_closure_gap, strict_partition_labels, strict_via_coset,
    weak_equiv_indicator, weak_orbits_bruteforce, ClassReport, Criterion, Options,
};
use nottingham_torsion::NottinghamElement;

fn opts() -> Options {
    Options::default()
}

#[test]
fn coset_orbits_are_strict_classes() {
    let part = strict_partition_labels(3, 2, 7, Criterion::ModP, &opts()).unwrap();
    for (i, chi) in part.characters.iter().enumerate() {
        let orbit = coset_orbit(chi, &opts()).unwrap();
        let class: Vec<_> = (0..part.characters.len())
            .filter(|&j| part.same_class(i, j))
            .collect();
        assert_eq!(orbit.len(), class.len(), "{chi}");
        for j in class {
            assert!(orbit.contains(&part.characters[j]));
        }
    }
}

#[test]
fn g_translates_leave_the_strict_class() {
    let report = strict_classes_bruteforce(3, 7, Criterion::ModP, &opts()).unwrap();
    let chi = report.strict_classes[0].representative.clone();
    let mut found = false;
    for k in 1..3 {
        let psi = act(&NottinghamElement::g(3, k, 8).unwrap(), &chi).unwrap();
        assert!(weak_equiv_indicator(&chi, &psi).unwrap());
        if !strict_via_coset(&chi, &psi, &opts()).unwrap() {
            found = true;
        }
    }
    assert!(
        found,
        "some g(k) must move {chi} to a different strict class"
    );
}

#[test]
fn strict_criteria_agree() {
    for m in [6, 7] {
        let a = strict_classes_bruteforce(3, m, Criterion::ModP, &opts()).unwrap();
        let b = strict_classes_bruteforce(3, m, Criterion::ModP2, &opts()).unwrap();
        assert!(same_strict_partition(&a, &b), "m={m}");
    }
}

#[test]
fn strict_moves_are_transitive() {
    for m in [6, 7] {
        assert_eq!(strict_closure_gap(3, m, &opts()).unwrap(), None, "m={m}");
    }
}

#[test]
fn generators_suffice() {
    assert_eq!(generators_match_full_group(3, 6, &opts()).unwrap(), None);
}

fn assert_refines(r: &ClassReport) {
    assert!(r.passed(), "{:?}", r.failures);
    let mut per_weak = vec![0u64; r.weak_classes.len()];
    for s in &r.strict_classes {
        per_weak[s.weak_class] += s.size;
    }
    let sizes: Vec<u64> = r.weak_classes.iter().map(|w| w.size).collect();
    assert_eq!(per_weak, sizes);
}

#[test]
fn strict_refines_weak() {
    for m in [6, 7, 8] {
        let r = strict_classes_bruteforce(3, m, Criterion::ModP, &opts()).unwrap();
        assert_refines(&r);
        let s = r.strict_count.unwrap();
        assert!(r.weak_count <= s && s <= 3 * r.weak_count);
    }
    for m in [3, 4, 5] {
        assert_refines(&strict_classes_1m(3, m, &opts()).unwrap());
    }
}

#[test]
fn one_m_class_counts() {
    assert_eq!(
        strict_classes_1m(3, 4, &opts()).unwrap().strict_count,
        Some(4)
    );
    let r = strict_classes_1m(3, 3, &opts()).unwrap();
    let realized: std::collections::BTreeSet<_> =
        r.strict_classes.iter().map(|c| c.indicator_1m).collect();
    assert_eq!(realized.len() as u64, r.strict_count.unwrap());
}

#[test]
fn weak_orbits_fix_x2_and_top_coefficient() {
    let r = weak_orbits_bruteforce(3, 8, &opts()).unwrap();
    assert!(r.passed());
    let chars = enumerate_characters(3, 2, 8).unwrap();
    for chi in chars.iter().step_by(37) {
        let e = standard_expansion(chi).unwrap();
        let u = NottinghamElement::from_unit_coeffs(3, &[2, 1, 1, 0, 2, 1, 1], 9).unwrap();
        let f = standard_expansion(&act(&u, chi).unwrap()).unwrap();
        assert_eq!((e.x2, e.a(8)), (f.x2, f.a(8)));
    }
}
