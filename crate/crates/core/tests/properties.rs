use nottingham_torsion::characters::{act, break_sequence, evaluate, indicator, CharacterSpace};
use nottingham_torsion::units::{decompose, recompose};
use nottingham_torsion::{FpSeries, NottinghamElement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

fn series(p: u32, n: usize) -> impl Strategy<Value = FpSeries> {
    prop::collection::vec(0..p, n).prop_map(move |c| FpSeries::new(p, c).unwrap())
}

fn unit(p: u32, n: usize) -> impl Strategy<Value = FpSeries> {
    prop::collection::vec(0..p, n - 1).prop_map(move |mut c| {
        c.insert(0, 1);
        FpSeries::new(p, c).unwrap()
    })
}

fn element(p: u32, n: usize) -> impl Strategy<Value = NottinghamElement> {
    prop::collection::vec(0..p, n - 2)
        .prop_map(move |a| NottinghamElement::from_unit_coeffs(p, &a, n).unwrap())
}

fn series_triple() -> impl Strategy<Value = (FpSeries, FpSeries, FpSeries)> {
    (prime(), 1usize..12).prop_flat_map(|(p, n)| (series(p, n), series(p, n), series(p, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in series_triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        let one = FpSeries::one(a.p(), a.precision()).unwrap();
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        if a.coeff(0) != 0 {
            prop_assert!(a.mul(&a.mul_inverse().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn frobenius(p in prime(), f in prime().prop_flat_map(|p| series(p, 10))) {
        let f = FpSeries::new(p, f.coeffs().iter().map(|&c| c % p).collect()).unwrap();
        let mut tp = vec![0u32; 10];
        if (p as usize) < 10 {
            tp[p as usize] = 1;
        }
        let tp = FpSeries::new(p, tp).unwrap();
        prop_assert_eq!(f.pow_int(p as u64), f.compose(&tp).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn composition_is_a_group(
        (u, v, w) in prime().prop_flat_map(|p| (element(p, 10), element(p, 10), element(p, 10)))
    ) {
        prop_assert_eq!(u.compose(&v).unwrap().compose(&w).unwrap(), u.compose(&v.compose(&w).unwrap()).unwrap());
        prop_assert!(u.compose(&u.inverse()).unwrap().is_identity());
        prop_assert!(u.inverse().compose(&u).unwrap().is_identity());
        let phi = u.compose(&v).unwrap().phi().unwrap();
        prop_assert_eq!(phi, u.phi().unwrap().oplus(&v.phi().unwrap()).unwrap());
    }

    #[test]
    fn unit_coordinates((z, w) in prime().prop_flat_map(|p| (unit(p, 12), unit(p, 12)))) {
        // exponents live mod p^2, so only the exponent vector round-trips
        let e = decompose(&z, 11).unwrap();
        prop_assert_eq!(decompose(&recompose(&e, 12).unwrap(), 11).unwrap(), e.clone());
        let zw = z.mul(&w).unwrap();
        prop_assert_eq!(decompose(&zw, 11).unwrap(), e.combine(&decompose(&w, 11).unwrap()).unwrap());
    }
}

/// A random `(p, m, χ)` of type `<2,m>` with `p ∈ {3, 5}`.
fn character_case(seed: u64) -> (u32, u32, nottingham_torsion::Character) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, ms): (u32, &[u32]) = if rng.random_bool(0.5) {
        (3, &[6, 7, 8, 10, 11])
    } else {
        (5, &[10, 11, 12, 13, 14])
    };
    let m = ms[rng.random_range(0..ms.len())];
    let space = CharacterSpace::new(p, 2, m).unwrap();
    (p, m, space.random_member(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn action_laws(seed in any::<u64>(), a in prop::collection::vec(0u32..5, 16), b in prop::collection::vec(0u32..5, 16)) {
        let (p, m, chi) = character_case(seed);
        let n = m as usize + 1;
        let u = NottinghamElement::from_unit_coeffs(p, &a, n).unwrap();
        let v = NottinghamElement::from_unit_coeffs(p, &b, n).unwrap();
        let uv = u.compose(&v).unwrap();
        prop_assert_eq!(act(&uv, &chi).unwrap(), act(&u, &act(&v, &chi).unwrap()).unwrap());
        prop_assert_eq!(act(&NottinghamElement::identity(p, n).unwrap(), &chi).unwrap(), chi.clone());

        let moved = act(&u, &chi).unwrap();
        prop_assert_eq!(break_sequence(&moved).unwrap(), break_sequence(&chi).unwrap());
        let before = indicator(&chi).unwrap();
        let after = indicator(&moved).unwrap();
        prop_assert_eq!(after.last(), before.last());
        prop_assert_eq!(after, before);
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>(), z in prop::collection::vec(0u32..5, 15), w in prop::collection::vec(0u32..5, 15)) {
        let (p, m, chi) = character_case(seed);
        let n = m as usize + 1;
        let mk = |c: &[u32]| {
            let mut v: Vec<u32> = c.iter().take(n - 1).map(|x| x % p).collect();
            v.resize(n - 1, 0);
            v.insert(0, 1);
            FpSeries::new(p, v).unwrap()
        };
        let (z, w) = (mk(&z), mk(&w));
        let p2 = p * p;
        let lhs = evaluate(&chi, &z.mul(&w).unwrap()).unwrap();
        let rhs = (evaluate(&chi, &z).unwrap() + evaluate(&chi, &w).unwrap()) % p2;
        prop_assert_eq!(lhs, rhs);
        for (j, value) in chi.iter() {
            prop_assert_eq!(evaluate(&chi, &FpSeries::basis_unit(p, j as usize, n).unwrap()).unwrap(), value);
        }
        // trivial on U_{m+1}
        let mut deep = vec![0u32; n + 4];
        deep[0] = 1;
        for (i, c) in w.coeffs().iter().enumerate().take(4) {
            deep[n + i] = *c;
        }
        prop_assert_eq!(evaluate(&chi, &FpSeries::new(p, deep).unwrap()).unwrap(), 0);
    }
}
