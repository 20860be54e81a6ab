use proptest::prelude::*;

use singord::cohomology::{castelnuovo, castelnuovo_properties, generic_orders_with};
use singord::colength::{classify, milnor_number, origin, tjurina_number};
use singord::corpus::{eliminant_oracle, random_monic_germ, random_scheme};
use singord::par::Exec;
use singord::puiseux::{intersection_number, resolve};
use singord::realizer::normal_form;
use singord::rng;
use singord::schemes::{random_automorphism, SampleMode};
use singord::{ExactScalar, MultiPoly};

const TYPES: [&str; 9] = ["A1", "A2", "A3", "A4", "A6", "D4", "D5", "E6", "E7"];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn castelnuovo_properties_hold(seed in 0u64..1000, i in 0u64..50) {
        let z = random_scheme(seed, i).unwrap();
        let prof = castelnuovo(&z).unwrap();
        for (id, ok) in castelnuovo_properties(&prof) {
            prop_assert!(ok, "{} fails on {}", id, z.provenance);
        }
        let m2 = z.m2().unwrap();
        prop_assert!(z.degree() <= m2 && m2 < 2 * z.degree());
    }

    #[test]
    fn invariants_survive_coordinate_changes(t in 0usize..TYPES.len(), seed in any::<u64>()) {
        let f = normal_form(TYPES[t]).unwrap();
        let mut r = rng::stream(seed, 1);
        let phi = random_automorphism(&mut r, 3);
        let g = f.compose(&phi).truncate(12);
        prop_assert_eq!(milnor_number(&g).unwrap(), milnor_number(&f).unwrap());
        prop_assert_eq!(tjurina_number(&g).unwrap(), tjurina_number(&f).unwrap());
        prop_assert_eq!(classify(&g).unwrap(), classify(&f).unwrap());
        let (a, b) = (resolve(&f, &origin(2)).unwrap(), resolve(&g, &origin(2)).unwrap());
        prop_assert!(a.tree.same_shape(&b.tree));
    }

    #[test]
    fn intersection_matches_eliminant(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 2);
        let (f, g) = (random_monic_germ(&mut r), random_monic_germ(&mut r));
        if let Some(o) = eliminant_oracle(&f, &g) {
            prop_assert_eq!(intersection_number(&f, &g, &origin(2)).unwrap(), o);
            prop_assert_eq!(intersection_number(&g, &f, &origin(2)).unwrap(), o);
        }
    }

    #[test]
    fn intersection_with_a_graph(c in prop::collection::vec(-5i64..=5, 3), seed in any::<u64>()) {
        // I(f, y - p(x)) is the order of f(x, p(x))
        let mut r = rng::stream(seed, 3);
        let f = random_monic_germ(&mut r);
        let x = MultiPoly::var(2, 0);
        let px = MultiPoly::from_terms(2, c.iter().enumerate().map(|(i, &v)| ([i as u32 + 1, 0, 0], ExactScalar::from_i64(v))));
        let g = MultiPoly::var(2, 1).sub(&px);
        let restricted = f.compose(&[x, px]);
        if let Some(o) = restricted.order() {
            prop_assert_eq!(intersection_number(&f, &g, &origin(2)).unwrap(), o as usize);
        }
    }

    #[test]
    fn milnor_formula_on_perturbed_types(t in 0usize..TYPES.len(), a in -4i64..=4) {
        // adding a term above the determinacy degree keeps the type
        let f = normal_form(TYPES[t]).unwrap();
        let g = f.add(&MultiPoly::monomial(2, [4, 4, 0], ExactScalar::from_i64(a)));
        let res = resolve(&g, &origin(2)).unwrap();
        prop_assert_eq!(milnor_number(&g).unwrap() + res.r, 2 * res.delta + 1);
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn sampling_is_seeded_and_strategy_free(seed in 0u64..1000, i in 0u64..50) {
        let z = random_scheme(seed, i).unwrap();
        let a = generic_orders_with(Exec::Parallel, &z, SampleMode::Iso, 3, seed).unwrap();
        let b = generic_orders_with(Exec::Sequential, &z, SampleMode::Iso, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
