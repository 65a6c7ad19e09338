use std::sync::Arc;

use latrep::corpus::{self, distributive_corpus, non_distributive_lattices, random_map, random_sandwich_pair, random_sub_join, NamedLattice};
use latrep::error::Condition;
use latrep::monotone::{
    check_eps_increasing, increasing_envelope_via_lattice, rational, repair_decreasing, repair_increasing,
    FiniteRealFunction, Rational,
};
use latrep::oracles::{sandwich_exists_brute, DEFAULT_BUDGET};
use latrep::sandwich::{sandwich_join, sandwich_variant};
use latrep::{Error, Lattice, LatticeMap};
use proptest::prelude::*;

fn all_lattices() -> Vec<NamedLattice> {
    let mut v = distributive_corpus(16);
    v.extend(non_distributive_lattices());
    v
}

fn lattice_strategy() -> impl Strategy<Value = Arc<Lattice>> {
    let all = all_lattices();
    (0..all.len()).prop_map(move |i| all[i].lattice.clone())
}

fn distributive_strategy(max: usize) -> impl Strategy<Value = Arc<Lattice>> {
    let all = distributive_corpus(max);
    (0..all.len()).prop_map(move |i| all[i].lattice.clone())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lattice_laws(l in lattice_strategy()) {
        for a in l.elements() {
            prop_assert_eq!(l.join(a, a), a);
            prop_assert_eq!(l.join(l.bottom(), a), a);
            prop_assert_eq!(l.meet(l.top(), a), a);
            for b in l.elements() {
                prop_assert_eq!(l.join(a, b), l.join(b, a));
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(l.leq(a, b), l.join(a, b) == b);
                for c in l.elements() {
                    prop_assert_eq!(l.join(l.join(a, b), c), l.join(a, l.join(b, c)));
                }
            }
        }
    }

    #[test]
    fn distributivity_routes_agree(l in lattice_strategy()) {
        prop_assert_eq!(l.check_distributive().is_ok(), l.is_distributive());
        prop_assert_eq!(l.dual().is_distributive(), l.is_distributive());
        prop_assert_eq!(l.distributivity_witness().is_none(), l.is_distributive());
        if let Err((a, b, c)) = l.check_distributive() {
            prop_assert_ne!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
        }
        prop_assert_eq!(&l.dual().dual(), &*l);
    }

    #[test]
    fn witnesses_are_genuine(x in lattice_strategy(), y in lattice_strategy(), seed in any::<u64>()) {
        let f = random_map(&mut corpus::rng(seed), &x, &y);
        if let Err((a, b)) = f.check_join_hom() {
            prop_assert_ne!(f.get(x.join(a, b)), y.join(f.get(a), f.get(b)));
        }
        if let Err((a, b)) = f.check_monotone() {
            prop_assert!(x.leq(a, b) && !y.leq(f.get(a), f.get(b)));
        }
        if let Err((a, b)) = f.check_sub_join() {
            prop_assert!(!y.leq(f.get(x.join(a, b)), y.join(f.get(a), f.get(b))));
        }
    }

    #[test]
    fn separator_is_least(x in distributive_strategy(8), y in distributive_strategy(6), seed in any::<u64>()) {
        prop_assume!((y.len() as f64).powi(x.len() as i32) <= 1e5);
        let (phi, psi) = random_sandwich_pair(&mut corpus::rng(seed), &x, &y);
        let f = sandwich_join(&phi, &psi).unwrap();
        let brute = sandwich_exists_brute(&phi, &psi, DEFAULT_BUDGET).unwrap();
        prop_assert!(brute.is_some());
        let g = brute.unwrap();
        prop_assert!(x.elements().all(|e| y.leq(f.get(e), g.get(e))));
    }

    #[test]
    fn meet_variant_matches_dual_join(x in distributive_strategy(12), y in distributive_strategy(12), seed in any::<u64>()) {
        // A join-sandwich instance on the dual lattices is a meet-sandwich
        // instance on the originals.
        let (xd, yd) = (Arc::new(x.dual()), Arc::new(y.dual()));
        let (phi, psi) = random_sandwich_pair(&mut corpus::rng(seed), &xd, &yd);
        let upper = phi.reseat(x.clone(), y.clone());
        let lower = psi.reseat(x.clone(), y.clone());
        prop_assert_eq!(upper.check_super_meet(), Ok(()));
        prop_assert_eq!(lower.check_sub_meet(), Ok(()));
        let g = sandwich_variant(&upper, &lower, true, true).unwrap();
        prop_assert_eq!(g.check_meet_hom(), Ok(()));
        for e in x.elements() {
            prop_assert!(y.leq(lower.get(e), g.get(e)) && y.leq(g.get(e), upper.get(e)));
        }
        prop_assert_eq!(g.reseat(xd.clone(), yd.clone()), sandwich_join(&phi, &psi).unwrap());
    }

    #[test]
    fn hypotheses_are_enforced(x in distributive_strategy(12), y in distributive_strategy(12), seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let phi = random_map(&mut r, &x, &y);
        let top = LatticeMap::constant(x.clone(), y.clone(), y.top());
        match sandwich_join(&phi, &top) {
            Ok(f) => {
                prop_assert_eq!(phi.check_sub_join(), Ok(()));
                prop_assert_eq!(f.check_join_hom(), Ok(()));
            }
            Err(Error::HypothesisViolated { condition, .. }) => {
                prop_assert_eq!(condition, Condition::sub_join("Phi"));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
        let sub = random_sub_join(&mut r, &x, &y);
        prop_assert!(sandwich_join(&sub, &top).is_ok());
    }

    #[test]
    fn monotone_repairs(values in prop::collection::vec(-30i64..30, 1..10), extra in 0i64..4) {
        let vals: Vec<Rational> = values.iter().map(|&v| rational(v, 3)).collect();
        let mut gap = 0i64;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                gap = gap.max(values[i] - values[j]);
            }
        }
        let eps = rational(gap, 3) + rational(extra, 2);
        let f = FiniteRealFunction::on_grid(vals.clone(), eps.clone()).unwrap();
        prop_assert_eq!(check_eps_increasing(&f), Ok(()));
        let g = repair_increasing(&f).unwrap();
        prop_assert!(g.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(g.sup_error <= &eps / rational(2, 1));
        prop_assert_eq!(increasing_envelope_via_lattice(&f).unwrap(), g.envelope);

        let reversed: Vec<Rational> = vals.into_iter().rev().collect();
        let d = repair_decreasing(&FiniteRealFunction::on_grid(reversed, eps).unwrap()).unwrap();
        let mut back = d.values.clone();
        back.reverse();
        prop_assert_eq!(back, g.values);
    }
}
