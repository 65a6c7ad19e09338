//! Exhaustive four-map search on tiny lattices: every meet homomorphism `G`
//! below every join homomorphism `F`, used as `Ψ2 = Φ2 = G`, `Φ1 = Ψ1 = F`.

use std::sync::Arc;

use latrep::builders::{boolean_algebra, chain, divisor_lattice};
use latrep::oracles::{boolean_complements, enumerate_join_homs, DEFAULT_BUDGET};
use latrep::sandwich::sandwich_lattice_hom;
use latrep::{Lattice, LatticeMap};

struct Sweep {
    tried: usize,
    missing: usize,
    first_gap: Option<(LatticeMap, LatticeMap)>,
}

fn sweep(x: &Arc<Lattice>, y: &Arc<Lattice>) -> Sweep {
    let joins = enumerate_join_homs(x, y, DEFAULT_BUDGET).unwrap();
    let (xd, yd) = (Arc::new(x.dual()), Arc::new(y.dual()));
    let meets: Vec<LatticeMap> = enumerate_join_homs(&xd, &yd, DEFAULT_BUDGET)
        .unwrap()
        .into_iter()
        .map(|m| m.reseat(x.clone(), y.clone()))
        .collect();
    let mut out = Sweep {
        tried: 0,
        missing: 0,
        first_gap: None,
    };
    for g in &meets {
        for f in &joins {
            if g.pointwise_leq(f).unwrap().is_err() {
                continue;
            }
            out.tried += 1;
            match sandwich_lattice_hom(g, g, f, f, DEFAULT_BUDGET).unwrap() {
                Some(h) => {
                    assert_eq!(h.check_join_hom(), Ok(()));
                    assert_eq!(h.check_meet_hom(), Ok(()));
                    assert_eq!(g.pointwise_leq(&h).unwrap(), Ok(()));
                    assert_eq!(h.pointwise_leq(f).unwrap(), Ok(()));
                }
                None => {
                    out.missing += 1;
                    out.first_gap.get_or_insert_with(|| (g.clone(), f.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn boolean_codomains_always_admit_a_homomorphism() {
    let domains = [chain(2), chain(3), chain(4), boolean_algebra(2), divisor_lattice(12)];
    let codomains = [chain(2), boolean_algebra(2), divisor_lattice(30)];
    for x in domains {
        let x = Arc::new(x.unwrap());
        for y in &codomains {
            let y = Arc::new(y.clone().unwrap());
            assert!(boolean_complements(&y).is_some());
            let s = sweep(&x, &y);
            assert!(s.tried > 0);
            assert_eq!(s.missing, 0, "{} → {} elements", x.len(), y.len());
        }
    }
}

#[test]
fn square_into_three_chain_has_gaps() {
    // Meet homomorphism below a join homomorphism with nothing in between.
    let x = Arc::new(boolean_algebra(2).unwrap());
    let y = Arc::new(chain(3).unwrap());
    let s = sweep(&x, &y);
    println!("boolean:2 → chain:3: {} of {} pairs have no lattice homomorphism between them", s.missing, s.tried);
    let (g, f) = s.first_gap.expect("a gap exists");
    println!("first gap: G = {:?}, F = {:?}", g.values(), f.values());
    assert_eq!(g.check_meet_hom(), Ok(()));
    assert_eq!(f.check_join_hom(), Ok(()));
    assert!(sandwich_lattice_hom(&g, &g, &f, &f, DEFAULT_BUDGET).unwrap().is_none());
}

#[test]
fn chains_into_chains_never_miss() {
    for n in 1..=4 {
        for m in 1..=4 {
            let (x, y) = (Arc::new(chain(n).unwrap()), Arc::new(chain(m).unwrap()));
            assert_eq!(sweep(&x, &y).missing, 0);
        }
    }
}
