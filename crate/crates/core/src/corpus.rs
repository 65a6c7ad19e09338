//! Reproducible test corpus: named lattices assembled from the builders and
//! seeded generators of maps that satisfy the various hypotheses by
//! construction.
//!
//! Generators never call the algorithms they feed. Callers that want a
//! second line of defence filter the output through the hypothesis checkers.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builders::{boolean_algebra, chain, divisor_lattice, product};
use crate::lattice::{ElementId, Lattice};
use crate::maps::LatticeMap;
use crate::neighborhoods::{Congruence, NeighborhoodSystem};
use crate::stabilize::ErrorPair;

pub const DEFAULT_SEED: u64 = 0x5eed_1a77;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct NamedLattice {
    pub name: String,
    pub lattice: Arc<Lattice>,
}

fn named(name: impl Into<String>, lattice: Lattice) -> NamedLattice {
    NamedLattice {
        name: name.into(),
        lattice: Arc::new(lattice),
    }
}

/// Chains up to 6, Boolean algebras up to 3 atoms and `Λ_n` for
/// n ∈ {6, 12, 30, 60}.
pub fn base_lattices() -> Vec<NamedLattice> {
    let mut out = Vec::new();
    for k in 1..=6 {
        out.push(named(format!("chain:{k}"), chain(k).unwrap()));
    }
    for k in 0..=3 {
        out.push(named(format!("boolean:{k}"), boolean_algebra(k).unwrap()));
    }
    for n in [6, 12, 30, 60] {
        out.push(named(format!("divisor:{n}"), divisor_lattice(n).unwrap()));
    }
    out
}

/// Base lattices plus pairwise products of nontrivial base lattices, all
/// with at most `max_size` elements. Every member is distributive.
pub fn distributive_corpus(max_size: usize) -> Vec<NamedLattice> {
    let base = base_lattices();
    let mut out: Vec<NamedLattice> = base.iter().filter(|l| l.lattice.len() <= max_size).cloned().collect();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            let n = a.lattice.len() * b.lattice.len();
            if a.lattice.len() > 1 && b.lattice.len() > 1 && n <= max_size {
                out.push(named(
                    format!("{}*{}", a.name, b.name),
                    product(&a.lattice, &b.lattice).unwrap(),
                ));
            }
        }
    }
    out
}

/// The pentagon N5 and the diamond M3.
pub fn non_distributive_lattices() -> Vec<NamedLattice> {
    let n5 = Lattice::from_covers(
        &["0", "p", "q", "r", "1"],
        &[("0", "p"), ("p", "q"), ("0", "r"), ("q", "1"), ("r", "1")],
    )
    .unwrap();
    let m3 = Lattice::from_covers(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    .unwrap();
    vec![named("N5", n5), named("M3", m3)]
}

fn pick<R: Rng>(rng: &mut R, items: &[ElementId]) -> ElementId {
    *items.choose(rng).expect("nonempty choice")
}

pub fn random_element<R: Rng>(rng: &mut R, l: &Lattice) -> ElementId {
    ElementId(rng.gen_range(0..l.len()))
}

pub fn random_map<R: Rng>(rng: &mut R, x: &Arc<Lattice>, y: &Arc<Lattice>) -> LatticeMap {
    LatticeMap::from_fn(x.clone(), y.clone(), |_| random_element(rng, y))
}

/// Monotone maps are exactly the super-join maps.
pub fn random_monotone<R: Rng>(rng: &mut R, x: &Arc<Lattice>, y: &Arc<Lattice>) -> LatticeMap {
    let mut values = vec![y.bottom(); x.len()];
    for e in x.linear_extension() {
        let floor = y.sup(x.down_set(e).filter(|&z| z != e).map(|z| values[z.0]));
        let above: Vec<ElementId> = y.up_set(floor).collect();
        values[e.0] = pick(rng, &above);
    }
    LatticeMap::new(x.clone(), y.clone(), values).unwrap()
}

/// Join homomorphism from a distributive domain: a random base value joined
/// with random values attached to the join-irreducibles below each element.
pub fn random_join_hom<R: Rng>(rng: &mut R, x: &Arc<Lattice>, y: &Arc<Lattice>) -> LatticeMap {
    let base = random_element(rng, y);
    let attached: HashMap<ElementId, ElementId> =
        x.join_irreducibles().into_iter().map(|j| (j, random_element(rng, y))).collect();
    LatticeMap::from_fn(x.clone(), y.clone(), |e| {
        y.sup(std::iter::once(base).chain(x.down_set(e).filter_map(|z| attached.get(&z).copied())))
    })
}

/// Sub-join map: a join homomorphism joined with noise that is bottom on
/// every join-reducible element.
pub fn random_sub_join<R: Rng>(rng: &mut R, x: &Arc<Lattice>, y: &Arc<Lattice>) -> LatticeMap {
    let h = random_join_hom(rng, x, y);
    let mut free = x.join_irreducibles();
    free.push(x.bottom());
    let mut noisy = HashMap::new();
    for e in free {
        if rng.gen_bool(0.5) {
            noisy.insert(e, random_element(rng, y));
        }
    }
    LatticeMap::from_fn(x.clone(), y.clone(), |e| match noisy.get(&e) {
        Some(&v) => y.join(h.get(e), v),
        None => h.get(e),
    })
}

/// Super-join `Ψ ≥ Φ`: `Ψ(x) = sup{Φ(z) ∨ r(z) : z ≤ x}` for random `r`.
pub fn random_dominating_monotone<R: Rng>(rng: &mut R, phi: &LatticeMap) -> LatticeMap {
    let (x, y) = (phi.domain(), phi.codomain());
    let lifted: Vec<ElementId> = x
        .elements()
        .map(|e| {
            if rng.gen_bool(0.4) {
                y.join(phi.get(e), random_element(rng, y))
            } else {
                phi.get(e)
            }
        })
        .collect();
    LatticeMap::from_fn(x.clone(), y.clone(), |e| y.sup(x.down_set(e).map(|z| lifted[z.0])))
}

/// A pair `(Φ, Ψ)` with `Φ` sub-join, `Ψ` super-join and `Φ ≤ Ψ`.
pub fn random_sandwich_pair<R: Rng>(rng: &mut R, x: &Arc<Lattice>, y: &Arc<Lattice>) -> (LatticeMap, LatticeMap) {
    let phi = random_sub_join(rng, x, y);
    let psi = random_dominating_monotone(rng, &phi);
    (phi, psi)
}

/// Error tables depending only on `x∨y`: `φ(x,y) = α(x∨y)` and
/// `ψ(x,y) = β(x∨y)` with `α(z) = inf{γ(w) ∧ r(w) : w ≤ z}` and
/// `β(z) = sup{δ(w) ∨ s(w) : w ≤ z}`, where `γ`, `δ` are the smallest and
/// largest `f(a)∨f(b)` over `a∨b = w`. With `slack = false`, `r ≡ top` and
/// `s ≡ bottom`, giving the tightest tables of this shape.
pub fn join_determined_errors<R: Rng>(rng: &mut R, f: &LatticeMap, slack: bool) -> ErrorPair {
    let (x, y) = (f.domain().clone(), f.codomain().clone());
    let mut gamma = vec![y.top(); x.len()];
    let mut delta = vec![y.bottom(); x.len()];
    for a in x.elements() {
        for b in x.elements() {
            let w = x.join(a, b).0;
            let v = y.join(f.get(a), f.get(b));
            gamma[w] = y.meet(gamma[w], v);
            delta[w] = y.join(delta[w], v);
        }
    }
    if slack {
        for w in 0..x.len() {
            if rng.gen_bool(0.3) {
                gamma[w] = y.meet(gamma[w], random_element(rng, &y));
            }
            if rng.gen_bool(0.3) {
                delta[w] = y.join(delta[w], random_element(rng, &y));
            }
        }
    }
    let alpha: Vec<ElementId> = x.elements().map(|z| y.inf(x.down_set(z).map(|w| gamma[w.0]))).collect();
    let beta: Vec<ElementId> = x.elements().map(|z| y.sup(x.down_set(z).map(|w| delta[w.0]))).collect();
    ErrorPair::from_fns(
        x.clone(),
        y,
        |a, b| alpha[x.join(a, b).0],
        |a, b| beta[x.join(a, b).0],
    )
}

/// One of several error-table shapes, chosen at random.
pub fn random_error_pair<R: Rng>(rng: &mut R, f: &LatticeMap) -> ErrorPair {
    let (x, y) = (f.domain().clone(), f.codomain().clone());
    match rng.gen_range(0..5) {
        0 => ErrorPair::constant(x, y.clone(), y.bottom(), y.top()),
        1 => ErrorPair::running_sup(f),
        2 => join_determined_errors(rng, f, false),
        _ => join_determined_errors(rng, f, true),
    }
}

/// Congruence with classes `x ~ y ⟺ (x∧a, x∨b) = (y∧a, y∨b)` for random
/// `a, b`; on a distributive lattice both coordinates are homomorphisms.
pub fn random_congruence<R: Rng>(rng: &mut R, l: &Arc<Lattice>) -> Congruence {
    let (a, b) = (random_element(rng, l), random_element(rng, l));
    let mut keys: Vec<(ElementId, ElementId)> = Vec::new();
    let mut classes: Vec<Vec<ElementId>> = Vec::new();
    for e in l.elements() {
        let key = (l.meet(e, a), l.join(e, b));
        match keys.iter().position(|&k| k == key) {
            Some(i) => classes[i].push(e),
            None => {
                keys.push(key);
                classes.push(vec![e]);
            }
        }
    }
    Congruence::from_partition(l.clone(), classes).expect("kernel of a homomorphism")
}

/// A map with `f(x) ∈ N(h(x))` for a random join homomorphism `h`.
/// Satisfies the neighborhood hypothesis whenever `N` comes from a
/// congruence; for other systems callers must filter.
pub fn random_neighborhood_perturbation<R: Rng>(
    rng: &mut R,
    x: &Arc<Lattice>,
    system: &NeighborhoodSystem,
) -> LatticeMap {
    let y = system.lattice().clone();
    let h = random_join_hom(rng, x, &y);
    LatticeMap::from_fn(x.clone(), y, |e| {
        let class: Vec<ElementId> = system.class(h.get(e)).collect();
        pick(rng, &class)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_contents() {
        let all = distributive_corpus(16);
        assert!(all.iter().all(|l| l.lattice.is_distributive() && l.lattice.len() <= 16));
        assert!(all.iter().any(|l| l.name == "divisor:60"));
        assert!(all.iter().any(|l| l.name == "chain:2*boolean:3"));
        assert!(non_distributive_lattices().iter().all(|l| !l.lattice.is_distributive()));
    }

    #[test]
    fn generators_meet_their_contracts() {
        let mut r = rng(DEFAULT_SEED);
        for x in distributive_corpus(12) {
            for y in distributive_corpus(8) {
                let (x, y) = (&x.lattice, &y.lattice);
                assert_eq!(random_monotone(&mut r, x, y).check_monotone(), Ok(()));
                assert_eq!(random_join_hom(&mut r, x, y).check_join_hom(), Ok(()));
                let (phi, psi) = random_sandwich_pair(&mut r, x, y);
                assert_eq!(phi.check_sub_join(), Ok(()));
                assert_eq!(psi.check_super_join(), Ok(()));
                assert_eq!(phi.pointwise_leq(&psi).unwrap(), Ok(()));

                let f = random_map(&mut r, x, y);
                let errors = random_error_pair(&mut r, &f);
                errors.validate().unwrap();
                crate::stabilize::check_approx_join(&f, &errors).unwrap();
            }
        }
    }

    #[test]
    fn congruence_generator() {
        let mut r = rng(1);
        for l in distributive_corpus(16) {
            let theta = random_congruence(&mut r, &l.lattice);
            let system = crate::neighborhoods::congruence_system(&theta).unwrap();
            let f = random_neighborhood_perturbation(&mut r, &l.lattice, &system);
            crate::neighborhoods::check_neighborhood_approx(&f, &system).unwrap();
        }
    }
}
