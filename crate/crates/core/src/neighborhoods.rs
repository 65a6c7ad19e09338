//! Neighborhood systems `N: Y → 2^Y` and repair of maps whose joins are
//! only close in the sense `f(x) ∨ f(y) ∈ N(f(x∨y))`.
//!
//! A valid system satisfies, for all elements:
//!
//! - (i) `z ∈ N(z)`;
//! - (ii) `N(z)` is order-convex;
//! - (iii) `sup N(z)` and `inf N(z)` lie in `N(z)`;
//! - (iv) `t ∈ N(u)` and `u∨y ∈ N(z)` imply `t∨y ∈ N(z)`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::builders::{birkhoff_embedding, divisor_lattice, factorize};
use crate::error::{Axiom, Condition, Error, Result, Witness};
use crate::lattice::{ElementId, Lattice};
use crate::maps::{same_lattice, LatticeMap};
use crate::sandwich::sandwich_join;
use crate::stabilize::{lower_envelope, upper_envelope, Repair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    lattice: Arc<Lattice>,
    classes: Vec<FixedBitSet>,
}

impl NeighborhoodSystem {
    /// System with `N(z)` given explicitly for each `z` (in id order).
    /// Not validated; call [`NeighborhoodSystem::validate`].
    pub fn from_classes(lattice: Arc<Lattice>, classes: Vec<Vec<ElementId>>) -> Result<Self> {
        let n = lattice.len();
        if classes.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} neighborhoods given for {n} elements",
                classes.len()
            )));
        }
        let mut bits = Vec::with_capacity(n);
        for class in classes {
            let mut set = FixedBitSet::with_capacity(n);
            for y in class {
                set.insert(lattice.check_element(y)?.0);
            }
            bits.push(set);
        }
        Ok(NeighborhoodSystem {
            lattice,
            classes: bits,
        })
    }

    fn from_predicate(lattice: Arc<Lattice>, member: impl Fn(ElementId, ElementId) -> bool) -> Self {
        let n = lattice.len();
        let classes = lattice
            .elements()
            .map(|z| {
                let mut set = FixedBitSet::with_capacity(n);
                for y in lattice.elements().filter(|&y| member(z, y)) {
                    set.insert(y.0);
                }
                set
            })
            .collect();
        NeighborhoodSystem { lattice, classes }
    }

    /// `N(z) = {z}`.
    pub fn identity(lattice: Arc<Lattice>) -> Self {
        Self::from_predicate(lattice, |z, y| z == y)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    #[inline]
    pub fn contains(&self, z: ElementId, y: ElementId) -> bool {
        self.classes[z.0].contains(y.0)
    }

    /// Members of `N(z)` in id order.
    pub fn class(&self, z: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.classes[z.0].ones().map(ElementId)
    }

    /// Exhaustive check of axioms (i)–(iv), in that order.
    ///
    /// Witnesses: (i) `(z)`; (ii) `(z, t, y, u)` with `t ≤ y ≤ u`, `t, u ∈ N(z)`,
    /// `y ∉ N(z)`; (iii) `(z, s)` with `s` the missing sup or inf;
    /// (iv) `(t, u, y, z)`.
    pub fn validate(&self) -> Result<()> {
        let l = &*self.lattice;
        let fail = |axiom, ids: &[ElementId]| Error::AxiomViolated {
            axiom,
            witness: Witness::in_lattice(l, ids),
        };
        for z in l.elements() {
            if !self.contains(z, z) {
                return Err(fail(Axiom::Reflexive, &[z]));
            }
        }
        for z in l.elements() {
            for y in l.elements().filter(|&y| !self.contains(z, y)) {
                let below = self.class(z).find(|&t| l.leq(t, y));
                let above = self.class(z).find(|&u| l.leq(y, u));
                if let (Some(t), Some(u)) = (below, above) {
                    return Err(fail(Axiom::Convex, &[z, t, y, u]));
                }
            }
        }
        for z in l.elements() {
            let sup = l.sup(self.class(z));
            if !self.contains(z, sup) {
                return Err(fail(Axiom::BoundsClosed, &[z, sup]));
            }
            let inf = l.inf(self.class(z));
            if !self.contains(z, inf) {
                return Err(fail(Axiom::BoundsClosed, &[z, inf]));
            }
        }
        for u in l.elements() {
            for t in self.class(u) {
                for y in l.elements() {
                    let (uy, ty) = (l.join(u, y), l.join(t, y));
                    for z in l.elements() {
                        if self.contains(z, uy) && !self.contains(z, ty) {
                            return Err(fail(Axiom::JoinTransfer, &[t, u, y, z]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

/// `N(z) = {y : y ≤ z}`, the principal ideal of `z`.
pub fn principal_ideal_system(lattice: Arc<Lattice>) -> Result<NeighborhoodSystem> {
    let l = lattice.clone();
    NeighborhoodSystem::from_predicate(lattice, move |z, y| l.leq(y, z)).validated()
}

/// Prime-support system on the divisor lattice of `n`: `N(z)` holds the
/// divisors all of whose prime factors divide `z`.
pub fn prime_support_system(n: u64) -> Result<NeighborhoodSystem> {
    prime_support_on(Arc::new(divisor_lattice(n)?))
}

/// Prime-support system on a lattice whose labels are the divisors of some
/// number ordered by divisibility.
pub fn prime_support_on(lattice: Arc<Lattice>) -> Result<NeighborhoodSystem> {
    let values: Vec<u64> = lattice
        .labels()
        .iter()
        .map(|s| {
            s.parse::<u64>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::InvalidParameter(format!("`{s}` is not a positive integer divisor")))
        })
        .collect::<Result<_>>()?;
    let modulus = values[lattice.top().0];
    for a in lattice.elements() {
        for b in lattice.elements() {
            let (va, vb) = (values[a.0], values[b.0]);
            if modulus % va != 0 || lattice.leq(a, b) != (vb % va == 0) {
                return Err(Error::InvalidParameter(format!(
                    "labels do not form the divisor lattice of {modulus}"
                )));
            }
        }
    }
    let support = |v: u64| -> u64 {
        // Radical of v: product of its distinct primes.
        factorize(v).into_iter().map(|(p, _)| p).product()
    };
    let radicals: Vec<u64> = values.iter().map(|&v| support(v)).collect();
    NeighborhoodSystem::from_predicate(lattice, move |z, y| radicals[z.0] % radicals[y.0] == 0).validated()
}

/// Pulls a system back along an injective lattice homomorphism `h`:
/// `N(z) = {y : h(y) ∈ N'(h(z))}`.
pub fn pullback_system(h: &LatticeMap, target: &NeighborhoodSystem) -> Result<NeighborhoodSystem> {
    if !same_lattice(h.codomain(), &target.lattice) {
        return Err(Error::DomainMismatch);
    }
    let y = h.domain();
    if let Err((a, b)) = h.check_injective() {
        return Err(Error::violated(Condition::Injective { map: "H" }, y, &[a, b]));
    }
    if let Err((a, b)) = h.check_join_hom() {
        return Err(Error::violated(Condition::sub_join("H"), y, &[a, b]));
    }
    if let Err((a, b)) = h.check_meet_hom() {
        return Err(Error::violated(Condition::sub_meet("H"), y, &[a, b]));
    }
    NeighborhoodSystem::from_predicate(y.clone(), |z, w| target.contains(h.get(z), h.get(w))).validated()
}

/// Prime-support system transported to a finite distributive lattice
/// through its prime embedding into a divisor lattice.
pub fn embedded_prime_support_system(lattice: Arc<Lattice>) -> Result<NeighborhoodSystem> {
    let embedding = birkhoff_embedding(&lattice)?;
    let target = prime_support_on(embedding.map.codomain().clone())?;
    pullback_system(&embedding.map, &target)
}

/// A congruence given as a partition of the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    lattice: Arc<Lattice>,
    class_of: Vec<usize>,
    classes: Vec<Vec<ElementId>>,
}

impl Congruence {
    /// Validates that `classes` partition the lattice and that the induced
    /// equivalence is compatible with join and meet. A compatibility
    /// witness `(a, b, c, d)` has `a ≡ b`, `c ≡ d` but `a∨c ≢ b∨d` or
    /// `a∧c ≢ b∧d`.
    pub fn from_partition(lattice: Arc<Lattice>, classes: Vec<Vec<ElementId>>) -> Result<Self> {
        let n = lattice.len();
        let mut class_of = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidParameter(format!("partition class {i} is empty")));
            }
            for &y in class {
                lattice.check_element(y)?;
                if class_of[y.0] != usize::MAX {
                    return Err(Error::InvalidParameter(format!(
                        "`{}` appears in more than one class",
                        lattice.label(y)
                    )));
                }
                class_of[y.0] = i;
            }
        }
        if let Some(i) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidParameter(format!(
                "`{}` belongs to no class",
                lattice.labels()[i]
            )));
        }
        let theta = Congruence {
            lattice,
            class_of,
            classes,
        };
        // Compatibility in one argument at a time is equivalent to the
        // two-argument form for an equivalence relation.
        let l = &*theta.lattice;
        for a in l.elements() {
            for b in l.elements().filter(|&b| theta.congruent(a, b)) {
                for c in l.elements() {
                    if !theta.congruent(l.join(a, c), l.join(b, c)) || !theta.congruent(l.meet(a, c), l.meet(b, c)) {
                        return Err(Error::NotACongruence(Witness::in_lattice(l, &[a, b, c, c])));
                    }
                }
            }
        }
        Ok(theta)
    }

    /// The partition into singletons.
    pub fn discrete(lattice: Arc<Lattice>) -> Self {
        let classes = lattice.elements().map(|y| vec![y]).collect();
        Self::from_partition(lattice, classes).expect("equality is a congruence")
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn congruent(&self, a: ElementId, b: ElementId) -> bool {
        self.class_of[a.0] == self.class_of[b.0]
    }

    pub fn classes(&self) -> &[Vec<ElementId>] {
        &self.classes
    }
}

/// `N(z)` is the congruence class of `z`.
pub fn congruence_system(theta: &Congruence) -> Result<NeighborhoodSystem> {
    NeighborhoodSystem::from_predicate(theta.lattice.clone(), |z, y| theta.congruent(z, y)).validated()
}

/// Checks `f(x)∨f(y) ∈ N(f(x∨y))` for every pair.
pub fn check_neighborhood_approx(f: &LatticeMap, system: &NeighborhoodSystem) -> Result<()> {
    if !same_lattice(f.codomain(), &system.lattice) {
        return Err(Error::DomainMismatch);
    }
    let (x, y) = (&**f.domain(), &**f.codomain());
    for a in x.elements() {
        for b in x.elements() {
            if !system.contains(f.get(x.join(a, b)), y.join(f.get(a), f.get(b))) {
                return Err(Error::violated(Condition::NeighborhoodClose, x, &[a, b]));
            }
        }
    }
    Ok(())
}

/// Builds a join homomorphism `F` with `F(x) ∈ N(f(x))` for every x, from
/// the same envelopes used by [`crate::stabilize::stabilize_join`].
pub fn stabilize_with_neighborhoods(f: &LatticeMap, system: &NeighborhoodSystem) -> Result<Repair> {
    f.domain().require_distributive()?;
    f.codomain().require_distributive()?;
    system.validate()?;
    check_neighborhood_approx(f, system)?;

    let lower = lower_envelope(f)?;
    let upper = upper_envelope(f)?;
    let repaired = sandwich_join(&lower, &upper)?;
    for x in f.domain().elements() {
        let target = f.get(x);
        assert!(
            system.contains(target, lower.get(x)) && system.contains(target, upper.get(x)),
            "envelopes leave N(f(x)) at {}",
            f.domain().label(x)
        );
        assert!(
            system.contains(target, repaired.get(x)),
            "repaired map leaves N(f(x)) at {}",
            f.domain().label(x)
        );
    }
    Ok(Repair {
        lower,
        upper,
        repaired,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{boolean_algebra, chain};

    fn labels(system: &NeighborhoodSystem, z: &str) -> Vec<String> {
        let l = system.lattice();
        system.class(l.id(z).unwrap()).map(|y| l.label(y).to_string()).collect()
    }

    #[test]
    fn identity_system_is_valid() {
        for l in [chain(4).unwrap(), boolean_algebra(2).unwrap(), divisor_lattice(12).unwrap()] {
            assert!(NeighborhoodSystem::identity(Arc::new(l)).validate().is_ok());
        }
    }

    #[test]
    fn principal_ideals() {
        let b2 = Arc::new(boolean_algebra(2).unwrap());
        let n = principal_ideal_system(b2.clone()).unwrap();
        assert_eq!(labels(&n, "{1}"), ["{}", "{1}"]);
        assert_eq!(labels(&n, "{}"), ["{}"]);
        assert_eq!(labels(&n, "{1,2}").len(), 4);
    }

    #[test]
    fn prime_supports_of_twelve() {
        let n = prime_support_system(12).unwrap();
        assert_eq!(labels(&n, "2"), ["1", "2", "4"]);
        assert_eq!(labels(&n, "3"), ["1", "3"]);
        assert_eq!(labels(&n, "1"), ["1"]);
        assert_eq!(labels(&n, "6"), ["1", "2", "3", "4", "6", "12"]);
        let l = n.lattice();
        let id = |s| l.id(s).unwrap();
        // 4 ∈ N(2) and 2∨3 = 6 ∈ N(12), so 4∨3 = 12 ∈ N(12).
        assert!(n.contains(id("2"), id("4")));
        assert!(n.contains(id("12"), l.join(id("2"), id("3"))));
        assert!(n.contains(id("12"), l.join(id("4"), id("3"))));

        let p = prime_support_system(7).unwrap();
        assert_eq!(labels(&p, "7"), ["1", "7"]);
    }

    #[test]
    fn prime_support_needs_divisor_labels() {
        assert!(prime_support_on(Arc::new(chain(3).unwrap())).is_err());
    }

    #[test]
    fn mutated_principal_ideal_violates_an_axiom() {
        let b2 = Arc::new(boolean_algebra(2).unwrap());
        let n = principal_ideal_system(b2.clone()).unwrap();
        // Drop {1} from N({1,2}): convexity breaks between {} and {1,2}.
        let mut classes: Vec<Vec<ElementId>> = b2.elements().map(|z| n.class(z).collect()).collect();
        classes[3].retain(|&y| y != ElementId(1));
        let broken = NeighborhoodSystem::from_classes(b2.clone(), classes.clone()).unwrap();
        match broken.validate().unwrap_err() {
            Error::AxiomViolated { axiom, witness } => {
                assert_eq!(axiom, Axiom::Convex);
                assert_eq!(witness.labels, ["{1,2}", "{}", "{1}", "{1,2}"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        // Drop the bottom from N({1}): sup/inf closure breaks.
        let mut classes: Vec<Vec<ElementId>> = b2.elements().map(|z| n.class(z).collect()).collect();
        classes[1].retain(|&y| y != ElementId(0));
        classes[1].push(ElementId(0));
        classes[2] = vec![ElementId(2), ElementId(3)];
        let broken = NeighborhoodSystem::from_classes(b2, classes).unwrap();
        assert!(matches!(broken.validate(), Err(Error::AxiomViolated { .. })));
    }

    #[test]
    fn pullback_along_prime_embedding() {
        let b2 = Arc::new(boolean_algebra(2).unwrap());
        let n = embedded_prime_support_system(b2.clone()).unwrap();
        assert_eq!(labels(&n, "{1}"), ["{}", "{1}"]);
        assert_eq!(labels(&n, "{}"), ["{}"]);

        let embedding = birkhoff_embedding(&b2).unwrap();
        let identity = NeighborhoodSystem::identity(embedding.map.codomain().clone());
        assert_eq!(pullback_system(&embedding.map, &identity).unwrap(), NeighborhoodSystem::identity(b2));
    }

    #[test]
    fn pullback_rejects_non_injective_maps() {
        let c3 = Arc::new(chain(3).unwrap());
        let h = LatticeMap::constant(c3.clone(), c3.clone(), ElementId(0));
        let target = NeighborhoodSystem::identity(c3);
        assert!(matches!(
            pullback_system(&h, &target),
            Err(Error::HypothesisViolated {
                condition: Condition::Injective { .. },
                ..
            })
        ));
    }

    #[test]
    fn congruences() {
        let c4 = Arc::new(chain(4).unwrap());
        let e = ElementId;
        let theta = Congruence::from_partition(c4.clone(), vec![vec![e(0), e(1)], vec![e(2), e(3)]]).unwrap();
        let n = congruence_system(&theta).unwrap();
        assert_eq!(labels(&n, "1"), ["0", "1"]);

        let discrete = congruence_system(&Congruence::discrete(c4.clone())).unwrap();
        assert_eq!(discrete, NeighborhoodSystem::identity(c4.clone()));

        let err = Congruence::from_partition(c4.clone(), vec![vec![e(0), e(2)], vec![e(1)], vec![e(3)]]).unwrap_err();
        match err {
            Error::NotACongruence(w) => assert_eq!(w.labels, ["0", "2", "1", "1"]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Congruence::from_partition(c4.clone(), vec![vec![e(0), e(1)], vec![e(2)]]).is_err());
        assert!(Congruence::from_partition(c4, vec![vec![e(0), e(1)], vec![e(1), e(2), e(3)]]).is_err());
    }

    #[test]
    fn neighborhood_closeness_on_divisors() {
        let c2 = Arc::new(chain(2).unwrap());
        let n = prime_support_system(12).unwrap();
        let y = n.lattice().clone();
        let f = LatticeMap::from_labels(c2.clone(), y.clone(), &[("0", "2"), ("1", "4")]).unwrap();
        assert!(check_neighborhood_approx(&f, &n).is_ok());
        let repair = stabilize_with_neighborhoods(&f, &n).unwrap();
        assert_eq!(repair.lower, f);
        assert_eq!(repair.upper, f);
        assert_eq!(repair.repaired, f);

        let g = LatticeMap::from_labels(c2, y, &[("0", "3"), ("1", "2")]).unwrap();
        match check_neighborhood_approx(&g, &n).unwrap_err() {
            Error::HypothesisViolated { witness, .. } => assert_eq!(witness.labels, ["0", "1"]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
