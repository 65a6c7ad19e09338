//! Separation of a sub-join map from a super-join map by a join
//! homomorphism, its order-dual variants, and a bounded search for lattice
//! homomorphisms squeezed between four maps.

use std::sync::Arc;

use crate::error::{Condition, Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::maps::LatticeMap;

/// Given `Φ ≤ Ψ` on a distributive domain with `Φ` sub-join and `Ψ`
/// super-join, returns the join homomorphism `F(x) = sup{Φ(z) : z ≤ x}`,
/// which satisfies `Φ ≤ F ≤ Ψ`.
///
/// `F` is the least join homomorphism above `Φ`.
pub fn sandwich_join(lower: &LatticeMap, upper: &LatticeMap) -> Result<LatticeMap> {
    lower.require_compatible(upper)?;
    lower.domain().require_distributive()?;
    check_sandwich_hypotheses(lower, upper)?;
    let f = least_join_hom_above(lower);

    if let Err((x, y)) = f.check_join_hom() {
        panic!("separating map is not a join homomorphism at ({x}, {y})");
    }
    assert_eq!(lower.pointwise_leq(&f), Ok(Ok(())), "separating map dips below the lower map");
    assert_eq!(f.pointwise_leq(upper), Ok(Ok(())), "separating map exceeds the upper map");
    Ok(f)
}

fn check_sandwich_hypotheses(lower: &LatticeMap, upper: &LatticeMap) -> Result<()> {
    let x = lower.domain();
    if let Err(w) = lower.pointwise_leq(upper)? {
        return Err(Error::violated(
            Condition::Pointwise {
                lower: "Phi",
                upper: "Psi",
            },
            x,
            &[w],
        ));
    }
    if let Err((a, b)) = lower.check_sub_join() {
        return Err(Error::violated(Condition::sub_join("Phi"), x, &[a, b]));
    }
    if let Err((a, b)) = upper.check_super_join() {
        return Err(Error::violated(Condition::super_join("Psi"), x, &[a, b]));
    }
    Ok(())
}

/// `x ↦ sup{m(z) : z ≤ x}` without any hypothesis checks.
pub(crate) fn least_join_hom_above(m: &LatticeMap) -> LatticeMap {
    let (x, y) = (m.domain(), m.codomain());
    LatticeMap::from_fn(x.clone(), y.clone(), |a| y.sup(x.down_set(a).map(|z| m.get(z))))
}

/// Runs [`sandwich_join`] after replacing the domain and/or codomain by its
/// order dual, then reads the result back in the original spaces.
///
/// With both flags set the result is a meet homomorphism `G` with
/// `Ψ ≤ G ≤ Φ` for `Φ` super-meet and `Ψ` sub-meet. Hypothesis violations
/// are reported in terms of the original orders.
pub fn sandwich_variant(
    lower: &LatticeMap,
    upper: &LatticeMap,
    flip_domain: bool,
    flip_codomain: bool,
) -> Result<LatticeMap> {
    lower.require_compatible(upper)?;
    lower.domain().require_distributive()?;
    let seat = |l: &Arc<Lattice>, flip: bool| if flip { Arc::new(l.dual()) } else { l.clone() };
    let domain = seat(lower.domain(), flip_domain);
    let codomain = seat(lower.codomain(), flip_codomain);
    let phi = lower.reseat(domain.clone(), codomain.clone());
    let psi = upper.reseat(domain, codomain);
    match sandwich_join(&phi, &psi) {
        Ok(f) => Ok(f.reseat(lower.domain().clone(), lower.codomain().clone())),
        Err(Error::HypothesisViolated { condition, witness }) => Err(Error::HypothesisViolated {
            condition: condition.dualize(flip_domain, flip_codomain),
            witness,
        }),
        Err(e) => Err(e),
    }
}

/// Searches for a lattice homomorphism `H` with `Ψ2 ≤ H ≤ Ψ1`, given
/// `Ψ2 ≤ Φ2 ≤ Φ1 ≤ Ψ1` with `Ψ2` sub-meet, `Φ2` super-meet, `Φ1` sub-join
/// and `Ψ1` super-join.
///
/// Backtracks over the domain in a linear extension, trying codomain
/// elements in id order, so the first homomorphism found is deterministic.
/// Returns `Ok(None)` when the space is exhausted and
/// `SearchBudgetExceeded` after `budget` search nodes.
pub fn sandwich_lattice_hom(
    psi2: &LatticeMap,
    phi2: &LatticeMap,
    phi1: &LatticeMap,
    psi1: &LatticeMap,
    budget: u64,
) -> Result<Option<LatticeMap>> {
    for m in [phi2, phi1, psi1] {
        psi2.require_compatible(m)?;
    }
    let x = psi2.domain().clone();
    let y = psi2.codomain().clone();
    x.require_distributive()?;

    let chain = [("Psi2", psi2), ("Phi2", phi2), ("Phi1", phi1), ("Psi1", psi1)];
    for pair in chain.windows(2) {
        let ((lo_name, lo), (hi_name, hi)) = (pair[0], pair[1]);
        if let Err(w) = lo.pointwise_leq(hi)? {
            return Err(Error::violated(
                Condition::Pointwise {
                    lower: lo_name,
                    upper: hi_name,
                },
                &x,
                &[w],
            ));
        }
    }
    let checks = [
        (Condition::sub_meet("Psi2"), psi2.check_sub_meet()),
        (Condition::super_meet("Phi2"), phi2.check_super_meet()),
        (Condition::sub_join("Phi1"), phi1.check_sub_join()),
        (Condition::super_join("Psi1"), psi1.check_super_join()),
    ];
    for (condition, check) in checks {
        if let Err((a, b)) = check {
            return Err(Error::violated(condition, &x, &[a, b]));
        }
    }

    let search = HomSearch::new(&x, &y, psi2, psi1, budget);
    let found = search.run()?;
    Ok(found.map(|values| {
        let h = LatticeMap::new(x.clone(), y.clone(), values).expect("search assigns codomain elements");
        assert!(h.check_join_hom().is_ok() && h.check_meet_hom().is_ok());
        h
    }))
}

struct HomSearch<'a> {
    x: &'a Lattice,
    y: &'a Lattice,
    lower: &'a LatticeMap,
    upper: &'a LatticeMap,
    order: Vec<ElementId>,
    /// Pairs of earlier elements whose join is the element at this position.
    joins_into: Vec<Vec<(ElementId, ElementId)>>,
    budget: u64,
}

impl<'a> HomSearch<'a> {
    fn new(x: &'a Lattice, y: &'a Lattice, lower: &'a LatticeMap, upper: &'a LatticeMap, budget: u64) -> Self {
        let order = x.linear_extension();
        let mut position = vec![0; x.len()];
        for (i, &e) in order.iter().enumerate() {
            position[e.0] = i;
        }
        let mut joins_into = vec![Vec::new(); x.len()];
        for a in x.elements() {
            for b in x.elements().skip(a.0 + 1) {
                let j = x.join(a, b);
                if j != a && j != b {
                    joins_into[position[j.0]].push((a, b));
                }
            }
        }
        HomSearch {
            x,
            y,
            lower,
            upper,
            order,
            joins_into,
            budget,
        }
    }

    fn run(&self) -> Result<Option<Vec<ElementId>>> {
        let mut assigned: Vec<Option<ElementId>> = vec![None; self.x.len()];
        let mut nodes = 0u64;
        if self.extend(0, &mut assigned, &mut nodes)? {
            Ok(Some(assigned.into_iter().map(|v| v.unwrap()).collect()))
        } else {
            Ok(None)
        }
    }

    fn consistent(&self, pos: usize, candidate: ElementId, assigned: &[Option<ElementId>]) -> bool {
        let (x, y) = (self.x, self.y);
        let e = self.order[pos];
        for &z in &self.order[..pos] {
            let hz = assigned[z.0].unwrap();
            // meet(e, z) precedes e, so it is already assigned.
            let m = x.meet(e, z);
            let hm = if m == e { candidate } else { assigned[m.0].unwrap() };
            if hm != y.meet(candidate, hz) {
                return false;
            }
            if x.leq(z, e) && !y.leq(hz, candidate) {
                return false;
            }
        }
        self.joins_into[pos]
            .iter()
            .all(|&(a, b)| y.join(assigned[a.0].unwrap(), assigned[b.0].unwrap()) == candidate)
    }

    fn extend(&self, pos: usize, assigned: &mut [Option<ElementId>], nodes: &mut u64) -> Result<bool> {
        if pos == self.order.len() {
            return Ok(true);
        }
        let e = self.order[pos];
        let (lo, hi) = (self.lower.get(e), self.upper.get(e));
        for candidate in self.y.elements() {
            if !(self.y.leq(lo, candidate) && self.y.leq(candidate, hi)) {
                continue;
            }
            *nodes += 1;
            if *nodes > self.budget {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            if self.consistent(pos, candidate, assigned) {
                assigned[e.0] = Some(candidate);
                if self.extend(pos + 1, assigned, nodes)? {
                    return Ok(true);
                }
                assigned[e.0] = None;
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{boolean_algebra, chain};
    use crate::error::{Bound, Op};

    fn spaces() -> (Arc<Lattice>, Arc<Lattice>) {
        (Arc::new(boolean_algebra(2).unwrap()), Arc::new(chain(3).unwrap()))
    }

    fn map(x: &Arc<Lattice>, y: &Arc<Lattice>, v: &[usize]) -> LatticeMap {
        LatticeMap::from_indices(x.clone(), y.clone(), v).unwrap()
    }

    #[test]
    fn degenerate_sandwich_returns_the_homomorphism() {
        let (x, y) = spaces();
        let phi = map(&x, &y, &[0, 1, 0, 1]);
        assert_eq!(sandwich_join(&phi, &phi).unwrap(), phi);
        // Flipping both sides: Φ is also a meet homomorphism here.
        assert_eq!(sandwich_variant(&phi, &phi, true, true).unwrap(), phi);
        assert_eq!(sandwich_variant(&phi, &phi, false, false).unwrap(), phi);
    }

    #[test]
    fn sandwich_below_a_super_join_map() {
        let (x, y) = spaces();
        let phi = map(&x, &y, &[0, 1, 0, 1]);
        let psi = map(&x, &y, &[0, 1, 0, 2]);
        let f = sandwich_join(&phi, &psi).unwrap();
        assert_eq!(f.values(), map(&x, &y, &[0, 1, 0, 1]).values());
        assert!(f.check_join_hom().is_ok());
    }

    #[test]
    fn sup_over_down_sets_fills_gaps() {
        // Φ = spike on the atom {2}; F must carry it up to the top.
        let (x, y) = spaces();
        let phi = map(&x, &y, &[0, 0, 1, 0]);
        let psi = LatticeMap::constant(x.clone(), y.clone(), y.top());
        let f = sandwich_join(&phi, &psi).unwrap();
        assert_eq!(f.values(), map(&x, &y, &[0, 0, 1, 1]).values());
    }

    #[test]
    fn bottom_below_top() {
        let (x, y) = spaces();
        let phi = LatticeMap::constant(x.clone(), y.clone(), y.bottom());
        let psi = LatticeMap::constant(x.clone(), y.clone(), y.top());
        assert_eq!(sandwich_join(&phi, &psi).unwrap(), phi);
    }

    #[test]
    fn hypothesis_violations_carry_witnesses() {
        let (x, y) = spaces();
        let phi = map(&x, &y, &[0, 1, 0, 1]);
        let psi = map(&x, &y, &[0, 0, 0, 2]);
        match sandwich_join(&phi, &psi).unwrap_err() {
            Error::HypothesisViolated { condition, witness } => {
                assert_eq!(
                    condition,
                    Condition::Pointwise {
                        lower: "Phi",
                        upper: "Psi"
                    }
                );
                assert_eq!(witness.labels, ["{1}"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        // Ψ not super-join (not monotone).
        let psi = map(&x, &y, &[2, 2, 2, 1]);
        let err = sandwich_join(&phi, &psi).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated { condition, .. } if condition == Condition::super_join("Psi")));
        // Φ not sub-join: join of two atoms jumps above both.
        let phi = map(&x, &y, &[0, 0, 0, 1]);
        let psi = LatticeMap::constant(x.clone(), y.clone(), y.top());
        let err = sandwich_join(&phi, &psi).unwrap_err();
        match err {
            Error::HypothesisViolated { condition, witness } => {
                assert_eq!(condition, Condition::sub_join("Phi"));
                assert_eq!(witness.labels, ["{1}", "{2}"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn variant_errors_use_original_orders() {
        let (x, y) = spaces();
        // Flipping the codomain asks for Φ ≥ Ψ; this pair has Φ < Ψ at {1}.
        let phi = map(&x, &y, &[0, 1, 0, 1]);
        let psi = map(&x, &y, &[0, 2, 0, 2]);
        match sandwich_variant(&phi, &psi, false, true).unwrap_err() {
            Error::HypothesisViolated { condition, .. } => assert_eq!(
                condition,
                Condition::Pointwise {
                    lower: "Psi",
                    upper: "Phi"
                }
            ),
            other => panic!("unexpected {other:?}"),
        }
        // Flipping both turns "Φ sub-join" into "Φ super-meet".
        let phi = map(&x, &y, &[0, 1, 1, 0]);
        let psi = LatticeMap::constant(x.clone(), y.clone(), y.bottom());
        match sandwich_variant(&phi, &psi, true, true).unwrap_err() {
            Error::HypothesisViolated { condition, .. } => assert_eq!(
                condition,
                Condition::OpBound {
                    map: "Phi",
                    domain_op: Op::Meet,
                    codomain_op: Op::Meet,
                    bound: Bound::AtLeast
                }
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn codomain_flip_yields_meet_preserving_output() {
        // Over dual Y: Φ super-meet in Y, Ψ sub-meet in Y, Ψ ≤ Φ in Y.
        let x = Arc::new(chain(3).unwrap());
        let y = Arc::new(boolean_algebra(2).unwrap());
        let phi = map(&x, &y, &[3, 3, 1]);
        let psi = map(&x, &y, &[3, 1, 0]);
        let g = sandwich_variant(&phi, &psi, false, true).unwrap();
        // F over dual Y preserves ∨ in X and ∨' = ∧ in Y.
        assert!(g.check_op_bound(Op::Join, Op::Meet, Bound::AtMost).is_ok());
        assert!(g.check_op_bound(Op::Join, Op::Meet, Bound::AtLeast).is_ok());
        assert_eq!(psi.pointwise_leq(&g).unwrap(), Ok(()));
        assert_eq!(g.pointwise_leq(&phi).unwrap(), Ok(()));
    }

    #[test]
    fn four_map_search_finds_the_squeezed_homomorphism() {
        let x = Arc::new(chain(3).unwrap());
        let y = Arc::new(boolean_algebra(2).unwrap());
        let h0 = map(&x, &y, &[0, 1, 3]);
        assert_eq!(sandwich_lattice_hom(&h0, &h0, &h0, &h0, 1000).unwrap(), Some(h0.clone()));

        let bottom = LatticeMap::constant(x.clone(), y.clone(), y.bottom());
        let top = LatticeMap::constant(x.clone(), y.clone(), y.top());
        let h = sandwich_lattice_hom(&bottom, &bottom, &top, &top, 1000).unwrap().unwrap();
        assert_eq!(h, bottom);
        assert_eq!(
            sandwich_lattice_hom(&bottom, &bottom, &top, &top, 1),
            Err(Error::SearchBudgetExceeded(1))
        );
    }
}
