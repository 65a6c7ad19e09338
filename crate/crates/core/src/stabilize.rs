//! Repair of an approximate join homomorphism whose defect is bounded by a
//! pair of error functions.
//!
//! Given `f: X → Y` and error tables `φ, ψ: X×X → Y` with
//! `φ(x,y) ∧ f(x∨y) ≤ f(x) ∨ f(y) ≤ f(x∨y) ∨ ψ(x,y)`, the envelopes
//!
//! ```text
//! Φ(x) = inf { f(x1)∨…∨f(xn) : x = x1∨…∨xn }
//! Ψ(x) = sup { f(x1)∨…∨f(xn) : x = x1∨…∨xn }
//! ```
//!
//! are sub-join and super-join respectively, and separating them yields a
//! join homomorphism `F` with `φ(x,x)∧f(x) ≤ F(x) ≤ f(x)∨ψ(x,x)`.

use std::sync::Arc;

use crate::error::{Condition, Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::maps::{same_lattice, LatticeMap};
use crate::sandwich::sandwich_join;

/// Error functions `φ, ψ: X×X → Y`, stored as dense `|X|×|X|` tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPair {
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    phi: Vec<ElementId>,
    psi: Vec<ElementId>,
}

impl ErrorPair {
    pub fn new(
        domain: Arc<Lattice>,
        codomain: Arc<Lattice>,
        phi: Vec<ElementId>,
        psi: Vec<ElementId>,
    ) -> Result<Self> {
        let cells = domain.len() * domain.len();
        if phi.len() != cells || psi.len() != cells {
            return Err(Error::InvalidParameter(format!(
                "error tables need {cells} entries, got {} and {}",
                phi.len(),
                psi.len()
            )));
        }
        for &v in phi.iter().chain(&psi) {
            codomain.check_element(v)?;
        }
        Ok(ErrorPair {
            domain,
            codomain,
            phi,
            psi,
        })
    }

    pub fn from_fns(
        domain: Arc<Lattice>,
        codomain: Arc<Lattice>,
        phi: impl Fn(ElementId, ElementId) -> ElementId,
        psi: impl Fn(ElementId, ElementId) -> ElementId,
    ) -> Self {
        let mut p = Vec::with_capacity(domain.len() * domain.len());
        let mut q = Vec::with_capacity(domain.len() * domain.len());
        for x in domain.elements() {
            for y in domain.elements() {
                p.push(phi(x, y));
                q.push(psi(x, y));
            }
        }
        Self::new(domain, codomain, p, q).expect("error functions map into the codomain")
    }

    pub fn constant(domain: Arc<Lattice>, codomain: Arc<Lattice>, phi: ElementId, psi: ElementId) -> Self {
        Self::from_fns(domain, codomain, |_, _| phi, |_, _| psi)
    }

    /// `φ ≡ bottom` and `ψ(x,y) = sup{f(z) : z ≤ x} ∨ sup{f(z) : z ≤ y}`,
    /// which bounds the defect of any map.
    pub fn running_sup(f: &LatticeMap) -> Self {
        let (x, y) = (f.domain().clone(), f.codomain().clone());
        let below: Vec<ElementId> = x.elements().map(|a| y.sup(x.down_set(a).map(|z| f.get(z)))).collect();
        Self::from_fns(x, y.clone(), |_, _| y.bottom(), |a, b| y.join(below[a.0], below[b.0]))
    }

    pub fn domain(&self) -> &Arc<Lattice> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    #[inline]
    pub fn phi(&self, x: ElementId, y: ElementId) -> ElementId {
        self.phi[x.0 * self.domain.len() + y.0]
    }

    #[inline]
    pub fn psi(&self, x: ElementId, y: ElementId) -> ElementId {
        self.psi[x.0 * self.domain.len() + y.0]
    }

    /// Checks `φ(z,z) ≤ φ(x,y)` and `ψ(x,y) ≤ ψ(z,z)` for all `x, y ≤ z`.
    /// Witnesses are `(x, y, z)`.
    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&*self.domain, &*self.codomain);
        for (condition, is_phi) in [(Condition::PhiAntitone, true), (Condition::PsiMonotone, false)] {
            for z in x.elements() {
                for a in x.down_set(z) {
                    for b in x.down_set(z) {
                        let holds = if is_phi {
                            y.leq(self.phi(z, z), self.phi(a, b))
                        } else {
                            y.leq(self.psi(a, b), self.psi(z, z))
                        };
                        if !holds {
                            return Err(Error::violated(condition, x, &[a, b, z]));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn require_matches(&self, f: &LatticeMap) -> Result<()> {
        if same_lattice(&self.domain, f.domain()) && same_lattice(&self.codomain, f.codomain()) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }
}

/// Checks `φ(x,y)∧f(x∨y) ≤ f(x)∨f(y) ≤ f(x∨y)∨ψ(x,y)` for every pair.
pub fn check_approx_join(f: &LatticeMap, errors: &ErrorPair) -> Result<()> {
    errors.require_matches(f)?;
    let (x, y) = (&**f.domain(), &**f.codomain());
    for a in x.elements() {
        for b in x.elements() {
            let joined = f.get(x.join(a, b));
            let pair = y.join(f.get(a), f.get(b));
            if !y.leq(y.meet(errors.phi(a, b), joined), pair) {
                return Err(Error::violated(Condition::ApproxJoinLower, x, &[a, b]));
            }
            if !y.leq(pair, y.join(joined, errors.psi(a, b))) {
                return Err(Error::violated(Condition::ApproxJoinUpper, x, &[a, b]));
            }
        }
    }
    Ok(())
}

/// For each element, the pairs `(a, b)` with `a ∨ b` equal to it.
fn binary_decompositions(x: &Lattice) -> Vec<Vec<(ElementId, ElementId)>> {
    let mut pairs = vec![Vec::new(); x.len()];
    for a in x.elements() {
        for b in x.elements().skip(a.0) {
            pairs[x.join(a, b).0].push((a, b));
        }
    }
    pairs
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Lower,
    Upper,
}

/// In-place fixed-point iteration over binary decompositions, visiting
/// elements by increasing down-set size until a full pass changes nothing.
fn envelope(f: &LatticeMap, side: Side) -> Result<LatticeMap> {
    let (x, y) = (f.domain(), f.codomain());
    y.require_distributive()?;
    let pairs = binary_decompositions(x);
    let order = x.linear_extension();
    let mut values = f.values().to_vec();
    loop {
        let mut changed = false;
        for &e in &order {
            let mut v = values[e.0];
            for &(a, b) in &pairs[e.0] {
                let split = y.join(values[a.0], values[b.0]);
                v = match side {
                    Side::Lower => y.meet(v, split),
                    Side::Upper => y.join(v, split),
                };
            }
            if v != values[e.0] {
                values[e.0] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(LatticeMap::new(x.clone(), y.clone(), values).expect("envelope stays in the codomain"))
}

/// Infimum of `f(x1)∨…∨f(xn)` over all decompositions `x = x1∨…∨xn`.
/// Requires a distributive codomain; the result is sub-join and below `f`.
pub fn lower_envelope(f: &LatticeMap) -> Result<LatticeMap> {
    let phi = envelope(f, Side::Lower)?;
    assert_eq!(phi.pointwise_leq(f), Ok(Ok(())), "lower envelope exceeds f");
    assert!(phi.check_sub_join().is_ok(), "lower envelope is not sub-join");
    Ok(phi)
}

/// Supremum of `f(x1)∨…∨f(xn)` over all decompositions `x = x1∨…∨xn`.
/// The result is super-join and above `f`.
pub fn upper_envelope(f: &LatticeMap) -> Result<LatticeMap> {
    let psi = envelope(f, Side::Upper)?;
    assert_eq!(f.pointwise_leq(&psi), Ok(Ok(())), "upper envelope is below f");
    assert!(psi.check_super_join().is_ok(), "upper envelope is not super-join");
    Ok(psi)
}

/// Envelopes and the join homomorphism separating them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub lower: LatticeMap,
    pub upper: LatticeMap,
    pub repaired: LatticeMap,
}

/// Builds a join homomorphism `F` with `φ(x,x)∧f(x) ≤ F(x) ≤ f(x)∨ψ(x,x)`.
///
/// Both lattices must be distributive, the error tables must pass
/// [`ErrorPair::validate`], and `f` must pass [`check_approx_join`].
pub fn stabilize_join(f: &LatticeMap, errors: &ErrorPair) -> Result<Repair> {
    errors.require_matches(f)?;
    f.domain().require_distributive()?;
    f.codomain().require_distributive()?;
    errors.validate()?;
    check_approx_join(f, errors)?;

    let lower = lower_envelope(f)?;
    let upper = upper_envelope(f)?;
    let repaired = sandwich_join(&lower, &upper)?;

    let (x, y) = (f.domain(), f.codomain());
    for e in x.elements() {
        let floor = y.meet(errors.phi(e, e), f.get(e));
        let ceiling = y.join(f.get(e), errors.psi(e, e));
        assert!(
            y.leq(floor, lower.get(e)) && y.leq(upper.get(e), ceiling),
            "envelope bounds fail at {}",
            x.label(e)
        );
        assert!(
            y.leq(floor, repaired.get(e)) && y.leq(repaired.get(e), ceiling),
            "repaired map leaves its error band at {}",
            x.label(e)
        );
    }
    Ok(Repair {
        lower,
        upper,
        repaired,
    })
}
