//! Total maps between finite lattices and the map-level conditions used by
//! the separation and stability constructions.
//!
//! Every checker scans pairs in lexicographic id order and reports the
//! first violation, so witnesses are deterministic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Bound, Check, Error, Op, Result};
use crate::lattice::{ElementId, Lattice};

type Pair = (ElementId, ElementId);

#[derive(Clone, PartialEq, Eq)]
pub struct LatticeMap {
    domain: Arc<Lattice>,
    codomain: Arc<Lattice>,
    values: Vec<ElementId>,
}

impl fmt::Debug for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for x in self.domain.elements() {
            m.entry(&self.domain.label(x), &self.codomain.label(self.get(x)));
        }
        m.finish()
    }
}

/// True when both handles denote the same lattice.
pub fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LatticeMap {
    pub fn new(domain: Arc<Lattice>, codomain: Arc<Lattice>, values: Vec<ElementId>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "map has {} values for a domain of {} elements",
                values.len(),
                domain.len()
            )));
        }
        for &v in &values {
            codomain.check_element(v)?;
        }
        Ok(LatticeMap {
            domain,
            codomain,
            values,
        })
    }

    /// Map built from raw codomain indices.
    pub fn from_indices(domain: Arc<Lattice>, codomain: Arc<Lattice>, values: &[usize]) -> Result<Self> {
        Self::new(domain, codomain, values.iter().map(|&v| ElementId(v)).collect())
    }

    /// Map built from `(domain label, codomain label)` pairs covering the domain.
    pub fn from_labels(domain: Arc<Lattice>, codomain: Arc<Lattice>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut values = vec![None; domain.len()];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            let x = domain.id_at(x, format!("values[{i}] key"))?;
            let y = codomain.id_at(y, format!("values[{i}] value"))?;
            values[x.0] = Some(y);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::InvalidParameter(format!("no value for `{}`", domain.labels()[i])))
            })
            .collect::<Result<_>>()?;
        Self::new(domain, codomain, values)
    }

    pub fn from_fn(domain: Arc<Lattice>, codomain: Arc<Lattice>, f: impl FnMut(ElementId) -> ElementId) -> Self {
        let values: Vec<ElementId> = domain.elements().map(f).collect();
        assert!(values.iter().all(|v| v.0 < codomain.len()), "image outside the codomain");
        LatticeMap {
            domain,
            codomain,
            values,
        }
    }

    pub fn identity(lattice: Arc<Lattice>) -> Self {
        Self::from_fn(lattice.clone(), lattice, |x| x)
    }

    pub fn constant(domain: Arc<Lattice>, codomain: Arc<Lattice>, value: ElementId) -> Self {
        Self::from_fn(domain, codomain, |_| value)
    }

    pub fn domain(&self) -> &Arc<Lattice> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    #[inline]
    pub fn get(&self, x: ElementId) -> ElementId {
        self.values[x.0]
    }

    pub fn values(&self) -> &[ElementId] {
        &self.values
    }

    /// The same values seen between other lattices on the same element sets,
    /// typically order duals.
    pub fn reseat(&self, domain: Arc<Lattice>, codomain: Arc<Lattice>) -> LatticeMap {
        assert_eq!(domain.len(), self.domain.len());
        assert_eq!(codomain.len(), self.codomain.len());
        LatticeMap {
            domain,
            codomain,
            values: self.values.clone(),
        }
    }

    pub fn compatible(&self, other: &LatticeMap) -> bool {
        same_lattice(&self.domain, &other.domain) && same_lattice(&self.codomain, &other.codomain)
    }

    pub fn require_compatible(&self, other: &LatticeMap) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    fn first_pair(&self, mut violates: impl FnMut(ElementId, ElementId) -> bool) -> Check<Pair> {
        for x in self.domain.elements() {
            for y in self.domain.elements() {
                if violates(x, y) {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    fn apply(lattice: &Lattice, op: Op, a: ElementId, b: ElementId) -> ElementId {
        match op {
            Op::Join => lattice.join(a, b),
            Op::Meet => lattice.meet(a, b),
        }
    }

    /// Checks `m(x op_X y) bound m(x) op_Y m(y)` for every pair.
    pub fn check_op_bound(&self, domain_op: Op, codomain_op: Op, bound: Bound) -> Check<Pair> {
        let (d, c) = (&*self.domain, &*self.codomain);
        self.first_pair(|x, y| {
            let lhs = self.get(Self::apply(d, domain_op, x, y));
            let rhs = Self::apply(c, codomain_op, self.get(x), self.get(y));
            match bound {
                Bound::AtMost => !c.leq(lhs, rhs),
                Bound::AtLeast => !c.leq(rhs, lhs),
            }
        })
    }

    pub fn check_join_hom(&self) -> Check<Pair> {
        let (d, c) = (&*self.domain, &*self.codomain);
        self.first_pair(|x, y| self.get(d.join(x, y)) != c.join(self.get(x), self.get(y)))
    }

    pub fn check_meet_hom(&self) -> Check<Pair> {
        let (d, c) = (&*self.domain, &*self.codomain);
        self.first_pair(|x, y| self.get(d.meet(x, y)) != c.meet(self.get(x), self.get(y)))
    }

    /// Witness `(x, y)` has `x ≤ y` but `m(x) ≰ m(y)`.
    pub fn check_monotone(&self) -> Check<Pair> {
        let (d, c) = (&*self.domain, &*self.codomain);
        self.first_pair(|x, y| d.leq(x, y) && !c.leq(self.get(x), self.get(y)))
    }

    /// `m(x∨y) ≤ m(x)∨m(y)`.
    pub fn check_sub_join(&self) -> Check<Pair> {
        self.check_op_bound(Op::Join, Op::Join, Bound::AtMost)
    }

    /// `m(x∨y) ≥ m(x)∨m(y)`.
    pub fn check_super_join(&self) -> Check<Pair> {
        self.check_op_bound(Op::Join, Op::Join, Bound::AtLeast)
    }

    /// `m(x∧y) ≤ m(x)∧m(y)`.
    pub fn check_sub_meet(&self) -> Check<Pair> {
        self.check_op_bound(Op::Meet, Op::Meet, Bound::AtMost)
    }

    /// `m(x∧y) ≥ m(x)∧m(y)`.
    pub fn check_super_meet(&self) -> Check<Pair> {
        self.check_op_bound(Op::Meet, Op::Meet, Bound::AtLeast)
    }

    pub fn check_injective(&self) -> Check<Pair> {
        let d = &*self.domain;
        for x in d.elements() {
            for y in d.elements().skip(x.0 + 1) {
                if self.get(x) == self.get(y) {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    /// `self(x) ≤ other(x)` for every x; the witness is the first failing x.
    pub fn pointwise_leq(&self, other: &LatticeMap) -> Result<Check<ElementId>> {
        self.require_compatible(other)?;
        let c = &*self.codomain;
        Ok(match self.domain.elements().find(|&x| !c.leq(self.get(x), other.get(x))) {
            Some(x) => Err(x),
            None => Ok(()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{boolean_algebra, chain};

    fn arc(l: Lattice) -> Arc<Lattice> {
        Arc::new(l)
    }

    fn e(i: usize) -> ElementId {
        ElementId(i)
    }

    #[test]
    fn swapped_chain_map_breaks_everything() {
        let c3 = arc(chain(3).unwrap());
        let f = LatticeMap::from_indices(c3.clone(), c3.clone(), &[0, 2, 1]).unwrap();
        assert_eq!(f.check_join_hom(), Err((e(1), e(2))));
        assert_eq!(f.check_meet_hom(), Err((e(1), e(2))));
        assert_eq!(f.check_monotone(), Err((e(1), e(2))));
        let id = LatticeMap::identity(c3.clone());
        assert!(id.check_join_hom().is_ok() && id.check_meet_hom().is_ok());
        let k = LatticeMap::constant(c3.clone(), c3, e(1));
        assert!(k.check_join_hom().is_ok() && k.check_meet_hom().is_ok() && k.check_monotone().is_ok());
    }

    #[test]
    fn sub_and_super_join_on_boolean_square() {
        let b2 = arc(boolean_algebra(2).unwrap());
        let c3 = arc(chain(3).unwrap());
        let phi = LatticeMap::from_indices(b2.clone(), c3.clone(), &[0, 1, 0, 1]).unwrap();
        assert!(phi.check_sub_join().is_ok());
        let psi = LatticeMap::from_indices(b2.clone(), c3.clone(), &[0, 0, 0, 2]).unwrap();
        assert!(psi.check_super_join().is_ok());
        // {1} ∨ {2} = {1,2}: 2 ≰ 0 ∨ 0.
        assert_eq!(psi.check_sub_join(), Err((e(1), e(2))));
        assert_eq!(phi.pointwise_leq(&psi).unwrap(), Err(e(1)));
        assert_eq!(phi.pointwise_leq(&phi).unwrap(), Ok(()));
        let bottom = LatticeMap::constant(b2.clone(), c3.clone(), c3.bottom());
        assert_eq!(bottom.pointwise_leq(&psi).unwrap(), Ok(()));

        let other = LatticeMap::identity(b2);
        assert_eq!(phi.pointwise_leq(&other).unwrap_err(), Error::DomainMismatch);
    }

    #[test]
    fn construction_errors() {
        let c3 = arc(chain(3).unwrap());
        assert!(LatticeMap::from_indices(c3.clone(), c3.clone(), &[0, 1]).is_err());
        assert!(matches!(
            LatticeMap::from_indices(c3.clone(), c3.clone(), &[0, 1, 7]),
            Err(Error::InvalidElement { index: 7, .. })
        ));
        assert!(LatticeMap::from_labels(c3.clone(), c3.clone(), &[("0", "1"), ("1", "1")]).is_err());
        let m = LatticeMap::from_labels(c3.clone(), c3, &[("0", "1"), ("1", "1"), ("2", "2")]).unwrap();
        assert_eq!(m.values(), [e(1), e(1), e(2)]);
    }
}
