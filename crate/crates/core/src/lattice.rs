//! Finite lattices with precomputed order, join and meet tables.
//!
//! A [`Lattice`] is validated once and immutable afterwards. Every element
//! is a dense [`ElementId`]; label order in the input fixes id order.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, LatticeDefect, Result, Witness};

/// Upper bound on the number of elements of any lattice.
pub const MAX_ELEMENTS: usize = 4096;

/// Exhaustive subset enumeration in [`Lattice::check_dual_infinite_distributive`]
/// is used up to this many elements.
const EXHAUSTIVE_SUBSETS_MAX: usize = 16;
const RANDOM_SUBSETS_PER_ELEMENT: usize = 256;

/// Index of an element within one particular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[a]` holds every `b` with `a ≤ b`.
    up: Vec<FixedBitSet>,
    /// `down[a]` holds every `b` with `b ≤ a`.
    down: Vec<FixedBitSet>,
    join: Vec<u16>,
    meet: Vec<u16>,
    bottom: usize,
    top: usize,
    distributive: bool,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("labels", &self.labels)
            .field("distributive", &self.distributive)
            .finish_non_exhaustive()
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    if labels.is_empty() {
        return Err(Error::Empty);
    }
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::SizeLimit {
            what: format!("lattice with {} elements", labels.len()),
            limit: MAX_ELEMENTS as u64,
        });
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(index)
}

impl Lattice {
    /// Builds a lattice from labels and its cover relation, given as
    /// `(child, parent)` label pairs. The order is the reflexive-transitive
    /// closure of the covers.
    pub fn from_covers<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Lattice> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = label_index(&labels)?;
        let n = labels.len();

        let lookup = |label: &str, position: String| {
            index.get(label).copied().ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
                position,
            })
        };
        let mut parents = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for (i, (child, parent)) in covers.iter().enumerate() {
            let c = lookup(child.as_ref(), format!("covers[{i}][0]"))?;
            let p = lookup(parent.as_ref(), format!("covers[{i}][1]"))?;
            if c == p {
                return Err(Error::CycleDetected(labels[c].clone()));
            }
            parents[c].push(p);
            indegree[p] += 1;
        }

        // Kahn's algorithm; anything left over lies on or above a cycle.
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).rev().collect();
        while let Some(v) = ready.pop() {
            order.push(v);
            for &p in &parents[v] {
                indegree[p] -= 1;
                if indegree[p] == 0 {
                    ready.push(p);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap();
            return Err(Error::CycleDetected(labels[stuck].clone()));
        }

        let mut down: Vec<FixedBitSet> = (0..n)
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(v);
                s
            })
            .collect();
        for &v in &order {
            let below = down[v].clone();
            for &p in &parents[v] {
                down[p].union_with(&below);
            }
        }
        let up = transpose(&down);

        let join = bound_table(&up, &labels, LatticeDefect::NoUpperBound, LatticeDefect::NoLeastUpperBound)?;
        let meet = bound_table(&down, &labels, LatticeDefect::NoLowerBound, LatticeDefect::NoGreatestLowerBound)?;
        Ok(Lattice::assemble(labels, index, up, down, join, meet, None))
    }

    /// Builds a lattice from an order and operations the caller guarantees
    /// to be a lattice. Used by the builders, which know their structure.
    pub(crate) fn from_operations(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        join: impl Fn(usize, usize) -> usize,
        meet: impl Fn(usize, usize) -> usize,
        distributive: Option<bool>,
    ) -> Result<Lattice> {
        let index = label_index(&labels)?;
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (b, set) in down.iter_mut().enumerate() {
            for a in 0..n {
                if leq(a, b) {
                    set.insert(a);
                }
            }
        }
        let up = transpose(&down);
        let mut jt = Vec::with_capacity(n * n);
        let mut mt = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                jt.push(join(a, b) as u16);
                mt.push(meet(a, b) as u16);
            }
        }
        Ok(Lattice::assemble(labels, index, up, down, jt, mt, distributive))
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<FixedBitSet>,
        down: Vec<FixedBitSet>,
        join: Vec<u16>,
        meet: Vec<u16>,
        distributive: Option<bool>,
    ) -> Lattice {
        let n = labels.len();
        let bottom = (0..n).find(|&v| up[v].count_ones(..) == n).expect("finite lattice has a bottom");
        let top = (0..n).find(|&v| down[v].count_ones(..) == n).expect("finite lattice has a top");
        let mut lattice = Lattice {
            labels,
            index,
            up,
            down,
            join,
            meet,
            bottom,
            top,
            distributive: false,
        };
        lattice.distributive = match distributive {
            Some(d) => d,
            None => lattice.distributivity_witness().is_none(),
        };
        lattice
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a lattice has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator {
        (0..self.len()).map(ElementId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x.0]
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.index.get(label).map(|&i| ElementId(i))
    }

    /// Resolves a label, reporting an unknown label with `position`.
    pub fn id_at(&self, label: &str, position: impl Into<String>) -> Result<ElementId> {
        self.id(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            position: position.into(),
        })
    }

    pub fn check_element(&self, x: ElementId) -> Result<ElementId> {
        if x.0 < self.len() {
            Ok(x)
        } else {
            Err(Error::InvalidElement {
                index: x.0,
                size: self.len(),
            })
        }
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.up[a.0].contains(b.0)
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.join[a.0 * self.len() + b.0] as usize)
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.meet[a.0 * self.len() + b.0] as usize)
    }

    /// Checked join.
    pub fn try_join(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        Ok(self.join(self.check_element(a)?, self.check_element(b)?))
    }

    /// Checked meet.
    pub fn try_meet(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        Ok(self.meet(self.check_element(a)?, self.check_element(b)?))
    }

    pub fn bottom(&self) -> ElementId {
        ElementId(self.bottom)
    }

    pub fn top(&self) -> ElementId {
        ElementId(self.top)
    }

    /// Least upper bound of a set; the empty set has supremum `bottom`.
    pub fn sup_set(&self, set: &[ElementId]) -> Result<ElementId> {
        set.iter().try_fold(self.bottom(), |acc, &x| Ok(self.join(acc, self.check_element(x)?)))
    }

    /// Greatest lower bound of a set; the empty set has infimum `top`.
    pub fn inf_set(&self, set: &[ElementId]) -> Result<ElementId> {
        set.iter().try_fold(self.top(), |acc, &x| Ok(self.meet(acc, self.check_element(x)?)))
    }

    pub fn sup<I: IntoIterator<Item = ElementId>>(&self, items: I) -> ElementId {
        items.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn inf<I: IntoIterator<Item = ElementId>>(&self, items: I) -> ElementId {
        items.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Elements `≤ x`, in id order.
    pub fn down_set(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.down[x.0].ones().map(ElementId)
    }

    /// Elements `≥ x`, in id order.
    pub fn up_set(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.up[x.0].ones().map(ElementId)
    }

    pub fn down_set_len(&self, x: ElementId) -> usize {
        self.down[x.0].count_ones(..)
    }

    /// Element ids sorted by down-set size, ties by id. Every element appears
    /// after all elements strictly below it.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&x| (self.down_set_len(x), x));
        order
    }

    /// Cached result of the distributivity test run at construction.
    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    /// Exhaustive scan of `a∧(b∨c) = (a∧b)∨(a∧c)` over all triples. Returns
    /// the lexicographically first violating triple. Cubic in the size.
    pub fn check_distributive(&self) -> std::result::Result<(), (ElementId, ElementId, ElementId)> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.meet(a, b);
                for c in self.elements() {
                    if self.meet(a, self.join(b, c)) != self.join(ab, self.meet(a, c)) {
                        return Err((a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Distributivity via join-irreducibles: a finite lattice is distributive
    /// iff `j ≤ x∨y` implies `j ≤ x` or `j ≤ y` for every join-irreducible j.
    /// A failure `(j, x, y)` is also a failing triple for the distributive law.
    pub fn distributivity_witness(&self) -> Option<(ElementId, ElementId, ElementId)> {
        let irreducibles = self.join_irreducibles();
        let n = self.len();
        let mut ji = FixedBitSet::with_capacity(n);
        for j in &irreducibles {
            ji.insert(j.0);
        }
        for x in self.elements() {
            for y in self.elements().skip(x.0 + 1) {
                let xy = self.join(x, y);
                let mut below = self.down[xy.0].clone();
                below.intersect_with(&ji);
                for j in below.ones() {
                    if !self.down[x.0].contains(j) && !self.down[y.0].contains(j) {
                        return Some((ElementId(j), x, y));
                    }
                }
            }
        }
        None
    }

    /// Checks `y ∨ inf S = inf{y ∨ s : s ∈ S}`. All nonempty subsets are
    /// enumerated up to 16 elements; beyond that all pairs plus seeded random
    /// subsets are tried.
    pub fn check_dual_infinite_distributive(&self) -> std::result::Result<(), (ElementId, Vec<ElementId>)> {
        let n = self.len();
        if n <= EXHAUSTIVE_SUBSETS_MAX {
            let size = 1usize << n;
            let mut inf = vec![self.top; size];
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                inf[mask] = self.meet[inf[mask & (mask - 1)] * n + low] as usize;
            }
            let mut shifted = vec![self.top; size];
            for y in self.elements() {
                for mask in 1..size {
                    let low = mask.trailing_zeros() as usize;
                    let ys = self.join[y.0 * n + low] as usize;
                    shifted[mask] = self.meet[shifted[mask & (mask - 1)] * n + ys] as usize;
                    if self.join(y, ElementId(inf[mask])).0 != shifted[mask] {
                        let set = (0..n).filter(|i| mask >> i & 1 == 1).map(ElementId).collect();
                        return Err((y, set));
                    }
                }
            }
            return Ok(());
        }

        let law_holds = |y: ElementId, set: &[ElementId]| {
            let lhs = self.join(y, self.inf(set.iter().copied()));
            let rhs = self.inf(set.iter().map(|&s| self.join(y, s)));
            lhs == rhs
        };
        for y in self.elements() {
            for s in self.elements() {
                for t in self.elements().skip(s.0 + 1) {
                    if !law_holds(y, &[s, t]) {
                        return Err((y, vec![s, t]));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x1a77_1ce5);
        for y in self.elements() {
            for _ in 0..RANDOM_SUBSETS_PER_ELEMENT {
                let k = rng.gen_range(3..=n.min(32));
                let mut set: Vec<ElementId> = sample(&mut rng, n, k).into_iter().map(ElementId).collect();
                set.sort();
                if !law_holds(y, &set) {
                    return Err((y, set));
                }
            }
        }
        Ok(())
    }

    /// Elements that are not the bottom and not the join of two strictly
    /// smaller elements, in id order.
    pub fn join_irreducibles(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&j| {
                j != self.bottom() && self.sup(self.down_set(j).filter(|&z| z != j)) != j
            })
            .collect()
    }

    /// Meet-irreducible elements, in id order.
    pub fn meet_irreducibles(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&m| m != self.top() && self.inf(self.up_set(m).filter(|&z| z != m)) != m)
            .collect()
    }

    /// Hasse diagram edges `(child, parent)` in lexicographic id order.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up_set(a) {
                if a == b {
                    continue;
                }
                let mut between = self.up[a.0].clone();
                between.intersect_with(&self.down[b.0]);
                if between.count_ones(..) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The order dual: the order is reversed and join and meet swap roles.
    pub fn dual(&self) -> Lattice {
        Lattice {
            labels: self.labels.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
            distributive: self.distributive,
        }
    }
}

fn transpose(sets: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = sets.len();
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for (a, set) in sets.iter().enumerate() {
        for b in set.ones() {
            out[b].insert(a);
        }
    }
    out
}

/// For every pair, the least element of `cone[a] ∩ cone[b]`, where `cone`
/// is the up-set (for joins) or down-set (for meets) relation. An element
/// `u` of the intersection is least iff its own cone is the whole
/// intersection, i.e. has the same cardinality.
fn bound_table(
    cone: &[FixedBitSet],
    labels: &[String],
    empty: LatticeDefect,
    no_least: LatticeDefect,
) -> Result<Vec<u16>> {
    let n = cone.len();
    let sizes: Vec<usize> = cone.iter().map(|c| c.count_ones(..)).collect();
    let mut table = vec![0u16; n * n];
    for a in 0..n {
        table[a * n + a] = a as u16;
        for b in a + 1..n {
            let mut common = cone[a].clone();
            common.intersect_with(&cone[b]);
            let count = common.count_ones(..);
            if count == 0 {
                return Err(not_a_lattice(labels, a, b, empty));
            }
            let least = common
                .ones()
                .find(|&u| sizes[u] == count)
                .ok_or_else(|| not_a_lattice(labels, a, b, no_least))?;
            table[a * n + b] = least as u16;
            table[b * n + a] = least as u16;
        }
    }
    Ok(table)
}

fn not_a_lattice(labels: &[String], a: usize, b: usize, reason: LatticeDefect) -> Error {
    Error::NotALattice {
        a: labels[a].clone(),
        b: labels[b].clone(),
        reason,
    }
}

impl Lattice {
    pub(crate) fn distributive_error(&self) -> Error {
        let (a, b, c) = self
            .check_distributive()
            .expect_err("distributive_error called on a distributive lattice");
        Error::NotDistributive(Witness::in_lattice(self, &[a, b, c]))
    }

    /// `Ok` if distributive, otherwise `NotDistributive` with a triple witness.
    pub fn require_distributive(&self) -> Result<()> {
        if self.distributive {
            Ok(())
        } else {
            Err(self.distributive_error())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(labels: &[&str], covers: &[(&str, &str)]) -> Result<Lattice> {
        Lattice::from_covers(labels, covers)
    }

    fn square() -> Lattice {
        lat(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap()
    }

    fn pentagon() -> Lattice {
        lat(
            &["p", "q", "r", "s", "t"],
            &[("p", "q"), ("q", "r"), ("r", "t"), ("p", "s"), ("s", "t")],
        )
        .unwrap()
    }

    fn diamond() -> Lattice {
        lat(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    #[test]
    fn four_element_boolean_algebra() {
        let l = square();
        let (a, b) = (l.id("a").unwrap(), l.id("b").unwrap());
        assert_eq!(l.label(l.join(a, b)), "1");
        assert_eq!(l.label(l.meet(a, b)), "0");
        assert!(l.is_distributive());
        assert_eq!(l.label(l.bottom()), "0");
        assert_eq!(l.label(l.top()), "1");
    }

    #[test]
    fn antichain_is_rejected() {
        let err = lat(&["x", "y"], &[]).unwrap_err();
        assert_eq!(
            err,
            Error::NotALattice {
                a: "x".into(),
                b: "y".into(),
                reason: LatticeDefect::NoUpperBound
            }
        );
    }

    #[test]
    fn missing_least_upper_bound_is_rejected() {
        // 0 < a,b < c,d : a and b have two minimal upper bounds.
        let err = lat(
            &["0", "a", "b", "c", "d", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "1"),
                ("d", "1"),
            ],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::NotALattice {
                reason: LatticeDefect::NoLeastUpperBound,
                ..
            }
        ));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(lat(&["a", "a"], &[]).unwrap_err(), Error::DuplicateLabel("a".into()));
        assert!(matches!(lat(&["a", "b"], &[("a", "b"), ("b", "a")]), Err(Error::CycleDetected(_))));
        assert!(matches!(lat(&["a"], &[("a", "a")]), Err(Error::CycleDetected(_))));
        assert_eq!(
            lat(&["a"], &[("a", "zz")]).unwrap_err(),
            Error::UnknownLabel {
                label: "zz".into(),
                position: "covers[0][1]".into()
            }
        );
        assert_eq!(lat(&[], &[]).unwrap_err(), Error::Empty);
    }

    #[test]
    fn pentagon_is_not_distributive() {
        let l = pentagon();
        assert!(!l.is_distributive());
        let (a, b, c) = l.check_distributive().unwrap_err();
        assert_ne!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
    }

    #[test]
    fn diamond_fails_both_distributive_checks() {
        let l = diamond();
        assert!(!l.is_distributive());
        assert!(l.check_distributive().is_err());
        let (y, set) = l.check_dual_infinite_distributive().unwrap_err();
        let lhs = l.join(y, l.inf(set.iter().copied()));
        let rhs = l.inf(set.iter().map(|&s| l.join(y, s)));
        assert_ne!(lhs, rhs);
        // The first witness is an atom against a two-element antichain.
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn sup_and_inf_of_sets() {
        let l = square();
        let ids: Vec<_> = ["0", "a", "b"].iter().map(|s| l.id(s).unwrap()).collect();
        assert_eq!(l.label(l.sup_set(&ids).unwrap()), "1");
        assert_eq!(l.label(l.inf_set(&ids[1..]).unwrap()), "0");
        assert_eq!(l.sup_set(&[ids[1]]).unwrap(), ids[1]);
        assert_eq!(l.sup_set(&[]).unwrap(), l.bottom());
        assert_eq!(l.inf_set(&[]).unwrap(), l.top());
        assert_eq!(
            l.sup_set(&[ElementId(9)]).unwrap_err(),
            Error::InvalidElement { index: 9, size: 4 }
        );
    }

    #[test]
    fn dual_reverses_the_order() {
        let chain = lat(&["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap();
        let d = chain.dual();
        assert!(d.leq(ElementId(2), ElementId(0)));
        assert_eq!(d.bottom(), ElementId(2));
        assert_eq!(d.join(ElementId(0), ElementId(1)), ElementId(0));
        assert_eq!(d.dual(), chain);
    }

    #[test]
    fn covers_round_trip() {
        let l = pentagon();
        let covers: Vec<(String, String)> = l
            .covers()
            .into_iter()
            .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
            .collect();
        let rebuilt = Lattice::from_covers(l.labels(), &covers).unwrap();
        assert_eq!(rebuilt, l);
        assert_eq!(covers.len(), 5);
    }

    #[test]
    fn irreducibles_of_pentagon() {
        let l = pentagon();
        let ji: Vec<&str> = l.join_irreducibles().into_iter().map(|x| l.label(x)).collect();
        assert_eq!(ji, ["q", "r", "s"]);
        let mi: Vec<&str> = l.meet_irreducibles().into_iter().map(|x| l.label(x)).collect();
        assert_eq!(mi, ["q", "r", "s"]);
    }
}
