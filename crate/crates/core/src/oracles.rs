//! Brute-force reference computations used to cross-check the constructive
//! modules, and the naive Boolean correction `g(x) = f(x) ∖ ε`.
//!
//! Nothing here shares code with the constructions it checks beyond the
//! lattice tables themselves. Budgets are hard caps: exceeding one is an
//! error, never a silent truncation.

use crate::error::{Check, Condition, Error, Result};
use crate::lattice::{ElementId, Lattice};
use crate::maps::LatticeMap;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const MAX_ENVELOPE_DOMAIN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeMode {
    Lower,
    Upper,
}

/// For each `x`, enumerates every nonempty subset `S` of the down-set of
/// `x` with `sup S = x` and takes the inf (lower) or sup (upper) of
/// `⋁ f(S)` over them.
pub fn brute_force_envelope(f: &LatticeMap, mode: EnvelopeMode) -> Result<LatticeMap> {
    let (x, y) = (&**f.domain(), &**f.codomain());
    if x.len() > MAX_ENVELOPE_DOMAIN {
        return Err(Error::SizeLimit {
            what: format!("envelope enumeration over {} elements", x.len()),
            limit: MAX_ENVELOPE_DOMAIN as u64,
        });
    }
    let values = x
        .elements()
        .map(|e| {
            let below: Vec<ElementId> = x.down_set(e).collect();
            let size = 1usize << below.len();
            // sup of the subset in X and join of its images in Y, by lowest bit.
            let mut sup_x = vec![x.bottom(); size];
            let mut img = vec![y.bottom(); size];
            let mut acc: Option<ElementId> = None;
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                sup_x[mask] = if rest == 0 { below[low] } else { x.join(sup_x[rest], below[low]) };
                let fz = f.get(below[low]);
                img[mask] = if rest == 0 { fz } else { y.join(img[rest], fz) };
                if sup_x[mask] == e {
                    acc = Some(match (acc, mode) {
                        (None, _) => img[mask],
                        (Some(a), EnvelopeMode::Lower) => y.meet(a, img[mask]),
                        (Some(a), EnvelopeMode::Upper) => y.join(a, img[mask]),
                    });
                }
            }
            acc.expect("{x} itself decomposes x")
        })
        .collect();
    LatticeMap::new(f.domain().clone(), f.codomain().clone(), values)
}

fn candidate_count(x: &Lattice, y: &Lattice) -> Option<u64> {
    (y.len() as u64).checked_pow(x.len() as u32)
}

/// All join homomorphisms `X → Y`, in lexicographic order of their value
/// vectors. Refuses when `|Y|^|X|` exceeds `budget`.
pub fn enumerate_join_homs(x: &std::sync::Arc<Lattice>, y: &std::sync::Arc<Lattice>, budget: u64) -> Result<Vec<LatticeMap>> {
    match candidate_count(x, y) {
        Some(c) if c <= budget => {}
        _ => return Err(Error::SearchBudgetExceeded(budget)),
    }
    // checks[i]: pairs (a, b) whose constraint becomes decidable once
    // element i (the largest id among a, b, a∨b) is assigned.
    let n = x.len();
    let mut checks = vec![Vec::new(); n];
    for a in x.elements() {
        for b in x.elements().skip(a.0) {
            let j = x.join(a, b);
            checks[a.0.max(b.0).max(j.0)].push((a, b, j));
        }
    }
    let mut out = Vec::new();
    let mut values = vec![ElementId(0); n];
    enumerate_rec(x, y, &checks, 0, &mut values, &mut out);
    Ok(out)
}

fn enumerate_rec(
    x: &std::sync::Arc<Lattice>,
    y: &std::sync::Arc<Lattice>,
    checks: &[Vec<(ElementId, ElementId, ElementId)>],
    i: usize,
    values: &mut Vec<ElementId>,
    out: &mut Vec<LatticeMap>,
) {
    if i == values.len() {
        out.push(LatticeMap::new(x.clone(), y.clone(), values.clone()).expect("valid values"));
        return;
    }
    for v in y.elements() {
        values[i] = v;
        if checks[i].iter().all(|&(a, b, j)| values[j.0] == y.join(values[a.0], values[b.0])) {
            enumerate_rec(x, y, checks, i + 1, values, out);
        }
    }
}

/// First join homomorphism `F` (in enumeration order) with `Φ ≤ F ≤ Ψ`.
pub fn sandwich_exists_brute(lower: &LatticeMap, upper: &LatticeMap, budget: u64) -> Result<Option<LatticeMap>> {
    lower.require_compatible(upper)?;
    let y = lower.codomain();
    let homs = enumerate_join_homs(lower.domain(), y, budget)?;
    Ok(homs.into_iter().find(|h| {
        lower.domain().elements().all(|e| y.leq(lower.get(e), h.get(e)) && y.leq(h.get(e), upper.get(e)))
    }))
}

/// Complements of a finite Boolean algebra; `None` when the lattice is not
/// Boolean (not distributive, or some element has no complement).
pub fn boolean_complements(l: &Lattice) -> Option<Vec<ElementId>> {
    if !l.is_distributive() {
        return None;
    }
    l.elements()
        .map(|a| l.elements().find(|&c| l.join(a, c) == l.top() && l.meet(a, c) == l.bottom()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveCorrection {
    pub map: LatticeMap,
    pub join_hom: Check<(ElementId, ElementId)>,
    pub meet_hom: Check<(ElementId, ElementId)>,
    /// `⋁_x f(x) △ g(x)`.
    pub max_symmetric_difference: ElementId,
    /// Whether `f(x) △ g(x) ≤ ε` for every x.
    pub within_eps: bool,
}

/// `g(x) = f(x) ∖ ε` for `f` into a Boolean algebra whose join defect
/// `f(x∨y) △ (f(x)∨f(y))` is bounded by `ε` everywhere. The meet-homomorphism
/// status of `g` is reported, not assumed.
pub fn naive_boolean_correction(f: &LatticeMap, eps: ElementId) -> Result<NaiveCorrection> {
    let (x, y) = (&**f.domain(), &**f.codomain());
    let complement = boolean_complements(y).ok_or(Error::NotBooleanCodomain)?;
    y.check_element(eps)?;
    let minus = |a: ElementId, b: ElementId| y.meet(a, complement[b.0]);
    let sym_diff = |a: ElementId, b: ElementId| y.join(minus(a, b), minus(b, a));

    for a in x.elements() {
        for b in x.elements() {
            let defect = sym_diff(f.get(x.join(a, b)), y.join(f.get(a), f.get(b)));
            if !y.leq(defect, eps) {
                return Err(Error::violated(Condition::JoinCloseness, x, &[a, b]));
            }
        }
    }
    let g = LatticeMap::from_fn(f.domain().clone(), f.codomain().clone(), |a| minus(f.get(a), eps));
    let diffs: Vec<ElementId> = x.elements().map(|a| sym_diff(f.get(a), g.get(a))).collect();
    Ok(NaiveCorrection {
        join_hom: g.check_join_hom(),
        meet_hom: g.check_meet_hom(),
        max_symmetric_difference: y.sup(diffs.iter().copied()),
        within_eps: diffs.iter().all(|&d| y.leq(d, eps)),
        map: g,
    })
}
