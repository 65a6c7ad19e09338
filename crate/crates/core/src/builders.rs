//! Standard lattices and the prime embedding of a finite distributive
//! lattice into a divisor lattice.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::{ElementId, Lattice, MAX_ELEMENTS};
use crate::maps::LatticeMap;

pub const MAX_BOOLEAN_ATOMS: u32 = 12;
pub const MAX_DIVISOR_N: u64 = 1_000_000;

/// All subsets of `{1..k}` under inclusion. Element `i` is the subset whose
/// bitmask is `i`; labels look like `{}`, `{1}`, `{1,3}`.
pub fn boolean_algebra(k: u32) -> Result<Lattice> {
    if k > MAX_BOOLEAN_ATOMS {
        return Err(Error::SizeLimit {
            what: format!("Boolean algebra with {k} atoms"),
            limit: MAX_BOOLEAN_ATOMS as u64,
        });
    }
    let n = 1usize << k;
    let labels = (0..n).map(subset_label).collect();
    Lattice::from_operations(labels, |a, b| a & b == a, |a, b| a | b, |a, b| a & b, Some(true))
}

fn subset_label(mask: usize) -> String {
    let members: Vec<String> = (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// Totally ordered lattice `0 < 1 < … < k−1`.
pub fn chain(k: usize) -> Result<Lattice> {
    if k == 0 {
        return Err(Error::InvalidParameter("a chain needs at least one element".into()));
    }
    if k > MAX_ELEMENTS {
        return Err(Error::SizeLimit {
            what: format!("chain of length {k}"),
            limit: MAX_ELEMENTS as u64,
        });
    }
    let labels = (0..k).map(|i| i.to_string()).collect();
    Lattice::from_operations(labels, |a, b| a <= b, usize::max, usize::min, Some(true))
}

/// Divisors of `n` ordered by divisibility: join is lcm, meet is gcd.
/// Elements are listed in increasing numeric order.
pub fn divisor_lattice(n: u64) -> Result<Lattice> {
    if n == 0 || n > MAX_DIVISOR_N {
        return Err(Error::SizeLimit {
            what: format!("divisor lattice of {n}"),
            limit: MAX_DIVISOR_N,
        });
    }
    divisor_lattice_of(&factorize(n))
}

/// Divisor lattice for a number given by its factorization `[(p, e)]`.
/// Only the divisor count is bounded, so the number itself may be large.
pub(crate) fn divisor_lattice_of(factors: &[(u64, u32)]) -> Result<Lattice> {
    let count: u64 = factors.iter().map(|&(_, e)| e as u64 + 1).product();
    if count > MAX_ELEMENTS as u64 {
        return Err(Error::SizeLimit {
            what: format!("divisor lattice with {count} divisors"),
            limit: MAX_ELEMENTS as u64,
        });
    }
    let mut divisors = vec![1u64];
    for &(p, e) in factors {
        let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
        for &d in &divisors {
            let mut q = d;
            for _ in 0..=e {
                next.push(q);
                q *= p;
            }
        }
        divisors = next;
    }
    divisors.sort_unstable();
    let position = |v: u64| divisors.binary_search(&v).expect("closed under gcd/lcm");
    let labels = divisors.iter().map(u64::to_string).collect();
    Lattice::from_operations(
        labels,
        |a, b| divisors[b] % divisors[a] == 0,
        |a, b| position(divisors[a].lcm(&divisors[b])),
        |a, b| position(divisors[a].gcd(&divisors[b])),
        Some(true),
    )
}

/// Componentwise product. Element `(a, b)` has id `a·|right| + b` and label
/// `(a,b)` built from the factor labels.
pub fn product(left: &Lattice, right: &Lattice) -> Result<Lattice> {
    let m = right.len();
    let size = left.len() * m;
    if size > MAX_ELEMENTS {
        return Err(Error::SizeLimit {
            what: format!("product with {size} elements"),
            limit: MAX_ELEMENTS as u64,
        });
    }
    let labels = (0..size)
        .map(|i| format!("({},{})", left.labels()[i / m], right.labels()[i % m]))
        .collect();
    let split = |i: usize| (ElementId(i / m), ElementId(i % m));
    let pack = |a: ElementId, b: ElementId| a.0 * m + b.0;
    Lattice::from_operations(
        labels,
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            left.leq(a, c) && right.leq(b, d)
        },
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            pack(left.join(a, c), right.join(b, d))
        },
        |x, y| {
            let ((a, b), (c, d)) = (split(x), split(y));
            pack(left.meet(a, c), right.meet(b, d))
        },
        Some(left.is_distributive() && right.is_distributive()),
    )
}

pub fn join_irreducibles(lattice: &Lattice) -> Vec<ElementId> {
    lattice.join_irreducibles()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn first_primes(k: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// An injective lattice homomorphism from a finite distributive lattice
/// into a divisor lattice.
#[derive(Debug, Clone)]
pub struct BirkhoffEmbedding {
    /// The number whose divisor lattice is the codomain.
    pub modulus: u64,
    /// Prime assigned to each join-irreducible, in id order.
    pub primes: Vec<(ElementId, u64)>,
    pub map: LatticeMap,
}

impl BirkhoffEmbedding {
    /// Numeric value of `H(y)`.
    pub fn value(&self, y: ElementId) -> u64 {
        self.map.codomain().label(self.map.get(y)).parse().expect("divisor labels are numeric")
    }
}

/// Assigns the i-th prime to the i-th join-irreducible and sends `y` to
/// the product of the primes of the join-irreducibles below it. The result
/// is verified to be an injective lattice homomorphism before returning.
pub fn birkhoff_embedding(lattice: &Arc<Lattice>) -> Result<BirkhoffEmbedding> {
    lattice.require_distributive()?;
    let irreducibles = lattice.join_irreducibles();
    let primes = first_primes(irreducibles.len());
    let modulus = primes.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).ok_or_else(|| {
        Error::SizeLimit {
            what: format!("embedding modulus for {} join-irreducibles", irreducibles.len()),
            limit: u64::MAX,
        }
    })?;
    let target = Arc::new(divisor_lattice_of(&primes.iter().map(|&p| (p, 1)).collect::<Vec<_>>())?);
    let values = lattice
        .elements()
        .map(|y| {
            let v: u64 = irreducibles
                .iter()
                .zip(&primes)
                .filter(|(&j, _)| lattice.leq(j, y))
                .map(|(_, &p)| p)
                .product();
            target.id(&v.to_string()).expect("product of assigned primes divides the modulus")
        })
        .collect();
    let map = LatticeMap::new(lattice.clone(), target, values)?;

    if let Err((x, y)) = map.check_join_hom() {
        panic!("prime embedding is not join-preserving at ({x}, {y})");
    }
    if let Err((x, y)) = map.check_meet_hom() {
        panic!("prime embedding is not meet-preserving at ({x}, {y})");
    }
    if let Err((x, y)) = map.check_injective() {
        panic!("prime embedding identifies {x} and {y}");
    }
    Ok(BirkhoffEmbedding {
        modulus,
        primes: irreducibles.into_iter().zip(primes).collect(),
        map,
    })
}
