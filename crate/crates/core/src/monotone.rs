//! Repair of approximately monotone real functions on a finite domain.
//!
//! A function `f: D → ℚ` is ε-increasing when `f(x) ≤ f(y) + ε` for all
//! `x ≤ y` in `D`. Such an `f` lies within `ε/2` of the increasing function
//! `g(x) = max{f(z) : z ≤ x} − ε/2`, and dually for ε-decreasing functions.
//! All arithmetic is exact.
//!
//! Interval domains are represented by finite grids of sample points.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Check, Condition, Error, Result, Witness};
use crate::lattice::{ElementId, Lattice};
use crate::maps::LatticeMap;
use crate::stabilize::{stabilize_join, ErrorPair};

pub type Rational = BigRational;

/// Parses `p/q`, an integer, or a finite decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidParameter(format!("`{s}` is not a rational number"));
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|_| bad())?;
        return Ok(r);
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = int.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int_part.is_empty() { "0" } else { int_part }, frac);
        let mut numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

/// Formats as an integer when whole, otherwise as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Values of `f` on strictly increasing sample points, with tolerance ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRealFunction {
    points: Vec<Rational>,
    values: Vec<Rational>,
    epsilon: Rational,
}

impl FiniteRealFunction {
    pub fn new(points: Vec<Rational>, values: Vec<Rational>, epsilon: Rational) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("the domain must be nonempty".into()));
        }
        if points.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "points must be strictly increasing, {} then {}",
                format_rational(&points[i]),
                format_rational(&points[i + 1])
            )));
        }
        if epsilon.is_negative() {
            return Err(Error::InvalidParameter("ε must be nonnegative".into()));
        }
        Ok(FiniteRealFunction {
            points,
            values,
            epsilon,
        })
    }

    /// Function on the grid `1, 2, …, n`.
    pub fn on_grid(values: Vec<Rational>, epsilon: Rational) -> Result<Self> {
        let points = (1..=values.len() as i64).map(|i| rational(i, 1)).collect();
        Self::new(points, values, epsilon)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: Rational) -> Result<Self> {
        Self::new(self.points.clone(), self.values.clone(), epsilon)
    }

    fn witness(&self, idx: &[usize]) -> Witness {
        Witness::from_parts(
            idx.iter().map(|&i| ElementId(i)).collect(),
            idx.iter().map(|&i| format_rational(&self.points[i])).collect(),
        )
    }
}

/// First pair `(i, j)`, `i < j`, with `f(i) > f(j) + ε`.
pub fn check_eps_increasing(f: &FiniteRealFunction) -> Check<(usize, usize)> {
    first_pair(f, |a, b| a > &(b + &f.epsilon))
}

/// First pair `(i, j)`, `i < j`, with `f(j) > f(i) + ε`.
pub fn check_eps_decreasing(f: &FiniteRealFunction) -> Check<(usize, usize)> {
    first_pair(f, |a, b| b > &(a + &f.epsilon))
}

fn first_pair(f: &FiniteRealFunction, violates: impl Fn(&Rational, &Rational) -> bool) -> Check<(usize, usize)> {
    let v = &f.values;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if violates(&v[i], &v[j]) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// A violated grid triple `x < z < y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalViolation {
    pub triple: (usize, usize, usize),
    /// True for `f(z) > max{f(x), f(y)} + ε`, false for the lower bound.
    pub upper: bool,
}

/// Checks `min{f(x),f(y)} − ε ≤ f(z) ≤ max{f(x),f(y)} + ε` for all grid
/// triples `x < z < y`.
pub fn check_pal(f: &FiniteRealFunction) -> Check<PalViolation> {
    let v = &f.values;
    let eps = &f.epsilon;
    for i in 0..v.len() {
        for k in i + 1..v.len() {
            for j in k + 1..v.len() {
                let (lo, hi) = if v[i] <= v[j] { (&v[i], &v[j]) } else { (&v[j], &v[i]) };
                if v[k] > hi + eps {
                    return Err(PalViolation {
                        triple: (i, k, j),
                        upper: true,
                    });
                }
                if lo - eps > v[k] {
                    return Err(PalViolation {
                        triple: (i, k, j),
                        upper: false,
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneRepair {
    pub direction: Direction,
    /// One-sided running maximum `F`, with `f ≤ F ≤ f + ε`.
    pub envelope: Vec<Rational>,
    /// `g = F − ε/2`.
    pub values: Vec<Rational>,
    /// `max |f(x) − g(x)|`.
    pub sup_error: Rational,
    /// `(x, z)`: the first point `x` where the sup-error is attained and the
    /// first point `z` whose value sets `F(x)`.
    pub binding: (usize, usize),
}

fn finish(f: &FiniteRealFunction, direction: Direction, envelope: Vec<Rational>) -> MonotoneRepair {
    let half = &f.epsilon / rational(2, 1);
    let values: Vec<Rational> = envelope.iter().map(|v| v - &half).collect();
    let errors: Vec<Rational> = f.values.iter().zip(&values).map(|(a, b)| (a - b).abs()).collect();
    let sup_error = errors.iter().max().cloned().unwrap_or_else(Rational::zero);
    let x = errors.iter().position(|e| e == &sup_error).unwrap_or(0);
    let reach = match direction {
        Direction::Increasing => 0..x + 1,
        Direction::Decreasing => x..f.len(),
    };
    let z = reach
        .into_iter()
        .find(|&z| f.values[z] == envelope[x])
        .expect("envelope value comes from a point");
    let binding = (x, z);

    let ordered = values.windows(2).all(|w| match direction {
        Direction::Increasing => w[0] <= w[1],
        Direction::Decreasing => w[0] >= w[1],
    });
    assert!(ordered, "repair is not {direction}");
    assert!(sup_error <= half, "repair error exceeds ε/2");
    MonotoneRepair {
        direction,
        envelope,
        values,
        sup_error,
        binding,
    }
}

/// `g(x) = max{f(z) : z ≤ x} − ε/2`, increasing and within ε/2 of `f`.
pub fn repair_increasing(f: &FiniteRealFunction) -> Result<MonotoneRepair> {
    if let Err((i, j)) = check_eps_increasing(f) {
        return Err(Error::HypothesisViolated {
            condition: Condition::EpsIncreasing,
            witness: f.witness(&[i, j]),
        });
    }
    let mut envelope = Vec::with_capacity(f.len());
    for v in &f.values {
        let next = match envelope.last() {
            Some(prev) if prev > v => Rational::clone(prev),
            _ => v.clone(),
        };
        envelope.push(next);
    }
    Ok(finish(f, Direction::Increasing, envelope))
}

/// `g(x) = max{f(z) : z ≥ x} − ε/2`, decreasing and within ε/2 of `f`.
pub fn repair_decreasing(f: &FiniteRealFunction) -> Result<MonotoneRepair> {
    if let Err((i, j)) = check_eps_decreasing(f) {
        return Err(Error::HypothesisViolated {
            condition: Condition::EpsDecreasing,
            witness: f.witness(&[i, j]),
        });
    }
    let mut envelope: Vec<Rational> = Vec::with_capacity(f.len());
    for v in f.values.iter().rev() {
        let next = match envelope.last() {
            Some(prev) if prev > v => prev.clone(),
            _ => v.clone(),
        };
        envelope.push(next);
    }
    envelope.reverse();
    Ok(finish(f, Direction::Decreasing, envelope))
}

/// For `f` satisfying the three-point condition of [`check_pal`], tries the
/// increasing repair first and the decreasing one second.
pub fn repair_quasi_monotone(f: &FiniteRealFunction) -> Result<MonotoneRepair> {
    if let Err(v) = check_pal(f) {
        let (i, k, j) = v.triple;
        return Err(Error::HypothesisViolated {
            condition: if v.upper {
                Condition::PalUpper
            } else {
                Condition::PalLower
            },
            witness: f.witness(&[i, k, j]),
        });
    }
    repair_auto(f)
}

/// Increasing repair if its hypothesis holds, else decreasing, else
/// `NoRepairFound` with both witnesses.
pub fn repair_auto(f: &FiniteRealFunction) -> Result<MonotoneRepair> {
    match (check_eps_increasing(f), check_eps_decreasing(f)) {
        (Ok(()), _) => repair_increasing(f),
        (_, Ok(())) => repair_decreasing(f),
        (Err((a, b)), Err((c, d))) => Err(Error::NoRepairFound {
            increasing: f.witness(&[a, b]),
            decreasing: f.witness(&[c, d]),
        }),
    }
}

/// The increasing envelope computed through the general lattice machinery:
/// `X` is the chain of sample points, `Y` the chain of distinct values with
/// a formal `-inf` bottom, `φ ≡ -inf` and `ψ` the running-sup error pair.
/// Returns the repaired join homomorphism read back as rationals.
pub fn increasing_envelope_via_lattice(f: &FiniteRealFunction) -> Result<Vec<Rational>> {
    let mut levels: Vec<Rational> = f.values.clone();
    levels.sort();
    levels.dedup();
    let mut labels = vec!["-inf".to_string()];
    labels.extend(levels.iter().map(format_rational));
    let covers: Vec<(String, String)> = labels.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let codomain = Arc::new(Lattice::from_covers(&labels, &covers)?);

    let point_labels: Vec<String> = (0..f.len()).map(|i| format!("x{i}")).collect();
    let point_covers: Vec<(String, String)> =
        point_labels.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let domain = Arc::new(Lattice::from_covers(&point_labels, &point_covers)?);

    let level_of = |v: &Rational| ElementId(levels.binary_search(v).expect("value is a level") + 1);
    let values = f.values.iter().map(level_of).collect();
    let map = LatticeMap::new(domain, codomain, values)?;
    let errors = ErrorPair::running_sup(&map);
    let repair = stabilize_join(&map, &errors)?;
    Ok(repair
        .repaired
        .values()
        .iter()
        .map(|&v| {
            assert!(v.0 > 0, "repaired value escaped to -inf");
            levels[v.0 - 1].clone()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn grid(values: &[Rational], eps: Rational) -> FiniteRealFunction {
        FiniteRealFunction::on_grid(values.to_vec(), eps).unwrap()
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), q(-3, 1));
        assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
        for bad in ["", "x", "1/0", "1.", "1.2.3", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&q(-1, 4)), "-1/4");
        assert_eq!(format_rational(&q(6, 3)), "2");
    }

    #[test]
    fn construction_rules() {
        assert!(FiniteRealFunction::new(vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(0, 1)], q(0, 1)).is_err());
        assert!(FiniteRealFunction::new(vec![q(1, 1)], vec![], q(0, 1)).is_err());
        assert!(FiniteRealFunction::on_grid(vec![q(1, 1)], q(-1, 1)).is_err());
        assert!(FiniteRealFunction::on_grid(vec![], q(0, 1)).is_err());
    }

    #[test]
    fn eps_increasing_scan() {
        let f = grid(&[q(0, 1), q(1, 1), q(1, 2)], q(1, 2));
        assert_eq!(check_eps_increasing(&f), Ok(()));
        assert_eq!(check_eps_increasing(&f.with_epsilon(q(2, 5)).unwrap()), Err((1, 2)));
    }

    #[test]
    fn eps_decreasing_scan() {
        let f = grid(&[q(0, 1), q(10, 1), q(0, 1), q(-10, 1)], q(10, 1));
        assert_eq!(check_eps_decreasing(&f), Ok(()));
        let g = grid(&[q(0, 1), q(2, 1), q(0, 1)], q(1, 1));
        assert_eq!(check_eps_decreasing(&g), Err((0, 1)));
        let h = grid(&[q(3, 1), q(2, 1), q(1, 1)], q(0, 1));
        assert_eq!(check_eps_decreasing(&h), Ok(()));
    }

    #[test]
    fn three_point_condition() {
        let f = grid(&[q(0, 1), q(10, 1), q(0, 1), q(-10, 1)], q(10, 1));
        assert_eq!(check_pal(&f), Ok(()));
        let g = grid(&[q(0, 1), q(10, 1), q(0, 1)], q(5, 1));
        assert_eq!(
            check_pal(&g),
            Err(PalViolation {
                triple: (0, 1, 2),
                upper: true
            })
        );
        let m = grid(&[q(1, 1), q(2, 1), q(3, 1)], q(0, 1));
        assert_eq!(check_pal(&m), Ok(()));
    }

    #[test]
    fn increasing_repair_hits_the_half_epsilon_bound() {
        let f = grid(&[q(0, 1), q(1, 1), q(1, 2)], q(1, 2));
        let r = repair_increasing(&f).unwrap();
        assert_eq!(r.envelope, [q(0, 1), q(1, 1), q(1, 1)]);
        assert_eq!(r.values, [q(-1, 4), q(3, 4), q(3, 4)]);
        assert_eq!(r.sup_error, q(1, 4));
        assert_eq!(r.binding, (0, 0));
        assert!(repair_increasing(&f.with_epsilon(q(2, 5)).unwrap()).is_err());
    }

    #[test]
    fn decreasing_repair_of_a_hump() {
        let f = grid(&[q(0, 1), q(10, 1), q(0, 1), q(-10, 1)], q(10, 1));
        let r = repair_decreasing(&f).unwrap();
        assert_eq!(r.envelope, [q(10, 1), q(10, 1), q(0, 1), q(-10, 1)]);
        assert_eq!(r.values, [q(5, 1), q(5, 1), q(-5, 1), q(-15, 1)]);
        assert_eq!(r.sup_error, q(5, 1));
    }

    #[test]
    fn exact_monotone_inputs_are_unchanged() {
        let up = grid(&[q(1, 1), q(2, 1), q(2, 1)], q(0, 1));
        assert_eq!(repair_increasing(&up).unwrap().values, up.values());
        let down = grid(&[q(3, 1), q(1, 1)], q(0, 1));
        assert_eq!(repair_decreasing(&down).unwrap().values, down.values());
        let flat = grid(&[q(2, 1), q(2, 1)], q(1, 1));
        assert_eq!(repair_increasing(&flat).unwrap().values, [q(3, 2), q(3, 2)]);
        assert_eq!(repair_decreasing(&flat).unwrap().values, [q(3, 2), q(3, 2)]);
    }

    #[test]
    fn quasi_monotone_prefers_increasing() {
        let f = grid(&[q(0, 1), q(1, 1), q(1, 2)], q(1, 2));
        assert_eq!(repair_quasi_monotone(&f).unwrap().direction, Direction::Increasing);
        // ε-increasing fails at (1, 3) with ε = 10: 10 > −10 + 10.
        let hump = grid(&[q(0, 1), q(10, 1), q(0, 1), q(-10, 1)], q(10, 1));
        assert_eq!(check_eps_increasing(&hump), Err((1, 3)));
        assert_eq!(repair_quasi_monotone(&hump).unwrap().direction, Direction::Decreasing);
        let down = grid(&[q(2, 1), q(1, 1)], q(0, 1));
        assert_eq!(repair_quasi_monotone(&down).unwrap().direction, Direction::Decreasing);
        let bad = grid(&[q(0, 1), q(10, 1), q(0, 1)], q(5, 1));
        assert!(matches!(
            repair_quasi_monotone(&bad),
            Err(Error::HypothesisViolated {
                condition: Condition::PalUpper,
                ..
            })
        ));
    }

    #[test]
    fn lattice_route_matches_running_max() {
        let f = grid(&[q(0, 1), q(1, 1), q(1, 2)], q(1, 2));
        assert_eq!(increasing_envelope_via_lattice(&f).unwrap(), repair_increasing(&f).unwrap().envelope);
    }
}
