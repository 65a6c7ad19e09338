//! Error type shared by every module, plus the condition and witness
//! vocabulary used when a hypothesis check fails.

use std::fmt;

use crate::lattice::{ElementId, Lattice};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Outcome of a boolean check: `Err` carries the first violating witness.
pub type Check<W> = std::result::Result<(), W>;

/// Concrete elements that violate a condition, with their labels for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub ids: Vec<ElementId>,
    pub labels: Vec<String>,
}

impl Witness {
    pub fn in_lattice(lattice: &Lattice, ids: &[ElementId]) -> Self {
        Witness {
            ids: ids.to_vec(),
            labels: ids.iter().map(|&id| lattice.label(id).to_string()).collect(),
        }
    }

    pub fn from_parts(ids: Vec<ElementId>, labels: Vec<String>) -> Self {
        Witness { ids, labels }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels.join(", "))
    }
}

/// Binary lattice operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Join,
    Meet,
}

impl Op {
    pub fn dual(self) -> Op {
        match self {
            Op::Join => Op::Meet,
            Op::Meet => Op::Join,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Join => "∨",
            Op::Meet => "∧",
        }
    }
}

/// Direction of an inequality `lhs ≤ rhs` or `lhs ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    AtMost,
    AtLeast,
}

impl Bound {
    pub fn flip(self) -> Bound {
        match self {
            Bound::AtMost => Bound::AtLeast,
            Bound::AtLeast => Bound::AtMost,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Bound::AtMost => "≤",
            Bound::AtLeast => "≥",
        }
    }
}

/// A named hypothesis whose violation is reported with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// `lower(x) ≤ upper(x)` for every x.
    Pointwise {
        lower: &'static str,
        upper: &'static str,
    },
    /// `map(x op_X y) bound map(x) op_Y map(y)` for every pair.
    OpBound {
        map: &'static str,
        domain_op: Op,
        codomain_op: Op,
        bound: Bound,
    },
    /// `x ≤ y ⇒ map(x) ≤ map(y)`.
    Monotone { map: &'static str },
    /// `map(x) = map(y) ⇒ x = y`.
    Injective { map: &'static str },
    /// `φ(z,z) ≤ φ(x,y)` whenever x, y ≤ z.
    PhiAntitone,
    /// `ψ(x,y) ≤ ψ(z,z)` whenever x, y ≤ z.
    PsiMonotone,
    /// `φ(x,y) ∧ f(x∨y) ≤ f(x) ∨ f(y)`.
    ApproxJoinLower,
    /// `f(x) ∨ f(y) ≤ f(x∨y) ∨ ψ(x,y)`.
    ApproxJoinUpper,
    /// `f(x) ∨ f(y) ∈ N(f(x∨y))`.
    NeighborhoodClose,
    /// `f(x∨y) △ (f(x) ∨ f(y)) ≤ ε`.
    JoinCloseness,
    /// `f(x) ≤ f(y) + ε` whenever x ≤ y.
    EpsIncreasing,
    /// `f(y) ≤ f(x) + ε` whenever x ≤ y.
    EpsDecreasing,
    /// `min{f(x), f(y)} − ε ≤ f(z)` for x ≤ z ≤ y.
    PalLower,
    /// `f(z) ≤ max{f(x), f(y)} + ε` for x ≤ z ≤ y.
    PalUpper,
}

impl Condition {
    pub fn sub_join(map: &'static str) -> Self {
        Condition::OpBound {
            map,
            domain_op: Op::Join,
            codomain_op: Op::Join,
            bound: Bound::AtMost,
        }
    }

    pub fn super_join(map: &'static str) -> Self {
        Condition::OpBound {
            map,
            domain_op: Op::Join,
            codomain_op: Op::Join,
            bound: Bound::AtLeast,
        }
    }

    pub fn sub_meet(map: &'static str) -> Self {
        Condition::OpBound {
            map,
            domain_op: Op::Meet,
            codomain_op: Op::Meet,
            bound: Bound::AtMost,
        }
    }

    pub fn super_meet(map: &'static str) -> Self {
        Condition::OpBound {
            map,
            domain_op: Op::Meet,
            codomain_op: Op::Meet,
            bound: Bound::AtLeast,
        }
    }

    /// Re-expresses a condition stated over order-dual spaces in terms of
    /// the original spaces.
    pub fn dualize(self, flip_domain: bool, flip_codomain: bool) -> Self {
        match self {
            Condition::Pointwise { lower, upper } if flip_codomain => Condition::Pointwise {
                lower: upper,
                upper: lower,
            },
            Condition::OpBound {
                map,
                domain_op,
                codomain_op,
                bound,
            } => Condition::OpBound {
                map,
                domain_op: if flip_domain { domain_op.dual() } else { domain_op },
                codomain_op: if flip_codomain { codomain_op.dual() } else { codomain_op },
                bound: if flip_codomain { bound.flip() } else { bound },
            },
            other => other,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Pointwise { lower, upper } => write!(f, "{lower} ≤ {upper}"),
            Condition::OpBound {
                map,
                domain_op,
                codomain_op,
                bound,
            } => write!(
                f,
                "{map}(x{}y) {} {map}(x){}{map}(y)",
                domain_op.symbol(),
                bound.symbol(),
                codomain_op.symbol()
            ),
            Condition::Monotone { map } => write!(f, "x ≤ y ⇒ {map}(x) ≤ {map}(y)"),
            Condition::Injective { map } => write!(f, "{map} injective"),
            Condition::PhiAntitone => write!(f, "φ(z,z) ≤ φ(x,y) for x,y ≤ z"),
            Condition::PsiMonotone => write!(f, "ψ(x,y) ≤ ψ(z,z) for x,y ≤ z"),
            Condition::ApproxJoinLower => write!(f, "φ(x,y)∧f(x∨y) ≤ f(x)∨f(y)"),
            Condition::ApproxJoinUpper => write!(f, "f(x)∨f(y) ≤ f(x∨y)∨ψ(x,y)"),
            Condition::NeighborhoodClose => write!(f, "f(x)∨f(y) ∈ N(f(x∨y))"),
            Condition::JoinCloseness => write!(f, "f(x∨y) △ (f(x)∨f(y)) ≤ ε"),
            Condition::EpsIncreasing => write!(f, "f(x) ≤ f(y) + ε for x ≤ y"),
            Condition::EpsDecreasing => write!(f, "f(y) ≤ f(x) + ε for x ≤ y"),
            Condition::PalLower => write!(f, "min{{f(x),f(y)}} − ε ≤ f(z) for x ≤ z ≤ y"),
            Condition::PalUpper => write!(f, "f(z) ≤ max{{f(x),f(y)}} + ε for x ≤ z ≤ y"),
        }
    }
}

/// The four neighborhood-system axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// z ∈ N(z).
    Reflexive,
    /// N(z) is order-convex.
    Convex,
    /// sup N(z) and inf N(z) belong to N(z).
    BoundsClosed,
    /// t ∈ N(u) and u∨y ∈ N(z) imply t∨y ∈ N(z).
    JoinTransfer,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Reflexive => "(i) z ∈ N(z)",
            Axiom::Convex => "(ii) convexity",
            Axiom::BoundsClosed => "(iii) sup/inf closure",
            Axiom::JoinTransfer => "(iv) t ∈ N(u), u∨y ∈ N(z) ⇒ t∨y ∈ N(z)",
        };
        f.write_str(s)
    }
}

/// Why a pair of elements breaks the lattice property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeDefect {
    NoUpperBound,
    NoLeastUpperBound,
    NoLowerBound,
    NoGreatestLowerBound,
}

impl fmt::Display for LatticeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LatticeDefect::NoUpperBound => "no upper bound",
            LatticeDefect::NoLeastUpperBound => "no least upper bound",
            LatticeDefect::NoLowerBound => "no lower bound",
            LatticeDefect::NoGreatestLowerBound => "no greatest lower bound",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("lattice must have at least one element")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{label}` at {position}")]
    UnknownLabel { label: String, position: String },
    #[error("cover relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("not a lattice: `{a}` and `{b}` have {reason}")]
    NotALattice {
        a: String,
        b: String,
        reason: LatticeDefect,
    },
    #[error("element index {index} out of range for a lattice of {size} elements")]
    InvalidElement { index: usize, size: usize },
    #[error("{what} exceeds the size limit of {limit}")]
    SizeLimit { what: String, limit: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lattice is not distributive, witness {0}")]
    NotDistributive(Witness),
    #[error("maps do not share domain and codomain")]
    DomainMismatch,
    #[error("hypothesis `{condition}` violated at {witness}")]
    HypothesisViolated {
        condition: Condition,
        witness: Witness,
    },
    #[error("neighborhood axiom {axiom} violated at {witness}")]
    AxiomViolated { axiom: Axiom, witness: Witness },
    #[error("partition is not a congruence, witness {0}")]
    NotACongruence(Witness),
    #[error("codomain is not a Boolean algebra")]
    NotBooleanCodomain,
    #[error("search budget of {0} candidates exceeded")]
    SearchBudgetExceeded(u64),
    #[error("no monotone repair: ε-increasing fails at {increasing}, ε-decreasing fails at {decreasing}")]
    NoRepairFound {
        increasing: Witness,
        decreasing: Witness,
    },
}

impl Error {
    pub(crate) fn violated(condition: Condition, lattice: &Lattice, ids: &[ElementId]) -> Self {
        Error::HypothesisViolated {
            condition,
            witness: Witness::in_lattice(lattice, ids),
        }
    }
}
