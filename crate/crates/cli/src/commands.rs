use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use latrep::builders::product;
use latrep::error::{Check, Condition};
use latrep::monotone::{
    check_eps_decreasing, check_eps_increasing, check_pal, format_rational, repair_auto, repair_decreasing,
    repair_increasing, FiniteRealFunction,
};
use latrep::neighborhoods::{check_neighborhood_approx, stabilize_with_neighborhoods};
use latrep::oracles::{brute_force_envelope, enumerate_join_homs, naive_boolean_correction, sandwich_exists_brute, EnvelopeMode};
use latrep::sandwich::{sandwich_join, sandwich_lattice_hom, sandwich_variant};
use latrep::stabilize::{check_approx_join, lower_envelope, stabilize_join, upper_envelope};
use latrep::{ElementId, Lattice, LatticeMap, DEFAULT_BUDGET};
use serde_json::{json, Value};

use crate::formats::{
    self, hasse_dot, labels_json, lattice_from_value, lattice_json, map_values_json, rationals_json,
    read_error_pair, read_lattice, read_map, read_neighborhoods, read_real_function, write_json, write_map_verified,
    write_real_function, write_text, LatticeRef,
};

/// Result of a command: the JSON report, a one-line human summary, and
/// whether the checked property or hypothesis held.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(report: Value, summary: impl Into<String>) -> Self {
        Outcome {
            report,
            summary: summary.into(),
            ok: true,
        }
    }
}

/// A library error raised after the hypothesis checklist was computed, so
/// the failure report can still show every check.
#[derive(Debug)]
pub struct Rejected {
    pub hypotheses: Vec<Value>,
    pub source: latrep::Error,
}

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.source.fmt(f)
    }
}

impl std::error::Error for Rejected {}

fn rejected(hypotheses: &[Value]) -> impl FnOnce(latrep::Error) -> Rejected + '_ {
    move |source| Rejected {
        hypotheses: hypotheses.to_vec(),
        source,
    }
}

pub fn budget() -> Result<u64> {
    match std::env::var("LATREP_BUDGET") {
        Ok(s) => s.trim().parse().with_context(|| format!("LATREP_BUDGET=`{s}` is not an integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn entry(condition: impl Display, witness: Option<Value>) -> Value {
    json!({ "condition": condition.to_string(), "holds": witness.is_none(), "witness": witness })
}

fn pair_entry(condition: impl Display, l: &Lattice, check: Check<(ElementId, ElementId)>) -> Value {
    entry(condition, check.err().map(|(a, b)| labels_json(l, &[a, b])))
}

fn point_entry(condition: impl Display, l: &Lattice, check: Check<ElementId>) -> Value {
    entry(condition, check.err().map(|a| labels_json(l, &[a])))
}

fn distributive_entry(name: &str, l: &Lattice) -> Value {
    entry(
        format!("{name} distributive"),
        l.check_distributive().err().map(|(a, b, c)| labels_json(l, &[a, b, c])),
    )
}

pub fn validate(path: &Path) -> Result<Outcome> {
    let l = read_lattice(path)?;
    let distributive = l.check_distributive();
    let dual_inf = l.check_dual_infinite_distributive();
    let report = json!({
        "command": "validate",
        "status": "ok",
        "elements": l.len(),
        "bottom": l.label(l.bottom()),
        "top": l.label(l.top()),
        "distributive": distributive.is_ok(),
        "distributivity_witness": distributive.err().map(|(a, b, c)| labels_json(&l, &[a, b, c])),
        "dual_infinite_distributive": dual_inf.is_ok(),
        "dual_infinite_distributivity_witness": dual_inf.err().map(|(y, s)| json!({
            "y": l.label(y),
            "set": labels_json(&l, &s),
        })),
        "join_irreducibles": labels_json(&l, &l.join_irreducibles()),
        "meet_irreducibles": labels_json(&l, &l.meet_irreducibles()),
    });
    let summary = format!(
        "valid lattice with {} elements, distributive={}",
        l.len(),
        l.is_distributive()
    );
    Ok(Outcome::ok(report, summary))
}

pub fn make(kind: &str, params: &[String], out: &Path) -> Result<Outcome> {
    let l = match (kind, params) {
        ("product", [a, b]) => {
            let here = Path::new(".");
            let a = lattice_from_value(&Value::String(a.clone()), here, "left factor")?;
            let b = lattice_from_value(&Value::String(b.clone()), here, "right factor")?;
            product(&a.lattice, &b.lattice)?
        }
        ("product", _) => bail!("make product needs two lattices"),
        (_, [n]) => match formats::builtin_lattice(&format!("{kind}:{n}")) {
            Some(l) => l?,
            None => bail!("make {kind}: expected a nonnegative integer parameter, got `{n}`"),
        },
        _ => bail!("make {kind} needs exactly one parameter"),
    };
    write_json(out, &lattice_json(&l))?;
    if read_lattice(out)? != l {
        bail!("round trip of {} changed the lattice", out.display());
    }
    let report = json!({
        "command": "make",
        "status": "ok",
        "output": out.display().to_string(),
        "elements": l.len(),
        "distributive": l.is_distributive(),
    });
    let summary = format!("wrote {} elements to {}", l.len(), out.display());
    Ok(Outcome::ok(report, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Property {
    JoinHom,
    MeetHom,
    Monotone,
    SubJoin,
    SuperJoin,
    SubMeet,
    SuperMeet,
    Injective,
}

impl Property {
    fn check(self, m: &LatticeMap) -> Check<(ElementId, ElementId)> {
        match self {
            Property::JoinHom => m.check_join_hom(),
            Property::MeetHom => m.check_meet_hom(),
            Property::Monotone => m.check_monotone(),
            Property::SubJoin => m.check_sub_join(),
            Property::SuperJoin => m.check_super_join(),
            Property::SubMeet => m.check_sub_meet(),
            Property::SuperMeet => m.check_super_meet(),
            Property::Injective => m.check_injective(),
        }
    }

    fn condition(self) -> Condition {
        match self {
            Property::JoinHom => Condition::OpBound {
                map: "f",
                domain_op: latrep::error::Op::Join,
                codomain_op: latrep::error::Op::Join,
                bound: latrep::error::Bound::AtMost,
            },
            Property::MeetHom => Condition::OpBound {
                map: "f",
                domain_op: latrep::error::Op::Meet,
                codomain_op: latrep::error::Op::Meet,
                bound: latrep::error::Bound::AtMost,
            },
            Property::Monotone => Condition::Monotone { map: "f" },
            Property::SubJoin => Condition::sub_join("f"),
            Property::SuperJoin => Condition::super_join("f"),
            Property::SubMeet => Condition::sub_meet("f"),
            Property::SuperMeet => Condition::super_meet("f"),
            Property::Injective => Condition::Injective { map: "f" },
        }
    }

    fn name(self) -> &'static str {
        match self {
            Property::JoinHom => "join-hom",
            Property::MeetHom => "meet-hom",
            Property::Monotone => "monotone",
            Property::SubJoin => "sub-join",
            Property::SuperJoin => "super-join",
            Property::SubMeet => "sub-meet",
            Property::SuperMeet => "super-meet",
            Property::Injective => "injective",
        }
    }
}

pub fn check_map(path: &Path, property: Property) -> Result<Outcome> {
    let m = read_map(path)?.map;
    let check = property.check(&m);
    let holds = check.is_ok();
    let witness = check.err().map(|(a, b)| labels_json(m.domain(), &[a, b]));
    let condition = match property {
        // Homomorphisms need equality, not just the one-sided bound.
        Property::JoinHom | Property::MeetHom => property.condition().to_string().replace('≤', "="),
        _ => property.condition().to_string(),
    };
    let summary = match &witness {
        None => format!("{} holds", property.name()),
        Some(w) => format!("{} fails at {w}", property.name()),
    };
    let report = json!({
        "command": "check-map",
        "status": if holds { "ok" } else { "violation" },
        "property": property.name(),
        "condition": condition,
        "holds": holds,
        "witness": witness,
    });
    Ok(Outcome {
        report,
        summary,
        ok: holds,
    })
}

fn seat(r: &LatticeRef, flip: bool) -> Arc<Lattice> {
    if flip {
        Arc::new(r.lattice.dual())
    } else {
        r.lattice.clone()
    }
}

pub fn sandwich(maps: &[std::path::PathBuf], flip_domain: bool, flip_codomain: bool, out: Option<&Path>) -> Result<Outcome> {
    match maps {
        [phi, psi] => sandwich_two(phi, psi, flip_domain, flip_codomain, out),
        [psi2, phi2, phi1, psi1] => {
            if flip_domain || flip_codomain {
                bail!("order flips apply only to the two-map form");
            }
            sandwich_four([psi2, phi2, phi1, psi1], out)
        }
        _ => bail!("sandwich takes either Φ Ψ or Ψ2 Φ2 Φ1 Ψ1"),
    }
}

fn sandwich_two(phi: &Path, psi: &Path, flip_domain: bool, flip_codomain: bool, out: Option<&Path>) -> Result<Outcome> {
    let lower = read_map(phi)?;
    let upper = read_map(psi)?;
    lower.map.require_compatible(&upper.map)?;
    let (xs, ys) = (seat(&lower.domain, flip_domain), seat(&lower.codomain, flip_codomain));
    let (p, q) = (lower.map.reseat(xs.clone(), ys.clone()), upper.map.reseat(xs.clone(), ys.clone()));
    let dual = |c: Condition| c.dualize(flip_domain, flip_codomain);
    let hypotheses = vec![
        distributive_entry("domain", &lower.domain.lattice),
        point_entry(
            dual(Condition::Pointwise {
                lower: "Phi",
                upper: "Psi",
            }),
            &xs,
            p.pointwise_leq(&q)?,
        ),
        pair_entry(dual(Condition::sub_join("Phi")), &xs, p.check_sub_join()),
        pair_entry(dual(Condition::super_join("Psi")), &xs, q.check_super_join()),
    ];
    let f = if flip_domain || flip_codomain {
        sandwich_variant(&lower.map, &upper.map, flip_domain, flip_codomain)
    } else {
        sandwich_join(&lower.map, &upper.map)
    }
    .map_err(rejected(&hypotheses))?;
    let claimed = dual(Condition::OpBound {
        map: "F",
        domain_op: latrep::error::Op::Join,
        codomain_op: latrep::error::Op::Join,
        bound: latrep::error::Bound::AtMost,
    })
    .to_string()
    .replace(['≤', '≥'], "=");
    if let Some(out) = out {
        let back = write_map_verified(out, &f, &lower.domain, &lower.codomain)?.reseat(xs.clone(), ys.clone());
        let bounded = xs.elements().all(|e| ys.leq(p.get(e), back.get(e)) && ys.leq(back.get(e), q.get(e)));
        if back.check_join_hom().is_err() || !bounded {
            bail!("{} does not re-check as a separator", out.display());
        }
    }
    let report = json!({
        "command": "sandwich",
        "status": "ok",
        "flip_domain": flip_domain,
        "flip_codomain": flip_codomain,
        "hypotheses": hypotheses,
        "property": claimed,
        "output": out.map(|p| p.display().to_string()),
        "map": map_values_json(&f),
    });
    Ok(Outcome::ok(report, format!("separator found ({claimed})")))
}

fn sandwich_four(paths: [&std::path::PathBuf; 4], out: Option<&Path>) -> Result<Outcome> {
    let files = paths.map(|p| read_map(p));
    let [psi2, phi2, phi1, psi1] = files;
    let (psi2, phi2, phi1, psi1) = (psi2?, phi2?, phi1?, psi1?);
    let x = psi2.domain.lattice.clone();
    let budget = budget()?;
    let hypotheses = vec![
        distributive_entry("domain", &x),
        pair_entry(Condition::sub_meet("Psi2"), &x, psi2.map.check_sub_meet()),
        pair_entry(Condition::super_meet("Phi2"), &x, phi2.map.check_super_meet()),
        pair_entry(Condition::sub_join("Phi1"), &x, phi1.map.check_sub_join()),
        pair_entry(Condition::super_join("Psi1"), &x, psi1.map.check_super_join()),
    ];
    let found = sandwich_lattice_hom(&psi2.map, &phi2.map, &phi1.map, &psi1.map, budget).map_err(rejected(&hypotheses))?;
    let Some(h) = found else {
        let report = json!({
            "command": "sandwich",
            "status": "not-found",
            "hypotheses": hypotheses,
            "budget": budget,
            "map": null,
        });
        return Ok(Outcome {
            report,
            summary: "no lattice homomorphism between Ψ2 and Ψ1".into(),
            ok: false,
        });
    };
    if let Some(out) = out {
        let back = write_map_verified(out, &h, &psi2.domain, &psi2.codomain)?;
        let y = back.codomain();
        let bounded = x
            .elements()
            .all(|e| y.leq(psi2.map.get(e), back.get(e)) && y.leq(back.get(e), psi1.map.get(e)));
        if back.check_join_hom().is_err() || back.check_meet_hom().is_err() || !bounded {
            bail!("{} does not re-check as a lattice homomorphism between Ψ2 and Ψ1", out.display());
        }
    }
    let report = json!({
        "command": "sandwich",
        "status": "ok",
        "hypotheses": hypotheses,
        "budget": budget,
        "property": "lattice homomorphism with Psi2 ≤ H ≤ Psi1",
        "output": out.map(|p| p.display().to_string()),
        "map": map_values_json(&h),
    });
    Ok(Outcome::ok(report, "lattice homomorphism found"))
}

fn band_json(x: &Lattice, y: &Lattice, lower: &[ElementId], f: &LatticeMap, upper: &[ElementId]) -> Value {
    Value::Array(
        x.elements()
            .map(|e| {
                json!({
                    "x": x.label(e),
                    "lower": y.label(lower[e.0]),
                    "F": y.label(f.get(e)),
                    "upper": y.label(upper[e.0]),
                })
            })
            .collect(),
    )
}

pub fn stabilize(fpath: &Path, phi: &Path, psi: &Path, out: Option<&Path>) -> Result<Outcome> {
    let f = read_map(fpath)?;
    let errors = read_error_pair(phi, psi, &f.map)?;
    let (x, y) = (f.map.domain().clone(), f.map.codomain().clone());
    let mut hypotheses = vec![distributive_entry("domain", &x), distributive_entry("codomain", &y)];
    let table_check = errors.validate();
    let approx_check = check_approx_join(&f.map, &errors);
    for r in [&table_check, &approx_check] {
        if let Err(latrep::Error::HypothesisViolated { condition, witness }) = r {
            hypotheses.push(entry(condition, Some(json!(witness.labels))));
        }
    }
    if table_check.is_ok() {
        hypotheses.push(entry("φ, ψ error-table monotonicity", None));
    }
    if approx_check.is_ok() {
        hypotheses.push(entry("φ(x,y)∧f(x∨y) ≤ f(x)∨f(y) ≤ f(x∨y)∨ψ(x,y)", None));
    }
    let repair = stabilize_join(&f.map, &errors).map_err(rejected(&hypotheses))?;
    let lower: Vec<ElementId> = x.elements().map(|e| y.meet(errors.phi(e, e), f.map.get(e))).collect();
    let upper: Vec<ElementId> = x.elements().map(|e| y.join(f.map.get(e), errors.psi(e, e))).collect();
    if let Some(out) = out {
        let back = write_map_verified(out, &repair.repaired, &f.domain, &f.codomain)?;
        let banded = x.elements().all(|e| y.leq(lower[e.0], back.get(e)) && y.leq(back.get(e), upper[e.0]));
        if back.check_join_hom().is_err() || !banded {
            bail!("{} does not re-check as a join homomorphism inside the band", out.display());
        }
    }
    let report = json!({
        "command": "stabilize",
        "status": "ok",
        "hypotheses": hypotheses,
        "lower_envelope": map_values_json(&repair.lower),
        "upper_envelope": map_values_json(&repair.upper),
        "band": band_json(&x, &y, &lower, &repair.repaired, &upper),
        "output": out.map(|p| p.display().to_string()),
        "map": map_values_json(&repair.repaired),
    });
    Ok(Outcome::ok(report, "join homomorphism within φ(x,x)∧f(x) ≤ F(x) ≤ f(x)∨ψ(x,x)"))
}

pub fn stabilize_nbhd(fpath: &Path, nbhd: &Path, out: Option<&Path>) -> Result<Outcome> {
    let f = read_map(fpath)?;
    let (name, system) = read_neighborhoods(nbhd, f.map.codomain())?;
    let (x, y) = (f.map.domain().clone(), f.map.codomain().clone());
    let mut hypotheses = vec![distributive_entry("domain", &x), distributive_entry("codomain", &y)];
    for (label, r) in [("axioms (i)-(iv)", system.validate()), ("f(x)∨f(y) ∈ N(f(x∨y))", check_neighborhood_approx(&f.map, &system))] {
        hypotheses.push(match r {
            Ok(()) => entry(label, None),
            Err(latrep::Error::HypothesisViolated { condition, witness }) => entry(condition, Some(json!(witness.labels))),
            Err(latrep::Error::AxiomViolated { axiom, witness }) => entry(axiom, Some(json!(witness.labels))),
            Err(e) => return Err(e.into()),
        });
    }
    let repair = stabilize_with_neighborhoods(&f.map, &system).map_err(rejected(&hypotheses))?;
    if let Some(out) = out {
        let back = write_map_verified(out, &repair.repaired, &f.domain, &f.codomain)?;
        let inside = x.elements().all(|e| system.contains(f.map.get(e), back.get(e)));
        if back.check_join_hom().is_err() || !inside {
            bail!("{} does not re-check as a join homomorphism inside N(f(x))", out.display());
        }
    }
    let report = json!({
        "command": "stabilize-nbhd",
        "status": "ok",
        "system": name,
        "hypotheses": hypotheses,
        "lower_envelope": map_values_json(&repair.lower),
        "upper_envelope": map_values_json(&repair.upper),
        "output": out.map(|p| p.display().to_string()),
        "map": map_values_json(&repair.repaired),
    });
    Ok(Outcome::ok(report, format!("join homomorphism with F(x) ∈ N(f(x)) for the {name} system")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DirectionArg {
    Inc,
    Dec,
    Auto,
}

fn points_json(f: &FiniteRealFunction, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| Value::String(format_rational(&f.points()[i]))).collect())
}

pub fn monotone_repair(data: &Path, eps: Option<&str>, direction: DirectionArg, out: Option<&Path>) -> Result<Outcome> {
    let f = read_real_function(data, eps)?;
    let pair = |c: Check<(usize, usize)>| c.err().map(|(a, b)| points_json(&f, &[a, b]));
    let pal = check_pal(&f).err().map(|v| points_json(&f, &[v.triple.0, v.triple.1, v.triple.2]));
    let hypotheses = vec![
        entry(Condition::EpsIncreasing, pair(check_eps_increasing(&f))),
        entry(Condition::EpsDecreasing, pair(check_eps_decreasing(&f))),
        entry("min{f(x),f(y)} − ε ≤ f(z) ≤ max{f(x),f(y)} + ε for x ≤ z ≤ y", pal),
    ];
    let r = match direction {
        DirectionArg::Inc => repair_increasing(&f),
        DirectionArg::Dec => repair_decreasing(&f),
        DirectionArg::Auto => repair_auto(&f),
    }
    .map_err(rejected(&hypotheses))?;
    if let Some(out) = out {
        write_real_function(out, f.points(), &r.values, f.epsilon())?;
        let back = read_real_function(out, Some(&format_rational(f.epsilon())))?;
        let half = f.epsilon() / latrep::monotone::rational(2, 1);
        let close = back.values().iter().zip(f.values()).all(|(g, v)| g - v <= half && v - g <= half);
        let ordered = back.values().windows(2).all(|w| match r.direction {
            latrep::monotone::Direction::Increasing => w[0] <= w[1],
            latrep::monotone::Direction::Decreasing => w[0] >= w[1],
        });
        if back.values() != r.values.as_slice() || !close || !ordered {
            bail!("{} does not re-check as a {} repair within ε/2", out.display(), r.direction);
        }
    }
    let (bx, bz) = r.binding;
    let report = json!({
        "command": "monotone-repair",
        "status": "ok",
        "epsilon": format_rational(f.epsilon()),
        "hypotheses": hypotheses,
        "direction": r.direction.to_string(),
        "points": rationals_json(f.points()),
        "values": rationals_json(f.values()),
        "envelope": rationals_json(&r.envelope),
        "g": rationals_json(&r.values),
        "sup_error": format_rational(&r.sup_error),
        "binding": { "x": format_rational(&f.points()[bx]), "z": format_rational(&f.points()[bz]) },
        "output": out.map(|p| p.display().to_string()),
    });
    let summary = format!("{} repair, sup-error {}", r.direction, format_rational(&r.sup_error));
    Ok(Outcome::ok(report, summary))
}

pub fn hasse(path: &Path, out: &Path) -> Result<Outcome> {
    let l = read_lattice(path)?;
    write_text(out, &hasse_dot(&l))?;
    let report = json!({
        "command": "hasse-dot",
        "status": "ok",
        "elements": l.len(),
        "covers": l.covers().len(),
        "output": out.display().to_string(),
    });
    Ok(Outcome::ok(report, format!("wrote {} cover edges to {}", l.covers().len(), out.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Lower,
    Upper,
}

pub fn oracle_envelope(path: &Path, mode: ModeArg) -> Result<Outcome> {
    let f = read_map(path)?.map;
    let (brute, fixed) = match mode {
        ModeArg::Lower => (brute_force_envelope(&f, EnvelopeMode::Lower)?, lower_envelope(&f)?),
        ModeArg::Upper => (brute_force_envelope(&f, EnvelopeMode::Upper)?, upper_envelope(&f)?),
    };
    let agree = brute == fixed;
    let report = json!({
        "command": "oracle envelope",
        "status": if agree { "ok" } else { "mismatch" },
        "mode": if mode == ModeArg::Lower { "lower" } else { "upper" },
        "brute_force": map_values_json(&brute),
        "fixed_point": map_values_json(&fixed),
        "agree": agree,
    });
    let summary = if agree {
        "brute-force and fixed-point envelopes agree"
    } else {
        "brute-force and fixed-point envelopes differ"
    };
    Ok(Outcome {
        report,
        summary: summary.into(),
        ok: agree,
    })
}

pub fn oracle_join_homs(domain: &str, codomain: &str) -> Result<Outcome> {
    let here = Path::new(".");
    let x = lattice_from_value(&Value::String(domain.into()), here, "domain")?;
    let y = lattice_from_value(&Value::String(codomain.into()), here, "codomain")?;
    let budget = budget()?;
    let homs = enumerate_join_homs(&x.lattice, &y.lattice, budget)?;
    let report = json!({
        "command": "oracle join-homs",
        "status": "ok",
        "budget": budget,
        "count": homs.len(),
        "maps": homs.iter().map(map_values_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(report, format!("{} join homomorphisms", homs.len())))
}

pub fn oracle_sandwich(phi: &Path, psi: &Path, out: Option<&Path>) -> Result<Outcome> {
    let lower = read_map(phi)?;
    let upper = read_map(psi)?;
    let budget = budget()?;
    let found = sandwich_exists_brute(&lower.map, &upper.map, budget)?;
    if let (Some(out), Some(h)) = (out, &found) {
        write_map_verified(out, h, &lower.domain, &lower.codomain)?;
    }
    let report = json!({
        "command": "oracle sandwich",
        "status": if found.is_some() { "ok" } else { "not-found" },
        "budget": budget,
        "output": out.filter(|_| found.is_some()).map(|p| p.display().to_string()),
        "map": found.as_ref().map(map_values_json),
    });
    let summary = if found.is_some() {
        "a join homomorphism lies between Φ and Ψ"
    } else {
        "no join homomorphism lies between Φ and Ψ"
    };
    Ok(Outcome {
        report,
        summary: summary.into(),
        ok: found.is_some(),
    })
}

pub fn oracle_naive_boolean(path: &Path, eps: &str, out: Option<&Path>) -> Result<Outcome> {
    let f = read_map(path)?;
    let y = f.map.codomain().clone();
    let e = y.id_at(eps, "--eps")?;
    let c = naive_boolean_correction(&f.map, e)?;
    if let Some(out) = out {
        let back = write_map_verified(out, &c.map, &f.domain, &f.codomain)?;
        if back.check_join_hom().is_err() {
            bail!("{} does not re-check as a join homomorphism", out.display());
        }
    }
    let report = json!({
        "command": "oracle naive-boolean",
        "status": "ok",
        "eps": eps,
        "join_hom": pair_entry("g(x∨y) = g(x)∨g(y)", f.map.domain(), c.join_hom),
        "meet_hom": pair_entry("g(x∧y) = g(x)∧g(y)", f.map.domain(), c.meet_hom),
        "max_symmetric_difference": y.label(c.max_symmetric_difference),
        "within_eps": c.within_eps,
        "output": out.map(|p| p.display().to_string()),
        "map": map_values_json(&c.map),
    });
    let summary = format!(
        "g = f ∖ {eps}: join hom {}, meet hom {}",
        c.join_hom.is_ok(),
        c.meet_hom.is_ok()
    );
    Ok(Outcome::ok(report, summary))
}
