//! JSON and CSV file formats.
//!
//! Lattice references inside map files are either a builtin name such as
//! `"divisor:12"`, a path (relative to the referring file), or an inline
//! lattice object.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use latrep::builders::{boolean_algebra, chain, divisor_lattice};
use latrep::monotone::{format_rational, parse_rational, FiniteRealFunction, Rational};
use latrep::neighborhoods::{
    congruence_system, embedded_prime_support_system, prime_support_on, principal_ideal_system, Congruence,
    NeighborhoodSystem,
};
use latrep::stabilize::ErrorPair;
use latrep::{ElementId, Lattice, LatticeMap};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    pub labels: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl LatticeFile {
    pub fn of(l: &Lattice) -> Self {
        LatticeFile {
            labels: l.labels().to_vec(),
            covers: l
                .covers()
                .into_iter()
                .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
                .collect(),
        }
    }

    pub fn build(&self) -> latrep::Result<Lattice> {
        Lattice::from_covers(&self.labels, &self.covers)
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    write_text(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn builtin_lattice(spec: &str) -> Option<latrep::Result<Lattice>> {
    let (kind, n) = spec.split_once(':')?;
    let n: u64 = n.parse().ok()?;
    Some(match kind {
        "chain" => chain(n as usize),
        "boolean" => u32::try_from(n)
            .map_err(|_| latrep::Error::InvalidParameter(format!("{n} atoms")))
            .and_then(boolean_algebra),
        "divisor" => divisor_lattice(n),
        _ => return None,
    })
}

/// A parsed lattice together with the JSON that refers to it, so output
/// files can refer to it the same way.
#[derive(Debug, Clone)]
pub struct LatticeRef {
    pub lattice: Arc<Lattice>,
    pub json: Value,
}

pub fn lattice_from_value(value: &Value, base: &Path, at: &str) -> Result<LatticeRef> {
    match value {
        Value::String(s) => {
            if let Some(built) = builtin_lattice(s) {
                let l = built.with_context(|| format!("{at}: builtin `{s}`"))?;
                return Ok(LatticeRef {
                    lattice: Arc::new(l),
                    json: value.clone(),
                });
            }
            let path = base.join(s);
            let l = read_lattice(&path).with_context(|| format!("{at}: lattice file {}", path.display()))?;
            Ok(LatticeRef {
                json: serde_json::to_value(LatticeFile::of(&l))?,
                lattice: Arc::new(l),
            })
        }
        Value::Object(_) => {
            let file: LatticeFile =
                serde_json::from_value(value.clone()).with_context(|| format!("{at}: malformed lattice object"))?;
            let l = file.build().with_context(|| at.to_string())?;
            Ok(LatticeRef {
                lattice: Arc::new(l),
                json: value.clone(),
            })
        }
        _ => bail!("{at}: expected a builtin name, a path or a lattice object"),
    }
}

pub fn read_lattice(path: &Path) -> Result<Lattice> {
    if let Some(built) = path.to_str().and_then(builtin_lattice) {
        return Ok(built?);
    }
    let value = read_json(path)?;
    let file: LatticeFile =
        serde_json::from_value(value).with_context(|| format!("malformed lattice file {}", path.display()))?;
    Ok(file.build()?)
}

pub fn lattice_json(l: &Lattice) -> Value {
    serde_json::to_value(LatticeFile::of(l)).expect("lattice serializes")
}

fn label_at(l: &Lattice, label: &str, at: &str) -> Result<ElementId> {
    Ok(l.id_at(label, at)?)
}

pub struct MapFile {
    pub map: LatticeMap,
    pub domain: LatticeRef,
    pub codomain: LatticeRef,
}

pub fn map_from_value(value: &Value, base: &Path, at: &str) -> Result<MapFile> {
    let obj = value.as_object().ok_or_else(|| anyhow!("{at}: expected a map object"))?;
    let field = |k: &str| obj.get(k).ok_or_else(|| anyhow!("{at}: missing `{k}`"));
    let domain = lattice_from_value(field("domain")?, base, &format!("{at}.domain"))?;
    let codomain = lattice_from_value(field("codomain")?, base, &format!("{at}.codomain"))?;
    let values = field("values")?
        .as_object()
        .ok_or_else(|| anyhow!("{at}.values: expected an object from domain labels to codomain labels"))?;
    let mut image = vec![None; domain.lattice.len()];
    for (k, v) in values {
        let pos = format!("{at}.values.{k}");
        let x = label_at(&domain.lattice, k, &pos)?;
        let y = v.as_str().ok_or_else(|| anyhow!("{pos}: expected a label string"))?;
        image[x.0] = Some(label_at(&codomain.lattice, y, &pos)?);
    }
    let values = image
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| anyhow!("{at}.values: no value for `{}`", domain.lattice.label(ElementId(i)))))
        .collect::<Result<Vec<_>>>()?;
    let map = LatticeMap::new(domain.lattice.clone(), codomain.lattice.clone(), values)?;
    Ok(MapFile { map, domain, codomain })
}

pub fn read_map(path: &Path) -> Result<MapFile> {
    let value = read_json(path)?;
    map_from_value(&value, &base_dir(path), &path.display().to_string())
}

pub fn map_values_json(m: &LatticeMap) -> Value {
    let (x, y) = (m.domain(), m.codomain());
    Value::Object(
        x.elements()
            .map(|e| (x.label(e).to_string(), Value::String(y.label(m.get(e)).to_string())))
            .collect(),
    )
}

/// Builtin references are kept, anything else is inlined so the file stands
/// on its own.
fn portable(r: &LatticeRef) -> Value {
    match &r.json {
        Value::String(s) if builtin_lattice(s).is_some() => r.json.clone(),
        _ => lattice_json(&r.lattice),
    }
}

pub fn map_json(m: &LatticeMap, domain: &LatticeRef, codomain: &LatticeRef) -> Value {
    json!({
        "domain": portable(domain),
        "codomain": portable(codomain),
        "values": map_values_json(m),
    })
}

/// Writes a map and reads it back; the caller re-checks the property it
/// claims on the returned copy.
pub fn write_map_verified(path: &Path, m: &LatticeMap, domain: &LatticeRef, codomain: &LatticeRef) -> Result<LatticeMap> {
    write_json(path, &map_json(m, domain, codomain))?;
    let back = read_map(path)?.map;
    if back.values() != m.values() || **back.domain() != **m.domain() || **back.codomain() != **m.codomain() {
        bail!("round trip of {} changed the map", path.display());
    }
    Ok(back)
}

/// Splits an `"x,y"` key into two domain labels, trying every comma so
/// labels that contain commas still resolve. Ambiguous keys are rejected.
pub fn split_pair(l: &Lattice, key: &str, at: &str) -> Result<(ElementId, ElementId)> {
    let found: Vec<(ElementId, ElementId)> = key
        .match_indices(',')
        .filter_map(|(i, _)| Some((l.id(&key[..i])?, l.id(&key[i + 1..])?)))
        .collect();
    match found.as_slice() {
        [one] => Ok(*one),
        [] => bail!("{at}: `{key}` is not a pair of domain labels"),
        _ => bail!("{at}: `{key}` splits into domain labels in more than one way"),
    }
}

/// Reads one error table. The file holds either the bare table or an object
/// with the table under `key`; `"*"` gives a default for missing pairs.
fn error_table(path: &Path, key: &str, x: &Lattice, y: &Lattice) -> Result<Vec<ElementId>> {
    let value = read_json(path)?;
    let at = path.display().to_string();
    let table = match value.get(key) {
        Some(inner) => inner,
        None => &value,
    };
    let table = table.as_object().ok_or_else(|| anyhow!("{at}: expected an object keyed by \"x,y\""))?;
    let n = x.len();
    let mut cells: Vec<Option<ElementId>> = vec![None; n * n];
    let mut default = None;
    for (k, v) in table {
        let pos = format!("{at}.{key}.{k}");
        let label = v.as_str().ok_or_else(|| anyhow!("{pos}: expected a label string"))?;
        let value = label_at(y, label, &pos)?;
        if k == "*" {
            default = Some(value);
            continue;
        }
        let (a, b) = split_pair(x, k, &pos)?;
        cells[a.0 * n + b.0] = Some(value);
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.or(default).ok_or_else(|| {
                anyhow!(
                    "{at}: no {key} value for `{},{}` and no \"*\" default",
                    x.label(ElementId(i / n)),
                    x.label(ElementId(i % n))
                )
            })
        })
        .collect()
}

pub fn read_error_pair(phi: &Path, psi: &Path, f: &LatticeMap) -> Result<ErrorPair> {
    let (x, y) = (f.domain(), f.codomain());
    let p = error_table(phi, "phi", x, y)?;
    let q = error_table(psi, "psi", x, y)?;
    Ok(ErrorPair::new(x.clone(), y.clone(), p, q)?)
}

fn label_list(l: &Lattice, v: &Value, at: &str) -> Result<Vec<ElementId>> {
    let items = v.as_array().ok_or_else(|| anyhow!("{at}: expected a list of labels"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let pos = format!("{at}[{i}]");
            let s = s.as_str().ok_or_else(|| anyhow!("{pos}: expected a label string"))?;
            label_at(l, s, &pos)
        })
        .collect()
}

/// Neighborhood system over `y`: a builtin or explicit classes.
pub fn read_neighborhoods(path: &Path, y: &Arc<Lattice>) -> Result<(String, NeighborhoodSystem)> {
    let value = read_json(path)?;
    let at = path.display().to_string();
    let obj = value.as_object().ok_or_else(|| anyhow!("{at}: expected an object"))?;
    if let Some(b) = obj.get("builtin") {
        let name = b.as_str().ok_or_else(|| anyhow!("{at}.builtin: expected a string"))?;
        let system = match name {
            "principal-ideal" => principal_ideal_system(y.clone())?,
            "prime-support" => prime_support_on(y.clone())?,
            "pullback-prime-support" => embedded_prime_support_system(y.clone())?,
            "congruence" => {
                let classes = obj
                    .get("classes")
                    .and_then(Value::as_array)
                    .ok_or_else(|| anyhow!("{at}.classes: congruence needs a list of classes"))?;
                let classes = classes
                    .iter()
                    .enumerate()
                    .map(|(i, c)| label_list(y, c, &format!("{at}.classes[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                congruence_system(&Congruence::from_partition(y.clone(), classes)?)?
            }
            other => bail!("{at}.builtin: unknown neighborhood system `{other}`"),
        };
        return Ok((name.to_string(), system));
    }
    let classes = obj
        .get("classes")
        .and_then(Value::as_object)
        .ok_or_else(|| anyhow!("{at}: expected `builtin` or a `classes` object"))?;
    let mut listed: HashMap<ElementId, Vec<ElementId>> = HashMap::new();
    for (z, members) in classes {
        let pos = format!("{at}.classes.{z}");
        listed.insert(label_at(y, z, &pos)?, label_list(y, members, &pos)?);
    }
    let classes = y
        .elements()
        .map(|z| {
            listed
                .remove(&z)
                .ok_or_else(|| anyhow!("{at}.classes: no class for `{}`", y.label(z)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(("explicit".to_string(), NeighborhoodSystem::from_classes(y.clone(), classes)?))
}

fn rational_at(s: &str, at: &str) -> Result<Rational> {
    parse_rational(s).with_context(|| at.to_string())
}

fn rational_value(v: &Value, at: &str) -> Result<Rational> {
    match v {
        Value::String(s) => rational_at(s, at),
        Value::Number(n) => rational_at(&n.to_string(), at),
        _ => bail!("{at}: expected a rational as \"p/q\" or a number"),
    }
}

/// `(x, f(x))` pairs from CSV (header optional) or JSON
/// `{"pairs": [[x, fx], ...], "eps": q}`. A command-line ε takes precedence.
pub fn read_real_function(path: &Path, eps: Option<&str>) -> Result<FiniteRealFunction> {
    let at = path.display().to_string();
    let (pairs, file_eps) = if path.extension().is_some_and(|e| e == "json") {
        let value = read_json(path)?;
        let pairs = value
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("{at}.pairs: expected a list of [x, f(x)] pairs"))?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let pos = format!("{at}.pairs[{i}]");
                match p.as_array().map(Vec::as_slice) {
                    Some([x, fx]) => Ok((rational_value(x, &pos)?, rational_value(fx, &pos)?)),
                    _ => bail!("{pos}: expected [x, f(x)]"),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let file_eps = value.get("eps").map(|e| rational_value(e, &format!("{at}.eps"))).transpose()?;
        (pairs, file_eps)
    } else {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .with_context(|| format!("cannot read {at}"))?;
        let mut pairs = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.with_context(|| format!("{at}: malformed CSV"))?;
            let pos = format!("{at}:{}", i + 1);
            if record.len() != 2 {
                bail!("{pos}: expected two columns x,f(x)");
            }
            match (parse_rational(&record[0]), parse_rational(&record[1])) {
                (Ok(x), Ok(fx)) => pairs.push((x, fx)),
                _ if i == 0 => continue,
                _ => bail!("{pos}: `{}`,`{}` are not rationals", &record[0], &record[1]),
            }
        }
        (pairs, None)
    };
    let eps = match eps {
        Some(e) => rational_at(e, "--eps")?,
        None => file_eps.ok_or_else(|| anyhow!("no ε given: pass --eps or an `eps` field"))?,
    };
    let (points, values) = pairs.into_iter().unzip();
    Ok(FiniteRealFunction::new(points, values, eps)?)
}

pub fn rationals_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(format_rational(v))).collect())
}

pub fn write_real_function(path: &Path, points: &[Rational], values: &[Rational], eps: &Rational) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        let pairs: Vec<Value> = points
            .iter()
            .zip(values)
            .map(|(x, v)| json!([format_rational(x), format_rational(v)]))
            .collect();
        write_json(path, &json!({ "pairs": pairs, "eps": format_rational(eps) }))
    } else {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(["x", "g"])?;
        for (x, v) in points.iter().zip(values) {
            w.write_record([format_rational(x), format_rational(v)])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn labels_json(l: &Lattice, ids: &[ElementId]) -> Value {
    Value::Array(ids.iter().map(|&i| Value::String(l.label(i).to_string())).collect())
}

pub fn hasse_dot(l: &Lattice) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for e in l.elements() {
        out.push_str(&format!("  {};\n", quote(l.label(e))));
    }
    for (a, b) in l.covers() {
        out.push_str(&format!("  {} -> {};\n", quote(l.label(a)), quote(l.label(b))));
    }
    out.push_str("}\n");
    out
}
