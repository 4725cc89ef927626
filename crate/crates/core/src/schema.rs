//! JSON input and output documents (schema version 1).
//!
//! A problem document names a universe, an endomorphism and some named
//! subgroups:
//!
//! ```json
//! {"schema": 1, "universe": "finite",
//!  "group": {"kind": "cyclic-product", "factors": [2, 2]},
//!  "endo": {"gens": [[1, 0], [0, 1]], "images": [[0, 1], [1, 0]]},
//!  "subgroups": {"D": {"generators": [[1, 1]]}}}
//! ```
//!
//! ```json
//! {"schema": 1, "universe": "laurent", "p": 2,
//!  "endo": {"exceptional": {}, "up_tail": {"period": 1, "shift": 1, "templates": [[[1, 1]]]},
//!           "down_tail": {"period": 1, "shift": 1, "templates": [[[0, 1]]]}},
//!  "subgroups": {"O": {"base": 0}}}
//! ```
//!
//! Subgroups written by the CLI (`describe`) load back unchanged.

use crate::error::{Error, Result};
use crate::finite::{catalog_group, closure, endo_from_map, FiniteEndo, FiniteGroup, FiniteSubgroup, FiniteUniverse};
use crate::gf::Field;
use crate::seq::{BandedEndo, EpcSubgroup, Periodic, SeqUniverse, Sparse, Tail};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u64 = 1;

/// A loaded problem: the universe, the endomorphism and named subgroups in
/// document order (sorted by name).
pub enum Problem {
    Finite(FiniteProblem),
    Laurent(LaurentProblem),
}

pub struct FiniteProblem {
    pub universe: FiniteUniverse,
    pub endo: FiniteEndo,
    pub subgroups: BTreeMap<String, FiniteSubgroup>,
}

pub struct LaurentProblem {
    pub universe: SeqUniverse,
    pub endo: BandedEndo,
    pub subgroups: BTreeMap<String, EpcSubgroup>,
}

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Input(format!("{what}: {e}"))
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let v: Value = serde_json::from_str(text).map_err(input("malformed JSON"))?;
    problem_from_value(&v)
}

pub fn problem_from_value(v: &Value) -> Result<Problem> {
    match v.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(n) => return Err(Error::Input(format!("unsupported schema version {n}"))),
        None => return Err(Error::Input("missing \"schema\": 1".into())),
    }
    match v.get("universe").and_then(Value::as_str) {
        Some("finite") => finite_problem(v).map(Problem::Finite),
        Some("laurent") => laurent_problem(v).map(Problem::Laurent),
        Some(other) => Err(Error::Input(format!("unknown universe \"{other}\" (expected \"finite\" or \"laurent\")"))),
        None => Err(Error::Input("missing \"universe\"".into())),
    }
}

// ---------------------------------------------------------------- finite

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum GroupDesc {
    CyclicProduct { factors: Vec<u32> },
    Cayley { table: Vec<Vec<u32>> },
    Catalog { name: String },
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum ElemDesc {
    Index(u32),
    Coords(Vec<u32>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FiniteEndoDesc {
    Gens { gens: Vec<ElemDesc>, images: Vec<ElemDesc> },
    Map { map: Vec<ElemDesc> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FiniteSubDesc {
    Elements { elements: Vec<ElemDesc> },
    Generators { generators: Vec<ElemDesc> },
}

fn element(g: &FiniteGroup, d: &ElemDesc) -> Result<u32> {
    match d {
        ElemDesc::Index(i) if (*i as usize) < g.order() => Ok(*i),
        ElemDesc::Index(i) => Err(Error::InvalidElement(*i as usize)),
        ElemDesc::Coords(c) => g
            .from_coords(c)
            .ok_or_else(|| Error::Input(format!("coordinates {c:?} do not name an element of this group"))),
    }
}

/// An element of a finite group: an index or a coordinate array.
pub fn finite_element(g: &FiniteGroup, v: &Value) -> Result<u32> {
    let d: ElemDesc = serde_json::from_value(v.clone()).map_err(input("element"))?;
    element(g, &d)
}

fn elements(g: &FiniteGroup, ds: &[ElemDesc]) -> Result<Vec<u32>> {
    ds.iter().map(|d| element(g, d)).collect()
}

pub fn finite_group(v: &Value) -> Result<FiniteGroup> {
    let d: GroupDesc = serde_json::from_value(v.clone()).map_err(input("group"))?;
    match d {
        GroupDesc::CyclicProduct { factors } => FiniteGroup::cyclic_product(&factors),
        GroupDesc::Cayley { table } => FiniteGroup::from_table(table),
        GroupDesc::Catalog { name } => catalog_group(&name),
    }
}

pub fn finite_endo(g: &FiniteGroup, v: &Value) -> Result<FiniteEndo> {
    let d: FiniteEndoDesc = serde_json::from_value(v.clone()).map_err(input("endo"))?;
    match d {
        FiniteEndoDesc::Gens { gens, images } => {
            if gens.len() != images.len() {
                return Err(Error::Input("endo: gens and images differ in length".into()));
            }
            endo_from_map(g, &elements(g, &gens)?, &elements(g, &images)?)
        }
        FiniteEndoDesc::Map { map } => {
            if map.len() != g.order() {
                return Err(Error::Input(format!(
                    "endo: map has {} entries for a group of order {}",
                    map.len(),
                    g.order()
                )));
            }
            let e = FiniteEndo { map: elements(g, &map)? };
            e.validate(g)?;
            Ok(e)
        }
    }
}

pub fn finite_subgroup(g: &FiniteGroup, v: &Value) -> Result<FiniteSubgroup> {
    let d: FiniteSubDesc = serde_json::from_value(v.clone()).map_err(input("subgroup"))?;
    match d {
        FiniteSubDesc::Elements { elements: es } => {
            let mut es = elements(g, &es)?;
            es.sort_unstable();
            es.dedup();
            let s = FiniteSubgroup::from_sorted_unchecked(es);
            s.validate(g)?;
            Ok(s)
        }
        FiniteSubDesc::Generators { generators } => closure(g, &elements(g, &generators)?),
    }
}

fn finite_problem(v: &Value) -> Result<FiniteProblem> {
    let g = finite_group(v.get("group").ok_or_else(|| Error::Input("missing \"group\"".into()))?)?;
    let endo = finite_endo(&g, v.get("endo").ok_or_else(|| Error::Input("missing \"endo\"".into()))?)?;
    let mut subgroups = BTreeMap::new();
    if let Some(m) = v.get("subgroups") {
        let m = m.as_object().ok_or_else(|| Error::Input("\"subgroups\" must be an object".into()))?;
        for (name, d) in m {
            subgroups.insert(name.clone(), finite_subgroup(&g, d)?);
        }
    }
    subgroups.entry("G".to_string()).or_insert_with(|| FiniteSubgroup::whole(&g));
    Ok(FiniteProblem { universe: FiniteUniverse::new(g), endo, subgroups })
}

// ---------------------------------------------------------------- laurent

type Pairs = Vec<(i64, i64)>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TailDesc {
    period: usize,
    shift: Option<i64>,
    shifts: Option<Vec<i64>>,
    templates: Vec<Pairs>,
    start: Option<i64>,
    end: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EndoDesc {
    p: Option<u32>,
    #[serde(default)]
    exceptional: BTreeMap<String, Pairs>,
    up_tail: TailDesc,
    #[serde(default)]
    down_tail: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PeriodicDesc {
    anchor: Option<i64>,
    period: usize,
    templates: Vec<Pairs>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubDesc {
    p: Option<u32>,
    base: i64,
    #[serde(default)]
    constraints: Vec<Pairs>,
    periodic: Option<PeriodicDesc>,
}

fn field_for(p: u32, given: Option<u32>, what: &str) -> Result<Field> {
    if let Some(q) = given {
        if q != p {
            return Err(Error::Input(format!("{what}: p = {q} differs from the problem's p = {p}")));
        }
    }
    Field::new(p).ok_or_else(|| Error::Input(format!("p = {p} is not prime")))
}

fn tail(f: Field, d: &TailDesc, what: &str) -> Result<Tail> {
    let shifts = match (&d.shift, &d.shifts) {
        (Some(s), None) => vec![*s; d.period],
        (None, Some(v)) => v.clone(),
        _ => return Err(Error::Input(format!("{what}: give exactly one of \"shift\" and \"shifts\""))),
    };
    let templates = d.templates.iter().map(|t| Sparse::from_pairs(f, t.iter().copied())).collect();
    Ok(Tail { period: d.period, shifts, templates })
}

/// Parses a banded endomorphism over GF(p).
pub fn laurent_endo(p: u32, v: &Value) -> Result<BandedEndo> {
    let d: EndoDesc = serde_json::from_value(v.clone()).map_err(input("endo"))?;
    let f = field_for(p, d.p, "endo")?;
    let mut exceptional = BTreeMap::new();
    for (k, pairs) in &d.exceptional {
        let n: i64 = k.parse().map_err(|_| Error::Input(format!("endo: row key \"{k}\" is not an integer")))?;
        let row = Sparse::from_pairs(f, pairs.iter().copied());
        if !row.is_zero() {
            exceptional.insert(n, row);
        }
    }
    let up = tail(f, &d.up_tail, "up_tail")?;
    if d.up_tail.end.is_some() {
        return Err(Error::Input("up_tail: \"end\" belongs to the down-tail".into()));
    }
    let start = d.up_tail.start.unwrap_or_else(|| exceptional.keys().next_back().map_or(0, |m| m + 1));
    let (down, down_end) = match &d.down_tail {
        None => (None, None),
        Some(Value::String(s)) if s == "zero" => (None, None),
        Some(other) => {
            let td: TailDesc = serde_json::from_value(other.clone()).map_err(input("down_tail"))?;
            if td.start.is_some() {
                return Err(Error::Input("down_tail: \"start\" belongs to the up-tail".into()));
            }
            (Some(tail(f, &td, "down_tail")?), td.end)
        }
    };
    let end = down_end.unwrap_or_else(|| exceptional.keys().next().map_or(start, |&m| m.min(start)));
    BandedEndo::new(p, end, start, exceptional, up, down)
}

/// Parses a subgroup over GF(p).
pub fn laurent_subgroup(p: u32, v: &Value) -> Result<EpcSubgroup> {
    let d: SubDesc = serde_json::from_value(v.clone()).map_err(input("subgroup"))?;
    let f = field_for(p, d.p, "subgroup")?;
    let constraints = d.constraints.iter().map(|c| Sparse::from_pairs(f, c.iter().copied())).collect();
    let periodic = match d.periodic {
        None => None,
        Some(pd) => {
            if pd.period == 0 {
                return Err(Error::Input("subgroup: periodic.period must be positive".into()));
            }
            let templates: Vec<Sparse> =
                pd.templates.iter().map(|t| Sparse::from_pairs(f, t.iter().copied())).collect();
            let anchor = pd.anchor.unwrap_or_else(|| templates.iter().filter_map(|t| t.min()).min().unwrap_or(d.base));
            Some(Periodic { anchor, period: pd.period, templates })
        }
    };
    Ok(EpcSubgroup { p, base: d.base, constraints, periodic })
}

fn laurent_problem(v: &Value) -> Result<LaurentProblem> {
    let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Input("laurent problem: missing \"p\"".into()))?;
    let p = u32::try_from(p).map_err(|_| Error::Input("p does not fit in 32 bits".into()))?;
    let universe = SeqUniverse::new(p)?;
    let endo = laurent_endo(p, v.get("endo").ok_or_else(|| Error::Input("missing \"endo\"".into()))?)?;
    let mut subgroups = BTreeMap::new();
    if let Some(m) = v.get("subgroups") {
        let m = m.as_object().ok_or_else(|| Error::Input("\"subgroups\" must be an object".into()))?;
        for (name, d) in m {
            subgroups.insert(name.clone(), laurent_subgroup(p, d)?);
        }
    }
    Ok(LaurentProblem { universe, endo, subgroups })
}

/// A Laurent polynomial written as `[[exponent, coefficient], …]`.
pub fn laurent_element(p: u32, v: &Value) -> Result<Sparse> {
    let f = field_for(p, None, "element")?;
    let terms: Vec<(i64, i64)> = serde_json::from_value(v.clone()).map_err(input("Laurent polynomial"))?;
    Ok(Sparse::from_pairs(f, terms))
}

fn pairs(s: &Sparse) -> Value {
    json!(s.terms().iter().map(|&(n, c)| [n, c as i64]).collect::<Vec<_>>())
}

fn tail_json(t: &Tail, key: &str, at: i64) -> Value {
    let mut v = json!({
        "period": t.period,
        "templates": t.templates.iter().map(pairs).collect::<Vec<_>>(),
    });
    if t.shifts.iter().all(|&s| s == t.shifts[0]) {
        v["shift"] = json!(t.shifts[0]);
    } else {
        v["shifts"] = json!(t.shifts);
    }
    v[key] = json!(at);
    v
}

/// The input-schema descriptor of a banded endomorphism.
pub fn endo_to_json(e: &BandedEndo) -> Value {
    let exceptional: serde_json::Map<String, Value> =
        e.exceptional.iter().map(|(n, r)| (n.to_string(), pairs(r))).collect();
    json!({
        "p": e.p,
        "exceptional": exceptional,
        "up_tail": tail_json(&e.up, "start", e.start),
        "down_tail": match &e.down {
            None => json!("zero"),
            Some(d) => tail_json(d, "end", e.end),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_endo_round_trips() {
        let v = json!({
            "p": 2,
            "exceptional": {"-1": [[0, 1]]},
            "up_tail": {"period": 2, "shift": 2, "templates": [[[1, 1], [2, 1]], []], "start": 0},
            "down_tail": "zero"
        });
        let e = laurent_endo(2, &v).unwrap();
        assert_eq!(e.row(4), Sparse::from_pairs(Field::new(2).unwrap(), [(5, 1), (6, 1)]));
        assert_eq!(e.row(-1), Sparse::unit(0));
        let back = laurent_endo(2, &endo_to_json(&e)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn subgroup_output_loads_back() {
        let s = laurent_subgroup(3, &json!({"base": 0, "constraints": [[[6, 1], [8, -1]]]})).unwrap();
        assert_eq!(s.constraints[0].coeff(8), 2);
        let again = laurent_subgroup(3, &serde_json::to_value(&s).unwrap()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn finite_problem_with_coordinates() {
        let doc = r#"{"schema":1,"universe":"finite","group":{"kind":"cyclic-product","factors":[2,2]},
            "endo":{"gens":[[1,0],[0,1]],"images":[[0,1],[1,0]]},"subgroups":{"D":{"generators":[[1,1]]}}}"#;
        let Problem::Finite(fp) = parse_problem(doc).unwrap() else { panic!("finite") };
        assert_eq!(fp.subgroups["D"].order(), 2);
        assert_eq!(fp.subgroups["G"].order(), 4);
    }

    #[test]
    fn bad_schema_version_is_an_input_error() {
        assert!(matches!(parse_problem(r#"{"schema":2}"#), Err(Error::Input(_))));
        assert!(matches!(parse_problem("not json"), Err(Error::Input(_))));
    }
}
