//! Named worked examples with frozen expected results.
//!
//! Each fixture is a problem document (see [`crate::schema`]) extended with
//! a name, a provenance marker and a list of expected entries.  An entry
//! names an operation, its arguments (subgroup names, integers, elements),
//! an optional power `k` of the endomorphism to use instead of `α`, and
//! the expected value.  Where the value is a subgroup it is given by name
//! and compared by equality, not by syntax.
//!
//! Provenance (`source`):
//! * `reference` — a value worked out by hand from the definitions;
//! * `oracle` — a value frozen from an independent computation, named by
//!   the entry's `oracle` field: `brute-force` (element sets),
//!   `dense-window` (dense GF(p) elimination) or `solve-and-apply` (a solution
//!   verified by applying the endomorphism); the integration tests recompute
//!   each kind;
//! * `smoke` — a smoke case whose answer is immediate.

use crate::engine::{self, Config, Universe};
use crate::error::{Error, Result};
use crate::finite::{FiniteEndo, FiniteUniverse};
use crate::index::{Index, IndexResult};
use crate::schema::{self, Problem};
use crate::seq::{BandedEndo, SeqUniverse, SeqVector};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

const DATA: &[(&str, &str)] = &[
    ("even-pair-sum-p2", include_str!("data/even-pair-sum-p2.json")),
    ("even-pair-sum-p3", include_str!("data/even-pair-sum-p3.json")),
    ("shift-cofinite", include_str!("data/shift-cofinite.json")),
    ("cp3-nilpotent-flag-p2", include_str!("data/cp3-nilpotent-flag-p2.json")),
    ("cp3-nilpotent-flag-p3", include_str!("data/cp3-nilpotent-flag-p3.json")),
    ("cp2-swap", include_str!("data/cp2-swap.json")),
    ("laurent-coordinate-permutation", include_str!("data/laurent-coordinate-permutation.json")),
    ("laurent-shift-p2", include_str!("data/laurent-shift-p2.json")),
    ("laurent-shift-p3", include_str!("data/laurent-shift-p3.json")),
    ("laurent-one-plus-shift-p3", include_str!("data/laurent-one-plus-shift-p3.json")),
    ("identity-smoke", include_str!("data/identity-smoke.json")),
];

/// How an expected value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Reference,
    Oracle,
    Smoke,
}

/// A registered fixture.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub source: Source,
    pub description: String,
    /// The full document, loadable with [`schema::problem_from_value`].
    pub document: Value,
}

impl Fixture {
    pub fn problem(&self) -> Result<Problem> {
        schema::problem_from_value(&self.document)
    }

    pub fn entries(&self) -> Vec<Value> {
        self.document.get("expected").and_then(Value::as_array).cloned().unwrap_or_default()
    }
}

fn parse(name: &str, text: &str) -> Result<Fixture> {
    let document: Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("fixture {name}: malformed JSON: {e}")))?;
    let field = |k: &str| document.get(k).cloned().unwrap_or(Value::Null);
    let source: Source = serde_json::from_value(field("source"))
        .map_err(|e| Error::Input(format!("fixture {name}: bad source: {e}")))?;
    if field("name").as_str() != Some(name) {
        return Err(Error::Input(format!("fixture {name}: name field does not match the registry")));
    }
    let description = field("description").as_str().unwrap_or_default().to_string();
    Ok(Fixture { name: name.to_string(), source, description, document })
}

/// Names of every registered fixture, in registry order.
pub fn names() -> Vec<&'static str> {
    DATA.iter().map(|(n, _)| *n).collect()
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (_, text) = DATA.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    parse(name, text)
}

pub fn registry() -> Result<Vec<Fixture>> {
    DATA.iter().map(|(n, t)| parse(n, t)).collect()
}

/// Outcome of one expected entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub op: String,
    pub args: Value,
    pub power: usize,
    pub source: Source,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

/// Outcome of every entry of a fixture.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub source: Source,
    pub outcomes: Vec<EntryOutcome>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    /// The failing entries, each with both values.
    pub fn mismatches(&self) -> Vec<String> {
        self.outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| {
                format!(
                    "{}: {} {} (k = {}): expected {}, got {}",
                    self.name, o.op, o.args, o.power, o.expected, o.actual
                )
            })
            .collect()
    }
}

/// What the runner needs beyond the engine contract.
pub trait FixtureUniverse: Universe {
    fn parse_element(&self, v: &Value) -> Result<Self::Element>;
    fn power(&self, e: &Self::Endo, k: usize) -> Result<Self::Endo>;
    /// Lowest exponent of a Laurent series; `None` for zero.
    fn valuation(&self, _x: &Self::Element) -> Result<Option<i64>> {
        Err(Error::Capability("valuations need the Laurent universe".into()))
    }
    /// Whether `α^n(x) = h` has a Laurent polynomial solution supported in
    /// `[lo, hi)`.
    fn solve_power(&self, _e: &Self::Endo, _n: usize, _h: &Self::Element, _lo: i64, _hi: i64) -> Result<bool> {
        Err(Error::Capability("windowed preimages need the Laurent universe".into()))
    }
}

impl FixtureUniverse for FiniteUniverse {
    fn parse_element(&self, v: &Value) -> Result<u32> {
        schema::finite_element(self.group(), v)
    }

    fn power(&self, e: &FiniteEndo, k: usize) -> Result<FiniteEndo> {
        Ok(e.power(self.group(), k))
    }
}

impl FixtureUniverse for SeqUniverse {
    fn parse_element(&self, v: &Value) -> Result<SeqVector> {
        schema::laurent_element(self.field().p(), v)
    }

    fn power(&self, e: &BandedEndo, k: usize) -> Result<BandedEndo> {
        crate::seq::power(e, k)
    }

    fn valuation(&self, x: &SeqVector) -> Result<Option<i64>> {
        Ok(x.min())
    }

    fn solve_power(&self, e: &BandedEndo, n: usize, h: &SeqVector, lo: i64, hi: i64) -> Result<bool> {
        Ok(self.solve_power_preimage(e, n, h, lo, hi)?.is_some())
    }
}

fn index_json(i: &Index) -> Value {
    match i.to_u64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

fn index_result_json(i: &IndexResult) -> Value {
    match i {
        IndexResult::Finite(i) => index_json(i),
        IndexResult::Infinite => json!("infinite"),
    }
}

/// `actual` agrees with `expected` on every key `expected` mentions; arrays
/// in `expected` under `*_prefix` keys need only be prefixes.
fn matches(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, ev)| match k.strip_suffix("_prefix") {
            Some(base) => match (ev, a.get(base)) {
                (Value::Array(p), Some(Value::Array(full))) => {
                    p.len() <= full.len() && p.iter().zip(full).all(|(x, y)| matches(x, y))
                }
                _ => false,
            },
            None => a.get(k).is_some_and(|av| matches(ev, av)),
        }),
        _ => expected == actual,
    }
}

struct Ctx<'a, U: FixtureUniverse> {
    u: &'a U,
    e: U::Endo,
    subs: &'a BTreeMap<String, U::Subgroup>,
    cfg: &'a Config,
}

impl<U: FixtureUniverse> Ctx<'_, U> {
    fn sub(&self, v: &Value) -> Result<&U::Subgroup> {
        let name = v.as_str().ok_or_else(|| Error::Input(format!("expected a subgroup name, got {v}")))?;
        self.subs.get(name).ok_or_else(|| Error::Input(format!("no subgroup named {name}")))
    }

    fn int(&self, v: &Value) -> Result<i64> {
        v.as_i64().ok_or_else(|| Error::Input(format!("expected an integer, got {v}")))
    }

    /// Compares a computed subgroup with the named expected one.
    fn same(&self, expected: &Value, actual: &U::Subgroup) -> Result<(Value, bool)> {
        let pass = match expected.as_str().and_then(|n| self.subs.get(n)) {
            Some(want) => self.u.equal(want, actual)?,
            None => false,
        };
        Ok((if pass { expected.clone() } else { self.u.describe(actual) }, pass))
    }

    fn same_list(&self, expected: &Value, actual: &[U::Subgroup]) -> Result<(Value, bool)> {
        let want = expected.as_array().cloned().unwrap_or_default();
        let mut out = Vec::new();
        let mut pass = want.len() == actual.len();
        for (i, a) in actual.iter().enumerate() {
            let (v, ok) = match want.get(i) {
                Some(w) => self.same(w, a)?,
                None => (self.u.describe(a), false),
            };
            pass &= ok;
            out.push(v);
        }
        Ok((Value::Array(out), pass))
    }

    fn run(&self, op: &str, args: &[Value], expected: &Value) -> Result<(Value, bool)> {
        let (u, e, cfg) = (self.u, &self.e, self.cfg);
        let arg = |i: usize| args.get(i).ok_or_else(|| Error::Input(format!("{op}: missing argument {i}")));
        let plain = |actual: Value| {
            let pass = matches(expected, &actual);
            Ok((actual, pass))
        };
        match op {
            "displacement" => plain(index_json(&engine::displacement_index(u, e, self.sub(arg(0)?)?)?)),
            "minus_chain" => {
                let n = self.int(arg(1)?)? as usize;
                self.same_list(expected, &engine::minus_chain(u, e, self.sub(arg(0)?)?, n)?.terms)
            }
            "plus_chain" => {
                let n = self.int(arg(1)?)? as usize;
                self.same_list(expected, &engine::plus_chain(u, e, self.sub(arg(0)?)?, n, cfg)?.terms)
            }
            "u_plus" => self.same(expected, &engine::u_plus(u, e, self.sub(arg(0)?)?, cfg)?.0),
            "u_minus" => self.same(expected, &engine::u_minus(u, e, self.sub(arg(0)?)?, cfg)?.0),
            "image" => self.same(expected, &u.image(e, self.sub(arg(0)?)?, cfg)?.0),
            "preimage" => self.same(expected, &u.preimage(e, self.sub(arg(0)?)?, self.sub(arg(1)?)?)?),
            "intersect" => self.same(expected, &u.intersect(self.sub(arg(0)?)?, self.sub(arg(1)?)?)?),
            "join" => self.same(expected, &u.join(self.sub(arg(0)?)?, self.sub(arg(1)?)?, cfg)?.0),
            "script_l" => self.same(expected, &engine::script_l(u, e, self.sub(arg(0)?)?, cfg)?.0),
            "k_group" => self.same(expected, &engine::k_group(u, e, self.sub(arg(0)?)?, cfg)?.0),
            "orbit_intersection" => {
                // S ∩ α(S) ∩ … ∩ α^n(S).
                let s = self.sub(arg(0)?)?;
                let n = self.int(arg(1)?)? as usize;
                let (mut img, mut acc) = (s.clone(), s.clone());
                for _ in 0..n {
                    img = u.image(e, &img, cfg)?.0;
                    acc = u.intersect(&acc, &img)?;
                }
                self.same(expected, &acc)
            }
            "tidy_above_step" => {
                let (n, v, _) = engine::tidy_above_step(u, e, self.sub(arg(0)?)?, cfg)?;
                let d = engine::displacement_index(u, e, &v)?;
                plain(json!({"n": n, "displacement": index_json(&d)}))
            }
            "is_tidy_above" => plain(json!(engine::is_tidy_above(u, e, self.sub(arg(0)?)?, cfg)?.0)),
            "tidying" => {
                let t = engine::tidying_procedure(u, e, self.sub(arg(0)?)?, cfg)?;
                let ds: Vec<Value> = t.displacements.iter().map(index_json).collect();
                plain(json!({"n": t.n, "displacements": ds, "tidy": t.report.tidy()}))
            }
            "check_tidy" => {
                let r = engine::check_tidy(u, e, self.sub(arg(0)?)?, cfg)?;
                let seq: Vec<Value> = r.tb2_sequence.iter().map(index_result_json).collect();
                plain(json!({
                    "ta": r.ta, "tb1": r.tb1, "tb2": r.tb2, "tidy": r.tidy(),
                    "displacement": index_json(&r.displacement), "tb2_sequence": seq,
                }))
            }
            "scale" => plain(index_json(&engine::scale(u, e, self.sub(arg(0)?)?, cfg)?.scale)),
            "moller" => {
                let n = self.int(arg(1)?)? as usize;
                let m = engine::moller_scale(u, e, self.sub(arg(0)?)?, n)?;
                let log: Vec<Value> = m.index_log.iter().map(|(_, a)| index_json(a)).collect();
                plain(json!({"scale": index_json(&m.scale), "log": log, "certified": !m.certificate.is_inconclusive()}))
            }
            "index" => plain(index_result_json(&u.index(self.sub(arg(0)?)?, self.sub(arg(1)?)?)?)),
            "member" => plain(json!(u.member(&u.parse_element(arg(1)?)?, self.sub(arg(0)?)?))),
            "contains" => plain(json!(u.contains(self.sub(arg(0)?)?, self.sub(arg(1)?)?)?)),
            "equal" => plain(json!(u.equal(self.sub(arg(0)?)?, self.sub(arg(1)?)?)?)),
            "valuations" => {
                // Valuations of α^k(t^n) for k = 0..=K; zero is "inf".
                let n = self.int(arg(0)?)?;
                let kmax = self.int(arg(1)?)? as usize;
                let mut x = u.parse_element(&json!([[n, 1]]))?;
                let mut out = Vec::new();
                for k in 0..=kmax {
                    if k > 0 {
                        x = u.apply(e, &x)?;
                    }
                    out.push(u.valuation(&x)?.map_or(json!("inf"), |v| json!(v)));
                }
                plain(Value::Array(out))
            }
            "solve_power" => {
                let n = self.int(arg(0)?)? as usize;
                let h = u.parse_element(arg(1)?)?;
                let (lo, hi) = (self.int(arg(2)?)?, self.int(arg(3)?)?);
                plain(json!(u.solve_power(e, n, &h, lo, hi)?))
            }
            _ => Err(Error::Input(format!("unknown fixture operation {op}"))),
        }
    }
}

fn run_entries<U: FixtureUniverse>(
    u: &U,
    e: &U::Endo,
    subs: &BTreeMap<String, U::Subgroup>,
    entries: &[Value],
    default_source: Source,
    cfg: &Config,
) -> Result<Vec<EntryOutcome>> {
    let mut powers: BTreeMap<usize, U::Endo> = BTreeMap::new();
    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        let op = entry.get("op").and_then(Value::as_str).ok_or_else(|| Error::Input("entry without \"op\"".into()))?;
        let args = entry.get("args").cloned().unwrap_or(json!([]));
        let power = entry.get("power").and_then(Value::as_u64).unwrap_or(1) as usize;
        let source = match entry.get("source") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| Error::Input(format!("entry source: {e}")))?,
            None => default_source,
        };
        let expected = entry.get("value").cloned().unwrap_or(Value::Null);
        if let std::collections::btree_map::Entry::Vacant(slot) = powers.entry(power) {
            slot.insert(u.power(e, power)?);
        }
        let ctx = Ctx { u, e: powers[&power].clone(), subs, cfg };
        let list = args.as_array().cloned().unwrap_or_default();
        let (actual, pass) = match ctx.run(op, &list, &expected) {
            Ok(r) => r,
            Err(err) => (json!({"error": err.to_string()}), false),
        };
        out.push(EntryOutcome { op: op.to_string(), args, power, source, expected, actual, pass });
    }
    Ok(out)
}

/// Runs every expected entry of a fixture.
pub fn run(fx: &Fixture, cfg: &Config) -> Result<FixtureReport> {
    let entries = fx.entries();
    let outcomes = match fx.problem()? {
        Problem::Finite(p) => run_entries(&p.universe, &p.endo, &p.subgroups, &entries, fx.source, cfg)?,
        Problem::Laurent(p) => run_entries(&p.universe, &p.endo, &p.subgroups, &entries, fx.source, cfg)?,
    };
    Ok(FixtureReport { name: fx.name.clone(), source: fx.source, outcomes })
}

/// Runs the named fixture.
pub fn run_fixture(name: &str, cfg: &Config) -> Result<FixtureReport> {
    run(&fixture(name)?, cfg)
}
