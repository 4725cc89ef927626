//! Property suites over finite groups.
//!
//! Each suite checks one structural fact about tidy subgroups against every
//! subgroup of every case in a corpus of (group, endomorphism) pairs.  The
//! checks compare engine results with direct element-level computations
//! (set products, orbits, coset counts), so a failure points either at the
//! engine or at a mis-stated property.  A counterexample is reported as a
//! problem document that loads back through [`crate::schema`].

use crate::engine::{self, check_tidy, Config};
use crate::error::{Error, Result};
use crate::finite::{
    catalog_group, dicyclic, dihedral, dynamics_subgroups, enumerate_endos, iterate_tidy_family, FiniteEndo,
    FiniteGroup, FiniteSubgroup, FiniteUniverse, CATALOG_NAMES,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Every suite, in the order `check` runs them by default.
pub const SUITES: &[&str] = &[
    "tidy-iff-minimizing",
    "index-bridge",
    "monotone-stabilization",
    "ta-equivalences",
    "script-l-identity",
    "l-invariance",
    "bounded-orbits",
    "intersection",
    "scalesame",
    "powers",
    "powers-converse-fails",
    "alphan",
    "tidy-subgroups",
    "dynamics",
    "exposure-factorization",
    "moller-bridge",
];

/// Groups of order 13 to 16 added to the catalog for the property suites.
const EXTRA_GROUPS: &[&str] = &["C13", "C14", "D7", "C15", "C16", "C4xC4", "C8xC2", "C4xC2xC2", "D8", "Dic4"];

fn extra_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "C13" => FiniteGroup::cyclic_product(&[13]),
        "C14" => FiniteGroup::cyclic_product(&[14]),
        "D7" => dihedral(7),
        "C15" => FiniteGroup::cyclic_product(&[15]),
        "C16" => FiniteGroup::cyclic_product(&[16]),
        "C4xC4" => FiniteGroup::cyclic_product(&[4, 4]),
        "C8xC2" => FiniteGroup::cyclic_product(&[8, 2]),
        "C4xC2xC2" => FiniteGroup::cyclic_product(&[4, 2, 2]),
        "D8" => dihedral(8),
        "Dic4" => dicyclic(4),
        _ => catalog_group(name),
    }
}

/// One group with one endomorphism; the subgroup list is shared by every
/// endomorphism of the same group.
#[derive(Clone)]
pub struct Case {
    pub key: String,
    pub universe: Arc<FiniteUniverse>,
    pub subgroups: Arc<Vec<FiniteSubgroup>>,
    pub endo: FiniteEndo,
}

/// A corpus and how it was obtained.
pub struct Corpus {
    pub cases: Vec<Case>,
    /// Whether every group's endomorphisms were enumerated completely.
    pub exhaustive: bool,
}

/// Every group of order at most `max_order` from the catalog (and, above
/// 12, the extra groups up to 16) with its endomorphisms.
pub fn corpus(max_order: usize, cap: usize, seed: u64) -> Result<Corpus> {
    let mut cases = Vec::new();
    let mut exhaustive = true;
    let names = CATALOG_NAMES.iter().chain(EXTRA_GROUPS);
    for name in names {
        let g = extra_group(name)?;
        if g.order() > max_order {
            continue;
        }
        let en = enumerate_endos(&g, cap, seed)?;
        exhaustive &= en.exhaustive;
        let u = Arc::new(FiniteUniverse::new(g));
        let subgroups = Arc::new(u.subgroups()?);
        for (i, endo) in en.endos.into_iter().enumerate() {
            cases.push(Case {
                key: format!("{name}#{i:05}"),
                universe: Arc::clone(&u),
                subgroups: Arc::clone(&subgroups),
                endo,
            });
        }
    }
    Ok(Corpus { cases, exhaustive })
}

/// The endomorphisms of the finite fixtures, as cases.
pub fn fixture_cases() -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for fx in crate::fixtures::registry()? {
        if let crate::schema::Problem::Finite(p) = fx.problem()? {
            let u = Arc::new(p.universe);
            let subgroups = Arc::new(u.subgroups()?);
            cases.push(Case { key: format!("fixture:{}", fx.name), universe: u, subgroups, endo: p.endo });
        }
    }
    Ok(cases)
}

/// A failing instance, with a loadable problem document.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub detail: String,
    pub fixture: Value,
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// Number of individual checks performed.
    pub checks: usize,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The problem document of a case with some named subgroups.
pub fn case_document(case: &Case, subgroups: &[(&str, &FiniteSubgroup)]) -> Value {
    let g = case.universe.group();
    let subs: serde_json::Map<String, Value> =
        subgroups.iter().map(|(n, s)| (n.to_string(), json!({"elements": s.elements}))).collect();
    json!({
        "schema": 1,
        "universe": "finite",
        "group": {"kind": "cayley", "table": g.table_rows()},
        "endo": {"map": case.endo.map},
        "subgroups": subs,
    })
}

/// Accumulates checks and failures for one suite.
struct Tally<'a> {
    case: &'a Case,
    checks: usize,
    failures: Vec<Counterexample>,
}

impl Tally<'_> {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String, subs: &[(&str, &FiniteSubgroup)]) {
        self.checks += 1;
        if !ok {
            self.failures.push(Counterexample {
                case: self.case.key.clone(),
                detail: detail(),
                fixture: case_document(self.case, subs),
            });
        }
    }
}

/// Element-level helpers on one case.
struct Direct<'a> {
    u: &'a FiniteUniverse,
    e: &'a FiniteEndo,
    cfg: &'a Config,
}

impl Direct<'_> {
    fn order(&self) -> usize {
        self.u.group().order()
    }

    fn sub(&self, mut elems: Vec<u32>) -> FiniteSubgroup {
        elems.sort_unstable();
        elems.dedup();
        FiniteSubgroup::from_sorted_unchecked(elems)
    }

    fn image(&self, s: &FiniteSubgroup) -> FiniteSubgroup {
        self.e.image_of(s)
    }

    /// `U ∩ α^{-1}(S)`.
    fn pre(&self, s: &FiniteSubgroup, ambient: &FiniteSubgroup) -> FiniteSubgroup {
        self.sub(ambient.elements.iter().copied().filter(|&x| s.contains(self.e.apply(x))).collect())
    }

    /// `U_{-k}` for `k = 0..=n`.
    fn minus_terms(&self, u: &FiniteSubgroup, n: usize) -> Vec<FiniteSubgroup> {
        let mut out = vec![u.clone()];
        for _ in 0..n {
            let next = self.pre(out.last().unwrap(), u);
            out.push(next);
        }
        out
    }

    /// `U_j` for `j = 0..=n`.
    fn plus_terms(&self, u: &FiniteSubgroup, n: usize) -> Vec<FiniteSubgroup> {
        let mut out = vec![u.clone()];
        for _ in 0..n {
            let next = u.intersect(&self.image(out.last().unwrap()));
            out.push(next);
        }
        out
    }

    /// Elements of `U` with a regressive sequence inside `U`.
    fn u_plus(&self, u: &FiniteSubgroup) -> FiniteSubgroup {
        self.plus_terms(u, self.order() + 1).pop().unwrap()
    }

    /// Elements of `U` whose forward orbit stays in `U`.
    fn u_minus(&self, u: &FiniteSubgroup) -> FiniteSubgroup {
        let n = self.order() + 1;
        self.sub(
            u.elements
                .iter()
                .copied()
                .filter(|&x| {
                    let mut y = x;
                    (0..n).all(|_| {
                        y = self.e.apply(y);
                        u.contains(y)
                    })
                })
                .collect(),
        )
    }

    /// The eventual image `⋂ α^n(G)`.
    fn par_minus(&self) -> FiniteSubgroup {
        let mut cur = self.u.whole_group();
        for _ in 0..self.order() + 1 {
            cur = self.image(&cur);
        }
        cur
    }

    /// `𝓛_U` straight from its definition: points on forward orbits from
    /// `U_+` that eventually enter `U_-`.
    fn script_l(&self, u: &FiniteSubgroup) -> FiniteSubgroup {
        let up = self.u_plus(u);
        let um = self.u_minus(u);
        let n = self.order() + 1;
        let mut orbit = BTreeSet::new();
        for &y in &up.elements {
            let mut x = y;
            for _ in 0..=n {
                orbit.insert(x);
                x = self.e.apply(x);
            }
        }
        let enters = |x: u32| {
            let mut z = x;
            (0..=n).any(|_| {
                let hit = um.contains(z);
                z = self.e.apply(z);
                hit
            })
        };
        self.sub(orbit.into_iter().filter(|&x| enters(x)).collect())
    }

    fn product(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Vec<u32> {
        self.u.product_set(a, b)
    }

    fn tidy(&self, s: &FiniteSubgroup) -> Result<bool> {
        Ok(check_tidy(self.u, self.e, s, self.cfg)?.tidy())
    }

    fn tidy_above(&self, s: &FiniteSubgroup) -> Result<bool> {
        Ok(engine::is_tidy_above(self.u, self.e, s, self.cfg)?.0)
    }
}

fn idx(a: &FiniteSubgroup, b: &FiniteSubgroup) -> usize {
    a.order() / b.order()
}

fn run_case(suite: &str, case: &Case, cfg: &Config) -> Result<(usize, Vec<Counterexample>)> {
    let u = &*case.universe;
    let e = &case.endo;
    let d = Direct { u, e, cfg };
    let mut t = Tally { case, checks: 0, failures: Vec::new() };
    let subs = &*case.subgroups;
    let n_g = u.group().order();
    match suite {
        "tidy-iff-minimizing" => {
            for s in subs {
                let tidy = d.tidy(s)?;
                let minimizing = d.image(s).is_subgroup_of(s);
                t.check(tidy == minimizing, || format!("tidy = {tidy} but α(U) ≤ U is {minimizing}"), &[("U", s)]);
            }
        }
        "index-bridge" => {
            for s in subs {
                let minus = d.minus_terms(s, 8);
                let plus = d.plus_terms(s, 4);
                for j in 0..=4 {
                    for m in 0..=4 {
                        for l in 0..=m {
                            let lhs = idx(&plus[j].intersect(&minus[l]), &plus[j].intersect(&minus[m]));
                            let rhs = idx(&minus[j + l], &minus[j + m]);
                            t.check(lhs == rhs, || format!("j={j} l={l} m={m}: {lhs} ≠ {rhs}"), &[("U", s)]);
                        }
                    }
                }
            }
        }
        "monotone-stabilization" => {
            for s in subs {
                let m1 = d.pre(s, s);
                let plus = d.plus_terms(s, n_g + 1);
                let a: Vec<usize> = plus.iter().map(|p| idx(p, &p.intersect(&m1))).collect();
                let up = d.u_plus(s);
                let limit = idx(&up, &up.intersect(&m1));
                let mono = a.windows(2).all(|w| w[1] <= w[0]);
                t.check(mono && *a.last().unwrap() == limit, || format!("indices {a:?}, limit {limit}"), &[("U", s)]);
            }
        }
        "ta-equivalences" => {
            for s in subs {
                let up = d.u_plus(s);
                let minus = d.minus_terms(s, 4);
                let first = d.product(&up, &minus[1]) == s.elements;
                let all = (1..=4).all(|n| d.product(&up, &minus[n]) == s.elements);
                let limit = d.product(&up, &d.u_minus(s)) == s.elements;
                t.check(
                    first == all && all == limit,
                    || format!("U_+U_-1: {first}, all n ≤ 4: {all}, U_+U_-: {limit}"),
                    &[("U", s)],
                );
            }
        }
        "script-l-identity" => {
            for s in subs {
                if !d.tidy_above(s)? {
                    continue;
                }
                let (l, _) = engine::script_l(u, e, s, cfg)?;
                let direct = d.script_l(s);
                t.check(
                    l == direct,
                    || format!("V_++ ∩ V_-- = {:?}, direct {:?}", l.elements, direct.elements),
                    &[("U", s)],
                );
            }
        }
        "l-invariance" => {
            for s in subs {
                let l = d.script_l(s);
                let um = d.u_minus(s);
                for (n, v) in d.minus_terms(s, 3).iter().enumerate().skip(1) {
                    let ok = d.script_l(v) == l && d.u_minus(v) == um;
                    t.check(ok, || format!("L or U_- changes at U_-{n}"), &[("U", s)]);
                }
            }
        }
        "bounded-orbits" => {
            let pm = d.par_minus();
            for s in subs {
                if !d.tidy(s)? {
                    continue;
                }
                let wp = d.u_plus(s);
                let wm = d.u_minus(s);
                let ok = s.intersect(&pm).is_subgroup_of(&wp) && s.is_subgroup_of(&wm);
                t.check(ok, || "an element with bounded orbits escapes W_+ or W_-".into(), &[("W", s)]);
            }
        }
        "intersection" => {
            let tidy: Vec<&FiniteSubgroup> =
                subs.iter().filter_map(|s| d.tidy(s).map(|b| b.then_some(s)).transpose()).collect::<Result<_>>()?;
            for (i, a) in tidy.iter().enumerate() {
                for b in &tidy[i..] {
                    let m = a.intersect(b);
                    let ok = d.tidy(&m)?
                        && d.u_plus(&m) == d.u_plus(a).intersect(&d.u_plus(b))
                        && d.u_minus(&m) == d.u_minus(a).intersect(&d.u_minus(b));
                    t.check(ok, || "intersection of tidy subgroups".into(), &[("W1", a), ("W2", b)]);
                }
            }
        }
        "scalesame" => {
            let mut seen: Option<(usize, &FiniteSubgroup)> = None;
            for s in subs {
                if !d.tidy(s)? {
                    continue;
                }
                let disp = idx(s, &d.pre(s, s));
                match seen {
                    None => seen = Some((disp, s)),
                    Some((d0, s0)) => {
                        t.check(disp == d0, || format!("displacements {d0} and {disp}"), &[("W1", s0), ("W2", s)])
                    }
                }
            }
        }
        "powers" => {
            let powers: Vec<FiniteEndo> = (1..=4).map(|k| e.power(u.group(), k)).collect();
            for s in subs {
                if !d.tidy(s)? {
                    continue;
                }
                for (k, ek) in powers.iter().enumerate().skip(1) {
                    let ok = check_tidy(u, ek, s, cfg)?.tidy();
                    t.check(ok, || format!("tidy for α but not for α^{}", k + 1), &[("W", s)]);
                }
            }
        }
        "powers-converse-fails" => {}
        "alphan" => {
            for s in subs {
                if !d.tidy(s)? {
                    continue;
                }
                for n in 1..=3 {
                    let res = iterate_tidy_family(u, e, s, n, cfg);
                    let ok = match &res {
                        Ok((lower, upper)) => {
                            let img = (0..n).fold(d.u_plus(s), |acc, _| d.image(&acc));
                            d.tidy(lower)? && d.tidy(upper)? && img.is_subgroup_of(upper)
                        }
                        Err(_) => false,
                    };
                    t.check(ok, || format!("n = {n}: {:?}", res.err()), &[("W", s)]);
                }
            }
        }
        "tidy-subgroups" => {
            let tidy: Vec<&FiniteSubgroup> =
                subs.iter().filter_map(|s| d.tidy(s).map(|b| b.then_some(s)).transpose()).collect::<Result<_>>()?;
            for w in &tidy {
                for (n, v) in d.minus_terms(w, 3).iter().enumerate().skip(1) {
                    let ok = d.tidy(v)?;
                    t.check(ok, || format!("W_-{n} is not tidy"), &[("W", w)]);
                }
                let core = d.u_plus(w).intersect(&d.u_minus(w));
                let meet = tidy
                    .iter()
                    .filter(|x| core.is_subgroup_of(x) && x.is_subgroup_of(w))
                    .fold(u.whole_group(), |acc, x| acc.intersect(x));
                t.check(meet == core, || "tidy subgroups between W_+ ∩ W_- and W meet above it".into(), &[("W", w)]);
            }
        }
        "dynamics" => {
            let res = dynamics_subgroups(u, e);
            let ok = match &res {
                Ok(dy) => {
                    dy.bik.is_subgroup_of(&dy.nub)
                        && dy.nub.is_subgroup_of(&dy.lev)
                        && d.image(&dy.nub).is_subgroup_of(&dy.nub)
                        && dy.par_minus == d.par_minus()
                }
                Err(_) => false,
            };
            t.check(ok, || format!("{:?}", res.err()), &[]);
        }
        "exposure-factorization" => {
            for s in subs {
                if !d.tidy_above(s)? {
                    continue;
                }
                let l = d.script_l(s);
                let up = d.u_plus(s);
                let lm = d.u_minus(s).intersect(&l);
                let mut img = up.clone();
                let mut found = false;
                for _ in 0..=n_g {
                    if d.product(&img.intersect(&l), &lm) == l.elements {
                        found = true;
                        break;
                    }
                    img = d.image(&img);
                }
                t.check(found, || "no exponent E ≤ |G| factorizes 𝓛".into(), &[("V", s)]);
            }
        }
        "moller-bridge" => {
            for s in subs {
                let log = engine::moller_scale(u, e, s, 4)?.index_log;
                let mut img = s.clone();
                let mut ek = FiniteEndo::identity(u.group());
                for n in 1..=4 {
                    img = d.image(&img);
                    ek = e.compose(&ek);
                    let lhs = idx(&img, &img.intersect(s));
                    // Coset counting: U ∩ α^{-n}(U) by direct membership.
                    let back = d.sub(s.elements.iter().copied().filter(|&x| s.contains(ek.apply(x))).collect());
                    let rhs = idx(s, &back);
                    let engine_val = log[n - 1].1.to_u64().unwrap_or(0) as usize;
                    t.check(
                        lhs == rhs && rhs == engine_val,
                        || format!("n = {n}: {lhs}, {rhs}, engine {engine_val}"),
                        &[("U", s)],
                    );
                }
            }
        }
        other => return Err(Error::Input(format!("unknown property suite {other:?}; known: {}", SUITES.join(", ")))),
    }
    Ok((t.checks, t.failures))
}

/// The fixed converse-failure instances: on `C_p^2` with the coordinate
/// swap, `0 × C_p` is tidy for `α^2` (the identity) but not for `α`.
fn converse_failure(cfg: &Config) -> Result<SuiteReport> {
    let mut checks = 0;
    let mut failures = Vec::new();
    for p in [2u32, 3] {
        let g = FiniteGroup::cyclic_product(&[p, p])?;
        let coord = |c: [u32; 2]| g.from_coords(&c).expect("coordinates in range");
        let (x, y) = (coord([1, 0]), coord([0, 1]));
        let swap = crate::finite::endo_from_map(&g, &[x, y], &[y, x])?;
        let w = crate::finite::closure(&g, &[y])?;
        let u = Arc::new(FiniteUniverse::new(g));
        let sq = swap.power(u.group(), 2);
        let for_alpha = check_tidy(&*u, &swap, &w, cfg)?.tidy();
        let for_square = check_tidy(&*u, &sq, &w, cfg)?.tidy();
        checks += 1;
        if for_alpha || !for_square {
            let case = Case {
                key: format!("C{p}xC{p}-swap"),
                universe: Arc::clone(&u),
                subgroups: Arc::new(vec![]),
                endo: swap,
            };
            failures.push(Counterexample {
                case: case.key.clone(),
                detail: format!("tidy for α: {for_alpha}, for α^2: {for_square}"),
                fixture: case_document(&case, &[("W", &w)]),
            });
        }
    }
    Ok(SuiteReport { suite: "powers-converse-fails".into(), checks, failures })
}

/// Runs one suite over the corpus, splitting the cases across threads;
/// results are collected in corpus order, so output is deterministic.
pub fn run_suite(suite: &str, cases: &[Case], cfg: &Config) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Input(format!("unknown property suite {suite:?}; known: {}", SUITES.join(", "))));
    }
    if suite == "powers-converse-fails" {
        return converse_failure(cfg);
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, 16);
    let chunk = cases.len().div_ceil(threads).max(1);
    let results: Vec<Result<(usize, Vec<Counterexample>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut checks = 0;
                    let mut failures = Vec::new();
                    for case in part {
                        let (c, f) = run_case(suite, case, cfg)?;
                        checks += c;
                        failures.extend(f);
                    }
                    Ok((checks, failures))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("property worker panicked")).collect()
    });
    let mut checks = 0;
    let mut failures = Vec::new();
    for r in results {
        let (c, f) = r?;
        checks += c;
        failures.extend(f);
    }
    Ok(SuiteReport { suite: suite.to_string(), checks, failures })
}
