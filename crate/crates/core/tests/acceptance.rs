//! Acceptance run: one PASS/FAIL line per criterion, with timings.
//!
//! Fixture-backed criteria require both that the named fixture entries are
//! present and that every entry of those fixtures passes.  The remaining
//! criteria compare against the brute-force and dense-window oracles in
//! `tests/common`.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{brute, dense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdlc::engine::{self, Config};
use tdlc::finite::{catalog, enumerate_endos, FiniteUniverse, ENDO_CAP};
use tdlc::fixtures::{fixture, run, EntryOutcome};
use tdlc::index::Index;
use tdlc::properties::{corpus, run_suite, Case, SUITES};
use tdlc::schema::Problem;
use tdlc::seq::vector::Sparse;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Runs a fixture, checks that every `(op, first argument)` in `required`
/// occurs among its entries, and that every entry passes within `limit`.
fn fixture_check(name: &str, required: &[(&str, &str)], limit: Duration) -> Outcome {
    let fx = fixture(name).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let report = run(&fx, &Config::default()).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let covers = |op: &str, arg: &str, o: &EntryOutcome| {
        o.op == op && (arg.is_empty() || o.args.get(0).is_some_and(|a| a.to_string().trim_matches('"') == arg))
    };
    for (op, arg) in required {
        if !report.outcomes.iter().any(|o| covers(op, arg, o)) {
            return Err(format!("{name}: no {op} entry for {arg}"));
        }
    }
    if let Some(m) = report.mismatches().first() {
        return Err(m.clone());
    }
    if took > limit {
        return Err(format!("{name}: took {} (limit {})", secs(took), secs(limit)));
    }
    Ok(format!("{name}: {} entries in {}", report.outcomes.len(), secs(took)))
}

fn fixtures_check(names: &[&str], required: &[(&str, &str)], limit: Duration) -> Outcome {
    let parts: Vec<String> = names.iter().map(|n| fixture_check(n, required, limit)).collect::<Result<_, _>>()?;
    Ok(parts.join("; "))
}

fn criterion1() -> Outcome {
    let required = [
        ("displacement", "U"),
        ("plus_chain", "U"),
        ("minus_chain", "U"),
        ("tidy_above_step", "U"),
        ("u_plus", "U"),
        ("u_minus", "U"),
        ("image", "U_minus"),
        ("image", "alpha_U_minus"),
    ];
    fixtures_check(&["even-pair-sum-p2", "even-pair-sum-p3"], &required, Duration::from_secs(1))
}

fn criterion2() -> Outcome {
    let required = [
        ("displacement", "V"),
        ("u_plus", "V"),
        ("u_minus", "V"),
        ("index", "alpha_V_plus"),
        ("check_tidy", "V"),
        ("scale", "V"),
        ("tidying", "V"),
    ];
    fixture_check("shift-cofinite", &required, Duration::from_secs(1))
}

fn criterion3() -> Outcome {
    let required = [("image", "F"), ("orbit_intersection", "F"), ("image", "mid"), ("u_plus", "F")];
    fixtures_check(&["cp3-nilpotent-flag-p2", "cp3-nilpotent-flag-p3"], &required, Duration::from_secs(1))
}

/// The catalog restricted to order at most 12, together with the catalog's
/// `C_p^3` groups, with every endomorphism of each.
fn catalog_cases() -> Result<Vec<Case>, String> {
    let mut cases = Vec::new();
    for entry in catalog() {
        if entry.group.order() > 12 && entry.name != "C3xC3xC3" {
            continue;
        }
        let en = enumerate_endos(&entry.group, ENDO_CAP, 0).map_err(|e| e.to_string())?;
        if !en.exhaustive {
            return Err(format!("{}: endomorphism enumeration was not exhaustive", entry.name));
        }
        let u = Arc::new(FiniteUniverse::new(entry.group));
        let subs = Arc::new(u.subgroups().map_err(|e| e.to_string())?);
        for (i, endo) in en.endos.into_iter().enumerate() {
            let key = format!("{}#{i:05}", entry.name);
            cases.push(Case { key, universe: Arc::clone(&u), subgroups: Arc::clone(&subs), endo });
        }
    }
    Ok(cases)
}

fn criterion4() -> Outcome {
    let t = Instant::now();
    let cases = catalog_cases()?;
    let small = cases.iter().filter(|c| c.universe.group().order() <= 12).count();
    let cfg = Config::default();
    let mut checks = 0usize;
    for c in &cases {
        for s in c.subgroups.iter() {
            let tidy = engine::check_tidy(&*c.universe, &c.endo, s, &cfg).map_err(|e| e.to_string())?.tidy();
            if tidy != brute::is_invariant(&c.endo, &brute::set(s)) {
                return Err(format!("{}: subgroup {:?}: check_tidy says {tidy}", c.key, s.elements));
            }
            checks += 1;
        }
    }
    let took = t.elapsed();
    if cases.len() < 1000 {
        return Err(format!("only {} endomorphisms", cases.len()));
    }
    if took > Duration::from_secs(300) {
        return Err(format!("took {}", secs(took)));
    }
    Ok(format!(
        "{} endomorphisms ({small} on groups of order ≤ 12, the rest on C3xC3xC3), {checks} subgroups, 0 counterexamples in {}",
        cases.len(),
        secs(took)
    ))
}

fn criterion5() -> Outcome {
    let t = Instant::now();
    let cfg = Config::default();
    let c = corpus(16, ENDO_CAP, cfg.seed).map_err(|e| e.to_string())?;
    if !c.exhaustive {
        return Err("endomorphism enumeration was not exhaustive".into());
    }
    let mut checks = 0;
    for s in SUITES {
        let r = run_suite(s, &c.cases, &cfg).map_err(|e| e.to_string())?;
        if let Some(f) = r.failures.first() {
            return Err(format!("{s}: {}: {}", f.case, f.detail));
        }
        checks += r.checks;
    }
    let took = t.elapsed();
    if took > Duration::from_secs(600) {
        return Err(format!("took {}", secs(took)));
    }
    Ok(format!("{} suites, {} cases, {checks} checks in {}", SUITES.len(), c.cases.len(), secs(took)))
}

fn criterion6() -> Outcome {
    let names = ["laurent-shift-p2", "laurent-shift-p3", "even-pair-sum-p2", "even-pair-sum-p3", "shift-cofinite"];
    let fx = fixtures_check(&names, &[("moller", "")], Duration::from_secs(5))?;
    // Bridge identity on every catalog subgroup, against set arithmetic.
    let t = Instant::now();
    let cases = catalog_cases()?;
    let mut checks = 0usize;
    for c in &cases {
        for s in c.subgroups.iter() {
            let log = engine::moller_scale(&*c.universe, &c.endo, s, 4).map_err(|e| e.to_string())?.index_log;
            let u = brute::set(s);
            let mut img = u.clone();
            // `pw` is α^n as an element map.
            let mut pw: Vec<u32> = c.universe.group().elements().collect();
            for (n, a_n) in log {
                img = brute::image(&c.endo, &img);
                pw = pw.iter().map(|&x| c.endo.map[x as usize]).collect();
                let back: brute::Set = u.iter().copied().filter(|&x| u.contains(&pw[x as usize])).collect();
                let forward = img.len() / img.intersection(&u).count();
                if forward != u.len() / back.len() || a_n != Index::from_u64(forward as u64) {
                    return Err(format!("{}: subgroup {:?}, n = {n}: {forward} vs {a_n}", c.key, s.elements));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{fx}; bridge identity: {checks} checks for n ≤ 4 in {}", secs(t.elapsed())))
}

fn criterion7() -> Outcome {
    let names = ["laurent-shift-p2", "laurent-shift-p3", "laurent-one-plus-shift-p3", "even-pair-sum-p2"];
    for name in names {
        let report = run(&fixture(name).map_err(|e| e.to_string())?, &Config::default()).map_err(|e| e.to_string())?;
        let powers: Vec<usize> = report.outcomes.iter().filter(|o| o.op == "scale").map(|o| o.power).collect();
        if let Some(k) = (1..=4).find(|k| !powers.contains(k) && !(*k == 1 && powers.contains(&0))) {
            return Err(format!("{name}: no scale entry for power {k}"));
        }
    }
    fixtures_check(&names, &[("scale", "")], Duration::from_secs(5))
}

fn criterion8() -> Outcome {
    let name = "laurent-coordinate-permutation";
    let fx = fixture_check(name, &[("valuations", ""), ("solve_power", "")], Duration::from_secs(5))?;
    let Ok(Problem::Laurent(pb)) = fixture(name).and_then(|f| f.problem()) else {
        return Err(format!("{name}: not a Laurent fixture"));
    };
    let (u, e) = (&pb.universe, &pb.endo);
    let f = u.field();
    // Valuations of α^k(t^n) increase strictly (or the term vanishes) from some k₀ on.
    const K: usize = 16;
    let mut k0s = Vec::new();
    for n in -4..=8 {
        let mut x = Sparse::unit(n);
        let mut vals = Vec::with_capacity(K + 1);
        for _ in 0..=K {
            vals.push(x.min());
            x = e.apply(&x).map_err(|err| err.to_string())?;
        }
        let up = |a: Option<i64>, b: Option<i64>| match (a, b) {
            (_, None) => true,
            (Some(a), Some(b)) => b > a,
            (None, Some(_)) => false,
        };
        let k0 = (0..K).rev().take_while(|&k| up(vals[k], vals[k + 1])).last().unwrap_or(K);
        if k0 > K / 2 || vals[K].is_some_and(|v| v < 8 * K as i64) {
            return Err(format!("t^{n}: valuations {vals:?} do not grow"));
        }
        k0s.push(k0);
    }
    // Sampled Laurent polynomials lie in α^n(G) for every n ≤ 8.
    let mut rng = ChaCha8Rng::seed_from_u64(0x85);
    let mut solved = 0;
    for n in 1..=8usize {
        for _ in 0..6 {
            let terms: Vec<(i64, i64)> = (0..rng.gen_range(1..=4)).map(|_| (rng.gen_range(-4..=16), 1)).collect();
            let h = Sparse::from_pairs(f, terms);
            if h.is_zero() {
                continue;
            }
            let lo = -(20i64 << n);
            match u.solve_power_preimage(e, n, &h, lo, 17).map_err(|err| err.to_string())? {
                Some(_) => solved += 1,
                None => return Err(format!("no preimage of {:?} under α^{n} in [{lo}, 17)", h.terms())),
            }
        }
    }
    Ok(format!(
        "{fx}; k₀ ≤ {} for n ∈ [-4, 8]; {solved} sampled polynomials solved for n ≤ 8",
        k0s.iter().max().unwrap()
    ))
}

fn criterion9() -> Outcome {
    let t = Instant::now();
    let c = dense::compare_fixtures(-8, 32);
    if let Some(f) = c.failures.first() {
        return Err(format!("{} of {} checks failed, first: {f}", c.failures.len(), c.checks));
    }
    Ok(format!("{} checks on [-8, 32) ({} declined) in {}", c.checks, c.declined, secs(t.elapsed())))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("even-pair-sum reproduction", criterion1),
        ("cofinite shift reproduction", criterion2),
        ("nilpotent flag on C_p^3", criterion3),
        ("tidy iff invariant on the finite catalog", criterion4),
        ("property suites up to order 16", criterion5),
        ("Möller formula and bridge identity", criterion6),
        ("scale of powers", criterion7),
        ("coordinate-permutation horizon checks", criterion8),
        ("dense window oracle equivalence", criterion9),
    ];
    let mut failed = 0;
    for (i, (what, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = secs(t.elapsed());
        match outcome {
            Ok(detail) => println!("PASS {} {what} [{took}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {what} [{took}]: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
