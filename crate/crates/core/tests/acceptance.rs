//! One pass/fail line per acceptance criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nest_prohibitor::cli::{run, EXIT_CLOSED, EXIT_OPEN};
use nest_prohibitor::engine::{
    candidate_complex_types, eliminate, eliminate_with, figure20_rows, ledger_satisfiable, prove_proposition2,
    prove_theorem1, prove_theorem1_on, sorted_nests, CandidateSpace, Outcome, TraceMode,
};
use nest_prohibitor::ledger::{tri, OrientationLedger, T0};
use nest_prohibitor::orevkov::{f_value, g_value, pi_delta};
use nest_prohibitor::rules::{others, Candidate, RuleCatalog, RuleId, RuleOptions, ZoneFlags};
use nest_prohibitor::scheme::{
    all_even_schemes, enumerate_three_nest_schemes, CurveType, Jump, RealScheme, SepTag, PERMUTATIONS,
};
use nest_prohibitor::tables::{figure, separating_type_rows, Table};
use nest_prohibitor::viro::{format_real_scheme, parse_real_scheme};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("nest-prohibitor").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn enumeration_counts() -> Check {
    let even = all_even_schemes();
    let known = even.iter().filter(|s| s.beta == 1).count();
    ensure(even.len() == 53, || format!("{} all-even schemes", even.len()))?;
    ensure(known == 12, || format!("{known} with beta = 1"))?;
    ensure(even.len() - known == 41, || "complement is not 41".into())?;
    let brute = (1..=12u32)
        .flat_map(|a| (a..=12).flat_map(move |b| (b..=12).map(move |c| a + b + c)))
        .filter(|&s| s <= 12)
        .count();
    ensure(brute == 53, || format!("brute-force count {brute}"))?;
    let (_, out) = cli(&["enumerate", "--even", "--beta", "1"]);
    ensure(out.ends_with("total: 12\n"), || "cli count with --beta 1".into())?;
    let (_, out) = cli(&["enumerate", "--even"]);
    ensure(out.ends_with("total: 53\n"), || "cli count with --even".into())?;
    Ok("53 all-even, 12 known, 41 new".into())
}

fn int_rows(t: &Table, columns: &[&str]) -> Vec<Vec<i32>> {
    (0..t.rows.len())
        .map(|r| columns.iter().map(|c| t.int(r, c).expect("integer cell")).collect())
        .collect()
}

fn golden_tables() -> Check {
    let t16 = figure(16).map_err(|e| e.to_string())?;
    ensure(
        int_rows(&t16, &["G"]).concat() == [0, 1, 0, 0, 0, 2, 0, -1, 0, 3],
        || format!("figure 16 G column {:?}", int_rows(&t16, &["G"])),
    )?;
    ensure(t16.rows.len() == 10, || "figure 16 row count".into())?;

    let t17 = figure(17).map_err(|e| e.to_string())?;
    ensure(int_rows(&t17, &["F"]).concat() == [0, -1, 0, -1, -1, 0, 0, -1], || "figure 17 F column".into())?;

    let t18 = figure(18).map_err(|e| e.to_string())?;
    let e18 = int_rows(&t18, &["E0", "E1", "E2", "E3"]);
    ensure(
        e18 == [vec![0, -1, -1, -1], vec![-1, -2, -2, 0], vec![-2, -3, -1, -1], vec![-3, -2, -2, -2]],
        || format!("figure 18 E values {e18:?}"),
    )?;
    let z18: Vec<&str> = t18.rows.iter().map(|r| r[7].as_str()).collect();
    ensure(z18 == ["{0}", "{3}", "{}", "{}"], || format!("figure 18 Z {z18:?}"))?;
    ensure(t18.rows.len() * t18.header.len() == 32, || "figure 18 is not 4 x 8".into())?;

    let t19 = figure(19).map_err(|e| e.to_string())?;
    ensure(t19.rows.len() * t19.header.len() == 48, || "figure 19 is not 12 x 4".into())?;
    let even_types: Vec<_> = separating_type_rows().into_iter().filter(|t| t.tag != SepTag::S).collect();
    let signs = [nest_prohibitor::scheme::Sign::Minus, nest_prohibitor::scheme::Sign::Plus];
    let even = |s| nest_prohibitor::scheme::NestScheme::with_diff(s, 2, 0).unwrap();
    let companions = [[signs[0], signs[0]], [signs[0], signs[1]], [signs[1], signs[1]]];
    let mut r = 0;
    for ty in &even_types {
        for [a, b] in companions {
            let direct = f_value(ty).unwrap() - g_value(&even(a)) - g_value(&even(b));
            ensure(t19.int(r, "F-G-G") == Some(direct), || format!("figure 19 row {}", r + 1))?;
            r += 1;
        }
    }
    let v19 = int_rows(&t19, &["F-G-G"]).concat();
    ensure(v19 == [0, -1, -2, -1, -2, -3, 0, -1, -2, -1, -2, -3], || format!("figure 19 {v19:?}"))?;

    let t21 = figure(21).map_err(|e| e.to_string())?;
    let e21 = int_rows(&t21, &["E0"]).concat();
    ensure(e21 == [0, 0, 0, -4, -5, -6], || format!("figure 21 E0 {e21:?}"))?;
    ensure(t21.rows[3][..3] == ["+", "+", "(+, +)"], || "figure 21 row 4 schemes".into())?;
    ensure(t21.rows[3][4] == "printed E0=-2", || "figure 21 row 4 annotation".into())?;

    let t22 = figure(22).map_err(|e| e.to_string())?;
    ensure(t22.rows.len() * t22.header.len() == 18, || "figure 22 is not 3 x 6".into())?;
    let e22 = int_rows(&t22, &["E1", "E2", "E3"]);
    ensure(e22 == [vec![-1, -1, -2], vec![-1, -2, -2], vec![-2, -2, -2]], || format!("figure 22 {e22:?}"))?;
    Ok("figures 16-19, 21, 22 match; figure 19 equals F - G - G".into())
}

fn theorem1_closure() -> Check {
    let report = prove_theorem1();
    ensure(report.closed(), || "some all-even scheme keeps a candidate".into())?;
    ensure(report.excluded_count == 53 && report.new_count == 41, || "counts".into())?;
    let (code, _) = cli(&["prove", "theorem1"]);
    ensure(code == EXIT_CLOSED, || format!("exit code {code}"))?;

    let full = RuleCatalog::full();
    let mut traced = 0;
    for scheme in all_even_schemes() {
        let rows = figure20_rows(&scheme);
        ensure(rows.len() == 8, || format!("{scheme}: {} case rows", rows.len()))?;
        for (k, (row, _)) in rows.iter().enumerate() {
            let (rule, key, ok): (RuleId, Option<&str>, fn(i64) -> bool) = match k {
                0 | 1 => (RuleId::EmptyTriangles, None, |_| true),
                2 | 3 => (RuleId::TriangleBound, Some("lambda"), |v| v == 4 || v == 5),
                _ => (RuleId::Lambda0Bound, Some("lambda0"), |v| v <= -4),
            };
            // Every nest ordering of the row is a separate candidate.
            for ct in candidate_complex_types(&scheme) {
                if ct.jump.is_some() || sorted_nests(&ct) != *row {
                    continue;
                }
                let trace = eliminate(&ct, &scheme).map_err(|e| e.to_string())?;
                ensure(trace.outcome == Outcome::Eliminated, || format!("{scheme} {ct} survives"))?;
                ensure(trace.replay(&full), || format!("{scheme} {ct} does not replay"))?;
                let cited: Vec<_> = trace.citing(rule).collect();
                ensure(!cited.is_empty(), || format!("{scheme} row {} never cites {rule}", k + 1))?;
                for b in cited {
                    let values: Vec<i64> = b
                        .evidence
                        .values
                        .iter()
                        .filter(|(name, _)| key.is_some_and(|p| name.starts_with(p) && name.len() <= p.len() + 1))
                        .map(|(_, v)| *v)
                        .collect();
                    ensure(values.iter().all(|&v| ok(v)), || format!("{scheme} row {}: {values:?}", k + 1))?;
                }
                traced += 1;
            }
        }
    }
    Ok(format!(
        "{} candidates eliminated over 53 schemes; {traced} case-row traces cite the expected rules",
        report.candidate_count
    ))
}

fn proposition2_closure() -> Check {
    let report = prove_proposition2();
    ensure(report.closed, || "open branch".into())?;
    let e0: Vec<i32> = report.rows.iter().map(|r| r.e0).collect();
    ensure(e0 == [0, 0, 0, -4, -5, -6], || format!("E0 {e0:?}"))?;
    let by_e0 = report
        .rows
        .iter()
        .filter(|r| r.e0 != 0)
        .all(|r| r.branches.len() == 1 && r.branches[0].rule_id == RuleId::ExteriorZone);
    ensure(by_e0, || "rows with E0 != 0 are not closed by the exterior-zone rule".into())?;
    let mut fgg = 0;
    for row in report.rows.iter().filter(|r| r.e0 == 0) {
        ensure(row.e_triangles.is_some_and(|e| e.iter().all(|&v| v != 0)), || "E1..E3 vanish".into())?;
        ensure(row.branches.len() == 3, || "a quadrangle branch is open".into())?;
        for b in row.branches.iter().filter(|b| b.rule_id == RuleId::Separating) {
            ensure(b.evidence.get("residual") == Some(-1), || "F - G - G is not -1".into())?;
            fgg += 1;
        }
    }
    ensure(fgg > 0, || "no branch uses F - G - G".into())?;
    let (code, _) = cli(&["prove", "proposition2"]);
    ensure(code == EXIT_CLOSED, || format!("exit code {code}"))?;
    Ok(format!("6 rows closed, 3 by E0 != 0, {fgg} branches by F - G - G = -1"))
}

fn case_holds(curve: &CurveType, l: &OrientationLedger) -> Option<u8> {
    let j = curve.jump?;
    let (i, k) = others(j.nest);
    let eps = l.epsilon[j.nest];
    let pd = l.pi_delta();
    if l.lambda_deficit() == 0 && pd == 4 {
        Some(1)
    } else if j.crossing == Some(true) && l.lambda[T0] - l.lambda[tri(i)] - l.lambda[tri(k)] == -1 && eps == 1 && pd == 3
    {
        Some(2)
    } else if j.crossing == Some(false) && l.lambda[tri(j.nest)] == 1 && eps == -1 && pd == 3 {
        Some(3)
    } else {
        None
    }
}

fn jump_exclusion() -> Check {
    let full = RuleCatalog::full();
    let jump_rule = full.get(RuleId::Jump).expect("full catalog");
    let mut jumps = 0;
    for scheme in all_even_schemes() {
        for ct in candidate_complex_types(&scheme).into_iter().filter(|c| c.jump.is_some()) {
            // PiDelta is fixed by the nest schemes, so no ledger of this candidate reaches a jump case.
            let pd: i32 = ct.schemes().iter().map(pi_delta).sum();
            ensure(pd % 2 == 0 && pd != 4, || format!("{scheme} {ct}: PiDelta {pd}"))?;
            let trace = eliminate(&ct, &scheme).map_err(|e| e.to_string())?;
            ensure(trace.outcome == Outcome::Eliminated, || format!("{scheme} {ct} survives"))?;
            for b in &trace.branches {
                let c = Candidate { curve: Some(ct), ledger: b.ledger.clone(), flags: b.flags, options: RuleOptions::default() };
                ensure(jump_rule.check(&c).is_violated(), || format!("{scheme} {ct}: rule_jump holds on a leaf"))?;
            }
            jumps += 1;
        }
    }
    ensure(jumps > 0, || "no jump candidates generated".into())?;

    let scheme = RealScheme::new([1, 2, 20], 2).unwrap();
    let mut witnessed = BTreeMap::new();
    for ct in candidate_complex_types(&scheme) {
        let Some(j) = ct.jump else { continue };
        for crossing in [true, false] {
            let curve = CurveType { jump: Some(Jump { crossing: Some(crossing), ..j }), ..ct };
            let space = CandidateSpace::new(scheme, curve).map_err(|e| e.to_string())?;
            if let Some(w) = ledger_satisfiable(&space, &full) {
                let case = case_holds(&curve, &w.ledger).ok_or_else(|| format!("{curve}: witness fits no case"))?;
                witnessed.entry(case).or_insert_with(|| curve.to_string());
            }
        }
    }
    ensure(witnessed.contains_key(&2), || format!("no crossing witness: {witnessed:?}"))?;
    Ok(format!("{jumps} all-even jump candidates closed; case-2 witness {}", witnessed[&2]))
}

fn ledger_sample(seed: u64) -> OrientationLedger {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = |m: u64| {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x % m
    };
    let pop: [u32; 7] = std::array::from_fn(|_| next(9) as u32);
    let lambda: [i32; 7] = std::array::from_fn(|z| pop[z] as i32 - 2 * next(pop[z] as u64 + 1) as i32);
    let epsilon: [i32; 6] = std::array::from_fn(|_| if next(2) == 0 { -1 } else { 1 });
    OrientationLedger::from_parts(lambda, epsilon, 0, 6, pop)
}

fn property_suites() -> Check {
    for seed in 0..10_000u64 {
        let r = ledger_sample(seed).lemma10_residuals();
        ensure(r[3] == r[0] + r[1] + r[2], || format!("identity 4 fails for seed {seed}"))?;
    }
    let family = enumerate_three_nest_schemes(|_, _| true);
    for s in &family {
        let text = format_real_scheme(s);
        ensure(parse_real_scheme(&text).ok() == Some(*s), || format!("round trip {text}"))?;
    }
    let catalog = RuleCatalog::full();
    let scheme = RealScheme::new([1, 2, 20], 2).unwrap();
    let curves = candidate_complex_types(&scheme);
    let mut checks = 0;
    for (n, curve) in curves.iter().enumerate().step_by(7) {
        let ledger = ledger_sample(n as u64);
        let flags = ZoneFlags { only_exterior: [n % 2 == 0; 4], exterior_present: [n % 3 == 0; 4] };
        let base = Candidate { curve: Some(*curve), ledger: ledger.clone(), flags, options: RuleOptions::default() };
        for perm in PERMUTATIONS {
            let moved = Candidate {
                curve: Some(curve.permuted(perm)),
                ledger: ledger.permuted(perm),
                flags: flags.permuted(perm),
                options: RuleOptions::default(),
            };
            for rule in catalog.rules() {
                ensure(rule.check(&base).status == rule.check(&moved).status, || format!("{} on {curve}", rule.id))?;
                checks += 1;
            }
        }
    }
    let sample: Vec<_> = curves.iter().step_by(11).collect();
    for dropped in RuleId::ALL {
        let reduced = RuleCatalog::without(&[dropped]);
        for ct in &sample {
            let space = CandidateSpace::new(scheme, **ct).map_err(|e| e.to_string())?;
            let before = eliminate_with(&space, &catalog, TraceMode::Summary).outcome;
            let after = eliminate_with(&space, &reduced, TraceMode::Summary).outcome;
            ensure(!(before == Outcome::Survives && after == Outcome::Eliminated), || format!("{dropped} on {ct}"))?;
        }
    }
    let ablated = prove_theorem1_on(&all_even_schemes(), &RuleCatalog::without(&[RuleId::Lambda0Bound]));
    ensure(!ablated.closed(), || "ablating lambda0 bound still closes".into())?;
    let (code, _) = cli(&["prove", "theorem1", "--ablate", "rule_lambda0_bound"]);
    ensure(code == EXIT_OPEN, || format!("ablation exit code {code}"))?;
    Ok(format!(
        "10000 ledgers, {} round trips, {checks} permuted verdicts, {} ablation pairs",
        family.len(),
        sample.len() * RuleId::ALL.len()
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("enumeration counts", enumeration_counts),
        ("golden tables", golden_tables),
        ("all-even family closure", theorem1_closure),
        ("|lambda0| = 3 case analysis", proposition2_closure),
        ("jump exclusion", jump_exclusion),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        total += elapsed;
        match result {
            Ok(detail) => println!("PASS criterion {} {name} [{:.2?}]: {detail}", n + 1, elapsed),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {} {name} [{:.2?}]: {reason}", n + 1, elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed [{total:.2?}]", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
