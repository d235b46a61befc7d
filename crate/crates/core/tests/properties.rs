use nest_prohibitor::engine::{candidate_complex_types, eliminate_with, CandidateSpace, Outcome, TraceMode};
use nest_prohibitor::ledger::OrientationLedger;
use nest_prohibitor::rules::{Candidate, RuleCatalog, RuleId, RuleOptions, ZoneFlags};
use nest_prohibitor::scheme::{enumerate_three_nest_schemes, CurveType, RealScheme, PERMUTATIONS};
use nest_prohibitor::viro::{format_real_scheme, parse_real_scheme};
use proptest::prelude::*;
use proptest::sample::select;

fn sign() -> impl Strategy<Value = i32> {
    prop_oneof![Just(-1), Just(1)]
}

/// Ledgers with consistent parities and totals; the rule values are otherwise arbitrary.
fn ledger() -> impl Strategy<Value = OrientationLedger> {
    (
        prop::array::uniform7(0u32..=8),
        prop::array::uniform7(0u32..=8),
        prop::array::uniform6(sign()),
        -6i32..=6,
        0u32..=25,
    )
        .prop_map(|(pop, k, epsilon, pi_delta, pi_total)| {
            let lambda = std::array::from_fn(|z| pop[z] as i32 - 2 * (k[z] % (pop[z] + 1)) as i32);
            let pi_delta = if (pi_delta - pi_total as i32) % 2 == 0 { pi_delta } else { pi_delta + 1 };
            OrientationLedger::from_parts(lambda, epsilon, pi_delta, pi_total, pop)
        })
}

fn flags() -> impl Strategy<Value = ZoneFlags> {
    (prop::array::uniform4(any::<bool>()), prop::array::uniform4(any::<bool>()))
        .prop_map(|(only_exterior, exterior_present)| ZoneFlags { only_exterior, exterior_present })
}

fn sample_curves() -> Vec<CurveType> {
    let mut out = Vec::new();
    for (alpha, beta) in [([2, 2, 20], 1), ([1, 2, 20], 2), ([2, 3, 4], 16), ([1, 1, 1], 22)] {
        out.extend(candidate_complex_types(&RealScheme::new(alpha, beta).unwrap()));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fourth_identity_is_sum_of_the_first_three(l in ledger()) {
        let r = l.lemma10_residuals();
        prop_assert_eq!(r[3], r[0] + r[1] + r[2]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn verdicts_are_invariant_under_nest_relabelling(
        curve in select(sample_curves()),
        l in ledger(),
        f in flags(),
        perm in select(PERMUTATIONS.to_vec()),
        tier2 in any::<bool>(),
    ) {
        let options = RuleOptions { lambda0_tier2: tier2 };
        let base = Candidate { curve: Some(curve), ledger: l.clone(), flags: f, options };
        let moved = Candidate {
            curve: Some(curve.permuted(perm)),
            ledger: l.permuted(perm),
            flags: f.permuted(perm),
            options,
        };
        let catalog = RuleCatalog::full();
        for rule in catalog.rules() {
            prop_assert_eq!(rule.check(&base).status, rule.check(&moved).status, "{}", rule.id);
        }
    }
}

fn odd_scheme_candidates() -> Vec<(RealScheme, CurveType)> {
    let mut out = Vec::new();
    for (alpha, beta) in [([1, 2, 20], 2), ([1, 2, 4], 18), ([1, 1, 1], 22)] {
        let s = RealScheme::new(alpha, beta).unwrap();
        out.extend(candidate_complex_types(&s).into_iter().map(|c| (s, c)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dropping_a_rule_never_eliminates_a_survivor(
        (scheme, curve) in select(odd_scheme_candidates()),
        dropped in select(RuleId::ALL.to_vec()),
    ) {
        let space = CandidateSpace::new(scheme, curve).unwrap();
        let full = eliminate_with(&space, &RuleCatalog::full(), TraceMode::Summary);
        let ablated = eliminate_with(&space, &RuleCatalog::without(&[dropped]), TraceMode::Summary);
        if full.outcome == Outcome::Survives {
            prop_assert_eq!(ablated.outcome, Outcome::Survives);
        }
    }
}

#[test]
fn round_trip_over_the_three_nest_family() {
    let family = enumerate_three_nest_schemes(|_, _| true);
    let expected = (1..=25u32)
        .flat_map(|a| (a..=25).flat_map(move |b| (b..=25).map(move |c| a + b + c)))
        .filter(|&sum| sum <= 25)
        .count();
    assert_eq!(family.len(), expected);
    for s in family {
        let text = format_real_scheme(&s);
        assert_eq!(parse_real_scheme(&text).unwrap(), s, "{text}");
        assert_eq!(format_real_scheme(&parse_real_scheme(&text).unwrap()), text);
    }
}
