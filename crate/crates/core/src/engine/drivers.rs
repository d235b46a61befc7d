//! Family-level drivers built on the candidate search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ledger::{quad, tri, OrientationLedger, T0};
use crate::orevkov::{e_values, pi_delta};
use crate::rules::{
    allowed_zones, rule_exterior_zone, rule_separating, Candidate, Evidence, RuleCatalog, RuleId,
    RuleOptions, ZoneFlags,
};
use crate::scheme::{all_even_schemes, alternating, ComplexType, CurveType, NestScheme, RealScheme, SepTag, Sign};

use super::space::{candidate_complex_types, sorted_nests};
use super::{eliminate_with, thread_pool, CandidateSpace, Outcome, ProofTrace, TraceMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeReport {
    pub scheme: String,
    pub alpha: [u32; 3],
    pub beta: u32,
    pub candidates: usize,
    pub eliminated: usize,
    pub excluded: bool,
    /// Already excluded before (the `beta = 1` part of the family).
    pub known: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub surviving: Vec<ProofTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub schemes: Vec<SchemeReport>,
    #[serde(rename = "excludedCount")]
    pub excluded_count: usize,
    #[serde(rename = "newCount")]
    pub new_count: usize,
    #[serde(rename = "knownCount")]
    pub known_count: usize,
    #[serde(rename = "candidateCount")]
    pub candidate_count: usize,
    #[serde(rename = "eliminatedCount")]
    pub eliminated_count: usize,
    #[serde(rename = "ablated")]
    pub ablated: Vec<RuleId>,
}

impl TheoremReport {
    pub fn closed(&self) -> bool {
        self.schemes.iter().all(|s| s.excluded)
    }
}

fn scheme_report(scheme: &RealScheme, catalog: &RuleCatalog) -> SchemeReport {
    let candidates = candidate_complex_types(scheme);
    let traces: Vec<ProofTrace> = candidates
        .par_iter()
        .map(|ct| {
            let space = CandidateSpace::new(*scheme, *ct).expect("generated candidates fit their scheme");
            eliminate_with(&space, catalog, TraceMode::Summary)
        })
        .collect();
    let surviving: Vec<ProofTrace> = traces.into_iter().filter(|t| t.outcome == Outcome::Survives).collect();
    SchemeReport {
        scheme: scheme.to_string(),
        alpha: scheme.alpha,
        beta: scheme.beta,
        candidates: candidates.len(),
        eliminated: candidates.len() - surviving.len(),
        excluded: surviving.is_empty(),
        known: scheme.beta == 1,
        surviving,
    }
}

/// Runs the search over `schemes` with the given rules.
pub fn prove_theorem1_on(schemes: &[RealScheme], catalog: &RuleCatalog) -> TheoremReport {
    let reports: Vec<SchemeReport> = thread_pool().install(|| schemes.iter().map(|s| scheme_report(s, catalog)).collect());
    let excluded = reports.iter().filter(|r| r.excluded);
    let excluded_count = excluded.clone().count();
    let known_count = excluded.filter(|r| r.known).count();
    let ablated = crate::rules::RuleId::ALL.into_iter().filter(|id| !catalog.contains(*id)).collect();
    TheoremReport {
        excluded_count,
        new_count: excluded_count - known_count,
        known_count,
        candidate_count: reports.iter().map(|r| r.candidates).sum(),
        eliminated_count: reports.iter().map(|r| r.eliminated).sum(),
        schemes: reports,
        ablated,
    }
}

/// All 53 all-even schemes, full catalog.
pub fn prove_theorem1() -> TheoremReport {
    prove_theorem1_on(&all_even_schemes(), &RuleCatalog::full())
}

/// Candidate types of an all-even scheme that no type-level rule removes,
/// up to nest permutation, with their allowed exterior zones.
pub fn figure20_rows(scheme: &RealScheme) -> Vec<([ComplexType; 3], Vec<usize>)> {
    let catalog = RuleCatalog::full();
    let sep = catalog.get(RuleId::Separating).expect("full catalog");
    let mut rows: Vec<[ComplexType; 3]> = Vec::new();
    let mut seen: Vec<[String; 3]> = Vec::new();
    for ct in candidate_complex_types(scheme) {
        if ct.jump.is_some() {
            continue;
        }
        let probe = Candidate {
            curve: Some(ct),
            ledger: OrientationLedger::from_parts([0; 7], [1; 6], 0, 0, [0; 7]),
            flags: ZoneFlags::default(),
            options: RuleOptions::default(),
        };
        if sep.check(&probe).is_violated() {
            continue;
        }
        let row = sorted_nests(&ct);
        let key = row.map(|t| t.to_string());
        if !seen.contains(&key) {
            seen.push(key);
            rows.push(row);
        }
    }
    let plus = |r: &[ComplexType; 3]| r.iter().filter(|t| t.scheme.nu == Sign::Plus).count();
    let seps = |r: &[ComplexType; 3]| r.iter().filter(|t| t.is_separating()).count();
    rows.sort_by_key(|r| (std::cmp::Reverse(plus(r)), seps(r)));
    rows.into_iter()
        .map(|r| {
            let z = allowed_zones(&r.map(|t| t.scheme));
            (r, z)
        })
        .collect()
}

/// One closed branch of the `|lambda0| = 3` case analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop2Branch {
    /// 1-based index of the empty quadrangle, when the branch fixes one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quadrangle: Option<usize>,
    #[serde(rename = "ruleId")]
    pub rule_id: RuleId,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop2Row {
    pub lambda0: i32,
    pub schemes: [String; 3],
    pub types: [String; 3],
    pub e0: i32,
    #[serde(rename = "eTriangles", skip_serializing_if = "Option::is_none", default)]
    pub e_triangles: Option<[i32; 3]>,
    pub branches: Vec<Prop2Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop2Report {
    pub rows: Vec<Prop2Row>,
    pub closed: bool,
}

/// Separating nest of `alpha` ovals whose T0-end oval has sign `end`.
fn separating_type(nu: Sign, alpha: u32, end: Sign) -> ComplexType {
    if alpha.is_multiple_of(2) {
        let tag = if end == Sign::Plus { SepTag::D } else { SepTag::U };
        ComplexType::new(NestScheme::with_diff(nu, alpha, 0).unwrap(), tag).unwrap()
    } else {
        ComplexType::new(NestScheme::with_diff(nu, alpha, end.value()).unwrap(), SepTag::S).unwrap()
    }
}

/// Sign chain of a separating nest from its `T_i` end.
fn separating_chain(ty: &ComplexType) -> Vec<Sign> {
    let alpha = ty.scheme.alpha() as usize;
    match ty.tag {
        SepTag::D => alternating(Sign::Minus, alpha),
        SepTag::U => alternating(Sign::Plus, alpha),
        _ => alternating(ty.scheme.mu().expect("odd separating nest"), alpha),
    }
}

/// The `|lambda0| = 3` rows: `lambda0 = 3 s`, every sign equal to `-s`, every
/// nest separating with its T0-end oval as base, and at least one odd nest.
fn prop2_rows() -> Vec<(i32, [ComplexType; 3])> {
    let mut rows = Vec::new();
    for lambda0 in [3, -3] {
        let sign = if lambda0 > 0 { Sign::Minus } else { Sign::Plus };
        // Representative sizes; the analysis only sees parities.
        let even = separating_type(sign, 2, sign);
        let odd = separating_type(sign, 3, sign);
        for odd_count in 1..=3 {
            let mut nests = [even; 3];
            for n in nests.iter_mut().skip(3 - odd_count) {
                *n = odd;
            }
            rows.push((lambda0, nests));
        }
    }
    rows
}

fn prop2_candidate(curve: CurveType, lambda: [i32; 7], sign: Sign, flags: ZoneFlags) -> Candidate {
    let schemes = curve.schemes();
    let pops = lambda.map(|l| l.unsigned_abs());
    Candidate {
        curve: Some(curve),
        ledger: OrientationLedger::from_parts(
            lambda,
            [sign.value(); 6],
            schemes.iter().map(pi_delta).sum(),
            schemes.iter().map(|s| s.alpha()).sum(),
            pops,
        ),
        flags,
        options: RuleOptions::default(),
    }
}

/// Table-driven closure of the `|lambda0| = 3` case.
pub fn prove_proposition2() -> Prop2Report {
    let mut rows = Vec::new();
    for (lambda0, nests) in prop2_rows() {
        let sign = nests[0].scheme.nu;
        let curve = CurveType::without_jump(nests).expect("valid separating types");
        let schemes = curve.schemes();
        let e = e_values(&schemes[0], &schemes[1], &schemes[2]);
        let mut row = Prop2Row {
            lambda0,
            schemes: schemes.map(|s| s.short()),
            types: nests.map(|t| t.to_string()),
            e0: e[0],
            e_triangles: None,
            branches: Vec::new(),
        };

        // T0 holds only exterior ovals and lambda0 != 0, so it holds some.
        let mut flags = ZoneFlags::default();
        flags.only_exterior[0] = true;
        flags.exterior_present[0] = true;
        let mut lambda = [0; 7];
        lambda[T0] = lambda0;
        let v = rule_exterior_zone(&prop2_candidate(curve, lambda, sign, flags));
        if v.is_violated() {
            row.branches.push(Prop2Branch { quadrangle: None, rule_id: v.rule_id, evidence: v.evidence.unwrap() });
            rows.push(row);
            continue;
        }
        row.e_triangles = Some([e[1], e[2], e[3]]);
        // Nonzero E_i keep exterior ovals out of T1..T3; one quadrangle is empty.
        for q in 0..3 {
            let chain = separating_chain(&nests[q]);
            let inside: i32 = chain[..chain.len() - 1].iter().map(|s| s.value()).sum();
            let mut lambda = [0; 7];
            lambda[T0] = lambda0;
            lambda[quad(q)] = 0;
            lambda[tri(q)] = inside;
            let cand = prop2_candidate(curve, lambda, sign, flags);
            let residual = cand.ledger.lemma10_residuals()[q];
            if residual != 0 {
                let evidence = Evidence::new(format!(
                    "identity {}: lambda{} = {} needed, interior ovals of nest {} give {}",
                    q + 1,
                    q + 4,
                    inside - residual,
                    q + 1,
                    inside
                ))
                .with("identity", q as i64 + 1)
                .with("residual", residual)
                .with(&format!("lambda{}", q + 4), inside);
                row.branches.push(Prop2Branch { quadrangle: Some(q + 1), rule_id: RuleId::Lemma10, evidence });
                continue;
            }
            let v = rule_separating(&cand);
            if v.is_violated() {
                row.branches.push(Prop2Branch {
                    quadrangle: Some(q + 1),
                    rule_id: v.rule_id,
                    evidence: v.evidence.unwrap(),
                });
            }
        }
        rows.push(row);
    }
    let closed = rows.iter().all(|r| !r.branches.is_empty() && (r.e_triangles.is_none() || r.branches.len() == 3));
    Prop2Report { rows, closed }
}
