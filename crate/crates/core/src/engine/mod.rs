//! Exhaustive elimination of candidate complex types.
//!
//! For a candidate the engine enumerates every unknown it cannot choose: the
//! chain orientation of each nest, which triangles hold exterior ovals, and
//! the net exterior contribution of those triangles. Quadrangle contributions
//! and one triangle value follow from the zone identities. The base ovals are
//! ours to choose, so each chain combination is closed as soon as one
//! [`BasePolicy`] closes every remaining branch.

mod drivers;
mod space;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::{quad, tri, OrientationLedger, T0};
use crate::orevkov::pi_delta;
use crate::rules::{others, Candidate, Evidence, RuleCatalog, RuleId, RuleOptions, ZoneFlags};
use crate::scheme::{CurveType, RealScheme};

pub use drivers::{
    figure20_rows, prove_proposition2, prove_theorem1, prove_theorem1_on, Prop2Branch, Prop2Report, Prop2Row,
    SchemeReport, TheoremReport,
};
pub use space::{
    candidate_complex_types, chain_options, representative_repartition, sorted_nests, BasePolicy, CandidateSpace,
    DOMAIN_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("domain bound exceeds 25 for scheme {0}")]
    DomainOverflow(String),
    #[error("curve type {curve} does not belong to scheme {scheme}")]
    Mismatch { curve: String, scheme: String },
}

/// Zone index of triangle `z` (`0` = T0, `1..=3` = `T_z`).
pub fn triangle_zone(z: usize) -> usize {
    if z == 0 {
        T0
    } else {
        tri(z - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Eliminated,
    Survives,
}

/// A closed leaf of the search tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub assignments: BTreeMap<String, i64>,
    #[serde(rename = "ruleId")]
    pub rule_id: RuleId,
    pub evidence: Evidence,
    pub ledger: OrientationLedger,
    pub flags: ZoneFlags,
}

/// An open leaf: a ledger that passes every active rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub assignments: BTreeMap<String, i64>,
    pub ledger: OrientationLedger,
    pub flags: ZoneFlags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub scheme: RealScheme,
    pub candidate: CurveType,
    pub outcome: Outcome,
    #[serde(rename = "branchCount")]
    pub branch_count: usize,
    pub branches: Vec<Branch>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl ProofTrace {
    /// Re-checks each branch against its cited rule alone.
    pub fn replay(&self, catalog: &RuleCatalog) -> bool {
        self.branches.iter().all(|b| {
            let c = Candidate {
                curve: Some(self.candidate),
                ledger: b.ledger.clone(),
                flags: b.flags,
                options: RuleOptions::default(),
            };
            catalog.get(b.rule_id).is_some_and(|r| r.check(&c).is_violated())
        })
    }

    /// Branches citing `rule`.
    pub fn citing(&self, rule: RuleId) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(move |b| b.rule_id == rule)
    }
}

/// Whether closed branches are kept or only counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    Full,
    Summary,
}

/// Interior data fixed by a chain combination and a base policy.
#[derive(Debug, Clone)]
struct Layout {
    interior: [i32; 7],
    interior_pop: [u32; 7],
    epsilon: [i32; 6],
    pi_delta: i32,
    pi_total: u32,
}

fn layout(space: &CandidateSpace, combo: [usize; 3], policy: BasePolicy) -> Layout {
    let mut interior = [0i32; 7];
    let mut interior_pop = [0u32; 7];
    let mut epsilon = [0i32; 6];
    for i in 0..3 {
        let ty = &space.curve.nests[i];
        let chain = &space.chains[i][combo[i]];
        let b = policy.base_position(ty, chain);
        epsilon[i] = ty.scheme.nu.value();
        epsilon[3 + i] = chain[b].value();
        let (before, after) = if ty.is_separating() {
            (tri(i), T0)
        } else {
            let (j, k) = others(i);
            (quad(j), quad(k))
        };
        for (p, s) in chain.iter().enumerate() {
            let zone = match p.cmp(&b) {
                std::cmp::Ordering::Less => before,
                std::cmp::Ordering::Greater => after,
                std::cmp::Ordering::Equal => continue,
            };
            interior[zone] += s.value();
            interior_pop[zone] += 1;
        }
    }
    let schemes = space.curve.schemes();
    Layout {
        interior,
        interior_pop,
        epsilon,
        pi_delta: schemes.iter().map(pi_delta).sum(),
        pi_total: space.scheme.alpha.iter().sum(),
    }
}

/// Fills in the forced zone values and a most permissive population for one leaf.
fn leaf_candidate(space: &CandidateSpace, lay: &Layout, mask: u8, ext: [i32; 4], solved: Option<usize>) -> Candidate {
    let beta = space.scheme.beta as i32;
    let mut lambda = lay.interior;
    let mut e = [0i32; 7];
    for z in 0..4 {
        e[triangle_zone(z)] = ext[z];
        lambda[triangle_zone(z)] += ext[z];
    }
    if let Some(s) = solved {
        let target = lay.pi_delta - 4;
        let zs = triangle_zone(s);
        let value = if s == 0 {
            target + lambda[tri(0)] + lambda[tri(1)] + lambda[tri(2)]
        } else {
            lambda[T0] - (0..3).filter(|&i| tri(i) != zs).map(|i| lambda[tri(i)]).sum::<i32>() - target
        };
        e[zs] = value - lay.interior[zs];
        lambda[zs] = value;
    }
    let eps = &lay.epsilon;
    for q in 0..3 {
        let (j, k) = others(q);
        let rhs = -(eps[j] + eps[3 + j] + eps[k] + eps[3 + k]) / 2;
        let value = rhs - lambda[T0] + lambda[tri(q)];
        e[quad(q)] = value - lay.interior[quad(q)];
        lambda[quad(q)] = value;
    }

    let mut ext_pop = [0u32; 7];
    for z in 0..7 {
        ext_pop[z] = e[z].unsigned_abs();
    }
    for z in 0..4 {
        if mask & (1 << z) != 0 && e[triangle_zone(z)] == 0 {
            ext_pop[triangle_zone(z)] = 2;
        }
    }
    let slack = beta - ext_pop.iter().sum::<u32>() as i32;
    if slack > 0 && slack % 2 == 0 {
        let target = (0..4)
            .filter(|z| mask & (1 << z) != 0)
            .map(triangle_zone)
            .chain((0..3).map(quad).filter(|&q| ext_pop[q] + lay.interior_pop[q] > 0))
            .next()
            .unwrap_or(quad(0));
        ext_pop[target] += slack as u32;
    }
    let zone_pop: [u32; 7] = std::array::from_fn(|z| ext_pop[z] + lay.interior_pop[z]);

    let mut flags = ZoneFlags::default();
    for z in 0..4 {
        flags.only_exterior[z] = lay.interior_pop[triangle_zone(z)] == 0;
        flags.exterior_present[z] = mask & (1 << z) != 0;
    }
    Candidate {
        curve: Some(space.curve),
        ledger: OrientationLedger::from_parts(lambda, lay.epsilon, lay.pi_delta, lay.pi_total, zone_pop),
        flags,
        options: RuleOptions::default(),
    }
}

enum PolicyResult {
    Closed { branches: Vec<Branch>, count: usize },
    Open(Witness),
}

fn base_assignments(combo: [usize; 3], policy: BasePolicy, mask: u8) -> BTreeMap<String, i64> {
    let mut a = BTreeMap::new();
    for i in 0..3 {
        a.insert(format!("chain{}", i + 1), combo[i] as i64);
    }
    a.insert("policy".into(), policy.index());
    a.insert("exteriorMask".into(), mask as i64);
    a
}

const EXT_NAMES: [&str; 4] = ["extT0", "extT1", "extT2", "extT3"];

fn search_policy(
    space: &CandidateSpace,
    combo: [usize; 3],
    policy: BasePolicy,
    catalog: &RuleCatalog,
    mode: TraceMode,
) -> PolicyResult {
    let lay = layout(space, combo, policy);
    let beta = space.scheme.beta as i32;
    let mut branches = Vec::new();
    let mut count = 0usize;
    for mask in 0u8..16 {
        let members: Vec<usize> = (0..4).filter(|z| mask & (1 << z) != 0).collect();
        let solved = if members.contains(&0) { Some(0) } else { members.last().copied() };
        let free: Vec<usize> = members.iter().copied().filter(|&z| Some(z) != solved).collect();
        // A zone rule that only depends on the flags closes the whole subtree at once.
        let probe = leaf_candidate(space, &lay, mask, [0; 4], solved);
        let subtree_rule = [RuleId::ExteriorZone]
            .into_iter()
            .filter_map(|id| catalog.get(id))
            .map(|r| r.check(&probe))
            .find(|v| v.is_violated());
        let ranges: Vec<i32> = if subtree_rule.is_some() { vec![] } else { (-beta..=beta).collect() };
        let total = if subtree_rule.is_some() { 1 } else { ranges.len().pow(free.len() as u32) };
        for idx in 0..total {
            let mut ext = [0i32; 4];
            let mut rest = idx;
            if subtree_rule.is_none() {
                for &z in &free {
                    ext[z] = ranges[rest % ranges.len()];
                    rest /= ranges.len();
                }
            }
            let cand = leaf_candidate(space, &lay, mask, ext, solved);
            let verdict = match &subtree_rule {
                Some(v) => Some(v.clone()),
                None => catalog.first_violation(&cand),
            };
            let mut assignments = base_assignments(combo, policy, mask);
            for &z in &members {
                let zone = triangle_zone(z);
                assignments.insert(EXT_NAMES[z].into(), (cand.ledger.lambda[zone] - lay.interior[zone]) as i64);
            }
            match verdict {
                None => {
                    return PolicyResult::Open(Witness { assignments, ledger: cand.ledger, flags: cand.flags });
                }
                Some(v) => {
                    count += 1;
                    if mode == TraceMode::Full {
                        branches.push(Branch {
                            assignments,
                            rule_id: v.rule_id,
                            evidence: v.evidence.expect("violated verdicts carry evidence"),
                            ledger: cand.ledger,
                            flags: cand.flags,
                        });
                    }
                }
            }
        }
    }
    PolicyResult::Closed { branches, count }
}

/// Explores one candidate exhaustively with the given rules.
pub fn eliminate_with(space: &CandidateSpace, catalog: &RuleCatalog, mode: TraceMode) -> ProofTrace {
    let mut trace = ProofTrace {
        scheme: space.scheme,
        candidate: space.curve,
        outcome: Outcome::Eliminated,
        branch_count: 0,
        branches: Vec::new(),
        witness: None,
    };
    let combos = space.chain_combos();

    // Rules that only read the curve type close every branch at once.
    if let Some(rule) = catalog.get(RuleId::Separating) {
        let lay = layout(space, combos[0], BasePolicy::PositivePair);
        let probe = leaf_candidate(space, &lay, 0, [0; 4], None);
        let v = rule.check(&probe);
        if v.is_violated() {
            trace.branch_count = 1;
            if mode == TraceMode::Full {
                trace.branches.push(Branch {
                    assignments: BTreeMap::new(),
                    rule_id: v.rule_id,
                    evidence: v.evidence.expect("violated verdicts carry evidence"),
                    ledger: probe.ledger,
                    flags: probe.flags,
                });
            }
            return trace;
        }
    }

    for combo in combos {
        let mut first_witness = None;
        let mut closed = false;
        for policy in BasePolicy::ALL {
            match search_policy(space, combo, policy, catalog, mode) {
                PolicyResult::Closed { branches, count } => {
                    trace.branches.extend(branches);
                    trace.branch_count += count;
                    closed = true;
                    break;
                }
                PolicyResult::Open(w) => {
                    first_witness.get_or_insert(w);
                }
            }
        }
        if !closed {
            trace.outcome = Outcome::Survives;
            trace.witness = first_witness;
            trace.branches.clear();
            return trace;
        }
    }
    trace
}

/// Full trace with the complete catalog.
pub fn eliminate(candidate: &CurveType, scheme: &RealScheme) -> Result<ProofTrace, EngineError> {
    let space = CandidateSpace::new(*scheme, *candidate)?;
    Ok(eliminate_with(&space, &RuleCatalog::full(), TraceMode::Full))
}

/// A ledger passing every rule of `catalog` for some unknowns of `space`, if any.
pub fn ledger_satisfiable(space: &CandidateSpace, catalog: &RuleCatalog) -> Option<Witness> {
    for combo in space.chain_combos() {
        for policy in BasePolicy::ALL {
            if let PolicyResult::Open(w) = search_policy(space, combo, policy, catalog, TraceMode::Summary) {
                return Some(w);
            }
        }
    }
    None
}

/// Worker pool honouring `NEST_PROHIBITOR_THREADS`.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("NEST_PROHIBITOR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}
