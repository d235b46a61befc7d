//! Catalog of cited restriction rules.
//!
//! Every rule maps a [`Candidate`] to a [`RuleVerdict`]. Rules never look at
//! geometry: hypotheses such as "T0 contains only exterior ovals" arrive as
//! explicit flags on the candidate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ledger::{quad, tri, OrientationLedger, T0};
use crate::orevkov::{e_values, second_formula_residual};
use crate::scheme::{CurveType, NestScheme, Sign, DEGREE, OVAL_COUNT};

/// Non-principal ovals: all ovals but `O1..O3` and `A1..A3`.
pub const NON_PRINCIPAL_OVALS: u32 = OVAL_COUNT - 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "rule_jump")]
    Jump,
    #[serde(rename = "rule_separating")]
    Separating,
    #[serde(rename = "rule_exterior_zone")]
    ExteriorZone,
    #[serde(rename = "rule_empty_triangles")]
    EmptyTriangles,
    #[serde(rename = "rule_lambda0_bound")]
    Lambda0Bound,
    #[serde(rename = "rule_triangle_bound")]
    TriangleBound,
    #[serde(rename = "rule_RM")]
    RokhlinMishachev,
    #[serde(rename = "rule_lemma10")]
    Lemma10,
    #[serde(rename = "rule_populations")]
    Populations,
}

impl RuleId {
    /// Evaluation order; the first violated rule is the one a trace cites.
    pub const ALL: [RuleId; 9] = [
        RuleId::Jump,
        RuleId::Separating,
        RuleId::ExteriorZone,
        RuleId::EmptyTriangles,
        RuleId::Lambda0Bound,
        RuleId::TriangleBound,
        RuleId::RokhlinMishachev,
        RuleId::Lemma10,
        RuleId::Populations,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Jump => "rule_jump",
            RuleId::Separating => "rule_separating",
            RuleId::ExteriorZone => "rule_exterior_zone",
            RuleId::EmptyTriangles => "rule_empty_triangles",
            RuleId::Lambda0Bound => "rule_lambda0_bound",
            RuleId::TriangleBound => "rule_triangle_bound",
            RuleId::RokhlinMishachev => "rule_RM",
            RuleId::Lemma10 => "rule_lemma10",
            RuleId::Populations => "rule_populations",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.strip_prefix("rule_").unwrap_or(s);
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str().strip_prefix("rule_").unwrap().eq_ignore_ascii_case(key))
            .ok_or_else(|| format!("unknown rule id '{s}'"))
    }
}

/// Geometric hypotheses of a candidate, indexed by triangle (`0` = T0, `i` = T_i).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZoneFlags {
    /// The triangle holds no interior (nested) ovals.
    #[serde(rename = "onlyExterior")]
    pub only_exterior: [bool; 4],
    /// The triangle holds at least one exterior oval.
    #[serde(rename = "exteriorPresent")]
    pub exterior_present: [bool; 4],
}

impl ZoneFlags {
    /// Flags after relabelling nests so that new nest `i` is old nest `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> ZoneFlags {
        let t = |z: usize| if z == 0 { 0 } else { 1 + perm[z - 1] };
        ZoneFlags {
            only_exterior: std::array::from_fn(|z| self.only_exterior[t(z)]),
            exterior_present: std::array::from_fn(|z| self.exterior_present[t(z)]),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleOptions {
    /// Tighten the T0 bound from `|lambda0| <= 3` to `|lambda0| <= 2`.
    #[serde(rename = "lambda0Tier2")]
    pub lambda0_tier2: bool,
}

/// What the rules see: optional complex type, a ledger and hypothesis flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Candidate {
    pub curve: Option<CurveType>,
    pub ledger: OrientationLedger,
    pub flags: ZoneFlags,
    #[serde(default)]
    pub options: RuleOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Satisfied,
    Violated,
    Inapplicable,
}

/// The violated relation and the numbers that violate it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Evidence {
    pub statement: String,
    pub values: BTreeMap<String, i64>,
}

impl Evidence {
    pub fn new(statement: impl Into<String>) -> Self {
        Evidence { statement: statement.into(), values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, v: impl Into<i64>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        self.values.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleVerdict {
    #[serde(rename = "ruleId")]
    pub rule_id: RuleId,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl RuleVerdict {
    fn satisfied(rule_id: RuleId) -> Self {
        RuleVerdict { rule_id, status: Status::Satisfied, evidence: None }
    }

    fn inapplicable(rule_id: RuleId) -> Self {
        RuleVerdict { rule_id, status: Status::Inapplicable, evidence: None }
    }

    fn violated(rule_id: RuleId, evidence: Evidence) -> Self {
        RuleVerdict { rule_id, status: Status::Violated, evidence: Some(evidence) }
    }

    fn check(rule_id: RuleId, violation: Option<Evidence>) -> Self {
        match violation {
            Some(e) => Self::violated(rule_id, e),
            None => Self::satisfied(rule_id),
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }
}

/// Rokhlin-Mishachev formula for degree 9.
pub fn rule_rm(c: &Candidate) -> RuleVerdict {
    let r = c.ledger.rm_residual(DEGREE);
    RuleVerdict::check(
        RuleId::RokhlinMishachev,
        (r != 0).then(|| {
            Evidence::new("2(Pi+ - Pi-) + (Lambda+ - Lambda-) = 8")
                .with("residual", r)
                .with("PiDelta", c.ledger.pi_delta())
                .with("LambdaDelta", c.ledger.lambda_delta())
        }),
    )
}

pub fn rule_lemma10(c: &Candidate) -> RuleVerdict {
    let r = c.ledger.lemma10_residuals();
    RuleVerdict::check(
        RuleId::Lemma10,
        r.iter().any(|&x| x != 0).then(|| {
            let mut e = Evidence::new("zone identities 1-5 (residuals rhs - lhs)");
            for (i, x) in r.iter().enumerate() {
                e = e.with(&format!("r{}", i + 1), *x);
            }
            e.with("deficit", c.ledger.lambda_deficit())
        }),
    )
}

pub fn rule_lambda0_bound(c: &Candidate) -> RuleVerdict {
    let id = RuleId::Lambda0Bound;
    if !c.flags.only_exterior[0] {
        return RuleVerdict::inapplicable(id);
    }
    let l0 = c.ledger.lambda[T0];
    if l0.abs() > 3 {
        return RuleVerdict::violated(id, Evidence::new("|lambda0| <= 3").with("lambda0", l0).with("tier", 1));
    }
    if c.options.lambda0_tier2 && l0.abs() > 2 {
        return RuleVerdict::violated(id, Evidence::new("|lambda0| <= 2").with("lambda0", l0).with("tier", 2));
    }
    if l0.abs() == 3 {
        if let Some(curve) = &c.curve {
            let sep = curve.nests.iter().filter(|n| n.is_separating()).count() as i64;
            if sep < 3 {
                return RuleVerdict::violated(
                    id,
                    Evidence::new("lambda0 = +-3 requires all non-empty ovals separating")
                        .with("lambda0", l0)
                        .with("separating", sep),
                );
            }
            let want = -2 * l0;
            if c.ledger.epsilon_sum() != want {
                return RuleVerdict::violated(
                    id,
                    Evidence::new("lambda0 = +-3 requires sum(epsilon) = -+6")
                        .with("lambda0", l0)
                        .with("epsilonSum", c.ledger.epsilon_sum()),
                );
            }
            if (0..3).all(|i| c.ledger.zone_pop[quad(i)] > 0) {
                return RuleVerdict::violated(
                    id,
                    Evidence::new("lambda0 = +-3 requires an empty quadrangle").with("lambda0", l0),
                );
            }
        }
    }
    RuleVerdict::satisfied(id)
}

/// Bound for one triangle `T_i`, `i` in `1..=3`.
pub fn rule_triangle_bound_at(c: &Candidate, i: usize) -> RuleVerdict {
    let id = RuleId::TriangleBound;
    if !c.flags.only_exterior[i] {
        return RuleVerdict::inapplicable(id);
    }
    let l = c.ledger.lambda[tri(i - 1)];
    let deficit = c.ledger.lambda_deficit();
    let key = format!("lambda{}", i + 3);
    let violation = if l.abs() > 3 {
        Some(Evidence::new(format!("|lambda{}| <= 3", i + 3)))
    } else if l == -3 {
        Some(Evidence::new(format!("|lambda{}| = 3 forces lambda{} = +3", i + 3, i + 3)))
    } else if l == 3 && deficit != -2 {
        Some(Evidence::new(format!("lambda{} = 3 forces lambda0 - lambda4 - lambda5 - lambda6 = -2", i + 3)))
    } else {
        None
    };
    RuleVerdict::check(
        id,
        violation.map(|e| e.with(&key, l).with("triangle", i as i64).with("deficit", deficit)),
    )
}

pub fn rule_triangle_bound(c: &Candidate) -> RuleVerdict {
    let verdicts: Vec<RuleVerdict> = (1..=3).map(|i| rule_triangle_bound_at(c, i)).collect();
    combine(RuleId::TriangleBound, verdicts)
}

fn combine(id: RuleId, verdicts: Vec<RuleVerdict>) -> RuleVerdict {
    if let Some(v) = verdicts.iter().find(|v| v.is_violated()) {
        return v.clone();
    }
    if verdicts.iter().any(|v| v.status == Status::Satisfied) {
        RuleVerdict::satisfied(id)
    } else {
        RuleVerdict::inapplicable(id)
    }
}

/// Triangles that may hold exterior ovals: `{z : E_z = 0}`.
pub fn allowed_zones(schemes: &[NestScheme; 3]) -> Vec<usize> {
    let e = e_values(&schemes[0], &schemes[1], &schemes[2]);
    (0..4).filter(|&z| e[z] == 0).collect()
}

pub fn rule_exterior_zone(c: &Candidate) -> RuleVerdict {
    let id = RuleId::ExteriorZone;
    let Some(curve) = &c.curve else {
        return RuleVerdict::inapplicable(id);
    };
    if !c.flags.exterior_present.iter().any(|&b| b) {
        return RuleVerdict::inapplicable(id);
    }
    let s = curve.schemes();
    let e = e_values(&s[0], &s[1], &s[2]);
    let allowed = allowed_zones(&s);
    for z in 0..4 {
        if c.flags.exterior_present[z] && e[z] != 0 {
            let mut ev = Evidence::new(format!("exterior oval in T{z} requires E{z} = 0"))
                .with("zone", z as i64)
                .with(&format!("E{z}"), e[z]);
            ev.values.insert("allowedMask".into(), allowed.iter().map(|z| 1i64 << z).sum());
            return RuleVerdict::violated(id, ev);
        }
    }
    RuleVerdict::satisfied(id)
}

pub fn rule_separating(c: &Candidate) -> RuleVerdict {
    let id = RuleId::Separating;
    let Some(curve) = &c.curve else {
        return RuleVerdict::inapplicable(id);
    };
    let mut applicable = false;
    for i in 0..3 {
        let n = &curve.nests[i];
        // The formula needs a second interior oval on the T_i side.
        if !n.is_separating() || n.scheme.alpha() < 2 {
            continue;
        }
        applicable = true;
        let (j, k) = others(i);
        let r = second_formula_residual(n, &curve.nests[j].scheme, &curve.nests[k].scheme)
            .expect("separating type");
        if r != 0 {
            return RuleVerdict::violated(
                id,
                Evidence::new(format!("F{} = G{} + G{}", i + 1, j + 1, k + 1))
                    .with("nest", i as i64 + 1)
                    .with("residual", r),
            );
        }
    }
    if applicable {
        RuleVerdict::satisfied(id)
    } else {
        RuleVerdict::inapplicable(id)
    }
}

pub fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn empty_triangle_schemes_ok(schemes: &[NestScheme; 3]) -> bool {
    let odd_pair = |s: &NestScheme| s.diff().abs() == 1 && s.mu() != Some(s.nu);
    let jump_triple = |s: &NestScheme| s.diff().abs() == 2 && s.mu() != Some(s.nu);
    // Two nests of the first kind and one of the second, in any order.
    (0..3).any(|k| {
        let (i, j) = others(k);
        jump_triple(&schemes[k]) && odd_pair(&schemes[i]) && odd_pair(&schemes[j])
    })
}

pub fn rule_empty_triangles(c: &Candidate) -> RuleVerdict {
    let id = RuleId::EmptyTriangles;
    let Some(curve) = &c.curve else {
        return RuleVerdict::inapplicable(id);
    };
    let pops = &c.ledger.zone_pop;
    if [T0, tri(0), tri(1), tri(2)].iter().any(|&z| pops[z] > 0) {
        return RuleVerdict::inapplicable(id);
    }
    let s = curve.schemes();
    RuleVerdict::check(
        id,
        (!empty_triangle_schemes_ok(&s)).then(|| {
            Evidence::new(format!(
                "empty triangles require S1, S2 in {{(+, -), (-, +)}} and S3 in {{(+, -, -), (-, +, +)}}; got {} {} {}",
                s[0], s[1], s[2]
            ))
            .with("PiDelta", c.ledger.pi_delta())
        }),
    )
}

pub fn rule_jump(c: &Candidate) -> RuleVerdict {
    let id = RuleId::Jump;
    let Some(jump) = c.curve.as_ref().and_then(|ct| ct.jump) else {
        return RuleVerdict::inapplicable(id);
    };
    let l = &c.ledger;
    let k = jump.nest;
    let pd = l.pi_delta();
    let eps = l.epsilon[k];
    let (i, j) = others(k);
    let crossing_ok = jump.crossing != Some(false);
    let non_crossing_ok = jump.crossing != Some(true);
    let case1 = l.lambda_deficit() == 0 && pd == 4;
    let case2 = crossing_ok
        && l.lambda[T0] - l.lambda[tri(i)] - l.lambda[tri(j)] == -1
        && eps == 1
        && pd == 3;
    let case3 = non_crossing_ok && l.lambda[tri(k)] == 1 && eps == -1 && pd == 3;
    RuleVerdict::check(
        id,
        (!(case1 || case2 || case3)).then(|| {
            Evidence::new("a jump needs one of: deficit = 0 and PiDelta = 4; crossing case; non-crossing case")
                .with("PiDelta", pd)
                .with("deficit", l.lambda_deficit())
                .with("jumpNest", k as i64 + 1)
                .with("epsilonO", eps)
        }),
    )
}

pub fn rule_populations(c: &Candidate) -> RuleVerdict {
    let l = &c.ledger;
    let total: u32 = l.zone_pop.iter().sum();
    let violation = if let Err(e) = l.validate() {
        Some(Evidence::new(e.to_string()))
    } else if total != NON_PRINCIPAL_OVALS {
        Some(Evidence::new(format!("zone populations sum to {NON_PRINCIPAL_OVALS}")).with("total", total))
    } else {
        None
    };
    RuleVerdict::check(RuleId::Populations, violation)
}

/// One catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: RuleId,
    pub citation: &'static str,
    pub hypothesis: &'static str,
    pub statement: &'static str,
}

impl Rule {
    pub fn check(&self, c: &Candidate) -> RuleVerdict {
        match self.id {
            RuleId::Jump => rule_jump(c),
            RuleId::Separating => rule_separating(c),
            RuleId::ExteriorZone => rule_exterior_zone(c),
            RuleId::EmptyTriangles => rule_empty_triangles(c),
            RuleId::Lambda0Bound => rule_lambda0_bound(c),
            RuleId::TriangleBound => rule_triangle_bound(c),
            RuleId::RokhlinMishachev => rule_rm(c),
            RuleId::Lemma10 => rule_lemma10(c),
            RuleId::Populations => rule_populations(c),
        }
    }
}

fn rule_entry(id: RuleId) -> Rule {
    let (citation, hypothesis, statement) = match id {
        RuleId::Jump => (
            "Lemma 18; Lemma 7",
            "the curve has a jump",
            "deficit = 0 and PiDelta = 4; or crossing, lambda0 - (other triangles) = -1, epsilon(O) = 1, PiDelta = 3; or non-crossing, lambda(T of jump) = 1, epsilon(O) = -1, PiDelta = 3",
        ),
        RuleId::Separating => (
            "Lemma 20",
            "some non-empty oval O_i is separating (with a second interior oval in T_i)",
            "F_i = G_j + G_k",
        ),
        RuleId::ExteriorZone => (
            "Lemma 19",
            "some triangle T_i holds an exterior oval",
            "E_i = 0",
        ),
        RuleId::EmptyTriangles => (
            "Lemma 21",
            "T0, T1, T2, T3 hold no ovals",
            "S1, S2 in {(+, -), (-, +)} and S3 in {(+, -, -), (-, +, +)}, up to nest order",
        ),
        RuleId::Lambda0Bound => (
            "Lemma 16; Proposition 2 (tier 2)",
            "T0 contains only exterior ovals",
            "|lambda0| <= 3 (<= 2 at tier 2); lambda0 = +-3 forces all nests separating, sum(epsilon) = -+6 and an empty quadrangle",
        ),
        RuleId::TriangleBound => (
            "Proposition 1",
            "T_i contains only exterior ovals",
            "|lambda_{i+3}| <= 3; equality only as lambda_{i+3} = +3 with lambda0 - lambda4 - lambda5 - lambda6 = -2",
        ),
        RuleId::RokhlinMishachev => (
            "Rokhlin-Mishachev formula",
            "always",
            "2(Pi+ - Pi-) + (Lambda+ - Lambda-) = L - 1 - k(k+1) = 8",
        ),
        RuleId::Lemma10 => (
            "Lemma 10",
            "always",
            "three pencil identities, their sum, and lambda0 - lambda4 - lambda5 - lambda6 = -(Lambda+ - Lambda-)/2 = Pi+ - Pi- - 4",
        ),
        RuleId::Populations => (
            "M-curve oval count",
            "always",
            "|lambda_z| <= pop(z) with equal parity; 22 non-principal ovals; Lambda+ + Lambda- = 28",
        ),
    };
    Rule { id, citation, hypothesis, statement }
}

/// Immutable rule set, optionally with ablated rules removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCatalog {
    rules: Vec<Rule>,
}

impl Default for RuleCatalog {
    fn default() -> Self {
        Self::full()
    }
}

impl RuleCatalog {
    pub fn full() -> Self {
        RuleCatalog { rules: RuleId::ALL.into_iter().map(rule_entry).collect() }
    }

    pub fn without(ablate: &[RuleId]) -> Self {
        RuleCatalog {
            rules: RuleId::ALL
                .into_iter()
                .filter(|id| !ablate.contains(id))
                .map(rule_entry)
                .collect(),
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn contains(&self, id: RuleId) -> bool {
        self.rules.iter().any(|r| r.id == id)
    }

    pub fn get(&self, id: RuleId) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn evaluate(&self, c: &Candidate) -> Vec<RuleVerdict> {
        self.rules.iter().map(|r| r.check(c)).collect()
    }

    /// First violated rule in evaluation order.
    pub fn first_violation(&self, c: &Candidate) -> Option<RuleVerdict> {
        self.rules.iter().map(|r| r.check(c)).find(|v| v.is_violated())
    }
}

/// The signs of the three non-empty ovals as recorded in a ledger.
pub fn nest_signs(ledger: &OrientationLedger) -> [Option<Sign>; 3] {
    [0, 1, 2].map(|i| Sign::from_value(ledger.epsilon[i]))
}
