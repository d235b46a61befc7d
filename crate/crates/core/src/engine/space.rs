//! Candidate complex types and the per-candidate search space.

use serde::{Deserialize, Serialize};

use crate::scheme::{
    alternating, enumerate_nest_schemes, ComplexType, CurveType, Jump, NestScheme, RealScheme, SepTag, Sign,
};

use super::EngineError;

/// Largest population any zone domain may reach.
pub const DOMAIN_LIMIT: u32 = 25;

/// How the base oval `A_i` of each nest is picked once the chain is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasePolicy {
    /// `(A_i, O_i)` a positive pair: `A_i` of sign `-nu_i`, extremes first.
    PositivePair,
    /// `A_i` at the T0 end of a separating chain, at the start of any other chain.
    ExtremeT0,
}

impl BasePolicy {
    pub const ALL: [BasePolicy; 2] = [BasePolicy::PositivePair, BasePolicy::ExtremeT0];

    pub fn index(self) -> i64 {
        match self {
            BasePolicy::PositivePair => 0,
            BasePolicy::ExtremeT0 => 1,
        }
    }

    /// Chain position of the base oval. Separating chains run from the `T_i`
    /// end (position 0) to the T0 end.
    pub fn base_position(self, ty: &ComplexType, chain: &[Sign]) -> usize {
        let last = chain.len() - 1;
        let want = ty.scheme.nu.flip();
        match (self, ty.is_separating()) {
            (BasePolicy::ExtremeT0, true) => last,
            (BasePolicy::ExtremeT0, false) => 0,
            (BasePolicy::PositivePair, true) => {
                if chain[last] == want {
                    last
                } else if chain[0] == want {
                    0
                } else {
                    (0..=last).rev().find(|&p| chain[p] == want).unwrap_or(last)
                }
            }
            (BasePolicy::PositivePair, false) => chain.iter().position(|&s| s == want).unwrap_or(0),
        }
    }
}

/// Sign chains one nest's interior ovals may form, in chain order.
pub fn chain_options(curve: &CurveType, i: usize) -> Vec<Vec<Sign>> {
    let ty = &curve.nests[i];
    let s = &ty.scheme;
    let alpha = s.alpha() as usize;
    let mut out: Vec<Vec<Sign>> = Vec::new();
    let mut push = |c: Vec<Sign>| {
        if !out.contains(&c) {
            out.push(c);
        }
    };
    match (curve.jump.filter(|j| j.nest == i), ty.tag) {
        (Some(jump), _) => {
            for start in Sign::BOTH {
                if jump.forced_diff(start) == s.diff() {
                    let c = jump.interior_signs(start);
                    let mut r = c.clone();
                    r.reverse();
                    push(c);
                    push(r);
                }
            }
        }
        (None, SepTag::D) => push(alternating(Sign::Minus, alpha)),
        (None, SepTag::U) => push(alternating(Sign::Plus, alpha)),
        (None, _) => match s.mu() {
            Some(mu) => push(alternating(mu, alpha)),
            None => {
                push(alternating(Sign::Plus, alpha));
                push(alternating(Sign::Minus, alpha));
            }
        },
    }
    out
}

/// All unknowns of one candidate that the engine enumerates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSpace {
    pub scheme: RealScheme,
    pub curve: CurveType,
    pub chains: [Vec<Vec<Sign>>; 3],
}

impl CandidateSpace {
    pub fn new(scheme: RealScheme, curve: CurveType) -> Result<Self, EngineError> {
        if scheme.beta > DOMAIN_LIMIT || scheme.alpha.iter().any(|&a| a > DOMAIN_LIMIT) {
            return Err(EngineError::DomainOverflow(scheme.to_string()));
        }
        if curve.alpha() != scheme.alpha {
            return Err(EngineError::Mismatch { curve: curve.to_string(), scheme: scheme.to_string() });
        }
        if let Some(j) = curve.jump {
            if j.repartition[1] > scheme.beta {
                return Err(EngineError::Mismatch { curve: curve.to_string(), scheme: scheme.to_string() });
            }
        }
        let chains = [0, 1, 2].map(|i| chain_options(&curve, i));
        Ok(CandidateSpace { scheme, curve, chains })
    }

    /// Every combination of chain options, in lexicographic order.
    pub fn chain_combos(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.chains[0].len() {
            for b in 0..self.chains[1].len() {
                for c in 0..self.chains[2].len() {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}

fn plain_types(alpha: u32) -> Vec<ComplexType> {
    let schemes = enumerate_nest_schemes(alpha, false).expect("positive nest size");
    let mut out = Vec::new();
    for s in schemes {
        for &tag in SepTag::admissible(&s) {
            out.push(ComplexType { scheme: s, tag });
        }
    }
    out
}

/// Smallest repartition `(l1, l2, l3)` with `l2 <= beta` producing `a+ - a- = diff`.
pub fn representative_repartition(alpha: u32, beta: u32, diff: i32) -> Option<[u32; 3]> {
    for l2 in 1..=beta {
        for l1 in 1..alpha {
            let jump = Jump { nest: 0, repartition: [l1, l2, alpha - l1], crossing: None };
            let all_odd = jump.repartition.iter().all(|l| l % 2 == 1);
            if all_odd == (diff.abs() == 2) && Sign::BOTH.iter().any(|&s| jump.forced_diff(s) == diff) {
                return Some(jump.repartition);
            }
        }
    }
    None
}

/// Every curve type consistent with the scheme: jump-free ones first, then
/// one representative per (jump nest, sign, difference) class.
pub fn candidate_complex_types(scheme: &RealScheme) -> Vec<CurveType> {
    let per_nest = scheme.alpha.map(plain_types);
    let mut out = Vec::new();
    for a in &per_nest[0] {
        for b in &per_nest[1] {
            for c in &per_nest[2] {
                out.push(CurveType { nests: [*a, *b, *c], jump: None });
            }
        }
    }
    for k in 0..3 {
        let alpha = scheme.alpha[k];
        for nu in Sign::BOTH {
            for diff in -2..=2 {
                let Ok(s) = NestScheme::with_diff(nu, alpha, diff) else {
                    continue;
                };
                let Some(repartition) = representative_repartition(alpha, scheme.beta, diff) else {
                    continue;
                };
                let jumped = ComplexType { scheme: s, tag: SepTag::N };
                let jump = Jump { nest: k, repartition, crossing: None };
                let lists: [Vec<ComplexType>; 3] =
                    [0, 1, 2].map(|i| if i == k { vec![jumped] } else { per_nest[i].clone() });
                for a in &lists[0] {
                    for b in &lists[1] {
                        for c in &lists[2] {
                            let ct = CurveType { nests: [*a, *b, *c], jump: Some(jump) };
                            debug_assert!(ct.validate().is_ok(), "{ct}");
                            out.push(ct);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Canonical representative of a jump-free curve type under nest permutation.
pub fn sorted_nests(curve: &CurveType) -> [ComplexType; 3] {
    let mut n = curve.nests;
    n.sort_by_key(display_key);
    n
}

fn display_key(t: &ComplexType) -> (Sign, i32, u8) {
    let tag = match t.tag {
        SepTag::D => 0,
        SepTag::U => 1,
        SepTag::S => 2,
        SepTag::N => 3,
    };
    (t.scheme.nu, t.scheme.diff(), tag)
}
