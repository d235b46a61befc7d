//! Per-nest terms of the two complex orientation formulas and their residuals.
//!
//! A nest `(A_l, O_l)` pairs the non-empty oval with a chosen base oval. Pair
//! signs follow the annulus criterion, under which an injective pair of ovals
//! with opposite signs counts as positive; hence `pi + pi'` of a nest equals its
//! contribution to `Pi+ - Pi-`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scheme::{alternating, ComplexType, NestScheme, SepTag, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrevkovError {
    #[error("complex type {0} is non-separating")]
    NonSeparating(String),
    #[error("depth pattern violated: {0}")]
    DepthPattern(String),
}

/// How the base oval `A_l` of a nest is chosen; only its sign matters for the terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseConvention {
    /// `(A_l, O_l)` is a positive pair: `A_l` has the sign opposite to `O_l`.
    PositivePair,
    /// `A_l` has the given sign (e.g. the extreme oval on the T0 side).
    Explicit(Sign),
}

impl BaseConvention {
    pub fn base_sign(self, nu: Sign) -> Sign {
        match self {
            BaseConvention::PositivePair => nu.flip(),
            BaseConvention::Explicit(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrevkovTerms {
    pub pi: i32,
    #[serde(rename = "piPrime")]
    pub pi_prime: i32,
    #[serde(rename = "bigN")]
    pub big_n: i32,
    #[serde(rename = "bigM")]
    pub big_m: i32,
    /// Positive ovals among `(A_l, O_l)`.
    #[serde(rename = "P")]
    pub p: i32,
    /// Negative ovals among `(A_l, O_l)`.
    #[serde(rename = "Q")]
    pub q: i32,
    /// `Pi^+_- - Pi^+_+` over small ovals inside the nest.
    #[serde(rename = "PiL")]
    pub pi_l: i32,
    /// `Pi^-_+ - Pi^-_-` over small ovals inside the nest.
    #[serde(rename = "PiPrimeL")]
    pub pi_prime_l: i32,
    /// 0 if `O_l` is positive, 1 if negative.
    #[serde(rename = "nuV")]
    pub nu_v: i32,
}

/// Terms with the positive-pair base convention.
pub fn nest_terms(scheme: &NestScheme) -> OrevkovTerms {
    nest_terms_with(scheme, BaseConvention::PositivePair)
}

pub fn nest_terms_with(scheme: &NestScheme, conv: BaseConvention) -> OrevkovTerms {
    let d = scheme.diff();
    let base = conv.base_sign(scheme.nu);
    // Small ovals: the interior ovals other than the base.
    let (mut small_plus, mut small_minus) = (scheme.a_plus as i32, scheme.a_minus as i32);
    match base {
        Sign::Plus => small_plus -= 1,
        Sign::Minus => small_minus -= 1,
    }
    let positives = [scheme.nu, base].iter().filter(|s| **s == Sign::Plus).count() as i32;
    match scheme.nu {
        Sign::Plus => OrevkovTerms {
            pi: -d,
            pi_prime: 0,
            big_n: 1,
            big_m: 0,
            p: positives,
            q: 2 - positives,
            pi_l: small_minus - small_plus,
            pi_prime_l: 0,
            nu_v: 0,
        },
        Sign::Minus => OrevkovTerms {
            pi: 0,
            pi_prime: d,
            big_n: 0,
            big_m: 1,
            p: positives,
            q: 2 - positives,
            pi_l: 0,
            pi_prime_l: small_plus - small_minus,
            nu_v: 1,
        },
    }
}

/// Contribution of a nest to `Pi+ - Pi-`.
pub fn pi_delta(scheme: &NestScheme) -> i32 {
    let t = nest_terms(scheme);
    t.pi + t.pi_prime
}

/// `G_l = P_l^2 - P_l - Pi_l`.
pub fn g_value(scheme: &NestScheme) -> i32 {
    g_value_with(scheme, BaseConvention::PositivePair)
}

pub fn g_value_with(scheme: &NestScheme, conv: BaseConvention) -> i32 {
    let t = nest_terms_with(scheme, conv);
    t.p * t.p - t.p - t.pi_l
}

/// `F_i` by complex type: `(nu, tag)` for even separating nests and
/// `(nu, mu, s)` for odd ones.
const F_TABLE: [((Sign, i32, SepTag), i32); 8] = [
    ((Sign::Minus, 0, SepTag::D), 0),
    ((Sign::Minus, 0, SepTag::U), -1),
    ((Sign::Plus, 0, SepTag::D), 0),
    ((Sign::Plus, 0, SepTag::U), -1),
    ((Sign::Minus, -1, SepTag::S), -1),
    ((Sign::Minus, 1, SepTag::S), 0),
    ((Sign::Plus, -1, SepTag::S), 0),
    ((Sign::Plus, 1, SepTag::S), -1),
];

pub fn f_value(ty: &ComplexType) -> Result<i32, OrevkovError> {
    if !ty.is_separating() {
        return Err(OrevkovError::NonSeparating(ty.to_string()));
    }
    let key = (ty.scheme.nu, ty.scheme.diff(), ty.tag);
    F_TABLE
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, f)| *f)
        .ok_or_else(|| OrevkovError::NonSeparating(ty.to_string()))
}

/// Interior chain of a separating nest, ordered from the extreme oval on the
/// `T_i` side (index 0) to the extreme oval `A'_i` on the `T0` side.
pub fn separating_chain(ty: &ComplexType, alpha: u32) -> Option<Vec<Sign>> {
    let t0_end = ty.t0_extreme_sign()?;
    let len = alpha as usize;
    let start = if len % 2 == 1 { t0_end } else { t0_end.flip() };
    Some(alternating(start, len))
}

/// `F_i` evaluated from its definition on an explicit chain of `alpha` ovals,
/// with base oval at `base` and the fourth nest's oval `A_4` at `a4 < base`
/// (inside `T_i`). Returns `None` if the positions are invalid.
pub fn f_value_from_chain(ty: &ComplexType, alpha: u32, base: usize, a4: usize) -> Option<i32> {
    let chain = separating_chain(ty, alpha)?;
    if base >= chain.len() || a4 >= base {
        return None;
    }
    let nu = ty.scheme.nu;
    let net = |range: std::ops::Range<usize>, want: Sign| -> i32 {
        range
            .filter(|&p| p != a4)
            .map(|p| if chain[p] == want { 1 } else { -1 })
            .sum()
    };
    // Int+(V) lies off the principal triangle (T_i side), Int-(V) inside it (T0 side).
    let (tilde_prime_i, tilde_4) = match nu {
        Sign::Minus => (net(base + 1..chain.len(), Sign::Plus), 0),
        Sign::Plus => (0, net(0..base, Sign::Minus)),
    };
    let count = |signs: [Sign; 2], want: Sign| signs.iter().filter(|s| **s == want).count() as i32;
    let q_i = count([chain[base], nu], Sign::Minus);
    let p_4 = count([chain[a4], nu], Sign::Plus);
    let nu_v = if nu == Sign::Minus { 1 } else { 0 };
    Some(tilde_prime_i + tilde_4 - (q_i * q_i - 2 * q_i + p_4 * p_4 - p_4 + nu_v))
}

/// `(E0, E1, E2, E3)`: `E_i` swaps in `pi'` and `M` at slot `i`.
pub fn e_values(s1: &NestScheme, s2: &NestScheme, s3: &NestScheme) -> [i32; 4] {
    let t = [nest_terms(s1), nest_terms(s2), nest_terms(s3)];
    let mut e = [0; 4];
    e[0] = t.iter().map(|x| x.pi - x.big_n).sum();
    for i in 0..3 {
        e[i + 1] = (0..3)
            .map(|l| if l == i { t[l].pi_prime - t[l].big_m } else { t[l].pi - t[l].big_n })
            .sum();
    }
    e
}

/// One nest entering the first formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestDescriptor {
    pub depth: u32,
    pub pi: i32,
    #[serde(rename = "piPrime")]
    pub pi_prime: i32,
    #[serde(rename = "bigN")]
    pub big_n: i32,
    #[serde(rename = "bigM")]
    pub big_m: i32,
}

impl NestDescriptor {
    /// Depth-2 nest `(A_l, O_l)`.
    pub fn of_scheme(scheme: &NestScheme) -> Self {
        let t = nest_terms(scheme);
        NestDescriptor { depth: 2, pi: t.pi, pi_prime: t.pi_prime, big_n: t.big_n, big_m: t.big_m }
    }

    /// A single empty exterior oval.
    pub fn exterior_oval() -> Self {
        NestDescriptor { depth: 1, pi: 0, pi_prime: 0, big_n: 0, big_m: 0 }
    }
}

/// Residual `lhs - rhs` of the first formula for four nests of depths `(2, 2, 2, 1)`
/// where the point of nest `inner` lies in the principal triangle of the other three.
pub fn first_formula_residual(nests: &[NestDescriptor; 4], inner: usize) -> Result<i32, OrevkovError> {
    let depths: Vec<u32> = nests.iter().map(|n| n.depth).collect();
    if depths[..3] != [2, 2, 2] || depths[3] != 1 {
        return Err(OrevkovError::DepthPattern(format!("expected (2, 2, 2, 1), got {depths:?}")));
    }
    if inner > 3 {
        return Err(OrevkovError::DepthPattern(format!("no nest {inner}")));
    }
    let ext = &nests[3];
    if ext.pi_prime != 0 || ext.big_m != 0 || ext.pi != 0 || ext.big_n != 0 {
        return Err(OrevkovError::DepthPattern("the depth-1 nest must be a single empty oval".into()));
    }
    let lhs: i32 = (0..4)
        .map(|l| if l == inner { nests[l].pi_prime } else { nests[l].pi })
        .sum();
    let rhs: i32 = (0..4)
        .map(|l| if l == inner { nests[l].big_m.pow(2) } else { nests[l].big_n.pow(2) })
        .sum();
    Ok(lhs - rhs)
}

/// `E_z` as a first-formula residual: an exterior oval in triangle `zone`
/// (`0` for T0, `i` for T_i).
pub fn e_value_via_first_formula(schemes: &[NestScheme; 3], zone: usize) -> i32 {
    let mut nests = [NestDescriptor::exterior_oval(); 4];
    for i in 0..3 {
        nests[i] = NestDescriptor::of_scheme(&schemes[i]);
    }
    // An oval in T0 lies in the principal triangle of the three nests;
    // for T_i the i-th nest's point lies in the triangle of the others.
    let inner = if zone == 0 { 3 } else { zone - 1 };
    first_formula_residual(&nests, inner).expect("valid depth pattern")
}

/// `F_i - G_j - G_k` for separating `sep` and the other two nests.
pub fn second_formula_residual(sep: &ComplexType, sj: &NestScheme, sk: &NestScheme) -> Result<i32, OrevkovError> {
    Ok(f_value(sep)? - g_value(sj) - g_value(sk))
}
