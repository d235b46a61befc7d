//! Real schemes, nest complex schemes and complex types of degree-9
//! M-curves with three nests.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Degree handled by this crate.
pub const DEGREE: u32 = 9;
/// Number of ovals of a degree-9 M-curve (g + 1 components minus the pseudo-line).
pub const OVAL_COUNT: u32 = 28;
/// Empty ovals of a three-nest scheme: all ovals except the three non-empty ones.
pub const EMPTY_OVAL_COUNT: u32 = OVAL_COUNT - 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Sign of an oval with respect to the orientation of the pseudo-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Isotopy type `<J + 1<a1> + 1<a2> + 1<a3> + beta>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RealScheme {
    pub alpha: [u32; 3],
    pub beta: u32,
}

impl RealScheme {
    /// Checked constructor: every nest non-empty and 25 empty ovals in total.
    pub fn new(alpha: [u32; 3], beta: u32) -> Result<Self, SchemeError> {
        let s = Self::unchecked(alpha, beta)?;
        let total = s.empty_ovals();
        if total != EMPTY_OVAL_COUNT {
            return Err(SchemeError::Invariant(format!(
                "alpha1 + alpha2 + alpha3 + beta = {total}, an M-curve of degree 9 needs {EMPTY_OVAL_COUNT}"
            )));
        }
        Ok(s)
    }

    /// Skips the oval-count check (lenient parsing); nests must still be non-empty.
    pub fn unchecked(alpha: [u32; 3], beta: u32) -> Result<Self, SchemeError> {
        if let Some(i) = alpha.iter().position(|&a| a == 0) {
            return Err(SchemeError::Invariant(format!("nest {} has no interior oval", i + 1)));
        }
        Ok(RealScheme { alpha, beta })
    }

    pub fn degree(&self) -> u32 {
        DEGREE
    }

    pub fn empty_ovals(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta
    }

    pub fn is_canonical(&self) -> bool {
        self.alpha[0] <= self.alpha[1] && self.alpha[1] <= self.alpha[2]
    }

    pub fn canonical(&self) -> RealScheme {
        let mut alpha = self.alpha;
        alpha.sort_unstable();
        RealScheme { alpha, beta: self.beta }
    }

    pub fn all_even(&self) -> bool {
        self.alpha.iter().all(|a| a % 2 == 0)
    }

    /// Scheme with nests relabeled so that nest `i` of the result is nest `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> RealScheme {
        RealScheme { alpha: perm.map(|p| self.alpha[p]), beta: self.beta }
    }
}

impl fmt::Display for RealScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::viro::format_real_scheme(self))
    }
}

/// Complex scheme `1_nu <a+ + a->` of one nest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NestScheme {
    pub nu: Sign,
    #[serde(rename = "aPlus")]
    pub a_plus: u32,
    #[serde(rename = "aMinus")]
    pub a_minus: u32,
}

impl NestScheme {
    pub fn new(nu: Sign, a_plus: u32, a_minus: u32) -> Result<Self, SchemeError> {
        let s = NestScheme { nu, a_plus, a_minus };
        if s.alpha() == 0 {
            return Err(SchemeError::Invariant("nest without interior ovals".into()));
        }
        if s.diff().abs() > 2 {
            return Err(SchemeError::Invariant(format!(
                "|a+ - a-| = {} exceeds 2 (at most one jump)",
                s.diff().abs()
            )));
        }
        Ok(s)
    }

    /// Scheme with the given sign difference, for a nest of `alpha` ovals.
    pub fn with_diff(nu: Sign, alpha: u32, diff: i32) -> Result<Self, SchemeError> {
        let a = alpha as i32;
        if (a + diff) % 2 != 0 || diff.abs() > a {
            return Err(SchemeError::Invariant(format!(
                "difference {diff} incompatible with {alpha} interior ovals"
            )));
        }
        Self::new(nu, ((a + diff) / 2) as u32, ((a - diff) / 2) as u32)
    }

    pub fn alpha(&self) -> u32 {
        self.a_plus + self.a_minus
    }

    /// `a+ - a-`.
    pub fn diff(&self) -> i32 {
        self.a_plus as i32 - self.a_minus as i32
    }

    /// Sign of `a+ - a-`, if nonzero.
    pub fn mu(&self) -> Option<Sign> {
        Sign::from_value(self.diff().signum())
    }

    /// Sort key `(|diff|, mu == nu, nu)`, the row order of the published term table.
    pub fn table_key(&self) -> (i32, bool, Sign, i32) {
        (self.diff().abs(), self.mu() == Some(self.nu), self.nu, self.diff())
    }

    /// Short encoding: `nu`, `(nu, mu)` or `(nu, mu, mu)`.
    pub fn short(&self) -> String {
        match self.mu() {
            None => self.nu.to_string(),
            Some(mu) if self.diff().abs() == 1 => format!("({}, {})", self.nu, mu),
            Some(mu) => format!("({}, {}, {})", self.nu, mu, mu),
        }
    }
}

impl fmt::Display for NestScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short())
    }
}

/// Separation tag of a nest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SepTag {
    /// Non-separating.
    N,
    /// Separating, odd nest.
    S,
    /// Separating, even nest, extreme T0-side interior oval negative.
    U,
    /// Separating, even nest, extreme T0-side interior oval positive.
    D,
}

impl SepTag {
    pub fn letter(self) -> char {
        match self {
            SepTag::N => 'n',
            SepTag::S => 's',
            SepTag::U => 'u',
            SepTag::D => 'd',
        }
    }

    pub fn is_separating(self) -> bool {
        self != SepTag::N
    }

    /// Tags admissible for a nest scheme.
    pub fn admissible(scheme: &NestScheme) -> &'static [SepTag] {
        match scheme.diff().abs() {
            0 => &[SepTag::N, SepTag::U, SepTag::D],
            1 => &[SepTag::N, SepTag::S],
            _ => &[SepTag::N],
        }
    }
}

/// Complex scheme of a nest plus its separation tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexType {
    pub scheme: NestScheme,
    pub tag: SepTag,
}

impl ComplexType {
    pub fn new(scheme: NestScheme, tag: SepTag) -> Result<Self, SchemeError> {
        if !SepTag::admissible(&scheme).contains(&tag) {
            return Err(SchemeError::Invariant(format!(
                "tag {} not admissible for nest scheme {}",
                tag.letter(),
                scheme
            )));
        }
        Ok(ComplexType { scheme, tag })
    }

    pub fn is_separating(&self) -> bool {
        self.tag.is_separating()
    }

    /// Sign of the extreme T0-side interior oval, when the tag fixes it.
    pub fn t0_extreme_sign(&self) -> Option<Sign> {
        match self.tag {
            SepTag::U => Some(Sign::Minus),
            SepTag::D => Some(Sign::Plus),
            SepTag::S => self.scheme.mu(),
            SepTag::N => None,
        }
    }

    /// Ordering used for canonical reports: − before +, then by scheme, then by tag.
    pub fn order_key(&self) -> (Sign, i32, SepTag) {
        (self.scheme.nu, self.scheme.diff(), self.tag)
    }
}

impl fmt::Display for ComplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.scheme;
        match (s.mu(), s.diff().abs()) {
            (None, _) => write!(f, "({}, {})", s.nu, self.tag.letter()),
            (Some(mu), 1) => write!(f, "({}, {}, {})", s.nu, mu, self.tag.letter()),
            (Some(_), _) => f.write_str(&s.short()),
        }
    }
}

/// The single jump a curve may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Jump {
    /// 0-based index of the jumped nest.
    #[serde(rename = "nestIndex")]
    pub nest: usize,
    /// Group sizes met by a pencil sweeping the nest: inside, outside, inside.
    pub repartition: [u32; 3],
    /// `None` leaves crossing/non-crossing open; the jump rule tries both.
    pub crossing: Option<bool>,
}

impl Jump {
    /// Signs along the whole chain (interior and exterior groups), starting with `start`.
    pub fn chain_signs(&self, start: Sign) -> Vec<Sign> {
        alternating(start, self.repartition.iter().sum::<u32>() as usize)
    }

    /// Signs of the interior ovals only (first and third group, in chain order).
    pub fn interior_signs(&self, start: Sign) -> Vec<Sign> {
        let [l1, l2, _] = self.repartition.map(|l| l as usize);
        self.chain_signs(start)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i < l1 || *i >= l1 + l2)
            .map(|(_, s)| s)
            .collect()
    }

    /// `a+ - a-` forced on the jumped nest by the repartition and the chain's first sign.
    pub fn forced_diff(&self, start: Sign) -> i32 {
        self.interior_signs(start).iter().map(|s| s.value()).sum()
    }
}

pub fn alternating(start: Sign, len: usize) -> Vec<Sign> {
    (0..len).map(|i| if i % 2 == 0 { start } else { start.flip() }).collect()
}

/// Complex type of the whole curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveType {
    pub nests: [ComplexType; 3],
    pub jump: Option<Jump>,
}

impl CurveType {
    pub fn new(nests: [ComplexType; 3], jump: Option<Jump>) -> Result<Self, SchemeError> {
        let ct = CurveType { nests, jump };
        ct.validate()?;
        Ok(ct)
    }

    pub fn without_jump(nests: [ComplexType; 3]) -> Result<Self, SchemeError> {
        Self::new(nests, None)
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        for (i, n) in self.nests.iter().enumerate() {
            ComplexType::new(n.scheme, n.tag)?;
            let jumped = self.jump.map(|j| j.nest) == Some(i);
            if !jumped && n.scheme.diff().abs() > 1 {
                return Err(SchemeError::Invariant(format!(
                    "nest {} has |a+ - a-| = 2 without a jump",
                    i + 1
                )));
            }
        }
        if let Some(j) = self.jump {
            if j.nest > 2 {
                return Err(SchemeError::Invariant("jump nest index out of range".into()));
            }
            let n = &self.nests[j.nest];
            if n.is_separating() {
                return Err(SchemeError::Invariant("a jumped nest is non-separating".into()));
            }
            let [l1, l2, l3] = j.repartition;
            if l1 == 0 || l2 == 0 || l3 == 0 {
                return Err(SchemeError::Invariant("repartition groups must be non-empty".into()));
            }
            if l1 + l3 != n.scheme.alpha() {
                return Err(SchemeError::Invariant(format!(
                    "inner groups {l1} + {l3} do not match the {} interior ovals",
                    n.scheme.alpha()
                )));
            }
            let d = n.scheme.diff();
            if !Sign::BOTH.iter().any(|&s| j.forced_diff(s) == d) {
                return Err(SchemeError::Invariant(format!(
                    "repartition ({l1}, {l2}, {l3}) cannot produce a+ - a- = {d}"
                )));
            }
            let all_odd = j.repartition.iter().all(|l| l % 2 == 1);
            if (d.abs() == 2) != all_odd {
                return Err(SchemeError::Invariant(
                    "|a+ - a-| = 2 in the jumped nest iff all groups are odd".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> [u32; 3] {
        self.nests.map(|n| n.scheme.alpha())
    }

    pub fn schemes(&self) -> [NestScheme; 3] {
        self.nests.map(|n| n.scheme)
    }

    /// Nest `i` of the result is nest `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> CurveType {
        let inv = inverse(perm);
        CurveType {
            nests: perm.map(|p| self.nests[p]),
            jump: self.jump.map(|j| Jump { nest: inv[j.nest], ..j }),
        }
    }
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.nests[0], self.nests[1], self.nests[2])?;
        if let Some(j) = self.jump {
            let [l1, l2, l3] = j.repartition;
            write!(f, " jump@{}({l1},{l2},{l3})", j.nest + 1)?;
            match j.crossing {
                Some(true) => write!(f, " crossing")?,
                Some(false) => write!(f, " non-crossing")?,
                None => {}
            }
        }
        Ok(())
    }
}

pub fn inverse(perm: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub const PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// All canonical three-nest schemes accepted by `filter`, in lexicographic order.
pub fn enumerate_three_nest_schemes<F>(filter: F) -> Vec<RealScheme>
where
    F: Fn(&[u32; 3], u32) -> bool,
{
    let mut out = Vec::new();
    for a1 in 1..=EMPTY_OVAL_COUNT {
        for a2 in a1..=EMPTY_OVAL_COUNT {
            for a3 in a2..=EMPTY_OVAL_COUNT {
                let Some(beta) = EMPTY_OVAL_COUNT.checked_sub(a1 + a2 + a3) else {
                    break;
                };
                let alpha = [a1, a2, a3];
                if filter(&alpha, beta) {
                    out.push(RealScheme { alpha, beta });
                }
            }
        }
    }
    out
}

/// The all-even family excluded by the main theorem.
pub fn all_even_schemes() -> Vec<RealScheme> {
    enumerate_three_nest_schemes(|a, _| a.iter().all(|x| x % 2 == 0))
}

/// Complex schemes of a nest of `alpha` interior ovals; `|a+ - a-| <= 1` unless a jump is allowed.
pub fn enumerate_nest_schemes(alpha: u32, jump_allowed: bool) -> Result<Vec<NestScheme>, SchemeError> {
    if alpha < 1 {
        return Err(SchemeError::Invariant("a nest needs at least one interior oval".into()));
    }
    let bound = if jump_allowed { 2 } else { 1 };
    let mut out = Vec::new();
    for nu in Sign::BOTH {
        for a_plus in (0..=alpha).rev() {
            let s = NestScheme { nu, a_plus, a_minus: alpha - a_plus };
            if s.diff().abs() <= bound {
                out.push(s);
            }
        }
    }
    Ok(out)
}
