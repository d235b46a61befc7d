//! Integer orientation state of a curve and the identities it must satisfy.
//!
//! Zones are indexed `0 = T0`, `1..=3 = Q1..Q3`, `4..=6 = T1..T3`, which is the
//! index order of the `lambda` contributions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scheme::OVAL_COUNT;

pub const T0: usize = 0;

/// Zone index of quadrangle `Q_i`, `i` a 0-based nest index.
pub fn quad(i: usize) -> usize {
    1 + i
}

/// Zone index of triangle `T_i`, `i` a 0-based nest index.
pub fn tri(i: usize) -> usize {
    4 + i
}

pub const ZONE_NAMES: [&str; 7] = ["T0", "Q1", "Q2", "Q3", "T1", "T2", "T3"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("degree {0} is even; the formula needs an odd degree")]
    EvenDegree(u32),
    #[error("epsilon_{0} = {1} is not a sign")]
    Epsilon(usize, i32),
    #[error("zone {zone}: |lambda| = {lambda} with population {pop}")]
    Zone { zone: &'static str, lambda: i32, pop: u32 },
    #[error("Lambda+ + Lambda- = {0}, expected {OVAL_COUNT}")]
    OvalTotal(u32),
    #[error("Lambda+ - Lambda- = {stored} but lambda and epsilon sum to {computed}")]
    LambdaBalance { stored: i32, computed: i32 },
}

/// Orientation bookkeeping: zone contributions, principal oval signs, oval and pair counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationLedger {
    pub lambda: [i32; 7],
    /// Signs of O1, O2, O3, A1, A2, A3 as +1/-1.
    pub epsilon: [i32; 6],
    #[serde(rename = "LambdaPlus")]
    pub lambda_plus: u32,
    #[serde(rename = "LambdaMinus")]
    pub lambda_minus: u32,
    #[serde(rename = "PiPlus")]
    pub pi_plus: u32,
    #[serde(rename = "PiMinus")]
    pub pi_minus: u32,
    #[serde(rename = "zonePop")]
    pub zone_pop: [u32; 7],
}

/// `L - 1 - k(k+1)` for an M-curve of odd degree `m = 2k + 1`.
pub fn rokhlin_mishachev_rhs(m: u32) -> Result<i64, LedgerError> {
    if m.is_multiple_of(2) {
        return Err(LedgerError::EvenDegree(m));
    }
    let (m, k) = (m as i64, (m as i64 - 1) / 2);
    let components = (m - 1) * (m - 2) / 2 + 1;
    Ok(components - 1 - k * (k + 1))
}

impl OrientationLedger {
    /// Ledger with `Lambda` and `Pi` counts derived from the given differences and totals.
    pub fn from_parts(
        lambda: [i32; 7],
        epsilon: [i32; 6],
        pi_delta: i32,
        pi_total: u32,
        zone_pop: [u32; 7],
    ) -> OrientationLedger {
        let lambda_delta: i32 = lambda.iter().sum::<i32>() + epsilon.iter().sum::<i32>();
        let (lp, lm) = split_total(OVAL_COUNT, lambda_delta);
        let (pp, pm) = split_total(pi_total, pi_delta);
        OrientationLedger {
            lambda,
            epsilon,
            lambda_plus: lp,
            lambda_minus: lm,
            pi_plus: pp,
            pi_minus: pm,
            zone_pop,
        }
    }

    pub fn lambda_delta(&self) -> i32 {
        self.lambda_plus as i32 - self.lambda_minus as i32
    }

    pub fn pi_delta(&self) -> i32 {
        self.pi_plus as i32 - self.pi_minus as i32
    }

    pub fn epsilon_sum(&self) -> i32 {
        self.epsilon.iter().sum()
    }

    /// Checks the type invariants (sign values, zone bounds and parities, oval totals).
    pub fn validate(&self) -> Result<(), LedgerError> {
        for (i, &e) in self.epsilon.iter().enumerate() {
            if e != 1 && e != -1 {
                return Err(LedgerError::Epsilon(i + 1, e));
            }
        }
        for z in 0..7 {
            let (l, p) = (self.lambda[z], self.zone_pop[z]);
            if l.unsigned_abs() > p || (l - p as i32) % 2 != 0 {
                return Err(LedgerError::Zone { zone: ZONE_NAMES[z], lambda: l, pop: p });
            }
        }
        let total = self.lambda_plus + self.lambda_minus;
        if total != OVAL_COUNT {
            return Err(LedgerError::OvalTotal(total));
        }
        let computed = self.lambda.iter().sum::<i32>() + self.epsilon_sum();
        if computed != self.lambda_delta() {
            return Err(LedgerError::LambdaBalance { stored: self.lambda_delta(), computed });
        }
        Ok(())
    }

    /// `2(Pi+ - Pi-) + (Lambda+ - Lambda-) - rhs(m)`.
    pub fn rm_residual(&self, m: u32) -> i64 {
        let rhs = rokhlin_mishachev_rhs(m).expect("odd degree");
        2 * self.pi_delta() as i64 + self.lambda_delta() as i64 - rhs
    }

    /// Ledger of the same curve with nests relabelled so that new nest `i` is old nest `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> OrientationLedger {
        let zone = |z: usize| match z {
            T0 => T0,
            1..=3 => quad(perm[z - 1]),
            _ => tri(perm[z - 4]),
        };
        let sign = |k: usize| if k < 3 { perm[k] } else { 3 + perm[k - 3] };
        OrientationLedger {
            lambda: std::array::from_fn(|z| self.lambda[zone(z)]),
            epsilon: std::array::from_fn(|k| self.epsilon[sign(k)]),
            zone_pop: std::array::from_fn(|z| self.zone_pop[zone(z)]),
            ..self.clone()
        }
    }

    /// `lambda0 - lambda4 - lambda5 - lambda6`.
    pub fn lambda_deficit(&self) -> i32 {
        let l = &self.lambda;
        l[0] - l[4] - l[5] - l[6]
    }

    /// Residuals `rhs - lhs` of the five zone identities, in their usual order.
    ///
    /// The fifth identity has two equalities; the residual of larger magnitude
    /// is reported (the first on ties).
    pub fn lemma10_residuals(&self) -> [i32; 5] {
        let l = &self.lambda;
        let e = &self.epsilon;
        // Each right-hand side halves a sum of four signs, which is always even.
        let r1 = -(e[2] + e[5] + e[1] + e[4]) / 2 - (l[0] + l[1] - l[4]);
        let r2 = -(e[2] + e[5] + e[0] + e[3]) / 2 - (l[0] + l[2] - l[5]);
        let r3 = -(e[1] + e[4] + e[0] + e[3]) / 2 - (l[0] + l[3] - l[6]);
        let r4 = -(3 * l[0] + l[1] + l[2] + l[3] - l[4] - l[5] - l[6] + self.epsilon_sum());
        let deficit = self.lambda_deficit();
        // Lambda+ + Lambda- = 28 keeps the difference even.
        let a = -self.lambda_delta() / 2 - deficit;
        let b = (self.pi_delta() - 4) - deficit;
        let r5 = if b.abs() > a.abs() { b } else { a };
        [r1, r2, r3, r4, r5]
    }
}

fn split_total(total: u32, delta: i32) -> (u32, u32) {
    let t = total as i32;
    (((t + delta) / 2).max(0) as u32, ((t - delta) / 2).max(0) as u32)
}
