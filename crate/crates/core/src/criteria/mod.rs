//! Sufficient conditions for every `(q, m)`: the character-sum condition
//! `q^{m/2-1} > 2 W(q^m-1)^2`, the prime sieve with its Δ/Λ quantities, the
//! closed-form regional bounds, and regeneration of the two reference sieve
//! tables.

mod region;
mod tables;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intnum::{self, Factorization};

pub use region::{region_check, region_report, RegionBound, RegionReport, EVEN_LADDER_CONSTANT,
    GENERIC_REGION_CONSTANT, ODD_LADDER};
pub use tables::{table1, table2, PrintedRow, TableRow, TABLE1, TABLE2};

/// Validated `(q, m)` with `q = p^s` and the factored `q^m - 1`.
#[derive(Debug, Clone)]
pub struct PairInput {
    pub q: u64,
    pub m: u32,
    pub p: u64,
    pub s: u32,
    pub group_order: Factorization,
}

impl PairInput {
    pub fn new(q: u64, m: u32) -> Result<Self> {
        let (p, s) = intnum::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        let size = (q as u128)
            .checked_pow(m)
            .filter(|&v| v - 1 <= intnum::MAX_FACTOR_INPUT)
            .ok_or_else(|| Error::TooLarge(format!("{q}^{m} - 1")))?;
        let group_order = intnum::factorize(size - 1)?;
        Ok(PairInput { q, m, p, s, group_order })
    }

    /// `q^{m/2 - 1}`.
    pub fn lhs(&self) -> f64 {
        sieve_lhs(self.q, self.m)
    }
}

fn sieve_lhs(q: u64, m: u32) -> f64 {
    (q as f64).powf(m as f64 / 2.0 - 1.0)
}

/// Evaluation of `q^{m/2-1} > 2 W(q^m-1)^2`.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub q: u64,
    pub m: u32,
    pub omega: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub passes: bool,
}

pub fn base_condition(q: u64, m: u32) -> Result<ConditionReport> {
    let input = PairInput::new(q, m)?;
    let w = input.group_order.w() as f64;
    let lhs = input.lhs();
    let rhs = 2.0 * w * w;
    Ok(ConditionReport {
        q,
        m,
        omega: input.group_order.omega(),
        lhs,
        rhs,
        passes: lhs > rhs,
    })
}

/// Split of the primes of `q^m - 1` into a core `r` and sieving primes.
#[derive(Debug, Clone, PartialEq)]
pub struct SievePlan {
    pub q: u64,
    pub m: u32,
    pub r_primes: Vec<u128>,
    pub sieve_primes: Vec<u128>,
    /// `1 - 2 Σ 1/p_i` over the sieving primes, exact.
    pub delta: BigRational,
    /// `(2n-1)/Δ + 2`, absent when Δ ≤ 0.
    pub lambda: Option<f64>,
    pub lhs: f64,
    /// `2 W(r)^2 Λ`, absent when Δ ≤ 0.
    pub rhs: Option<f64>,
    pub passes: bool,
}

impl SievePlan {
    pub fn n(&self) -> usize {
        self.sieve_primes.len()
    }

    pub fn core_count(&self) -> usize {
        self.r_primes.len()
    }

    pub fn primes(&self) -> Vec<u128> {
        let mut all: Vec<u128> = self.r_primes.iter().chain(&self.sieve_primes).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn w_r(&self) -> u128 {
        1u128 << self.r_primes.len()
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64().unwrap_or(f64::NAN)
    }

    pub fn delta_positive(&self) -> bool {
        self.delta.is_positive()
    }

    /// `lhs - rhs`, or -∞ when the sieve is vacuous (Δ ≤ 0).
    pub fn margin(&self) -> f64 {
        self.rhs.map_or(f64::NEG_INFINITY, |rhs| self.lhs - rhs)
    }

    /// `2 Σ θ(p_i) - (2n - 1)` with `θ(p) = 1 - 1/p`; algebraically equal to Δ.
    pub fn delta_from_theta(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        let sum_theta = self
            .sieve_primes
            .iter()
            .map(|&p| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p)))
            .fold(BigRational::zero(), |acc, t| acc + t);
        let n = self.n() as i64;
        two * sum_theta - BigRational::from_integer(BigInt::from(2 * n - 1))
    }
}

impl Serialize for SievePlan {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let to_strings = |v: &[u128]| v.iter().map(u128::to_string).collect::<Vec<_>>();
        let mut st = serializer.serialize_struct("SievePlan", 13)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("primes", &to_strings(&self.primes()))?;
        st.serialize_field("r_primes", &to_strings(&self.r_primes))?;
        st.serialize_field("sieve_primes", &to_strings(&self.sieve_primes))?;
        st.serialize_field("omega_r", &self.core_count())?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("delta", &self.delta_f64())?;
        st.serialize_field("delta_exact", &self.delta.to_string())?;
        st.serialize_field("delta_positive", &self.delta_positive())?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("passes", &self.passes)?;
        st.end()
    }
}

/// Builds the plan whose core `r` holds the `core_count` smallest primes of
/// `q^m - 1`.
pub fn sieve_plan(q: u64, m: u32, core_count: usize) -> Result<SievePlan> {
    let input = PairInput::new(q, m)?;
    plan_for(&input, core_count)
}

pub(crate) fn plan_for(input: &PairInput, core_count: usize) -> Result<SievePlan> {
    let primes: Vec<u128> = input.group_order.primes().collect();
    if core_count > primes.len() {
        return Err(Error::InvalidArgument(format!(
            "core count {core_count} exceeds ω(q^m-1) = {}",
            primes.len()
        )));
    }
    let (r_primes, sieve_primes) = primes.split_at(core_count);
    let reciprocal_sum = sieve_primes
        .iter()
        .map(|&p| BigRational::new(BigInt::one(), BigInt::from(p)))
        .fold(BigRational::zero(), |acc, t| acc + t);
    let delta = BigRational::one() - BigRational::from_integer(BigInt::from(2)) * reciprocal_sum;
    let n = sieve_primes.len();
    let lambda = if n == 0 {
        Some(2.0)
    } else if delta.is_positive() {
        Some((2 * n - 1) as f64 / delta.to_f64().unwrap_or(f64::NAN) + 2.0)
    } else {
        None
    };
    let w_r = (1u128 << r_primes.len()) as f64;
    let rhs = lambda.map(|l| 2.0 * w_r * w_r * l);
    let lhs = input.lhs();
    let passes = delta.is_positive() && rhs.is_some_and(|r| lhs > r);
    Ok(SievePlan {
        q: input.q,
        m: input.m,
        r_primes: r_primes.to_vec(),
        sieve_primes: sieve_primes.to_vec(),
        delta,
        lambda,
        lhs,
        rhs,
        passes,
    })
}

/// First passing plan over core sizes 0..=ω, otherwise the plan with the
/// largest `lhs - rhs` (earliest wins ties).
pub fn best_sieve(q: u64, m: u32) -> Result<SievePlan> {
    let input = PairInput::new(q, m)?;
    let omega = input.group_order.omega() as usize;
    let mut best: Option<SievePlan> = None;
    for k in 0..=omega {
        let plan = plan_for(&input, k)?;
        if plan.passes {
            return Ok(plan);
        }
        if best.as_ref().map_or(true, |b| plan.margin() > b.margin()) {
            best = Some(plan);
        }
    }
    Ok(best.expect("at least one core size"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MersenneVerdict {
    pub applies: bool,
    pub member: bool,
}

/// `(2, m)` is a member whenever `2^m - 1` is a prime above 13.
pub fn mersenne_rule(m: u32) -> Result<MersenneVerdict> {
    if m == 0 || m > 127 {
        return Err(Error::InvalidArgument(format!("m = {m} out of range 1..=127")));
    }
    let value = (1u128 << m) - 1;
    let applies = intnum::is_prime(value)?;
    Ok(MersenneVerdict {
        applies,
        member: applies && value > 13,
    })
}
