use serde::Serialize;

use crate::error::{Error, Result};
use crate::intnum;

/// From `W(n) < 4514.7 n^{1/8}`: `(q, m)` is settled once
/// `q^{m/4-1} > 2.03825 × 10^7`.
pub const GENERIC_REGION_CONSTANT: f64 = 2.03825e7;

/// Odd characteristic, m ≥ 5: each stage settles `(q, m)` when
/// `ω(q^m-1) ≥ omega_min` or `q^m > threshold`. Only the `q^m` half is used
/// here; the stages are ordered from the coarsest core choice down.
pub const ODD_LADDER: [(f64, u32); 5] = [
    (3.73594e51, 33),
    (5.60424e22, 18),
    (2.80588e18, 16),
    (3.84682e17, 15),
    (1.31951e17, 4),
];

/// Even characteristic, m ≥ 5: settled when `q^{3m/10-1} > 84`.
pub const EVEN_LADDER_CONSTANT: f64 = 84.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionBound {
    /// `q^{m/4-1} > 2.03825e7`.
    Generic,
    /// `q^m > threshold` at the given odd-characteristic stage.
    OddLadder { stage: usize, threshold: f64 },
    /// `q^{3m/10-1} > 84`.
    EvenLadder,
}

impl RegionBound {
    pub fn describe(&self) -> String {
        match self {
            RegionBound::Generic => format!("q^(m/4-1) > {GENERIC_REGION_CONSTANT:e}"),
            RegionBound::OddLadder { stage, threshold } => {
                format!("odd ladder stage {stage}: q^m > {threshold:e}")
            }
            RegionBound::EvenLadder => format!("q^(3m/10-1) > {EVEN_LADDER_CONSTANT}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub q: u64,
    pub m: u32,
    pub eliminated: bool,
    pub bound: Option<RegionBound>,
}

pub fn region_check(q: u64, m: u32) -> Result<bool> {
    Ok(region_report(q, m)?.eliminated)
}

pub fn region_report(q: u64, m: u32) -> Result<RegionReport> {
    let (p, _) = intnum::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let lq = (q as f64).log10();
    let mf = m as f64;
    let mut bound = None;
    if (mf / 4.0 - 1.0) * lq > GENERIC_REGION_CONSTANT.log10() {
        bound = Some(RegionBound::Generic);
    } else if m >= 5 && p != 2 {
        bound = ODD_LADDER
            .iter()
            .enumerate()
            .find(|(_, (threshold, _))| mf * lq > threshold.log10())
            .map(|(stage, &(threshold, _))| RegionBound::OddLadder { stage, threshold });
    } else if m >= 5 && (0.3 * mf - 1.0) * lq > EVEN_LADDER_CONSTANT.log10() {
        bound = Some(RegionBound::EvenLadder);
    }
    Ok(RegionReport {
        q,
        m,
        eliminated: bound.is_some(),
        bound,
    })
}
