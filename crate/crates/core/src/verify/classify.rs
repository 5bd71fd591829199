use serde::Serialize;

use super::search::{search_pair, PairReport, SearchOptions, Status, TripleScope};
use crate::criteria::{base_condition, best_sieve, region_report};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, LOG_TABLE_LIMIT};
use crate::intnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Scope,
    Region,
    Base,
    Sieve,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Member,
    Exceptional,
    Unresolved,
    OutOfScope,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Member => "member",
            Outcome::Exceptional => "exceptional",
            Outcome::Unresolved => "unresolved",
            Outcome::OutOfScope => "out_of_scope",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub q: u64,
    pub m: u32,
    pub outcome: Outcome,
    /// Last stage reached; the deciding one unless the outcome is unresolved.
    pub stage: Stage,
    pub detail: String,
    pub search: Option<PairReport>,
}

/// Runs region bounds, the base condition, the best sieve plan, and finally
/// the exhaustive search when the field is small enough.
pub fn classify(
    q: u64,
    m: u32,
    modulus: Option<Vec<u64>>,
    opts: &SearchOptions,
) -> Result<Verdict> {
    let (p, s) = intnum::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let verdict = |outcome, stage, detail: String| Verdict {
        q,
        m,
        outcome,
        stage,
        detail,
        search: None,
    };
    match m {
        0 => return Err(Error::InvalidArgument("m must be positive".into())),
        1 => {
            return Ok(verdict(
                Outcome::OutOfScope,
                Stage::Scope,
                "m = 1: the trace is the identity; only q - 1 a Mersenne prime can work".into(),
            ))
        }
        2 => {
            return Ok(verdict(
                Outcome::OutOfScope,
                Stage::Scope,
                "m = 2: no primitive element has trace 0".into(),
            ))
        }
        _ => {}
    }

    let region = region_report(q, m)?;
    if let Some(bound) = region.bound {
        return Ok(verdict(Outcome::Member, Stage::Region, bound.describe()));
    }

    match base_condition(q, m) {
        Ok(base) if base.passes => {
            return Ok(verdict(
                Outcome::Member,
                Stage::Base,
                format!("q^(m/2-1) = {:.6} > 2W^2 = {}", base.lhs, base.rhs),
            ))
        }
        Ok(_) => {}
        Err(Error::TooLarge(what)) => {
            return Ok(verdict(
                Outcome::Unresolved,
                Stage::Base,
                format!("{what} is too large to factor"),
            ))
        }
        Err(e) => return Err(e),
    }

    let plan = best_sieve(q, m)?;
    if plan.passes {
        return Ok(verdict(
            Outcome::Member,
            Stage::Sieve,
            format!(
                "core of {} primes: q^(m/2-1) = {:.6} > 2W(r)^2 Lambda = {:.6}",
                plan.core_count(),
                plan.lhs,
                plan.rhs.unwrap_or(f64::NAN)
            ),
        ));
    }

    let order = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    let limit = opts.guard.min(LOG_TABLE_LIMIT) as u128;
    if order > limit {
        return Ok(verdict(
            Outcome::Unresolved,
            Stage::Sieve,
            format!("sieve fails and q^m = {order} exceeds the search limit {limit}"),
        ));
    }
    let ctx = FieldCtx::new(p, s, m, modulus)?;
    let search_opts = SearchOptions { triples: TripleScope::All, ..opts.clone() };
    let report = search_pair(&ctx, &search_opts)?;
    let (outcome, detail) = match report.status {
        Status::Member => (Outcome::Member, "every triple and trace value has a witness".to_string()),
        Status::Exceptional => (
            Outcome::Exceptional,
            format!("{} (triple, beta) combinations without a witness", report.counterexamples.len()),
        ),
        Status::Unresolved => (Outcome::Unresolved, String::new()),
    };
    Ok(Verdict {
        q,
        m,
        outcome,
        stage: Stage::Search,
        detail,
        search: Some(report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages() {
        let opts = SearchOptions::default();
        let v = classify(16, 29, None, &opts).unwrap();
        assert_eq!((v.outcome, v.stage), (Outcome::Member, Stage::Region));
        let v = classify(17, 5, None, &opts).unwrap();
        assert_eq!((v.outcome, v.stage), (Outcome::Member, Stage::Base));
        let v = classify(23, 5, None, &opts).unwrap();
        assert_eq!((v.outcome, v.stage), (Outcome::Member, Stage::Sieve));
        let v = classify(5, 1, None, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::OutOfScope);
        let v = classify(3, 2, None, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::OutOfScope);
        assert_eq!(classify(6, 3, None, &opts).unwrap_err(), Error::NotPrimePower(6));
    }

    #[test]
    fn search_stage() {
        let opts = SearchOptions::default();
        let v = classify(2, 5, None, &opts).unwrap();
        assert_eq!((v.outcome, v.stage), (Outcome::Member, Stage::Search));
        let v = classify(2, 12, None, &SearchOptions { guard: 1 << 10, ..opts }).unwrap();
        assert_eq!(v.outcome, Outcome::Unresolved);
    }
}
