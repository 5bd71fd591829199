//! Exhaustive decision of whether every admissible `(a, b, c)` and every
//! `β ∈ F_q` admit a primitive `α` with `Tr(α) = β` and `aα² + bα + c`
//! primitive.
//!
//! Everything runs on discrete logs: `α = g^i`, sums through the Zech table
//! `Z(k) = log(1 + g^k)`, and primitivity is `gcd(log, q^m - 1) = 1`.

use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Largest `q^m` searched over all triples unless raised via `PRIMPAIR_GUARD`.
pub const DEFAULT_GUARD: u64 = 1 << 28;

const ZERO: u32 = u32::MAX;

/// Guard from `PRIMPAIR_GUARD`, falling back to [`DEFAULT_GUARD`].
pub fn guard_from_env() -> Result<u64> {
    match std::env::var("PRIMPAIR_GUARD") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("PRIMPAIR_GUARD={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TripleScope {
    All,
    Single(FieldElem, FieldElem, FieldElem),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BetaScope {
    All,
    Single(FieldElem),
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub triples: TripleScope,
    pub betas: BetaScope,
    /// Also search triples with `b² = 4ac` (flagged `admissible = false`).
    pub include_inadmissible: bool,
    /// Worker threads; 0 uses the machine parallelism.
    pub workers: usize,
    pub guard: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            triples: TripleScope::All,
            betas: BetaScope::All,
            include_inadmissible: false,
            workers: 0,
            guard: DEFAULT_GUARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    Exceptional,
    Unresolved,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Member => "member",
            Status::Exceptional => "exceptional",
            Status::Unresolved => "unresolved",
        })
    }
}

/// A triple and a trace value with no witness `α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub beta: FieldElem,
    pub admissible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub q: u64,
    pub m: u32,
    pub status: Status,
    pub counterexamples: Vec<Counterexample>,
    pub admissible_counterexample_exists: bool,
    pub triples_checked: u64,
    /// Triples whose every requested β found a witness before the scan ended.
    pub early_exits: u64,
    pub inadmissible_skipped: u64,
    pub elapsed_ms: u128,
}

/// Log-domain tables shared by all workers.
struct Tables {
    n: u32,
    zech: Vec<u32>,
    coprime: Vec<bool>,
    /// `i` with `gcd(i, n) = 1`, ascending.
    units: Vec<u32>,
    /// Position in the sorted F_q of `Tr(g^i)`.
    trace_pos: Vec<u32>,
    log_four: u32,
    even: bool,
}

impl Tables {
    fn new(ctx: &FieldCtx) -> Result<Self> {
        let n = ctx.group_size() as u32;
        let one = ctx.index_of(&ctx.one());
        let exp = |k: u64| ctx.exp_packed(k).expect("log table present");
        let zech = (0..n as u64)
            .map(|k| match ctx.add_packed(one, exp(k)) {
                0 => ZERO,
                s => ctx.log_packed(s).expect("log table present"),
            })
            .collect();
        let coprime: Vec<bool> = (0..n).map(|i| i.gcd(&n) == 1).collect();
        let units = (0..n).filter(|&i| coprime[i as usize]).collect();
        let traces = ctx.trace_table(ctx.q())?;
        let base = ctx.subfield_elements(ctx.q())?;
        let mut pos_of = vec![u32::MAX; ctx.order() as usize];
        for (i, b) in base.iter().enumerate() {
            pos_of[ctx.index_of(b) as usize] = i as u32;
        }
        let trace_pos = (0..n as u64)
            .map(|k| pos_of[traces[exp(k) as usize] as usize])
            .collect();
        let log_four = match ctx.p() {
            2 => ZERO,
            p => ctx.log(&ctx.scalar(4 % p)).expect("4 is a unit") as u32,
        };
        Ok(Tables { n, zech, coprime, units, trace_pos, log_four, even: ctx.p() == 2 })
    }

    #[inline]
    fn add(&self, x: u32, y: u32) -> u32 {
        if x == ZERO {
            return y;
        }
        if y == ZERO {
            return x;
        }
        let d = if y >= x { y - x } else { y + self.n - x };
        match self.zech[d as usize] {
            ZERO => ZERO,
            z => ((x as u64 + z as u64) % self.n as u64) as u32,
        }
    }

    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 + y as u64) % self.n as u64) as u32
    }

    /// `b² ≠ 4ac`, with `a` a unit.
    fn admissible(&self, la: u32, lb: u32, lc: u32) -> bool {
        if self.even || lc == ZERO {
            return lb != ZERO;
        }
        lb == ZERO || self.mul(lb, lb) != self.mul(self.log_four, self.mul(la, lc))
    }

    /// Marks each wanted β that has a witness; true when all are covered.
    fn scan(&self, la: u32, lb: u32, lc: u32, wanted: &mut [bool]) -> bool {
        let mut remaining = wanted.iter().filter(|w| **w).count();
        for &i in &self.units {
            let pos = self.trace_pos[i as usize] as usize;
            if !wanted[pos] {
                continue;
            }
            let mut v = self.mul(la, self.mul(i, i));
            if lb != ZERO {
                v = self.add(v, self.mul(lb, i));
            }
            v = self.add(v, lc);
            if v != ZERO && self.coprime[v as usize] {
                wanted[pos] = false;
                remaining -= 1;
                if remaining == 0 {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Default)]
struct Tally {
    found: Vec<(u32, u32, u32, u32, bool)>,
    checked: u64,
    early: u64,
    skipped: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.found.extend(other.found);
        self.checked += other.checked;
        self.early += other.early;
        self.skipped += other.skipped;
        self
    }
}

fn log_or_zero(ctx: &FieldCtx, x: &FieldElem) -> u32 {
    ctx.log(x).map_or(ZERO, |k| k as u32)
}

pub fn search_pair(ctx: &FieldCtx, opts: &SearchOptions) -> Result<PairReport> {
    let start = Instant::now();
    if opts.triples == TripleScope::All && ctx.order() > opts.guard {
        return Err(Error::GuardExceeded { order: ctx.order(), guard: opts.guard });
    }
    if !ctx.has_log_table() {
        return Err(Error::MissingLogTable(ctx.order()));
    }
    let tables = Tables::new(ctx)?;
    let base = ctx.subfield_elements(ctx.q())?;
    let base_wanted: Vec<bool> = match &opts.betas {
        BetaScope::All => vec![true; base.len()],
        BetaScope::Single(beta) => {
            let pos = base
                .iter()
                .position(|b| b == beta)
                .ok_or_else(|| Error::NotInSubfield(beta.to_coeff_string(), ctx.q()))?;
            (0..base.len()).map(|i| i == pos).collect()
        }
    };

    let run_triple = |tally: &mut Tally, la: u32, lb: u32, lc: u32| {
        let admissible = tables.admissible(la, lb, lc);
        if !admissible && !opts.include_inadmissible {
            tally.skipped += 1;
            return;
        }
        tally.checked += 1;
        let mut wanted = base_wanted.clone();
        if tables.scan(la, lb, lc, &mut wanted) {
            tally.early += 1;
            return;
        }
        for (pos, missing) in wanted.iter().enumerate() {
            if *missing {
                tally.found.push((la, lb, lc, pos as u32, admissible));
            }
        }
    };

    let tally = match &opts.triples {
        TripleScope::Single(a, b, c) => {
            if a.is_zero() {
                return Err(Error::InvalidArgument("leading coefficient a must be nonzero".into()));
            }
            let mut tally = Tally::default();
            let (la, lb, lc) = (log_or_zero(ctx, a), log_or_zero(ctx, b), log_or_zero(ctx, c));
            let admissible = tables.admissible(la, lb, lc);
            if !admissible && !opts.include_inadmissible {
                return Err(Error::DegenerateDiscriminant);
            }
            tally.checked += 1;
            let mut wanted = base_wanted.clone();
            if tables.scan(la, lb, lc, &mut wanted) {
                tally.early += 1;
            } else {
                for (pos, missing) in wanted.iter().enumerate() {
                    if *missing {
                        tally.found.push((la, lb, lc, pos as u32, admissible));
                    }
                }
            }
            tally
        }
        TripleScope::All => {
            let n = tables.n;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
            pool.install(|| {
                (0..n)
                    .into_par_iter()
                    .map(|la| {
                        let mut tally = Tally::default();
                        for lb in (0..n).chain([ZERO]) {
                            for lc in (0..n).chain([ZERO]) {
                                run_triple(&mut tally, la, lb, lc);
                            }
                        }
                        tally
                    })
                    .reduce(Tally::default, Tally::merge)
            })
        }
    };

    let elem = |k: u32| {
        if k == ZERO {
            ctx.zero()
        } else {
            ctx.elem_at(ctx.exp_packed(k as u64).expect("log table present"))
        }
    };
    let mut counterexamples: Vec<Counterexample> = tally
        .found
        .iter()
        .map(|&(la, lb, lc, pos, admissible)| Counterexample {
            a: elem(la),
            b: elem(lb),
            c: elem(lc),
            beta: base[pos as usize].clone(),
            admissible,
        })
        .collect();
    counterexamples.sort();
    let admissible_counterexample_exists = counterexamples.iter().any(|c| c.admissible);
    let status = if counterexamples.is_empty() { Status::Member } else { Status::Exceptional };
    Ok(PairReport {
        q: ctx.q(),
        m: ctx.m(),
        status,
        counterexamples,
        admissible_counterexample_exists,
        triples_checked: tally.checked,
        early_exits: tally.early,
        inadmissible_skipped: tally.skipped,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
