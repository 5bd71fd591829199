//! Exhaustive property sweep over one small field: indicator equivalence for
//! σ_r and Γ_β, trace fibers, orthogonality, the Weil bound and the bound on
//! `|S|`.

use num_complex::Complex64;
use serde::Serialize;

use super::xpoly::{packed_values, pair_sum_check, radical_degree};
use super::{check_admissible, is_rfree, squarefree_divisors, CharacterTable};
use crate::error::Result;
use crate::gf::{FieldCtx, FieldElem};

/// Tolerance for indicator rounding and orthogonality sums.
pub const SUITE_TOL: f64 = 1e-6;

/// Number of fixed admissible triples in the `|S|` sweep.
const S_TRIPLES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub q: u64,
    pub m: u32,
    pub sigma_checks: u64,
    pub sigma_max_dev: f64,
    pub sigma_mismatches: u64,
    pub gamma_checks: u64,
    pub gamma_max_dev: f64,
    pub gamma_mismatches: u64,
    /// `#{x : Tr(x) = β}` for each β of F_q in sorted order.
    pub fiber_counts: Vec<u64>,
    pub fibers_exact: bool,
    pub mult_orthogonality_max: f64,
    pub add_orthogonality_max: f64,
    pub weil_checks: u64,
    pub weil_violations: u64,
    /// Largest `lhs / rhs` seen.
    pub weil_max_ratio: f64,
    pub s_checks: u64,
    pub s_violations: u64,
    pub s_max_ratio: f64,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        self.sigma_max_dev < SUITE_TOL
            && self.sigma_mismatches == 0
            && self.gamma_max_dev < SUITE_TOL
            && self.gamma_mismatches == 0
            && self.fibers_exact
            && self.mult_orthogonality_max < SUITE_TOL
            && self.add_orthogonality_max < SUITE_TOL
            && self.weil_violations == 0
            && self.s_violations == 0
    }
}

fn indicator_dev(z: Complex64, want: bool) -> f64 {
    (z - Complex64::new(if want { 1.0 } else { 0.0 }, 0.0)).norm()
}

pub fn property_suite(ctx: &FieldCtx) -> Result<SuiteReport> {
    property_suite_with(ctx, true)
}

/// Indicator, fiber and orthogonality checks; the Weil and `|S|` sweeps only
/// when `sweeps` is set.
pub fn property_suite_with(ctx: &FieldCtx, sweeps: bool) -> Result<SuiteReport> {
    let table = CharacterTable::new(ctx)?;
    let n = ctx.group_size();
    let nonzero: Vec<FieldElem> = ctx.elements().skip(1).collect();

    let (mut sigma_checks, mut sigma_max_dev, mut sigma_mismatches) = (0, 0f64, 0);
    for r in squarefree_divisors(ctx) {
        for x in &nonzero {
            let z = table.sigma_r(x, r)?;
            let want = is_rfree(ctx, x, r)?;
            let dev = indicator_dev(z, want);
            sigma_checks += 1;
            sigma_max_dev = sigma_max_dev.max(dev);
            if (z.re.round() == 1.0) != want {
                sigma_mismatches += 1;
            }
        }
    }

    let base = table.base_field().to_vec();
    let (mut gamma_checks, mut gamma_max_dev, mut gamma_mismatches) = (0, 0f64, 0);
    let mut fiber_counts = vec![0u64; base.len()];
    for x in ctx.elements() {
        let tr = ctx.trace(&x);
        for (i, beta) in base.iter().enumerate() {
            let want = tr == *beta;
            if want {
                fiber_counts[i] += 1;
            }
            let z = table.gamma_beta(&x, beta)?;
            gamma_checks += 1;
            gamma_max_dev = gamma_max_dev.max(indicator_dev(z, want));
            if (z.re.round() == 1.0) != want {
                gamma_mismatches += 1;
            }
        }
    }
    let fiber = ctx.order() / ctx.q();
    let fibers_exact = fiber_counts.iter().all(|&c| c == fiber);

    let mult_orthogonality_max = (1..n)
        .map(|j| nonzero.iter().map(|x| table.chi(j, x)).sum::<Complex64>().norm())
        .fold(0f64, f64::max);
    let add_orthogonality_max = nonzero
        .iter()
        .map(|y| {
            ctx.elements()
                .map(|x| table.psi0(&ctx.mul(y, &x)))
                .sum::<Complex64>()
                .norm()
        })
        .fold(0f64, f64::max);

    // f1 = x against every monic quadratic with nonzero discriminant and
    // nonzero constant term, for every pair of nontrivial character orders
    let divisors = ctx.group_order_factors().divisors();
    let nontrivial: Vec<u128> = divisors.iter().copied().filter(|&d| d > 1).collect();
    let x_poly = vec![ctx.zero(), ctx.one()];
    let x_values = packed_values(ctx, &x_poly);
    let (mut weil_checks, mut weil_violations, mut weil_max_ratio) = (0, 0, 0f64);
    for b in ctx.elements().filter(|_| sweeps) {
        for c in &nonzero {
            if check_admissible(ctx, &ctx.one(), &b, c).is_err() {
                continue;
            }
            let f2 = vec![c.clone(), b.clone(), ctx.one()];
            let values = packed_values(ctx, &f2);
            let degree = 1 + radical_degree(ctx, &f2);
            for &d1 in &nontrivial {
                for &d2 in &nontrivial {
                    let j1 = table.order_index(d1)?;
                    let j2 = table.order_index(d2)?;
                    let w = pair_sum_check(&table, j1, j2, &x_values, &values, degree);
                    weil_checks += 1;
                    weil_max_ratio = weil_max_ratio.max(w.lhs / w.rhs);
                    if !w.holds {
                        weil_violations += 1;
                    }
                }
            }
        }
    }

    let g = ctx.generator();
    let n128 = n as u128;
    let triples: Vec<(FieldElem, FieldElem, FieldElem)> = (0..if sweeps { n128 } else { 0 })
        .flat_map(|t| (0..n128).map(move |u| (t, u)))
        .map(|(t, u)| (ctx.pow(g, t), ctx.pow(g, u), ctx.pow(g, 3 * t + u + 1)))
        .filter(|(a, b, c)| check_admissible(ctx, a, b, c).is_ok())
        .step_by(n as usize + 1)
        .take(S_TRIPLES)
        .collect();
    let s_bound = 2.0 * (ctx.q() as f64).powf(ctx.m() as f64 / 2.0 + 1.0);
    let (mut s_checks, mut s_violations, mut s_max_ratio) = (0, 0, 0f64);
    for (a, b, c) in &triples {
        for &d1 in &divisors {
            for &d2 in &divisors {
                for beta in &base {
                    let s = table.s_sum(d1, d2, (a, b, c), beta)?;
                    s_checks += 1;
                    s_max_ratio = s_max_ratio.max(s / s_bound);
                    if s > s_bound + 1e-9 {
                        s_violations += 1;
                    }
                }
            }
        }
    }

    Ok(SuiteReport {
        q: ctx.q(),
        m: ctx.m(),
        sigma_checks,
        sigma_max_dev,
        sigma_mismatches,
        gamma_checks,
        gamma_max_dev,
        gamma_mismatches,
        fiber_counts,
        fibers_exact,
        mult_orthogonality_max,
        add_orthogonality_max,
        weil_checks,
        weil_violations,
        weil_max_ratio,
        s_checks,
        s_violations,
        s_max_ratio,
    })
}
