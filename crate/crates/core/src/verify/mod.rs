//! Numerical ground truth on small fields: multiplicative and additive
//! characters, the r-free and trace indicators built from them, the Weil-type
//! bound, exact counts, and the exhaustive search for primitive pairs.

mod classify;
mod search;
mod suite;
mod xpoly;

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::intnum::Factorization;

pub use classify::{classify, Outcome, Stage, Verdict};
pub use search::{
    guard_from_env, search_pair, BetaScope, Counterexample, PairReport, SearchOptions, Status,
    TripleScope, DEFAULT_GUARD,
};
pub use suite::{property_suite, property_suite_with, SuiteReport, SUITE_TOL};
pub use xpoly::{radical_degree, weil_check, WeilCheck};

/// `e^{2πi k/n}` with `k` reduced first.
fn phasor(k: u128, n: u128) -> Complex64 {
    let k = k % n;
    Complex64::from_polar(1.0, TAU * (k as f64) / (n as f64))
}

fn check_divisor(ctx: &FieldCtx, r: u128) -> Result<Factorization> {
    let n = ctx.group_size() as u128;
    ctx.group_order_factors()
        .of_divisor(r)
        .ok_or(Error::NotDivisor { r, n })
}

/// `x^{(q^m-1)/ℓ} ≠ 1` for every prime `ℓ | r`.
pub fn is_rfree(ctx: &FieldCtx, x: &FieldElem, r: u128) -> Result<bool> {
    let fr = check_divisor(ctx, r)?;
    if x.is_zero() {
        return Err(Error::ZeroOrder);
    }
    let n = ctx.group_size() as u128;
    if let Some(k) = ctx.log(x) {
        let free = fr.primes().all(|l| k as u128 % l != 0);
        return Ok(free);
    }
    let one = ctx.one();
    let free = fr.primes().all(|l| ctx.pow(x, n / l) != one);
    Ok(free)
}

/// Character values on F_{q^m}, read off the discrete-log table.
pub struct CharacterTable<'a> {
    ctx: &'a FieldCtx,
    n: u64,
    mult_powers: Vec<Complex64>,
    add_powers: Vec<Complex64>,
    abs_trace: Vec<u64>,
    base_field: Vec<FieldElem>,
}

impl<'a> CharacterTable<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self> {
        if !ctx.has_log_table() {
            return Err(Error::MissingLogTable(ctx.order()));
        }
        let n = ctx.group_size();
        let p = ctx.p();
        let mult_powers = (0..n).map(|k| phasor(k as u128, n as u128)).collect();
        let add_powers = (0..p).map(|k| phasor(k as u128, p as u128)).collect();
        let abs_trace = ctx.trace_table(p)?;
        let base_field = ctx.subfield_elements(ctx.q())?;
        Ok(CharacterTable { ctx, n, mult_powers, add_powers, abs_trace, base_field })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    /// `e^{2πi/(q^m-1)}`.
    pub fn mult_root(&self) -> Complex64 {
        self.mult_powers[1 % self.n as usize]
    }

    /// `e^{2πi/p}`.
    pub fn add_root(&self) -> Complex64 {
        self.add_powers[1 % self.add_powers.len()]
    }

    /// Elements of F_q in sorted order.
    pub fn base_field(&self) -> &[FieldElem] {
        &self.base_field
    }

    /// Index `j` of the character `χ_j(g^k) = e^{2πi jk/N}` generating the
    /// characters of order `d`.
    pub fn order_index(&self, d: u128) -> Result<u64> {
        check_divisor(self.ctx, d)?;
        Ok((self.n as u128 / d) as u64)
    }

    /// `χ_j(x)`, with `χ_0(0) = 1` and `χ_j(0) = 0` otherwise.
    pub fn chi(&self, j: u64, x: &FieldElem) -> Complex64 {
        self.chi_packed(j, self.ctx.index_of(x))
    }

    pub(crate) fn chi_packed(&self, j: u64, idx: u64) -> Complex64 {
        let j = j % self.n;
        if idx == 0 {
            return if j == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let k = self.ctx.log_packed(idx).expect("log table present") as u64;
        self.mult_powers[((j as u128 * k as u128) % self.n as u128) as usize]
    }

    /// `e^{2πi Tr_{F_{q^m}/F_p}(x)/p}`.
    pub fn psi0(&self, x: &FieldElem) -> Complex64 {
        self.psi0_packed(self.ctx.index_of(x))
    }

    pub(crate) fn psi0_packed(&self, idx: u64) -> Complex64 {
        self.add_powers[self.abs_trace[idx as usize] as usize]
    }

    /// `e^{2πi Tr_{F_q/F_p}(-uβ)/p}` for the `i`-th element `u` of F_q.
    fn base_phase(&self, i: usize, beta: &FieldElem) -> Complex64 {
        let ub = self.ctx.mul(&self.base_field[i], beta);
        let t = self
            .ctx
            .relative_trace(&ub, self.ctx.q(), self.ctx.p())
            .expect("product stays in F_q")
            .coeffs()[0];
        self.add_powers[((self.ctx.p() - t) % self.ctx.p()) as usize]
    }

    fn check_beta(&self, beta: &FieldElem) -> Result<()> {
        if self.ctx.in_subfield(beta, self.ctx.q())? {
            Ok(())
        } else {
            Err(Error::NotInSubfield(beta.to_coeff_string(), self.ctx.q()))
        }
    }

    /// Indicator of the `r`-free elements written as a weighted sum over the
    /// characters whose order divides `r`.
    pub fn sigma_r(&self, x: &FieldElem, r: u128) -> Result<Complex64> {
        let fr = check_divisor(self.ctx, r)?;
        if x.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let k = self.ctx.log(x).expect("log table present") as u128;
        let mut total = Complex64::new(0.0, 0.0);
        for d in fr.divisors() {
            let fd = fr.of_divisor(d).expect("divisor of r");
            let mu = fd.moebius();
            if mu == 0 {
                continue;
            }
            // characters of order d are χ_{(N/d)t} with gcd(t, d) = 1
            let inner: Complex64 = (0..d)
                .filter(|t| t.gcd(&d) == 1)
                .map(|t| phasor(t * k, d))
                .sum();
            total += inner * (mu as f64 / fd.euler_phi() as f64);
        }
        Ok(total * fr.theta().to_f64().unwrap_or(f64::NAN))
    }

    /// Indicator of `Tr_{F_{q^m}/F_q}(x) = β` as an average over the additive
    /// characters `u ↦ ψ0(ux)` with the phase `-uβ`.
    pub fn gamma_beta(&self, x: &FieldElem, beta: &FieldElem) -> Result<Complex64> {
        self.check_beta(beta)?;
        let mut total = Complex64::new(0.0, 0.0);
        for (i, u) in self.base_field.iter().enumerate() {
            total += self.psi0(&self.ctx.mul(u, x)) * self.base_phase(i, beta);
        }
        Ok(total / self.ctx.q() as f64)
    }

    /// `|S|` for the characters of order `d1`, `d2` and `f = ax² + bx + c`,
    /// omitting the single `(χ_1, χ_1, u = 0)` term.
    pub fn s_sum(
        &self,
        d1: u128,
        d2: u128,
        coeffs: (&FieldElem, &FieldElem, &FieldElem),
        beta: &FieldElem,
    ) -> Result<f64> {
        let (a, b, c) = coeffs;
        check_admissible(self.ctx, a, b, c)?;
        self.check_beta(beta)?;
        let j1 = self.order_index(d1)?;
        let j2 = self.order_index(d2)?;
        let ctx = self.ctx;
        let units: Vec<(u64, u64)> = (1..ctx.order())
            .map(|i| {
                let x = ctx.elem_at(i);
                (i, ctx.index_of(&ctx.eval_quadratic(a, b, c, &x)))
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, u) in self.base_field.iter().enumerate() {
            if d1 == 1 && d2 == 1 && u.is_zero() {
                continue;
            }
            let inner: Complex64 = units
                .iter()
                .map(|&(x, fx)| {
                    let ux = ctx.index_of(&ctx.mul(u, &ctx.elem_at(x)));
                    self.chi_packed(j1, x) * self.chi_packed(j2, fx) * self.psi0_packed(ux)
                })
                .sum();
            total += self.base_phase(i, beta) * inner;
        }
        Ok(total.norm())
    }
}

/// `b² - 4ac ≠ 0` and `a ≠ 0`.
pub fn check_admissible(ctx: &FieldCtx, a: &FieldElem, b: &FieldElem, c: &FieldElem) -> Result<()> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("leading coefficient a must be nonzero".into()));
    }
    if discriminant(ctx, a, b, c).is_zero() {
        return Err(Error::DegenerateDiscriminant);
    }
    Ok(())
}

pub fn discriminant(ctx: &FieldCtx, a: &FieldElem, b: &FieldElem, c: &FieldElem) -> FieldElem {
    let four_ac = ctx.scale(4 % ctx.p(), &ctx.mul(a, c));
    ctx.sub(&ctx.square(b), &four_ac)
}

/// Exact `M(r1, r2)` next to its lower bound
/// `θ(r1)θ(r2)/q · (q^m - 1 - 2q^{m/2+1}(W(r1)W(r2) - 1))`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CountReport {
    pub r1: u128,
    pub r2: u128,
    pub count: u64,
    pub lower_bound: f64,
}

impl CountReport {
    /// `count ≥ ⌈lower_bound⌉` whenever the bound is positive.
    pub fn consistent(&self) -> bool {
        self.lower_bound <= 0.0 || self.count as f64 >= self.lower_bound.ceil()
    }
}

pub fn count_m(
    ctx: &FieldCtx,
    r1: u128,
    r2: u128,
    coeffs: (&FieldElem, &FieldElem, &FieldElem),
    beta: &FieldElem,
) -> Result<CountReport> {
    let (a, b, c) = coeffs;
    check_admissible(ctx, a, b, c)?;
    let f1 = check_divisor(ctx, r1)?;
    let f2 = check_divisor(ctx, r2)?;
    if !ctx.in_subfield(beta, ctx.q())? {
        return Err(Error::NotInSubfield(beta.to_coeff_string(), ctx.q()));
    }
    let traces = ctx.trace_table(ctx.q())?;
    let target = ctx.index_of(beta);
    let mut count = 0u64;
    for i in 1..ctx.order() {
        if traces[i as usize] != target {
            continue;
        }
        let x = ctx.elem_at(i);
        let fx = ctx.eval_quadratic(a, b, c, &x);
        if !fx.is_zero() && is_rfree(ctx, &x, r1)? && is_rfree(ctx, &fx, r2)? {
            count += 1;
        }
    }
    let q = ctx.q() as f64;
    let theta = |f: &Factorization| f.theta().to_f64().unwrap_or(f64::NAN);
    let ww = (f1.w() * f2.w()) as f64;
    let qm = ctx.order() as f64;
    let lower_bound = theta(&f1) * theta(&f2) / q
        * (qm - 1.0 - 2.0 * q.powf(ctx.m() as f64 / 2.0 + 1.0) * (ww - 1.0));
    Ok(CountReport { r1, r2, count, lower_bound })
}

/// Squarefree divisors of `q^m - 1`, ascending.
pub fn squarefree_divisors(ctx: &FieldCtx) -> Vec<u128> {
    let f = ctx.group_order_factors();
    f.divisors()
        .into_iter()
        .filter(|&d| f.of_divisor(d).is_some_and(|fd| fd.is_squarefree()))
        .collect()
}

/// `θ` of a divisor of `q^m - 1` as a float.
pub fn theta_of(ctx: &FieldCtx, r: u128) -> Result<f64> {
    Ok(check_divisor(ctx, r)?.theta().to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64_field() -> FieldCtx {
        FieldCtx::new(2, 1, 6, Some(vec![1, 1, 0, 1, 1, 0, 1])).unwrap()
    }

    fn close(z: Complex64, v: f64) -> bool {
        (z - Complex64::new(v, 0.0)).norm() < 1e-6
    }

    #[test]
    fn rfree_counts() {
        let f = f64_field();
        let g = f.generator().clone();
        assert!(is_rfree(&f, &g, 63).unwrap());
        assert!(!is_rfree(&f, &f.one(), 3).unwrap());
        let n = f.elements().skip(1).filter(|x| is_rfree(&f, x, 21).unwrap()).count();
        assert_eq!(n, 36);
        for x in f.elements().skip(1) {
            assert_eq!(is_rfree(&f, &x, 63).unwrap(), f.is_primitive(&x));
        }
        assert_eq!(
            is_rfree(&f, &g, 5),
            Err(Error::NotDivisor { r: 5, n: 63 })
        );
    }

    #[test]
    fn roots_have_unit_modulus() {
        let f = f64_field();
        let t = CharacterTable::new(&f).unwrap();
        assert!((t.mult_root().powu(63) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((t.add_root() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn characters_are_homomorphisms() {
        let f = FieldCtx::new(3, 1, 4, None).unwrap();
        let t = CharacterTable::new(&f).unwrap();
        let xs: Vec<FieldElem> = f.elements().step_by(7).collect();
        for x in &xs {
            for y in &xs {
                let sum = t.psi0(&f.add(x, y)) - t.psi0(x) * t.psi0(y);
                assert!(sum.norm() < 1e-9);
                if !x.is_zero() && !y.is_zero() {
                    for j in [1, 5, 16, 40] {
                        let d = t.chi(j, &f.mul(x, y)) - t.chi(j, x) * t.chi(j, y);
                        assert!(d.norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let f = f64_field();
        let t = CharacterTable::new(&f).unwrap();
        assert!(close(t.sigma_r(f.generator(), 63).unwrap(), 1.0));
        let total: Complex64 = f.elements().skip(1).map(|x| t.sigma_r(&x, 63).unwrap()).sum();
        assert!((total - Complex64::new(36.0, 0.0)).norm() < 1e-5);
        for x in f.elements().skip(1) {
            assert!(close(t.sigma_r(&x, 1).unwrap(), 1.0));
        }
    }

    #[test]
    fn gamma_examples() {
        let f = f64_field();
        let t = CharacterTable::new(&f).unwrap();
        let zero = f.zero();
        assert!(close(t.gamma_beta(&zero, &zero).unwrap(), 1.0));
        let fiber: Complex64 = f.elements().map(|x| t.gamma_beta(&x, &zero).unwrap()).sum();
        assert!((fiber - Complex64::new(32.0, 0.0)).norm() < 1e-5);
        for x in f.elements() {
            let s: Complex64 = t.base_field().iter().map(|b| t.gamma_beta(&x, b).unwrap()).sum();
            assert!(close(s, 1.0));
        }
        assert!(matches!(
            t.gamma_beta(&zero, f.generator()),
            Err(Error::NotInSubfield(..))
        ));
    }

    #[test]
    fn gamma_over_proper_base_field() {
        let f = FieldCtx::new(2, 2, 3, None).unwrap();
        let t = CharacterTable::new(&f).unwrap();
        for x in f.elements() {
            let tr = f.trace(&x);
            for b in t.base_field() {
                let want = if *b == tr { 1.0 } else { 0.0 };
                assert!(close(t.gamma_beta(&x, b).unwrap(), want));
            }
        }
    }

    #[test]
    fn s_sum_examples() {
        let f = f64_field();
        let t = CharacterTable::new(&f).unwrap();
        let g = f.generator().clone();
        let one = f.one();
        let s = t.s_sum(7, 9, (&g, &one, &one), &f.zero()).unwrap();
        assert!(s <= 32.0, "{s}");

        let f27 = FieldCtx::new(3, 1, 3, Some(vec![1, 2, 0, 1])).unwrap();
        let t27 = CharacterTable::new(&f27).unwrap();
        let a = f27.elem(&[0, 1, 0]).unwrap();
        let b = f27.elem(&[1, 1, 0]).unwrap();
        let c = f27.elem(&[2, 0, 2]).unwrap();
        for beta in t27.base_field() {
            let s = t27.s_sum(2, 13, (&a, &b, &c), beta).unwrap();
            assert!(s <= 2.0 * 3f64.powf(2.5), "{s}");
        }
        // all-trivial characters: only u = 0 is dropped, each u ≠ 0 gives -ψ(0)-term
        let s = t.s_sum(1, 1, (&g, &one, &one), &f.zero()).unwrap();
        assert!((s - 1.0).abs() < 1e-9, "{s}");
        assert_eq!(
            t.s_sum(7, 9, (&g, &f.zero(), &one), &f.zero()),
            Err(Error::DegenerateDiscriminant)
        );
    }

    #[test]
    fn count_examples() {
        let f = f64_field();
        let g = f.generator().clone();
        let one = f.one();
        let zero = f.zero();
        let r = count_m(&f, 1, 1, (&g, &one, &one), &one).unwrap();
        assert!((r.lower_bound - 31.5).abs() < 1e-12);
        let direct = f
            .elements()
            .skip(1)
            .filter(|x| f.trace(x) == one && !f.eval_quadratic(&g, &one, &one, x).is_zero())
            .count();
        assert_eq!(r.count as usize, direct);
        let r = count_m(&f, 63, 63, (&g, &g, &one), &one).unwrap();
        let brute = f
            .elements()
            .filter(|x| {
                f.trace(x) == one
                    && f.is_primitive(x)
                    && f.is_primitive(&f.eval_quadratic(&g, &g, &one, x))
            })
            .count();
        assert_eq!(r.count as usize, brute);
        assert_eq!(
            count_m(&f, 63, 63, (&g, &zero, &one), &one),
            Err(Error::DegenerateDiscriminant)
        );
    }

    #[test]
    fn count_bound_needs_rootless_f_and_nonzero_beta() {
        // with r1 = r2 = 1 the bound is (q^m - 1)/q = 31.5, but only 31
        // nonzero elements have trace 0
        let f = f64_field();
        let g = f.generator().clone();
        let r = count_m(&f, 1, 1, (&g, &g, &f.one()), &f.zero()).unwrap();
        assert!(r.count <= 31);
        assert!(!r.consistent());
    }

    #[test]
    fn count_for_f27_witness_vanishes_somewhere() {
        let f = FieldCtx::new(3, 1, 3, Some(vec![1, 2, 0, 1])).unwrap();
        let a = f.elem(&[0, 1, 0]).unwrap();
        let b = f.elem(&[1, 1, 0]).unwrap();
        let c = f.elem(&[2, 0, 2]).unwrap();
        let counts: Vec<u64> = f
            .subfield_elements(3)
            .unwrap()
            .iter()
            .map(|beta| count_m(&f, 26, 26, (&a, &b, &c), beta).unwrap().count)
            .collect();
        assert!(counts.contains(&0), "{counts:?}");
    }
}
