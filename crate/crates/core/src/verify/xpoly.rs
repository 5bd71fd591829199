//! Polynomials over F_{q^m} (coefficients constant term first) and the
//! two-character Weil bound check.

use num_complex::Complex64;
use serde::Serialize;

use super::CharacterTable;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

type Poly = Vec<FieldElem>;

fn trim(mut f: Poly) -> Poly {
    while f.last().is_some_and(FieldElem::is_zero) {
        f.pop();
    }
    f
}

fn is_one(ctx: &FieldCtx, f: &[FieldElem]) -> bool {
    f.len() == 1 && f[0] == ctx.one()
}

fn is_monic(ctx: &FieldCtx, f: &[FieldElem]) -> bool {
    f.last().is_some_and(|c| *c == ctx.one())
}

fn eval(ctx: &FieldCtx, f: &[FieldElem], x: &FieldElem) -> FieldElem {
    f.iter()
        .rev()
        .fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
}

fn div_rem(ctx: &FieldCtx, f: &[FieldElem], g: &[FieldElem]) -> (Poly, Poly) {
    let g = trim(g.to_vec());
    let mut r = trim(f.to_vec());
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let lead_inv = ctx.inv(g.last().expect("nonzero divisor")).expect("nonzero lead");
    let mut quot = vec![ctx.zero(); r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let coef = ctx.mul(r.last().expect("nonempty"), &lead_inv);
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] = ctx.sub(&r[shift + i], &ctx.mul(&coef, gi));
        }
        quot[shift] = coef;
        r = trim(r);
    }
    (quot, r)
}

fn make_monic(ctx: &FieldCtx, f: Poly) -> Poly {
    match f.last() {
        None => f,
        Some(lead) => {
            let inv = ctx.inv(lead).expect("nonzero lead");
            f.iter().map(|c| ctx.mul(c, &inv)).collect()
        }
    }
}

fn gcd(ctx: &FieldCtx, f: &[FieldElem], g: &[FieldElem]) -> Poly {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    make_monic(ctx, a)
}

fn derivative(ctx: &FieldCtx, f: &[FieldElem]) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ctx.scale(i as u64 % ctx.p(), c))
            .collect(),
    )
}

/// `h` with `h^p = f`, valid when `f' = 0`.
fn pth_root(ctx: &FieldCtx, f: &[FieldElem]) -> Poly {
    // the inverse of Frobenius on F_{p^k} is x ↦ x^{p^{k-1}}
    let e = (ctx.p() as u128).pow(ctx.degree() as u32 - 1);
    f.iter()
        .step_by(ctx.p() as usize)
        .map(|c| ctx.pow(c, e))
        .collect()
}

/// Squarefree decomposition: pairwise coprime squarefree `P` with
/// multiplicities `e`, `f = lead · Π P^e`.
fn squarefree_parts(ctx: &FieldCtx, f: &[FieldElem]) -> Vec<(Poly, u64)> {
    let f = make_monic(ctx, trim(f.to_vec()));
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = derivative(ctx, &f);
    if df.is_empty() {
        let root = pth_root(ctx, &f);
        for (h, e) in squarefree_parts(ctx, &root) {
            out.push((h, e * ctx.p()));
        }
        return out;
    }
    let mut c = gcd(ctx, &f, &df);
    let mut w = div_rem(ctx, &f, &c).0;
    let mut i = 1;
    while !is_one(ctx, &w) {
        let y = gcd(ctx, &w, &c);
        let z = div_rem(ctx, &w, &y).0;
        if z.len() > 1 {
            out.push((make_monic(ctx, z), i));
        }
        i += 1;
        c = div_rem(ctx, &c, &y).0;
        w = y;
    }
    if c.len() > 1 {
        let root = pth_root(ctx, &c);
        for (h, e) in squarefree_parts(ctx, &root) {
            out.push((h, e * ctx.p()));
        }
    }
    out
}

/// Degree of the largest squarefree divisor.
pub fn radical_degree(ctx: &FieldCtx, f: &[FieldElem]) -> usize {
    squarefree_parts(ctx, f).iter().map(|(h, _)| h.len() - 1).sum()
}

/// Whether `f = c · h^d` for some constant `c` and polynomial `h`.
fn is_dth_power(ctx: &FieldCtx, f: &[FieldElem], d: u64) -> bool {
    squarefree_parts(ctx, f).iter().all(|(_, e)| e % d == 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `|Σ_x χ1(f1(x)) χ2(f2(x))|` against `(n1 + n2 - 1) q^{m/2}` for characters
/// of exact orders `d1`, `d2`.
pub fn weil_check(
    table: &CharacterTable<'_>,
    d1: u128,
    d2: u128,
    f1: &[FieldElem],
    f2: &[FieldElem],
) -> Result<WeilCheck> {
    let ctx = table.ctx();
    if d1 == 1 || d2 == 1 {
        return Err(Error::Hypothesis("both characters must be nontrivial".into()));
    }
    let j1 = table.order_index(d1)?;
    let j2 = table.order_index(d2)?;
    let (f1, f2) = (trim(f1.to_vec()), trim(f2.to_vec()));
    if !is_monic(ctx, &f1) || !is_monic(ctx, &f2) {
        return Err(Error::Hypothesis("polynomials must be monic".into()));
    }
    if !is_one(ctx, &gcd(ctx, &f1, &f2)) {
        return Err(Error::Hypothesis("polynomials must be coprime".into()));
    }
    if is_dth_power(ctx, &f1, d1 as u64) && is_dth_power(ctx, &f2, d2 as u64) {
        return Err(Error::Hypothesis(format!(
            "f1 is a {d1}-th power and f2 is a {d2}-th power"
        )));
    }
    let n = radical_degree(ctx, &f1) + radical_degree(ctx, &f2);
    let v1 = packed_values(ctx, &f1);
    let v2 = packed_values(ctx, &f2);
    Ok(pair_sum_check(table, j1, j2, &v1, &v2, n))
}

/// `f(x)` for every packed `x`, packed.
pub(crate) fn packed_values(ctx: &FieldCtx, f: &[FieldElem]) -> Vec<u64> {
    ctx.elements().map(|x| ctx.index_of(&eval(ctx, f, &x))).collect()
}

/// The Weil comparison on precomputed values; `n` is the summed radical degree.
pub(crate) fn pair_sum_check(
    table: &CharacterTable<'_>,
    j1: u64,
    j2: u64,
    v1: &[u64],
    v2: &[u64],
    n: usize,
) -> WeilCheck {
    let sum: Complex64 = v1
        .iter()
        .zip(v2)
        .map(|(&a, &b)| table.chi_packed(j1, a) * table.chi_packed(j2, b))
        .sum();
    let rhs = (n as f64 - 1.0) * (table.ctx().order() as f64).sqrt();
    let lhs = sum.norm();
    WeilCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &FieldCtx, cs: &[&[u64]]) -> Poly {
        cs.iter().map(|c| ctx.elem(c).unwrap()).collect()
    }

    #[test]
    fn radicals() {
        let f = FieldCtx::new(3, 1, 2, None).unwrap();
        // (x+1)^3 (x+2)^2 x
        let x1 = poly(&f, &[&[1, 0], &[1, 0]]);
        let x2 = poly(&f, &[&[2, 0], &[1, 0]]);
        let x = poly(&f, &[&[0, 0], &[1, 0]]);
        let mul = |a: &Poly, b: &Poly| {
            let mut out = vec![f.zero(); a.len() + b.len() - 1];
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    out[i + j] = f.add(&out[i + j], &f.mul(ai, bj));
                }
            }
            out
        };
        let cube = mul(&mul(&x1, &x1), &x1);
        let g = mul(&mul(&cube, &mul(&x2, &x2)), &x);
        assert_eq!(radical_degree(&f, &g), 3);
        assert!(is_dth_power(&f, &cube, 3));
        assert!(!is_dth_power(&f, &g, 3));
        assert!(is_dth_power(&f, &mul(&x2, &x2), 2));
    }

    #[test]
    fn weil_examples() {
        let f = FieldCtx::new(2, 1, 6, Some(vec![1, 1, 0, 1, 1, 0, 1])).unwrap();
        let t = CharacterTable::new(&f).unwrap();
        let x = poly(&f, &[&[0; 6], &[1, 0, 0, 0, 0, 0]]);
        let g = f.generator().clone();
        // x² + x + c has nonzero discriminant in characteristic 2 for any c ≠ 0
        let f2 = vec![g, f.one(), f.one()];
        let w = weil_check(&t, 7, 9, &x, &f2).unwrap();
        assert!(w.holds);
        assert_eq!(w.rhs, 16.0);
        assert!(matches!(weil_check(&t, 1, 1, &x, &f2), Err(Error::Hypothesis(_))));

        let f81 = FieldCtx::new(3, 1, 4, None).unwrap();
        let t81 = CharacterTable::new(&f81).unwrap();
        let x = vec![f81.zero(), f81.one()];
        let f2 = vec![f81.one(), f81.zero(), f81.one()];
        let w = weil_check(&t81, 5, 16, &x, &f2).unwrap();
        assert!(w.holds);
        assert_eq!(w.rhs, 18.0);
    }

    #[test]
    fn weil_rejects_pure_powers() {
        let f = FieldCtx::new(2, 1, 6, None).unwrap();
        let t = CharacterTable::new(&f).unwrap();
        // x^3 and (x+1)^3 under cubic characters
        let x3 = vec![f.zero(), f.zero(), f.zero(), f.one()];
        let y3 = vec![f.one(), f.one(), f.one(), f.one()];
        assert!(matches!(weil_check(&t, 3, 3, &x3, &y3), Err(Error::Hypothesis(_))));
        assert!(weil_check(&t, 3, 7, &x3, &y3).is_ok());
        let x = vec![f.zero(), f.one()];
        assert!(matches!(weil_check(&t, 3, 7, &x, &x), Err(Error::Hypothesis(_))));
    }
}
