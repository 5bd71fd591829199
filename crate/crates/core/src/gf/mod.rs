//! Exact arithmetic in F_{q^m}, q = p^s, realized once as F_p[x]/(g) with
//! deg g = s·m. The subfield F_q is the solution set of x^q = x, so trace,
//! subfield enumeration and the characters all share one representation.
//!
//! Elements are coefficient vectors in the power basis of the modulus,
//! constant term first, and compare lexicographically in that order. Every
//! "first" element the crate reports (generators, witnesses) follows this
//! order.

mod poly;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intnum::{self, Factorization};

/// Largest field (by element count) the crate will construct.
pub const MAX_FIELD_ORDER: u64 = 1 << 40;
/// Fields up to this size get a discrete-log table at construction.
pub const LOG_TABLE_LIMIT: u64 = 1 << 22;

/// One element of F_{q^m}: `degree` residues mod p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Comma-separated coefficients, constant term first.
    pub fn to_coeff_string(&self) -> String {
        format_coeffs(&self.coeffs)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_coeff_string())
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_coeff_string())
    }
}

pub fn format_coeffs(coeffs: &[u64]) -> String {
    coeffs
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses "1,1,0,1,1,0,1" into `[1, 1, 0, 1, 1, 0, 1]`.
pub fn parse_coeffs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
        })
        .collect()
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Immutable description of F_{q^m}.
pub struct FieldCtx {
    p: u64,
    s: u32,
    m: u32,
    degree: usize,
    order: u64,
    modulus: Vec<u64>,
    generator: FieldElem,
    group_order: Factorization,
    radix: Vec<u64>,
    logs: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("s", &self.s)
            .field("m", &self.m)
            .field("modulus", &format_coeffs(&self.modulus))
            .field("generator", &self.generator.to_coeff_string())
            .field("log_table", &self.logs.is_some())
            .finish()
    }
}

pub fn build_field(p: u64, s: u32, m: u32, modulus: Option<Vec<u64>>) -> Result<FieldCtx> {
    FieldCtx::new(p, s, m, modulus)
}

impl FieldCtx {
    pub fn new(p: u64, s: u32, m: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !intnum::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || m == 0 {
            return Err(Error::InvalidArgument("s and m must be positive".into()));
        }
        let degree = (s * m) as usize;
        let order = checked_pow(p, degree as u32)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{degree}")))?;
        let group_order = intnum::factorize(order as u128 - 1)?;
        let radix = (0..=degree).map(|i| p.pow(i as u32)).collect();

        let mut ctx = FieldCtx {
            p,
            s,
            m,
            degree,
            order,
            modulus: Vec::new(),
            generator: FieldElem { coeffs: vec![0; degree] },
            group_order,
            radix,
            logs: None,
        };

        match modulus {
            Some(g) => {
                ctx.validate_modulus(&g)?;
                ctx.modulus = g;
                let x = ctx.indeterminate();
                ctx.generator = if ctx.is_primitive(&x) {
                    x
                } else {
                    ctx.first_primitive_in_order()
                };
            }
            None => {
                ctx.modulus = ctx.smallest_primitive_modulus();
                ctx.generator = ctx.indeterminate();
            }
        }
        if order <= LOG_TABLE_LIMIT {
            ctx.logs = Some(ctx.build_log_tables());
        }
        Ok(ctx)
    }

    fn validate_modulus(&self, g: &[u64]) -> Result<()> {
        if g.len() != self.degree + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                self.degree + 1,
                g.len()
            )));
        }
        if g.last() != Some(&1) {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if let Some(c) = g.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidModulus(format!(
                "coefficient {c} is not reduced mod {}",
                self.p
            )));
        }
        if let Some(w) = poly::find_factor(g, self.p) {
            return Err(Error::ReducibleModulus {
                p: self.p,
                witness: format_coeffs(&w),
            });
        }
        Ok(())
    }

    /// Coefficient vector for lexicographic rank `t`, constant term most
    /// significant.
    fn lex_coeffs(&self, t: u64) -> Vec<u64> {
        let mut c = vec![0; self.degree];
        let mut rest = t;
        for slot in c.iter_mut().rev() {
            *slot = rest % self.p;
            rest /= self.p;
        }
        c
    }

    fn x_has_full_order(&self, g: &[u64]) -> bool {
        let n = self.group_order.value();
        let x = [0u64, 1];
        let one = poly::rem(&[1], g, self.p);
        if poly::pow_mod(&x, n, g, self.p) != one {
            return false;
        }
        self.group_order
            .primes()
            .all(|l| poly::pow_mod(&x, n / l, g, self.p) != one)
    }

    fn smallest_primitive_modulus(&self) -> Vec<u64> {
        let start = self.p.pow(self.degree as u32 - 1);
        for t in start..self.order {
            let mut g = self.lex_coeffs(t);
            g.push(1);
            if self.x_has_full_order(&g) {
                return g;
            }
        }
        unreachable!("primitive polynomials exist in every degree")
    }

    fn first_primitive_in_order(&self) -> FieldElem {
        (1..self.order)
            .map(|t| FieldElem { coeffs: self.lex_coeffs(t) })
            .find(|x| self.is_primitive(x))
            .expect("F* is cyclic")
    }

    fn build_log_tables(&self) -> LogTables {
        let n = self.group_size() as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.order as usize];
        let x_gen = self.generator == self.indeterminate();
        let mut cur = self.one();
        for k in 0..n {
            let idx = self.index_of(&cur) as usize;
            exp.push(idx as u32);
            log[idx] = k as u32;
            cur = if x_gen {
                self.mul_by_x(&cur)
            } else {
                self.mul_poly(&cur, &self.generator)
            };
        }
        LogTables { exp, log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Size of the base field F_q.
    pub fn q(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of elements, q^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// q^m - 1.
    pub fn group_size(&self) -> u64 {
        self.order - 1
    }

    pub fn group_order_factors(&self) -> &Factorization {
        &self.group_order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }

    pub fn has_log_table(&self) -> bool {
        self.logs.is_some()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.degree] }
    }

    pub fn one(&self) -> FieldElem {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> FieldElem {
        let mut coeffs = vec![0; self.degree];
        coeffs[0] = c % self.p;
        FieldElem { coeffs }
    }

    /// Residue class of the indeterminate.
    pub fn indeterminate(&self) -> FieldElem {
        if self.degree == 1 {
            // x ≡ -g_0 (mod x + g_0)
            return self.scalar(poly::sub_p(0, self.modulus[0] % self.p, self.p));
        }
        let mut coeffs = vec![0; self.degree];
        coeffs[1] = 1;
        FieldElem { coeffs }
    }

    /// Builds an element from up to `degree` coefficients (zero padded).
    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.degree {
            return Err(Error::Parse(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Parse(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.degree, 0);
        Ok(FieldElem { coeffs: v })
    }

    /// Parses a coefficient string, `g^k` for a generator power, or a bare
    /// integer (constant).
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("g^") {
            let k = u128::from_str(k).map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.pow(&self.generator, k));
        }
        self.elem(&parse_coeffs(s)?)
    }

    /// Packs an element as `Σ c_i p^i`.
    pub fn index_of(&self, x: &FieldElem) -> u64 {
        x.coeffs
            .iter()
            .zip(&self.radix)
            .map(|(&c, &r)| c * r)
            .sum()
    }

    pub fn elem_at(&self, mut idx: u64) -> FieldElem {
        let mut coeffs = vec![0; self.degree];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FieldElem { coeffs }
    }

    /// Digit-wise sum of two packed elements.
    pub fn add_packed(&self, u: u64, v: u64) -> u64 {
        if self.p == 2 {
            return u ^ v;
        }
        let (mut u, mut v) = (u, v);
        let mut out = 0;
        for r in &self.radix[..self.degree] {
            out += poly::add_p(u % self.p, v % self.p, self.p) * r;
            u /= self.p;
            v /= self.p;
        }
        out
    }

    /// Every element in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |i| self.elem_at(i))
    }

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| poly::add_p(a, b, self.p))
            .collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| poly::sub_p(a, b, self.p))
            .collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, x: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), x)
    }

    pub fn scale(&self, c: u64, x: &FieldElem) -> FieldElem {
        let c = c % self.p;
        FieldElem {
            coeffs: x.coeffs.iter().map(|&a| poly::mul_p(a, c, self.p)).collect(),
        }
    }

    fn from_poly(&self, mut v: Vec<u64>) -> FieldElem {
        v.resize(self.degree, 0);
        FieldElem { coeffs: v }
    }

    fn mul_poly(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.from_poly(poly::mul_mod(&x.coeffs, &y.coeffs, &self.modulus, self.p))
    }

    fn mul_by_x(&self, x: &FieldElem) -> FieldElem {
        if self.degree == 1 {
            return self.mul_poly(x, &self.indeterminate());
        }
        let top = x.coeffs[self.degree - 1];
        let mut coeffs = vec![0; self.degree];
        coeffs[1..].copy_from_slice(&x.coeffs[..self.degree - 1]);
        if top != 0 {
            for (c, &g) in coeffs.iter_mut().zip(&self.modulus) {
                *c = poly::sub_p(*c, poly::mul_p(top, g, self.p), self.p);
            }
        }
        FieldElem { coeffs }
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        match &self.logs {
            Some(t) => {
                let (lx, ly) = (t.log[self.index_of(x) as usize], t.log[self.index_of(y) as usize]);
                if lx == u32::MAX || ly == u32::MAX {
                    return self.zero();
                }
                let k = (lx as u64 + ly as u64) % self.group_size();
                self.elem_at(t.exp[k as usize] as u64)
            }
            None => self.mul_poly(x, y),
        }
    }

    pub fn square(&self, x: &FieldElem) -> FieldElem {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElem, k: u128) -> FieldElem {
        if let Some(t) = &self.logs {
            let lx = t.log[self.index_of(x) as usize];
            if lx == u32::MAX {
                return if k == 0 { self.one() } else { self.zero() };
            }
            let n = self.group_size() as u128;
            let e = (lx as u128 * (k % n)) % n;
            return self.elem_at(t.exp[e as usize] as u64);
        }
        self.from_poly(poly::pow_mod(&x.coeffs, k, &self.modulus, self.p))
    }

    pub fn inv(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.group_size() as u128 - 1))
    }

    /// a·x² + b·x + c.
    pub fn eval_quadratic(
        &self,
        a: &FieldElem,
        b: &FieldElem,
        c: &FieldElem,
        x: &FieldElem,
    ) -> FieldElem {
        let ax_b = self.add(&self.mul(a, x), b);
        self.add(&self.mul(&ax_b, x), c)
    }

    /// Discrete logarithm to the generator, when a log table exists.
    pub fn log(&self, x: &FieldElem) -> Option<u64> {
        let t = self.logs.as_ref()?;
        match t.log[self.index_of(x) as usize] {
            u32::MAX => None,
            k => Some(k as u64),
        }
    }

    pub fn log_packed(&self, idx: u64) -> Option<u32> {
        let t = self.logs.as_ref()?;
        Some(t.log[idx as usize])
    }

    pub fn exp_packed(&self, k: u64) -> Option<u64> {
        let t = self.logs.as_ref()?;
        Some(t.exp[(k % self.group_size()) as usize] as u64)
    }

    /// Multiplicative order, found by stripping primes off q^m - 1.
    pub fn order_of(&self, x: &FieldElem) -> Result<u128> {
        if x.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let one = self.one();
        let mut ord = self.group_order.value();
        for &(l, e) in self.group_order.factors() {
            for _ in 0..e {
                if self.pow(x, ord / l) == one {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    pub fn is_primitive(&self, x: &FieldElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let n = self.group_order.value();
        let one = self.one();
        if self.pow(x, n) != one {
            return false;
        }
        self.group_order.primes().all(|l| self.pow(x, n / l) != one)
    }

    /// Exponent `t` with `target_q = p^t`, provided it names a subfield.
    pub fn subfield_exponent(&self, target_q: u64) -> Result<u32> {
        let mut t = 0u32;
        let mut v = 1u64;
        while v < target_q {
            v = v.saturating_mul(self.p);
            t += 1;
        }
        if v != target_q || t == 0 || self.degree % t as usize != 0 {
            return Err(Error::NotSubfield(target_q));
        }
        Ok(t)
    }

    pub fn in_subfield(&self, x: &FieldElem, target_q: u64) -> Result<bool> {
        self.subfield_exponent(target_q)?;
        Ok(self.pow(x, target_q as u128) == *x)
    }

    /// Σ x^{Q^i}, i < [F_Q(x) : F_R] where the element lives in F_Q (`from_q`)
    /// and the trace lands in F_R (`to_q`).
    pub fn relative_trace(&self, x: &FieldElem, from_q: u64, to_q: u64) -> Result<FieldElem> {
        let upper = self.subfield_exponent(from_q)?;
        let lower = self.subfield_exponent(to_q)?;
        if upper % lower != 0 {
            return Err(Error::NotSubfield(to_q));
        }
        if !self.in_subfield(x, from_q)? {
            return Err(Error::NotInSubfield(x.to_coeff_string(), from_q));
        }
        let mut acc = self.zero();
        let mut term = x.clone();
        for _ in 0..upper / lower {
            acc = self.add(&acc, &term);
            term = self.pow(&term, to_q as u128);
        }
        Ok(acc)
    }

    /// Tr_{F_{q^m}/F_{target_q}}(x).
    pub fn trace_to(&self, x: &FieldElem, target_q: u64) -> Result<FieldElem> {
        let t = self.subfield_exponent(target_q)?;
        let mut acc = self.zero();
        let mut term = x.clone();
        for _ in 0..self.degree / t as usize {
            acc = self.add(&acc, &term);
            term = self.pow(&term, target_q as u128);
        }
        Ok(acc)
    }

    pub fn trace(&self, x: &FieldElem) -> FieldElem {
        self.trace_to(x, self.q()).expect("F_q is a subfield")
    }

    /// Elements of the subfield of order `target_q`, sorted by coefficient
    /// vector.
    pub fn subfield_elements(&self, target_q: u64) -> Result<Vec<FieldElem>> {
        self.subfield_exponent(target_q)?;
        let step = self.group_size() / (target_q - 1);
        let h = self.pow(&self.generator, step as u128);
        let mut out = Vec::with_capacity(target_q as usize);
        out.push(self.zero());
        let mut cur = self.one();
        for _ in 0..target_q - 1 {
            out.push(cur.clone());
            cur = self.mul(&cur, &h);
        }
        out.sort();
        Ok(out)
    }

    /// Packed trace to `target_q` for every packed element, using linearity
    /// over the power basis.
    pub fn trace_table(&self, target_q: u64) -> Result<Vec<u64>> {
        let basis: Vec<u64> = (0..self.degree)
            .map(|j| {
                let mut c = vec![0; self.degree];
                c[j] = 1;
                self.trace_to(&FieldElem { coeffs: c }, target_q)
                    .map(|t| self.index_of(&t))
            })
            .collect::<Result<_>>()?;
        let mut table = vec![0u64; self.order as usize];
        for idx in 1..self.order {
            let mut rest = idx;
            let mut j = 0;
            while rest % self.p == 0 {
                rest /= self.p;
                j += 1;
            }
            let prev = table[(idx - self.radix[j]) as usize];
            table[idx as usize] = self.add_packed(prev, basis[j]);
        }
        Ok(table)
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
