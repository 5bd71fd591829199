//! Exact integer number theory: factorization of integers up to 2^127 and
//! the multiplicative functions (ω, W, φ, μ, radical, θ) built on it.
//!
//! Factorization is trial division by the primes below 10^6 followed by
//! Brent's variant of Pollard rho with fixed seeds, so results never depend
//! on a random source. Primality of the leftover cofactors is decided by a
//! Miller-Rabin test over the first thirteen prime bases, which is a proof
//! of primality below 3.317 × 10^24; a cofactor above that bound that needs
//! a verdict is rejected rather than guessed.

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest accepted input to [`factorize`].
pub const MAX_FACTOR_INPUT: u128 = 1 << 127;

/// Miller-Rabin with the first 13 prime bases is exact below this value.
pub const PRIMALITY_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const TRIAL_LIMIT: u32 = 1_000_000;
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(78_498);
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Exact prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    value: u128,
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// `W(n) = 2^ω(n)`, the number of squarefree divisors.
    pub fn w(&self) -> u128 {
        1u128 << self.omega()
    }

    pub fn euler_phi(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn moebius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn radical(&self) -> u128 {
        self.primes().product()
    }

    /// `θ(n) = φ(n)/n` in lowest terms.
    pub fn theta(&self) -> Ratio<u128> {
        Ratio::new(self.euler_phi(), self.value)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pk = 1u128;
                for _ in 0..=e {
                    next.push(d * pk);
                    pk *= p;
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// Factorization of a divisor `d` of `self.value`, read off without
    /// refactoring.
    pub fn of_divisor(&self, d: u128) -> Option<Factorization> {
        if d == 0 || self.value % d != 0 {
            return None;
        }
        let mut rest = d;
        let mut factors = Vec::new();
        for &(p, _) in &self.factors {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        Some(Factorization { value: d, factors })
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

pub fn factorize(n: u128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if n > MAX_FACTOR_INPUT {
        return Err(Error::TooLarge(n.to_string()));
    }
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let limit = TRIAL_LIMIT as u128;
        if rest < limit * limit {
            factors.push((rest, 1));
        } else {
            let mut large = Vec::new();
            split_cofactor(rest, &mut large)?;
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization { value: n, factors })
}

fn split_cofactor(n: u128, out: &mut Vec<u128>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n)? {
        out.push(n);
        return Ok(());
    }
    let root = isqrt(n);
    let d = if root * root == n { root } else { brent_rho(n) };
    split_cofactor(d, out)?;
    split_cofactor(n / d, out)
}

/// Deterministic primality test; errors above [`PRIMALITY_BOUND`] unless the
/// input has a small factor.
pub fn is_prime(n: u128) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    for &b in &MR_BASES {
        if n == b {
            return Ok(true);
        }
        if n % b == 0 {
            return Ok(false);
        }
    }
    if n >= PRIMALITY_BOUND {
        return Err(Error::TooLarge(format!("primality of {n}")));
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(n as u128).unwrap_or(false)
}

/// Splits a prime power `q = p^s` into `(p, s)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q as u128).ok()?;
    match f.factors() {
        [(p, e)] => Some((*p as u64, *e)),
        _ => None,
    }
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= n {
        s.wrapping_sub(n)
    } else {
        s
    }
}

fn mul_mod(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a % n) * (b % n) % n;
    }
    let (mut a, mut b) = (a % n, b % n);
    let mut r = 0;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, n);
        }
        a = add_mod(a, a, n);
        b >>= 1;
    }
    r
}

fn pow_mod(mut base: u128, mut exp: u128, n: u128) -> u128 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Brent's cycle-finding rho with the polynomial x^2 + c, trying c = 1, 2, ...
/// until a proper factor appears. `n` must be an odd composite.
fn brent_rho(n: u128) -> u128 {
    const BATCH: u64 = 128;
    for c in 1u128.. {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho exhausted every polynomial")
}

pub fn omega(n: u128) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

pub fn w(n: u128) -> Result<u128> {
    Ok(factorize(n)?.w())
}

pub fn euler_phi(n: u128) -> Result<u128> {
    Ok(factorize(n)?.euler_phi())
}

pub fn moebius(n: u128) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

pub fn radical(n: u128) -> Result<u128> {
    Ok(factorize(n)?.radical())
}

pub fn theta(n: u128) -> Result<Ratio<u128>> {
    Ok(factorize(n)?.theta())
}

/// Outcome of testing `W(n) < constant · n^(1/alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WBoundCheck {
    pub lhs: u128,
    pub rhs: f64,
    pub holds: bool,
}

pub fn w_bound_check(n: u128, alpha: u32, constant: f64) -> Result<WBoundCheck> {
    if alpha == 0 || !(constant > 0.0) {
        return Err(Error::InvalidArgument(
            "alpha and constant must be positive".into(),
        ));
    }
    let lhs = w(n)?;
    let rhs = constant * (n as f64).powf(1.0 / alpha as f64);
    Ok(WBoundCheck {
        lhs,
        rhs,
        holds: (lhs as f64) < rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(factorize(63).unwrap().factors(), &[(3, 2), (7, 1)]);
        assert_eq!(factorize(1_419_856).unwrap().factors(), &[(2, 4), (88741, 1)]);
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(0), Err(Error::ZeroInput));
        assert!(matches!(factorize(MAX_FACTOR_INPUT + 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn multiplicative_functions() {
        let f = factorize(63).unwrap();
        assert_eq!(f.w(), 4);
        assert_eq!(f.theta(), Ratio::new(4, 7));
        assert_eq!(f.euler_phi(), 36);
        assert_eq!(moebius(12).unwrap(), 0);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(radical(12).unwrap(), 6);
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(f.divisors(), vec![1, 3, 7, 9, 21, 63]);
    }

    #[test]
    fn large_cofactors() {
        // 2^64 + 1 = 274177 * 67280421310721
        let f = factorize((1u128 << 64) + 1).unwrap();
        assert_eq!(f.factors(), &[(274_177, 1), (67_280_421_310_721, 1)]);
        // two primes just above the trial-division limit
        let (p, q) = (1_000_003u128, 1_000_033u128);
        assert_eq!(factorize(p * q).unwrap().factors(), &[(p, 1), (q, 1)]);
        assert_eq!(factorize(p * p * q).unwrap().factors(), &[(p, 2), (q, 1)]);
        let m61 = (1u128 << 61) - 1;
        assert_eq!(factorize(m61).unwrap().factors(), &[(m61, 1)]);
        assert_eq!(factorize(3 * m61).unwrap().factors(), &[(3, 1), (m61, 1)]);
        // 2^80 - 1
        let f = factorize((1u128 << 80) - 1).unwrap();
        assert_eq!(f.value(), (1u128 << 80) - 1);
        assert_eq!(
            f.primes().collect::<Vec<_>>(),
            vec![3, 5, 11, 17, 31, 41, 257, 61681, 4_278_255_361]
        );
    }

    #[test]
    fn primality_bound_is_reported() {
        // 2^89 - 1 is prime, but above the certified Miller-Rabin range
        assert!(matches!(factorize((1u128 << 89) - 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn w_bounds() {
        let c = w_bound_check(63, 6, 37.4683).unwrap();
        assert_eq!(c.lhs, 4);
        assert!((c.rhs - 74.740_17).abs() < 1e-4);
        assert!(c.holds);
        assert!(w_bound_check(2, 8, 4514.7).unwrap().holds);
        let one = w_bound_check(1, 6, 37.4683).unwrap();
        assert_eq!(one.lhs, 1);
        assert!(one.holds);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
