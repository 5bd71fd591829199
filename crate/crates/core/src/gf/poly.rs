//! Dense polynomials over a prime field F_p, little-endian coefficient
//! vectors (constant term first). Only what the field layer needs: products,
//! remainders, gcd, modular powers, and an irreducibility test.

pub(crate) fn add_p(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn sub_p(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn mul_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_p(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, a, p);
        }
        a = mul_p(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_p(a: u64, p: u64) -> u64 {
    pow_p(a, p - 2, p)
}

pub(crate) fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub(crate) fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; f.len() + g.len() - 1];
    let pp = p as u128;
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u128 * b as u128) % pp;
        }
    }
    trim(out.into_iter().map(|c| c as u64).collect())
}

/// Quotient and remainder of `f` by nonzero `g`.
pub(crate) fn div_rem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let g = trim(g.to_vec());
    assert!(!g.is_empty(), "division by the zero polynomial");
    let mut r = trim(f.to_vec());
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_p(*g.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let coef = mul_p(*r.last().unwrap(), lead_inv, p);
        q[shift] = coef;
        for (j, &gj) in g.iter().enumerate() {
            r[shift + j] = sub_p(r[shift + j], mul_p(coef, gj, p), p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    div_rem(f, g, p).1
}

pub(crate) fn monic(f: Vec<u64>, p: u64) -> Vec<u64> {
    match f.last() {
        Some(&lead) if lead != 1 => {
            let inv = inv_p(lead, p);
            f.into_iter().map(|c| mul_p(c, inv, p)).collect()
        }
        _ => f,
    }
}

pub(crate) fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

pub(crate) fn mul_mod(f: &[u64], g: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(f, g, p), modulus, p)
}

pub(crate) fn pow_mod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, modulus, p);
        }
        b = mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a monic `g` of degree ≥ 1. Returns a proper
/// monic factor when `g` is reducible.
pub(crate) fn find_factor(g: &[u64], p: u64) -> Option<Vec<u64>> {
    let d = g.len() - 1;
    let x = vec![0, 1];
    let mut h = rem(&x, g, p);
    for k in 1..=d / 2 {
        h = pow_mod(&h, p as u128, g, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = sub_p(hx[1], 1, p);
        let common = gcd(&trim(hx), g, p);
        if common.len() > 1 {
            if common.len() < g.len() {
                return Some(common);
            }
            // every irreducible factor has degree exactly k
            return Some(factor_of_degree(g, k, p));
        }
    }
    None
}

fn factor_of_degree(g: &[u64], k: usize, p: u64) -> Vec<u64> {
    let count = (p as u128).pow(k as u32);
    for t in 0..count {
        let mut cand = Vec::with_capacity(k + 1);
        let mut rest = t;
        for _ in 0..k {
            cand.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        cand.push(1);
        if rem(g, &cand, p).is_empty() {
            return cand;
        }
    }
    unreachable!("a degree-{k} factor must exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let p = 7;
        let f = vec![3, 0, 5, 1, 6];
        let g = vec![2, 1, 1];
        let (q, r) = div_rem(&f, &g, p);
        let mut back = mul(&q, &g, p);
        back.resize(f.len(), 0);
        for (i, c) in r.iter().enumerate() {
            back[i] = add_p(back[i], *c, p);
        }
        assert_eq!(trim(back), f);
        assert!(r.len() < g.len());
    }

    #[test]
    fn irreducibility() {
        // x^6 + x^4 + x^3 + x + 1 over F_2
        assert_eq!(find_factor(&[1, 1, 0, 1, 1, 0, 1], 2), None);
        // x^3 + 2x + 1 over F_3
        assert_eq!(find_factor(&[1, 2, 0, 1], 3), None);
        // (x^2 + x + 1)^2 over F_2
        let f = find_factor(&[1, 0, 1, 0, 1], 2).unwrap();
        assert_eq!(f, vec![1, 1, 1]);
        // (x + 1)(x^2 + x + 1) over F_2: the linear factor surfaces first
        assert_eq!(find_factor(&[1, 0, 0, 1], 2).unwrap(), vec![1, 1]);
        // x^2 + 1 = (x + 1)^2 over F_2
        assert_eq!(find_factor(&[1, 0, 1], 2).unwrap(), vec![1, 1]);
    }
}
