//! Small number-theoretic helpers: totients, divisors, trial factorization.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Trial division stops here; a larger leftover cofactor is recorded as-is.
const TRIAL_LIMIT: u64 = 1 << 24;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Prime factorization of a positive machine integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sorted positive divisors.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// Ramanujan sum `c_d(m)`: the sum of `k*m`-th powers of a primitive `d`-th
/// root of unity over units `k` mod `d`, an integer.
pub fn ramanujan_sum(d: u64, m: u64) -> i64 {
    let g = gcd_u64(d, m % d);
    let g = if g == 0 { d } else { g };
    let q = d / g;
    mobius(q) * (euler_phi(d) / euler_phi(q)) as i64
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn pow_u64(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Factorization of a positive integer by trial division. Any cofactor that
/// survives trial division up to a fixed bound is kept as a single key.
pub fn factor_biguint(n: &BigUint) -> BTreeMap<BigUint, i64> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        for (p, k) in factor_u64_bounded(small) {
            *out.entry(BigUint::from(p)).or_insert(0) += k as i64;
        }
        return out;
    }
    let mut n = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(bp.clone()).or_insert(0) += 1;
        }
        if let Some(small) = n.to_u64() {
            for (q, k) in factor_u64_bounded(small) {
                *out.entry(BigUint::from(q)).or_insert(0) += k as i64;
            }
            return out;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

fn factor_u64_bounded(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n && p <= TRIAL_LIMIT {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn abs_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn to_bigint(n: BigUint) -> BigInt {
    BigInt::from_biguint(if n.is_zero() { Sign::NoSign } else { Sign::Plus }, n)
}

/// Floor division with a positive divisor.
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}
