//! Small-integer number theory shared by the modular and lattice code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple, `None` on overflow.
pub fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd_u64(a, b)).checked_mul(b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// Reduce an arbitrary-precision integer into `[0, m)`.
pub fn reduce(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// Solve `x ≡ a (mod m)`, `x ≡ b (mod n)`. Returns `(x, lcm)` with `0 <= x < lcm`.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    let (a, m, b, n) = (a as i128, m as i128, b as i128, n as i128);
    let eg = m.extended_gcd(&n);
    let g = eg.gcd;
    if (b - a) % g != 0 {
        return None;
    }
    let l = m / g * n;
    let step = ((b - a) / g).mod_floor(&(n / g));
    let inv = eg.x.mod_floor(&(n / g));
    let t = (step * inv).mod_floor(&(n / g));
    let x = (a + m * t).mod_floor(&l);
    Some((u64::try_from(x).ok()?, u64::try_from(l).ok()?))
}

pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of `|n|` by trial division. Returns `None` when a
/// cofactor above the trial limit squared is left over, i.e. when the
/// factorization cannot be certified.
pub fn factorize(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        let limit = BigInt::from(TRIAL_LIMIT);
        if n > &limit * &limit {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// Positive divisors of `|n|`, or `None` if factoring fails or there are more
/// than `cap` of them.
pub fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let factors = factorize(n)?;
    let mut divs = vec![BigInt::from(1)];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        if next.len() > cap {
            return None;
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}
