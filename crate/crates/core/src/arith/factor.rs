//! Trial-division factorization and the arithmetic functions derived from it.
//!
//! These are the textbook definitions; the sieve in the parent module is
//! checked against them.

use crate::error::{Error, Result};

pub const FACTORIZE_CAP: u64 = 1_000_000_000_000;

/// Prime factorization of `n` as `(prime, exponent)` pairs with strictly
/// increasing primes. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 || n > FACTORIZE_CAP {
        return Err(Error::RangeTooLarge {
            lo: n,
            hi: n,
            cap: FACTORIZE_CAP,
        });
    }
    Ok(trial_divide(n))
}

fn trial_divide(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let mut p = 5;
    while p * p <= n {
        push(&mut n, p);
        push(&mut n, p + 2);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n > 1 && factorize(n).map(|f| f == [(n, 1)]).unwrap_or(false)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .expect("n within factorization cap")
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n).expect("n within factorization cap");
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn omega(n: u64) -> u32 {
    factorize(n).expect("n within factorization cap").len() as u32
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n)
        .expect("n within factorization cap")
        .into_iter()
        .map(|(_, e)| u64::from(e) + 1)
        .product()
}

pub fn von_mangoldt(n: u64) -> f64 {
    match factorize(n).expect("n within factorization cap").as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n)
        .expect("n within factorization cap")
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

pub fn is_squarefree(n: u64) -> bool {
    moebius(n) != 0
}
