//! Dirichlet characters mod q and their Gauss sums.
//!
//! `(ℤ/q)^*` is split by CRT into cyclic factors: one per odd prime power
//! (generated by a primitive root), `⟨3⟩` for 4, and `⟨-1⟩ × ⟨5⟩` for
//! `2^k`, `k >= 3`. A character is an exponent vector `(e_1, ..., e_r)` and
//! `χ(n) = Π e(e_i log_i(n) / d_i)`, evaluated through per-residue discrete
//! logs and a single table of `L`-th roots of unity.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{factorize, ArithTable};
use crate::error::{Error, Result};
use crate::expsum::{twiddles, ComplexAcc};

pub const CHARACTER_Q_CAP: u64 = 100_000;

/// One cyclic factor of `(ℤ/q)^*`.
#[derive(Debug, Clone)]
struct Component {
    /// The prime power this factor lives on.
    modulus: u64,
    /// Generator lifted to `ℤ/q` (≡ 1 on the other prime powers).
    generator: u64,
    order: u64,
    /// Discrete log of each residue mod `modulus`; `u32::MAX` off the unit group.
    logs: Vec<u32>,
}

#[derive(Debug)]
pub struct CharacterTable {
    q: u64,
    components: Vec<Component>,
    /// `L = lcm` of the component orders.
    root_order: u64,
    roots: Vec<Complex64>,
    count: usize,
    gauss: Vec<OnceLock<Complex64>>,
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = b as u128 % m;
    let mut r = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Smallest primitive root mod the odd prime `p`.
fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi_factors = factorize(p - 1).expect("p - 1 within factorization range");
    (2..p)
        .find(|&g| {
            phi_factors
                .iter()
                .all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1)
        })
        .expect("every prime has a primitive root")
}

/// Log table for a cyclic group mod `m` generated by `g` of order `d`.
fn cyclic_logs(m: u64, g: u64, d: u64) -> Vec<u32> {
    let mut logs = vec![u32::MAX; m as usize];
    let mut v = 1 % m;
    for j in 0..d {
        logs[v as usize] = j as u32;
        v = v * g % m;
    }
    logs
}

/// `x` with `x ≡ r (mod m)` and `x ≡ 1 (mod q/m)`.
fn crt_lift(r: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    if rest == 1 {
        return r % q;
    }
    // x = 1 + rest * t, rest * t ≡ r - 1 (mod m)
    let inv = mod_inverse(rest % m, m);
    let t = ((r + m - 1) % m) as u128 * inv as u128 % m as u128;
    ((1 + rest as u128 * t) % q as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i128) as u64
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("q must be positive".into()));
        }
        if q > CHARACTER_Q_CAP {
            return Err(Error::QTooLarge {
                q,
                cap: CHARACTER_Q_CAP,
            });
        }
        let mut components = Vec::new();
        for (p, k) in factorize(q)? {
            let m = p.pow(k);
            if p == 2 {
                match k {
                    1 => {}
                    2 => components.push(Component {
                        modulus: 4,
                        generator: crt_lift(3, 4, q),
                        order: 2,
                        logs: cyclic_logs(4, 3, 2),
                    }),
                    _ => {
                        let d5 = m / 4;
                        let mut minus = vec![u32::MAX; m as usize];
                        let mut five = vec![u32::MAX; m as usize];
                        let mut v = 1u64;
                        for b in 0..d5 {
                            minus[v as usize] = 0;
                            five[v as usize] = b as u32;
                            minus[(m - v) as usize] = 1;
                            five[(m - v) as usize] = b as u32;
                            v = v * 5 % m;
                        }
                        components.push(Component {
                            modulus: m,
                            generator: crt_lift(m - 1, m, q),
                            order: 2,
                            logs: minus,
                        });
                        components.push(Component {
                            modulus: m,
                            generator: crt_lift(5, m, q),
                            order: d5,
                            logs: five,
                        });
                    }
                }
            } else {
                let mut g = primitive_root(p);
                if k > 1 && pow_mod(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let order = m / p * (p - 1);
                components.push(Component {
                    modulus: m,
                    generator: crt_lift(g, m, q),
                    order,
                    logs: cyclic_logs(m, g, order),
                });
            }
        }
        let root_order = components.iter().fold(1u64, |l, c| l.lcm(&c.order));
        let count = components.iter().map(|c| c.order as usize).product();
        Ok(CharacterTable {
            q,
            components,
            root_order,
            roots: twiddles(root_order),
            count,
            gauss: (0..count).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of characters, `φ(q)`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// `(generator, order)` for each cyclic factor.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.components
            .iter()
            .map(|c| (c.generator, c.order))
            .collect()
    }

    /// Exponent vector of character `idx`; index 0 is the principal character.
    pub fn exponents(&self, idx: usize) -> Vec<u64> {
        assert!(idx < self.count, "character index {idx} out of range");
        let mut rest = idx as u64;
        self.components
            .iter()
            .map(|c| {
                let e = rest % c.order;
                rest /= c.order;
                e
            })
            .collect()
    }

    fn index_of(&self, exps: &[u64]) -> usize {
        let mut idx = 0u64;
        for (c, &e) in self.components.iter().zip(exps).rev() {
            idx = idx * c.order + e;
        }
        idx as usize
    }

    /// Index of the complex-conjugate character.
    pub fn conj_index(&self, idx: usize) -> usize {
        let exps: Vec<u64> = self
            .exponents(idx)
            .iter()
            .zip(&self.components)
            .map(|(&e, c)| (c.order - e) % c.order)
            .collect();
        self.index_of(&exps)
    }

    /// Discrete logs of `n` in each factor, or `None` if `(n, q) > 1`.
    fn logs(&self, n: u64) -> Option<Vec<u64>> {
        if self.q > 1 && n.gcd(&self.q) != 1 {
            return None;
        }
        Some(
            self.components
                .iter()
                .map(|c| u64::from(c.logs[(n % c.modulus) as usize]))
                .collect(),
        )
    }

    /// `k` with `χ(n) = e(k/L)`, or `None` when `χ(n) = 0`.
    pub fn root_exponent(&self, idx: usize, n: i64) -> Option<u64> {
        assert!(idx < self.count, "character index {idx} out of range");
        let n = n.rem_euclid(self.q as i64) as u64;
        if self.q > 1 && n.gcd(&self.q) != 1 {
            return None;
        }
        let l = self.root_order as u128;
        let mut rest = idx as u64;
        let mut k = 0u128;
        for c in &self.components {
            let e = rest % c.order;
            rest /= c.order;
            let lg = u64::from(c.logs[(n % c.modulus) as usize]);
            let w = self.root_order / c.order;
            k = (k + (e as u128 * lg as u128 % c.order as u128) * w as u128) % l;
        }
        Some(k as u64)
    }

    fn combine(&self, exps: &[u64], logs: &[u64]) -> u64 {
        let l = self.root_order as u128;
        let mut k = 0u128;
        for ((c, &e), &lg) in self.components.iter().zip(exps).zip(logs) {
            let w = self.root_order / c.order;
            k = (k + (e as u128 * lg as u128 % c.order as u128) * w as u128) % l;
        }
        k as u64
    }

    /// `χ_idx(n)`.
    pub fn chi(&self, idx: usize, n: i64) -> Complex64 {
        match self.root_exponent(idx, n) {
            Some(k) => self.roots[k as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// All values `χ_idx(b)` for `b = 0..q`.
    pub fn values(&self, idx: usize) -> Vec<Complex64> {
        let exps = self.exponents(idx);
        (0..self.q)
            .map(|b| match self.logs(b) {
                Some(logs) => self.roots[self.combine(&exps, &logs) as usize],
                None => Complex64::new(0.0, 0.0),
            })
            .collect()
    }

    /// `G(χ) = Σ_{(b,q)=1} e(b/q) χ(b)`, computed once per character.
    pub fn gauss_sum(&self, idx: usize) -> Complex64 {
        *self.gauss[idx].get_or_init(|| {
            let tw = twiddles(self.q);
            let mut acc = ComplexAcc::new();
            for (b, v) in self.values(idx).into_iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    acc.add(tw[b] * v);
                }
            }
            acc.value()
        })
    }
}

/// `ψ(x, χ) = Σ_{n<=x} f(n) χ(n)` by direct summation.
pub fn psi_chi(table: &ArithTable, tab: &CharacterTable, idx: usize, x: u64) -> Result<Complex64> {
    table.ensure_covers(1, x)?;
    let vals = tab.values(idx);
    let q = tab.q();
    let mut acc = ComplexAcc::new();
    for (n, v) in table.nonzero(1, x) {
        let c = vals[(n % q) as usize];
        if c != Complex64::new(0.0, 0.0) {
            acc.add(c * v);
        }
    }
    Ok(acc.value())
}

/// `ψ(x, χ)` for every character, through residue-class sums.
pub fn psi_chi_all(table: &ArithTable, tab: &CharacterTable, x: u64) -> Result<Vec<Complex64>> {
    table.ensure_covers(1, x)?;
    let q = tab.q();
    let mut sums = vec![crate::expsum::RealAcc::new(); q as usize];
    for (n, v) in table.nonzero(1, x) {
        sums[(n % q) as usize].add(v);
    }
    let sums: Vec<f64> = sums.iter().map(|a| a.value()).collect();
    Ok((0..tab.len())
        .into_par_iter()
        .map(|idx| {
            let mut acc = ComplexAcc::new();
            for (c, &s) in tab.values(idx).iter().zip(&sums) {
                if s != 0.0 && *c != Complex64::new(0.0, 0.0) {
                    acc.add(c * s);
                }
            }
            acc.value()
        })
        .collect())
}

/// `(1/φ(q)) Σ_χ χ(a) G(χ̄) χ(n)`, which equals `e(an/q)` for `(an, q) = 1`.
pub fn reconstruct_additive(tab: &CharacterTable, a: i64, n: i64) -> Result<Complex64> {
    let q = tab.q();
    for v in [a, n] {
        if q > 1 && (v.rem_euclid(q as i64) as u64).gcd(&q) != 1 {
            return Err(Error::NotCoprime { a: v, q });
        }
    }
    let mut acc = ComplexAcc::new();
    for idx in 0..tab.len() {
        let g = tab.gauss_sum(tab.conj_index(idx));
        acc.add(tab.chi(idx, a) * g * tab.chi(idx, n));
    }
    Ok(acc.value() / tab.len() as f64)
}
