//! GF(p^m) by lookup tables over a fixed irreducible modulus.

use crate::error::{Error, Result};
use crate::padic_quadratic::check_prime;

/// Field elements are encoded as Σ c_i p^i for the residue Σ c_i x^i.
pub type Fq = u16;

const MAX_Q: u64 = 4096;

#[derive(Debug, Clone)]
pub struct FqContext {
    pub p: u64,
    pub m: usize,
    /// c_0, …, c_{m−1} of the monic modulus x^m + Σ c_i x^i.
    pub modulus: Vec<u64>,
    q: usize,
    add: Vec<Fq>,
    mul: Vec<Fq>,
    neg: Vec<Fq>,
    inv: Vec<Fq>,
    frob: Vec<Fq>,
}

fn digits(mut a: u64, p: u64, m: usize) -> Vec<u64> {
    (0..m)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of a modulo the monic polynomial b, coefficients low-first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[i + shift] = (r[i + shift] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility of x^m + Σ c_i x^i over F_p, coefficients low-first.
pub fn is_irreducible(lower: &[u64], p: u64) -> bool {
    let m = lower.len();
    let mut f = lower.to_vec();
    f.push(1);
    for d in 1..=m / 2 {
        for code in 0..p.pow(d as u32) {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible of degree m, comparing (c_0, …, c_{m−1}) lexicographically.
pub fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    let total = p.pow(m as u32);
    let mut cands: Vec<Vec<u64>> = (0..total).map(|c| digits(c, p, m)).collect();
    cands.sort();
    cands
        .into_iter()
        .find(|c| is_irreducible(c, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FqContext {
    pub fn new(p: u64, m: usize) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(Error::Invalid("extension degree must be ≥ 1".into()));
        }
        let q64 = p
            .checked_pow(m as u32)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::Budget(format!("p^m above {MAX_Q}")))?;
        let q = q64 as usize;
        let modulus = least_irreducible(p, m);
        let mut full = modulus.clone();
        full.push(1);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        let digs: Vec<Vec<u64>> = (0..q as u64).map(|a| digits(a, p, m)).collect();
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u64> = digs[a]
                    .iter()
                    .zip(&digs[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = undigits(&s, p) as Fq;
                let mut prod = vec![0u64; 2 * m - 1];
                for (i, x) in digs[a].iter().enumerate() {
                    for (j, y) in digs[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if prod.len() > m {
                    poly_rem(&prod, &full, p)
                } else {
                    prod
                };
                mul[a * q + b] = undigits(&r, p) as Fq;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Fq;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Fq;
                }
            }
        }
        let mut ctx = FqContext {
            p,
            m,
            modulus,
            q,
            add,
            mul,
            neg,
            inv,
            frob: vec![],
        };
        ctx.frob = (0..q).map(|a| ctx.pow(a as Fq, p)).collect();
        Ok(ctx)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a == 0 {
            Err(Error::Invalid("inverse of zero".into()))
        } else {
            Ok(self.inv[a as usize])
        }
    }

    /// x ↦ x^p.
    #[inline]
    pub fn frob(&self, a: Fq) -> Fq {
        self.frob[a as usize]
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The prime-field element n mod p.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as Fq
    }

    /// True for elements of the prime field.
    pub fn is_rational(&self, a: Fq) -> bool {
        (a as u64) < self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q as Fq
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a == 0 || self.pow(a, (self.q as u64 - 1) / 2) == 1
    }
}
