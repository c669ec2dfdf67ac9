//! W(F_{p^m}) / p^K as the Galois ring (ℤ/p^K)[x]/(f̃) with its Frobenius lift.

use crate::error::{Error, Result};
use crate::finite_orthogonal::{is_irreducible, least_irreducible, Fq};
use crate::padic_quadratic::check_prime;

pub const MAX_DEGREE: usize = 8;

/// Coefficients of 1, x, …, x^{m−1}, each in [0, p^K).
pub type W = [u32; MAX_DEGREE];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittRing {
    pub p: u64,
    pub m: usize,
    pub precision: usize,
    /// c_0, …, c_{m−1} of the monic structural polynomial x^m + Σ c_i x^i.
    pub modulus: Vec<u64>,
    pk: u64,
    /// σ(x^i) for i < m.
    sigma_powers: Vec<W>,
}

impl WittRing {
    /// Structural polynomial lifted from the least irreducible modulus of F_{p^m}.
    pub fn new(p: u64, m: usize, precision: usize) -> Result<Self> {
        Self::with_modulus(p, m, precision, least_irreducible(p, m.max(1)))
    }

    pub fn with_modulus(p: u64, m: usize, precision: usize, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::Invalid(format!(
                "residue degree must be in 1..={MAX_DEGREE}, got {m}"
            )));
        }
        if precision < 2 {
            return Err(Error::Invalid(format!(
                "precision K must be ≥ 2, got {precision}"
            )));
        }
        if modulus.len() != m {
            return Err(Error::Invalid(format!(
                "structural polynomial needs {m} lower coefficients, got {}",
                modulus.len()
            )));
        }
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !is_irreducible(&reduced, p) {
            return Err(Error::Invalid(format!(
                "structural polynomial {modulus:?} is reducible mod {p}"
            )));
        }
        let pk = p
            .checked_pow(precision as u32)
            .filter(|&v| v < u32::MAX as u64)
            .ok_or_else(|| Error::Budget(format!("p^K = {p}^{precision} overflows")))?;
        let mut ring = WittRing {
            p,
            m,
            precision,
            modulus: modulus.iter().map(|c| c % pk).collect(),
            pk,
            sigma_powers: vec![],
        };
        let root = ring.frobenius_root();
        let mut powers = vec![ring.one()];
        for i in 1..m {
            let next = ring.mul(&powers[i - 1], &root);
            powers.push(next);
        }
        ring.sigma_powers = powers;
        Ok(ring)
    }

    /// The root of f̃ congruent to x^p, by Newton iteration.
    fn frobenius_root(&self) -> W {
        let mut y = self.pow(&self.gen(), self.p);
        for _ in 0..self.precision + 1 {
            let fy = self.eval_modulus(&y);
            if self.is_zero(&fy) {
                break;
            }
            let dfy = self.eval_modulus_derivative(&y);
            let inv = self.inv(&dfy).expect("f̃ is separable mod p");
            y = self.sub(&y, &self.mul(&fy, &inv));
        }
        y
    }

    fn eval_modulus(&self, y: &W) -> W {
        let mut acc = self.one();
        for c in self.modulus.iter().rev() {
            acc = self.add(&self.mul(&acc, y), &self.from_int(*c as i64));
        }
        acc
    }

    fn eval_modulus_derivative(&self, y: &W) -> W {
        let m = self.m;
        let mut acc = self.from_int(m as i64);
        for i in (1..m).rev() {
            let c = (self.modulus[i] % self.pk) * i as u64 % self.pk;
            acc = self.add(&self.mul(&acc, y), &self.from_int(c as i64));
        }
        acc
    }

    pub fn modulus_p_k(&self) -> u64 {
        self.pk
    }

    pub fn zero(&self) -> W {
        [0; MAX_DEGREE]
    }

    pub fn one(&self) -> W {
        self.from_int(1)
    }

    /// The class of x.
    pub fn gen(&self) -> W {
        if self.m == 1 {
            let c = (self.pk - self.modulus[0] % self.pk) % self.pk;
            return self.from_int(c as i64);
        }
        let mut w = self.zero();
        w[1] = 1;
        w
    }

    pub fn from_int(&self, n: i64) -> W {
        let mut w = self.zero();
        w[0] = n.rem_euclid(self.pk as i64) as u32;
        w
    }

    pub fn is_zero(&self, a: &W) -> bool {
        a[..self.m].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &W, b: &W) -> W {
        let mut w = self.zero();
        for i in 0..self.m {
            w[i] = ((a[i] as u64 + b[i] as u64) % self.pk) as u32;
        }
        w
    }

    pub fn sub(&self, a: &W, b: &W) -> W {
        let mut w = self.zero();
        for i in 0..self.m {
            w[i] = ((a[i] as u64 + self.pk - b[i] as u64) % self.pk) as u32;
        }
        w
    }

    pub fn neg(&self, a: &W) -> W {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &W, b: &W) -> W {
        let m = self.m;
        let pk = self.pk;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a[i] as u64 * b[j] as u64) % pk;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &c) in self.modulus.iter().enumerate() {
                let s = d - m + i;
                prod[s] = (prod[s] + pk - lead * c % pk) % pk;
            }
        }
        let mut w = self.zero();
        for i in 0..m {
            w[i] = prod[i] as u32;
        }
        w
    }

    /// Multiply by an integer.
    pub fn scale(&self, a: &W, k: u64) -> W {
        let mut w = self.zero();
        let k = k % self.pk;
        for i in 0..self.m {
            w[i] = (a[i] as u64 * k % self.pk) as u32;
        }
        w
    }

    pub fn pow(&self, a: &W, mut e: u64) -> W {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// v_p(a), with K for zero.
    pub fn valuation(&self, a: &W) -> usize {
        a[..self.m]
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut c = c as u64;
                let mut v = 0;
                while c % self.p == 0 {
                    c /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.precision)
    }

    pub fn is_unit(&self, a: &W) -> bool {
        self.valuation(a) == 0
    }

    /// a / p^e for a divisible by p^e; the result is determined mod p^{K−e}
    /// and returned with coefficients in [0, p^{K−e}).
    pub fn div_p_pow(&self, a: &W, e: usize) -> W {
        let d = self.p.pow(e as u32);
        let mut w = self.zero();
        for i in 0..self.m {
            debug_assert_eq!(a[i] as u64 % d, 0);
            w[i] = (a[i] as u64 / d) as u32;
        }
        w
    }

    /// Coefficientwise remainder mod p^e: the canonical representative of a + p^e R.
    pub fn rem_p_pow(&self, a: &W, e: usize) -> W {
        let d = self.p.pow(e as u32);
        let mut w = self.zero();
        for i in 0..self.m {
            w[i] = (a[i] as u64 % d) as u32;
        }
        w
    }

    pub fn inv(&self, a: &W) -> Result<W> {
        if !self.is_unit(a) {
            return Err(Error::Invalid("element is not a unit".into()));
        }
        let q = self.p.pow(self.m as u32);
        // residue inverse, then Newton steps v ← v(2 − av)
        let mut v = self.pow(a, q - 2);
        let two = self.from_int(2);
        for _ in 0..self.precision {
            let av = self.mul(a, &v);
            v = self.mul(&v, &self.sub(&two, &av));
        }
        Ok(v)
    }

    /// The ring automorphism lifting x ↦ x^p.
    pub fn sigma(&self, a: &W) -> W {
        let mut acc = self.zero();
        for i in 0..self.m {
            if a[i] != 0 {
                acc = self.add(&acc, &self.scale(&self.sigma_powers[i], a[i] as u64));
            }
        }
        acc
    }

    pub fn is_rational(&self, a: &W) -> bool {
        a[1..self.m].iter().all(|&c| c == 0)
    }

    /// Reduction mod p in the F_{p^m} encoding Σ c_i p^i.
    pub fn residue(&self, a: &W) -> Fq {
        let mut code = 0u64;
        for i in (0..self.m).rev() {
            code = code * self.p + a[i] as u64 % self.p;
        }
        code as Fq
    }

    /// The lift with coefficients in [0, p).
    pub fn lift(&self, x: Fq) -> W {
        let mut w = self.zero();
        let mut c = x as u64;
        for slot in w.iter_mut().take(self.m) {
            *slot = (c % self.p) as u32;
            c /= self.p;
        }
        w
    }
}
