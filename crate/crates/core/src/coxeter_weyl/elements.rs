//! The Weyl group elements and parabolic subsets indexing the strata.

use super::finite::{word, Kind, ParabolicSet, SignedPerm};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn desc(a: i64, b: i64) -> Vec<usize> {
    if a < b {
        return vec![];
    }
    (b..=a).rev().map(|x| x as usize).collect()
}

fn asc(a: i64, b: i64) -> Vec<usize> {
    if a > b {
        return vec![];
    }
    (a..=b).map(|x| x as usize).collect()
}

/// Type and rank data of the orthogonal group of Ω_Λ for a lattice of type t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoSetup {
    pub t: usize,
    pub h: usize,
    pub d: usize,
    pub kind: Kind,
}

impl OrthoSetup {
    pub fn new(t: usize, h: usize) -> Result<Self> {
        if t % 2 != h % 2 || h > t {
            return Err(Error::Invalid(format!(
                "need h ≤ t with equal parity, got t={t} h={h}"
            )));
        }
        let (d, kind) = if t % 2 == 0 {
            (t / 2, Kind::D)
        } else {
            ((t - 1) / 2, Kind::B)
        };
        let min_d = if kind == Kind::D { 2 } else { 1 };
        if d < min_d {
            return Err(Error::Invalid(format!("rank {d} too small for t={t}")));
        }
        Ok(OrthoSetup { t, h, d, kind })
    }

    /// (t − h)/2, the largest admissible r.
    pub fn r_max(&self) -> usize {
        (self.t - self.h) / 2
    }

    fn check_r(&self, r: usize, lo: usize) -> Result<()> {
        if r < lo || r > self.r_max() {
            return Err(Error::OutOfRange(format!(
                "r={r} outside {lo}..={}",
                self.r_max()
            )));
        }
        Ok(())
    }

    /// I_r. For odd h = 1 this is {s_1, …, s_{d−1−r}}; see `i_r_printed` for the
    /// printed variant.
    pub fn i_r(&self, r: usize) -> Result<ParabolicSet> {
        self.check_r(r, 0)?;
        let (d, k, r) = (self.d as i64, self.r_max() as i64, r as i64);
        let m = match (self.kind, self.h) {
            (Kind::D, h) if h <= 2 => asc(1, d - 2 - r),
            (Kind::D, _) => [asc(1, k - 1 - r), asc(k + 1, d)].concat(),
            (_, 1) => asc(1, d - 1 - r),
            (_, 3) => [asc(1, d - 2 - r), vec![d as usize]].concat(),
            (_, _) => [asc(1, k - 1 - r), asc(k + 1, d)].concat(),
        };
        ParabolicSet::new(self.kind, self.d, m)
    }

    /// The printed I_r for odd h = 1: {s_1, …, s_{d−2−r}, s_{d−1}}.
    pub fn i_r_printed(&self, r: usize) -> Result<ParabolicSet> {
        if self.kind == Kind::B && self.h == 1 {
            self.check_r(r, 0)?;
            let d = self.d as i64;
            let mut m = asc(1, d - 2 - r as i64);
            if r + 1 < self.d {
                m.push(self.d - 1);
            }
            return ParabolicSet::new(self.kind, self.d, m.into_iter().filter(|&x| x >= 1));
        }
        self.i_r(r)
    }

    /// w_r as a word in the simple reflections (w_r^+ when h = 0).
    pub fn w_r_word(&self, r: usize, sign: i8) -> Result<Vec<usize>> {
        self.check_r(r, 0)?;
        if r == 0 {
            return Ok(vec![]);
        }
        if self.kind == Kind::D && self.h == 0 && r == self.d {
            return Err(Error::OutOfRange("w_d^± for h = 0 would need s_0".into()));
        }
        let (d, k, r) = (self.d as i64, self.r_max() as i64, r as i64);
        let (tp, tm) = (self.d - 1, self.d);
        Ok(match (self.kind, self.h) {
            (Kind::D, 0) => [vec![if sign >= 0 { tm } else { tp }], desc(d - 2, d - r)].concat(),
            (Kind::D, 2) => [vec![tm, tp], desc(d - 2, k - r + 1)].concat(),
            (Kind::D, _) => [asc(k, d - 2), vec![tm, tp], desc(d - 2, k - r + 1)].concat(),
            (_, 1) => desc(d, d - r + 1),
            (_, 3) => [vec![self.d - 1, self.d, self.d - 1], desc(d - 2, k - r + 1)].concat(),
            (_, _) => [asc(k, d - 1), vec![self.d], desc(d - 1, k - r + 1)].concat(),
        })
    }

    pub fn w_r(&self, r: usize, sign: i8) -> Result<SignedPerm> {
        word(self.kind, self.d, &self.w_r_word(r, sign)?)
    }

    /// w_r′ (w_r′^± when h = 2); requires h ≥ 2.
    pub fn w_r_prime_word(&self, r: usize, sign: i8) -> Result<Vec<usize>> {
        self.check_r(r, 1)?;
        if self.h < 2 {
            return Err(Error::OutOfRange("w_r′ needs h ≥ 2".into()));
        }
        let (k, r) = (self.r_max() as i64, r as i64);
        Ok(match (self.kind, self.h) {
            (Kind::D, 2) => [
                vec![if sign >= 0 { self.d - 1 } else { self.d }],
                desc(k - 1, k - r + 1),
            ]
            .concat(),
            _ => desc(k, k - r + 1),
        })
    }

    pub fn w_r_prime(&self, r: usize, sign: i8) -> Result<SignedPerm> {
        word(self.kind, self.d, &self.w_r_prime_word(r, sign)?)
    }

    /// I_Λ = I_{(t−h)/2}.
    pub fn i_lambda(&self) -> Result<ParabolicSet> {
        self.i_r(self.r_max())
    }

    pub fn w_lambda(&self) -> Result<SignedPerm> {
        self.w_r(self.r_max(), 1)
    }
}

/// Data for the special linear case of a pair Λ ⊂ Λ′ of types t ≥ h ≥ t′.
///
/// The words use s_1, …, s_N with N = (t−t′)/2, so they live in S_{N+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSetup {
    pub t: usize,
    pub h: usize,
    pub t_prime: usize,
}

impl LinearSetup {
    pub fn new(t: usize, h: usize, t_prime: usize) -> Result<Self> {
        if !(t_prime <= h && h <= t) || (t - h) % 2 != 0 || (h - t_prime) % 2 != 0 {
            return Err(Error::Invalid(format!(
                "need t′ ≤ h ≤ t of equal parity: {t_prime},{h},{t}"
            )));
        }
        if t == t_prime {
            return Err(Error::Invalid("need t > t′".into()));
        }
        Ok(LinearSetup { t, h, t_prime })
    }

    pub fn n(&self) -> usize {
        (self.t - self.t_prime) / 2
    }

    fn k(&self) -> usize {
        (self.t - self.h) / 2
    }

    pub fn s_max(&self) -> usize {
        (self.h - self.t_prime) / 2 + 1
    }

    /// I_{r,s}; s may go one past (h−t′)/2, where the upper range is empty.
    pub fn i_rs(&self, r: usize, s: usize) -> Result<ParabolicSet> {
        if r > self.k() || s > self.s_max() {
            return Err(Error::OutOfRange(format!("(r,s)=({r},{s})")));
        }
        let (k, n) = (self.k() as i64, self.n() as i64);
        let m = [asc(1, k - 1 - r as i64), asc(k + 1 + s as i64, n)].concat();
        ParabolicSet::new(Kind::A, self.n() + 1, m)
    }

    pub fn w_rs_word(&self, r: usize, s: usize) -> Result<Vec<usize>> {
        if (r, s) == (0, 0) {
            return Ok(vec![]);
        }
        if self.k() == 0 || r + 1 > self.k() || s == 0 || s > self.s_max() {
            return Err(Error::OutOfRange(format!("(r,s)=({r},{s})")));
        }
        let k = self.k() as i64;
        Ok([asc(k, k + s as i64 - 1), desc(k - 1, k - r as i64)].concat())
    }

    pub fn w_rs(&self, r: usize, s: usize) -> Result<SignedPerm> {
        word(Kind::A, self.n() + 1, &self.w_rs_word(r, s)?)
    }

    /// All (r, s) for which w_{r,s} is defined.
    pub fn legal_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0)];
        for r in 0..self.k() {
            for s in 1..=self.s_max() {
                out.push((r, s));
            }
        }
        out
    }
}
