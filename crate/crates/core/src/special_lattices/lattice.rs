//! Lattices between p^b L₀ and p^{−a} L₀ as submodules of (W/p^K)^n in Howell form.

use super::witt::{WittRing, W};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type WVec = Vec<W>;

/// Howell form over the chain ring W/p^K: one row per pivot column, pivot
/// exactly p^v, entries above a pivot reduced mod p^v, and for each column c
/// the rows with pivot ≥ c span the vectors vanishing before c.
pub fn howell_form(ring: &WittRing, rows: Vec<WVec>, ncols: usize) -> Vec<WVec> {
    let k = ring.precision;
    let mut pool: Vec<WVec> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !ring.is_zero(x)))
        .collect();
    let mut out: Vec<WVec> = Vec::new();
    for c in 0..ncols {
        let best = pool
            .iter()
            .enumerate()
            .map(|(i, r)| (ring.valuation(&r[c]), i))
            .filter(|&(v, _)| v < k)
            .min();
        let Some((v, idx)) = best else {
            continue;
        };
        let mut piv = pool.swap_remove(idx);
        let unit = ring.div_p_pow(&piv[c], v);
        let inv = ring.inv(&unit).expect("unit part of pivot");
        for x in piv.iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for r in pool.iter_mut() {
            if ring.is_zero(&r[c]) {
                continue;
            }
            let factor = ring.div_p_pow(&r[c], v);
            for j in c..ncols {
                let t = ring.mul(&factor, &piv[j]);
                r[j] = ring.sub(&r[j], &t);
            }
        }
        if v > 0 {
            let pk_v = ring.p.pow((k - v) as u32);
            let extra: WVec = piv.iter().map(|x| ring.scale(x, pk_v)).collect();
            if extra.iter().any(|x| !ring.is_zero(x)) {
                pool.push(extra);
            }
        }
        for r in out.iter_mut() {
            if ring.is_zero(&r[c]) {
                continue;
            }
            let rem = ring.rem_p_pow(&r[c], v);
            let q = ring.div_p_pow(&ring.sub(&r[c], &rem), v);
            for j in c..ncols {
                let t = ring.mul(&q, &piv[j]);
                r[j] = ring.sub(&r[j], &t);
            }
        }
        out.push(piv);
        pool.retain(|r| r.iter().any(|x| !ring.is_zero(x)));
    }
    out
}

fn pivot_of(ring: &WittRing, row: &WVec) -> (usize, usize) {
    let c = row
        .iter()
        .position(|x| !ring.is_zero(x))
        .expect("Howell rows are nonzero");
    (c, ring.valuation(&row[c]))
}

/// Membership by reduction against a Howell form.
pub fn howell_contains(ring: &WittRing, form: &[WVec], v: &[W]) -> bool {
    let mut r = v.to_vec();
    let mut next = 0;
    for c in 0..r.len() {
        let on_pivot = next < form.len() && pivot_of(ring, &form[next]).0 == c;
        if on_pivot {
            let (_, e) = pivot_of(ring, &form[next]);
            if !ring.is_zero(&r[c]) {
                if ring.valuation(&r[c]) < e {
                    return false;
                }
                let factor = ring.div_p_pow(&r[c], e);
                for j in c..r.len() {
                    let t = ring.mul(&factor, &form[next][j]);
                    r[j] = ring.sub(&r[j], &t);
                }
            }
            next += 1;
        } else if !ring.is_zero(&r[c]) {
            return false;
        }
    }
    true
}

/// Quadratic lattice frame: a diagonal base lattice L₀ with Gram
/// diag(u_i p^{e_i}), e_i ∈ {0, 1}, the window (a, b) and Φ = A_b ∘ σ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowFrame {
    pub n: usize,
    /// (u_i, e_i) with u_i an integer unit.
    pub diag: Vec<(i64, u32)>,
    pub a: usize,
    pub b: usize,
    /// Integral matrix of A_b, invertible over ℤ_p.
    pub phi_matrix: Vec<Vec<i64>>,
}

/// The ring, window and Frobenius shared by a family of lattices.
#[derive(Debug)]
pub struct AmbientWindow {
    pub ring: WittRing,
    pub frame: WindowFrame,
    phi_ring: Vec<Vec<W>>,
    /// p^{a+b} e_i, the generators of p^b L₀ in window coordinates.
    floor: Vec<WVec>,
}

/// A lattice p^{−a}·N̂ where N̂ ⊂ W^n is the preimage of the stored module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WittLattice {
    /// Canonical Howell rows.
    pub rows: Vec<WVec>,
}

impl AmbientWindow {
    pub fn new(ring: WittRing, frame: WindowFrame) -> Result<Arc<Self>> {
        let n = frame.n;
        let k = ring.precision;
        if frame.diag.len() != n || frame.phi_matrix.len() != n {
            return Err(Error::RankMismatch(frame.diag.len(), n));
        }
        if frame
            .diag
            .iter()
            .any(|&(u, e)| e > 1 || u.rem_euclid(ring.p as i64) == 0)
        {
            return Err(Error::Invalid(
                "base Gram must be diag(u_i p^{e_i}) with units u_i and e_i ∈ {0,1}".into(),
            ));
        }
        if k < frame.a + frame.b || k < 2 * frame.a {
            return Err(Error::Invalid(format!(
                "precision K = {k} must be ≥ a+b = {} and ≥ 2a = {}",
                frame.a + frame.b,
                2 * frame.a
            )));
        }
        let phi_ring: Vec<Vec<W>> = frame
            .phi_matrix
            .iter()
            .map(|row| row.iter().map(|&x| ring.from_int(x)).collect())
            .collect();
        let floor = (0..n)
            .map(|i| {
                let mut v = vec![ring.zero(); n];
                v[i] = ring.from_int(ring.p.pow((frame.a + frame.b) as u32) as i64);
                v
            })
            .collect();
        let win = AmbientWindow {
            ring,
            frame,
            phi_ring,
            floor,
        };
        let base = win.base();
        if win.phi(&base)? != base {
            return Err(Error::Invalid("A_b must preserve L₀".into()));
        }
        Ok(Arc::new(win))
    }

    pub fn n(&self) -> usize {
        self.frame.n
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    fn p_pow(&self, e: usize) -> W {
        self.ring.from_int(self.ring.p.pow(e as u32) as i64)
    }

    /// Lattice spanned by window-coordinate generators (already scaled by p^a)
    /// together with p^b L₀.
    pub fn from_scaled(&self, gens: Vec<WVec>) -> WittLattice {
        let mut rows = gens;
        rows.extend(self.floor.iter().cloned());
        WittLattice {
            rows: howell_form(&self.ring, rows, self.n()),
        }
    }

    /// Lattice spanned by vectors given in L₀-coordinates with a common
    /// denominator p^{den}, den ≤ a.
    pub fn from_generators(&self, gens: &[WVec], den: usize) -> Result<WittLattice> {
        if den > self.frame.a {
            return Err(Error::WindowOverflow(format!(
                "denominator p^{den} beyond p^{}",
                self.frame.a
            )));
        }
        let s = self.p_pow(self.frame.a - den);
        let scaled = gens
            .iter()
            .map(|g| g.iter().map(|x| self.ring.mul(x, &s)).collect())
            .collect();
        let out = WittLattice {
            rows: howell_form(&self.ring, scaled, self.n()),
        };
        self.check_floor(&out, "lattice")?;
        Ok(out)
    }

    pub fn base(&self) -> WittLattice {
        let n = self.n();
        let gens: Vec<WVec> = (0..n)
            .map(|i| {
                let mut v = vec![self.ring.zero(); n];
                v[i] = self.ring.one();
                v
            })
            .collect();
        self.from_generators(&gens, 0)
            .expect("L₀ is inside the window")
    }

    pub fn contains_vector(&self, x: &WittLattice, v: &[W]) -> bool {
        howell_contains(&self.ring, &x.rows, v)
    }

    /// Y ⊆ X.
    pub fn contains(&self, x: &WittLattice, y: &WittLattice) -> bool {
        y.rows.iter().all(|r| self.contains_vector(x, r))
    }

    pub fn sum(&self, x: &WittLattice, y: &WittLattice) -> WittLattice {
        let mut rows = x.rows.clone();
        rows.extend(y.rows.iter().cloned());
        self.from_scaled(rows)
    }

    /// Length of W^n / N̂ subtracted from nK: the length of N̂ / p^K W^n.
    pub fn length(&self, x: &WittLattice) -> usize {
        let k = self.ring.precision;
        x.rows.iter().map(|r| k - pivot_of(&self.ring, r).1).sum()
    }

    /// [X : Y] for Y ⊆ X.
    pub fn index(&self, x: &WittLattice, y: &WittLattice) -> Result<usize> {
        if !self.contains(x, y) {
            return Err(Error::Invalid("index of a non-sublattice".into()));
        }
        Ok(self.length(x) - self.length(y))
    }

    fn check_floor(&self, x: &WittLattice, what: &str) -> Result<()> {
        if self.floor.iter().all(|f| self.contains_vector(x, f)) {
            Ok(())
        } else {
            Err(Error::WindowOverflow(format!(
                "{what} drops below p^{} L₀",
                self.frame.b
            )))
        }
    }

    /// Standard orthogonal {z : Σ x_i z_i ≡ 0 mod p^K for all rows x}.
    fn standard_perp(&self, rows: &[WVec]) -> Vec<WVec> {
        let ring = &self.ring;
        let n = self.n();
        let r = rows.len();
        let aug: Vec<WVec> = (0..n)
            .map(|i| {
                let mut v: WVec = rows.iter().map(|row| row[i]).collect();
                v.extend((0..n).map(|j| if i == j { ring.one() } else { ring.zero() }));
                v
            })
            .collect();
        howell_form(ring, aug, r + n)
            .into_iter()
            .filter(|row| row[..r].iter().all(|x| ring.is_zero(x)))
            .map(|row| row[r..].to_vec())
            .collect()
    }

    pub fn intersect(&self, x: &WittLattice, y: &WittLattice) -> WittLattice {
        let mut perps = self.standard_perp(&x.rows);
        perps.extend(self.standard_perp(&y.rows));
        let perps = howell_form(&self.ring, perps, self.n());
        WittLattice {
            rows: howell_form(&self.ring, self.standard_perp(&perps), self.n()),
        }
    }

    /// X^∨ = {y : (x, y) ∈ W for all x ∈ X}.
    pub fn dual(&self, x: &WittLattice) -> Result<WittLattice> {
        let ring = &self.ring;
        let (a, k) = (self.frame.a, ring.precision);
        // X^∨ ⊂ p^{−a} L₀ iff p^a L₀^∨ ⊂ X
        for (i, &(_, e)) in self.frame.diag.iter().enumerate() {
            let mut v = vec![ring.zero(); self.n()];
            v[i] = self.p_pow(2 * a - e as usize);
            if !self.contains_vector(x, &v) {
                return Err(Error::WindowOverflow(format!(
                    "dual leaves p^{} L₀; raise a",
                    -(a as i64)
                )));
            }
        }
        let shift = self.p_pow(k - 2 * a);
        let weights: Vec<W> = self
            .frame
            .diag
            .iter()
            .map(|&(u, e)| ring.mul(&ring.from_int(u), &self.p_pow(e as usize)))
            .collect();
        let twisted: Vec<WVec> = x
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&weights)
                    .map(|(c, w)| ring.mul(&ring.mul(c, w), &shift))
                    .collect()
            })
            .collect();
        let out = WittLattice {
            rows: howell_form(ring, self.standard_perp(&twisted), self.n()),
        };
        self.check_floor(&out, "dual")?;
        Ok(out)
    }

    /// Φ(X) = A_b σ(X).
    pub fn phi(&self, x: &WittLattice) -> Result<WittLattice> {
        let ring = &self.ring;
        let rows = x
            .rows
            .iter()
            .map(|r| {
                let s: WVec = r.iter().map(|c| ring.sigma(c)).collect();
                self.phi_ring
                    .iter()
                    .map(|arow| {
                        arow.iter()
                            .zip(&s)
                            .fold(ring.zero(), |acc, (a, c)| ring.add(&acc, &ring.mul(a, c)))
                    })
                    .collect()
            })
            .collect();
        Ok(self.from_scaled(rows))
    }

    /// pX.
    pub fn times_p(&self, x: &WittLattice) -> Result<WittLattice> {
        let k = self.ring.precision;
        for i in 0..self.n() {
            let mut v = vec![self.ring.zero(); self.n()];
            v[i] = self.p_pow(k.min(self.frame.a + self.frame.b) - 1);
            if !self.contains_vector(x, &v) {
                return Err(Error::WindowOverflow(format!(
                    "pX drops below p^{} L₀; raise b",
                    self.frame.b
                )));
            }
        }
        let p = self.ring.from_int(self.ring.p as i64);
        let rows = x
            .rows
            .iter()
            .map(|r| r.iter().map(|c| self.ring.mul(c, &p)).collect())
            .collect();
        Ok(self.from_scaled(rows))
    }

    /// p^{−1}X.
    pub fn div_p(&self, x: &WittLattice) -> Result<WittLattice> {
        let ring = &self.ring;
        if x.rows
            .iter()
            .any(|r| r.iter().any(|c| !ring.is_zero(c) && ring.valuation(c) == 0))
        {
            return Err(Error::WindowOverflow(format!(
                "p^{{-1}}X leaves p^{} L₀; raise a",
                -(self.frame.a as i64)
            )));
        }
        let k = ring.precision;
        let mut rows: Vec<WVec> = x
            .rows
            .iter()
            .map(|r| r.iter().map(|c| ring.div_p_pow(c, 1)).collect())
            .collect();
        for i in 0..self.n() {
            let mut v = vec![ring.zero(); self.n()];
            v[i] = self.p_pow(k - 1);
            rows.push(v);
        }
        Ok(self.from_scaled(rows))
    }

    pub fn is_rational(&self, x: &WittLattice) -> bool {
        x.rows
            .iter()
            .all(|r| r.iter().all(|c| self.ring.is_rational(c)))
    }

    /// p^{2a−shift}(x, y) mod p for window vectors, computed on valuation-reduced
    /// vectors so that no digit is lost; errors if p^K does not determine it.
    pub fn residue_pairing(&self, x: &[W], y: &[W], shift: usize) -> Result<W> {
        let ring = &self.ring;
        let k = ring.precision;
        let val = |v: &[W]| v.iter().map(|c| ring.valuation(c)).min().unwrap_or(k);
        let (vx, vy) = (val(x), val(y));
        if vx == k || vy == k || vx + vy > shift {
            return Ok(ring.zero());
        }
        let xr: WVec = x.iter().map(|c| ring.div_p_pow(c, vx)).collect();
        let yr: WVec = y.iter().map(|c| ring.div_p_pow(c, vy)).collect();
        let s = self.pairing_scaled(&xr, &yr);
        let lost = shift - (vx + vy);
        if k - vx.max(vy) <= lost {
            return Err(Error::WindowOverflow(format!(
                "precision K = {k} too small for a residue pairing; raise K"
            )));
        }
        let low = ring.rem_p_pow(&s, lost);
        if !ring.is_zero(&low) {
            return Err(Error::Invalid("residue pairing is not integral".into()));
        }
        let top = ring.rem_p_pow(&s, lost + 1);
        Ok(ring.div_p_pow(&top, lost))
    }

    /// (x, y) of two window vectors, as an element of W scaled by p^{2a}.
    pub fn pairing_scaled(&self, x: &[W], y: &[W]) -> W {
        let ring = &self.ring;
        self.frame
            .diag
            .iter()
            .enumerate()
            .fold(ring.zero(), |acc, (i, &(u, e))| {
                let w = ring.mul(&ring.from_int(u), &self.p_pow(e as usize));
                ring.add(&acc, &ring.mul(&w, &ring.mul(&x[i], &y[i])))
            })
    }
}
