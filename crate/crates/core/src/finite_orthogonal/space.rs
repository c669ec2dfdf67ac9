//! Quadratic spaces over F_p base-changed to F_{p^m}, and isotropic subspaces.

use super::field::{Fq, FqContext};
use super::linalg::{dot, mat_vec, Mat, Subspace};
use crate::error::{Error, Result};
use crate::padic_quadratic::{chi_minus_one, least_nonsquare, JordanProfile};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct FqQuadSpace {
    pub dim: usize,
    /// Gram matrix with entries in F_p.
    pub gram: Mat,
    pub field: Arc<FqContext>,
}

/// Which quotient of a vertex lattice Λ: Λ^∨/Λ (dimension t) or Λ/pΛ^∨.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lattice,
    Dual,
}

impl FqQuadSpace {
    /// diag(1, …, 1, δ) with χ((−1)^{k(k−1)/2} δ) = chi.
    pub fn standard(dim: usize, chi: i8, field: Arc<FqContext>) -> Result<Self> {
        if chi != 1 && chi != -1 {
            return Err(Error::Invalid(format!("character must be ±1, got {chi}")));
        }
        let p = field.p;
        let mut gram = vec![vec![0; dim]; dim];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 1;
        }
        if dim > 0 {
            let sign = if (dim * (dim - 1) / 2) % 2 == 1 {
                chi_minus_one(p)
            } else {
                1
            };
            let unit = if chi == 1 {
                1
            } else {
                least_nonsquare(p) as i64
            };
            gram[dim - 1][dim - 1] = field.from_int(sign as i64 * unit);
        }
        Ok(FqQuadSpace { dim, gram, field })
    }

    pub fn from_gram(gram: Mat, field: Arc<FqContext>) -> Result<Self> {
        let dim = gram.len();
        for i in 0..dim {
            if gram[i].len() != dim {
                return Err(Error::Invalid("gram matrix not square".into()));
            }
            for j in 0..dim {
                if gram[i][j] != gram[j][i] || !field.is_rational(gram[i][j]) {
                    return Err(Error::Invalid("gram must be symmetric over F_p".into()));
                }
            }
        }
        let sp = FqQuadSpace { dim, gram, field };
        if sp.perp(&Subspace::whole(dim)).dim() != 0 {
            return Err(Error::Invalid("degenerate form".into()));
        }
        Ok(sp)
    }

    pub fn pair(&self, a: &[Fq], b: &[Fq]) -> Fq {
        dot(&self.field, a, &mat_vec(&self.field, &self.gram, b))
    }

    pub fn is_totally_isotropic(&self, v: &Subspace) -> bool {
        let g: Vec<Vec<Fq>> = v
            .basis
            .iter()
            .map(|r| mat_vec(&self.field, &self.gram, r))
            .collect();
        v.basis
            .iter()
            .all(|a| g.iter().all(|gb| dot(&self.field, a, gb) == 0))
    }

    /// V^⊥.
    pub fn perp(&self, v: &Subspace) -> Subspace {
        let rows: Mat = v
            .basis
            .iter()
            .map(|r| mat_vec(&self.field, &self.gram, r))
            .collect();
        Subspace::span(&self.field, self.dim, rows).annihilator(&self.field)
    }

    /// Number of nonzero isotropic vectors, by exhaustive scan.
    pub fn isotropic_vector_count(&self) -> u64 {
        let q = self.field.q();
        let mut v = vec![0 as Fq; self.dim];
        let mut count = 0;
        loop {
            if v.iter().any(|&x| x != 0) && self.pair(&v, &v) == 0 {
                count += 1;
            }
            let mut i = 0;
            while i < self.dim && v[i] as usize == q - 1 {
                v[i] = 0;
                i += 1;
            }
            if i == self.dim {
                return count;
            }
            v[i] += 1;
        }
    }

    /// Visit every totally isotropic j-subspace once, in echelon order. With
    /// `rational` only Φ-stable subspaces (F_p-entries) are visited.
    pub fn for_each_isotropic(&self, j: usize, rational: bool, mut visit: impl FnMut(Subspace)) {
        self.try_for_each_isotropic(j, rational, |v| {
            visit(v);
            true
        });
    }

    /// As `for_each_isotropic`, stopping once `visit` returns false. Returns
    /// whether the enumeration ran to completion.
    pub fn try_for_each_isotropic(
        &self,
        j: usize,
        rational: bool,
        mut visit: impl FnMut(Subspace) -> bool,
    ) -> bool {
        let n = self.dim;
        if j > n {
            return true;
        }
        let vals: Vec<Fq> = if rational {
            (0..self.field.p as Fq).collect()
        } else {
            self.field.elements().collect()
        };
        let mut pivots: Vec<usize> = (0..j).collect();
        loop {
            let mut rows: Mat = Vec::with_capacity(j);
            let mut grows: Mat = Vec::with_capacity(j);
            if !self.fill_rows(&pivots, &vals, &mut rows, &mut grows, &mut visit) {
                return false;
            }
            let mut k = j;
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                if pivots[k] < n - j + k {
                    pivots[k] += 1;
                    for l in k + 1..j {
                        pivots[l] = pivots[l - 1] + 1;
                    }
                    break true;
                }
            };
            if !advanced {
                return true;
            }
        }
    }

    fn fill_rows(
        &self,
        pivots: &[usize],
        vals: &[Fq],
        rows: &mut Mat,
        grows: &mut Mat,
        visit: &mut impl FnMut(Subspace) -> bool,
    ) -> bool {
        let f = &self.field;
        let level = rows.len();
        if level == pivots.len() {
            return visit(Subspace {
                ambient: self.dim,
                basis: rows.clone(),
            });
        }
        let pc = pivots[level];
        let free: Vec<usize> = (pc + 1..self.dim).filter(|c| !pivots.contains(c)).collect();
        let mut row = vec![0 as Fq; self.dim];
        row[pc] = 1;
        let mut idx = vec![0usize; free.len()];
        loop {
            for (slot, &c) in free.iter().enumerate() {
                row[c] = vals[idx[slot]];
            }
            let g = mat_vec(f, &self.gram, &row);
            if dot(f, &row, &g) == 0 && rows.iter().all(|r| dot(f, r, &g) == 0) {
                rows.push(row.clone());
                grows.push(g);
                let go_on = self.fill_rows(pivots, vals, rows, grows, visit);
                rows.pop();
                grows.pop();
                if !go_on {
                    return false;
                }
            }
            let mut i = 0;
            while i < free.len() && idx[i] == vals.len() - 1 {
                idx[i] = 0;
                i += 1;
            }
            if i == free.len() {
                return true;
            }
            idx[i] += 1;
        }
    }

    pub fn enumerate_isotropic(&self, j: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        self.for_each_isotropic(j, false, |v| out.push(v));
        out
    }

    pub fn enumerate_rational_isotropic(&self, j: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        self.for_each_isotropic(j, true, |v| out.push(v));
        out
    }
}

/// Ω_Λ = Λ^∨/Λ ⊗ k with p(,) (side Lattice) or Ω_{Λ^∨} = Λ/pΛ^∨ ⊗ k (side Dual).
pub fn build_omega(
    profile: &JordanProfile,
    field: Arc<FqContext>,
    side: Side,
) -> Result<FqQuadSpace> {
    match side {
        Side::Lattice => FqQuadSpace::standard(profile.n1, profile.chi1, field),
        Side::Dual => FqQuadSpace::standard(profile.n0, profile.chi0, field),
    }
}
