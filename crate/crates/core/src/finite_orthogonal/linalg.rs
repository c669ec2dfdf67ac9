//! Subspaces of F_q^n in reduced row echelon form.

use super::field::{Fq, FqContext};
use serde::{Deserialize, Serialize};

pub type Mat = Vec<Vec<Fq>>;

/// A subspace given by its canonical reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Mat,
}

/// Row-reduce in place and drop zero rows.
pub fn rref(f: &FqContext, mut rows: Mat, ncols: usize) -> Mat {
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in 0..ncols {
                    let v = f.mul(k, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: vec![],
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient)
                .map(|i| (0..ambient).map(|j| (i == j) as Fq).collect())
                .collect(),
        }
    }

    pub fn span(f: &FqContext, ambient: usize, rows: Mat) -> Self {
        Subspace {
            ambient,
            basis: rref(f, rows, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn sum(&self, f: &FqContext, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient, rows)
    }

    /// {x : row·x = 0 for all basis rows} for the standard dot product.
    pub fn annihilator(&self, f: &FqContext) -> Subspace {
        let n = self.ambient;
        let pivots: Vec<usize> = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("rref rows are nonzero")
            })
            .collect();
        let mut out = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in self.basis.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            out.push(v);
        }
        Subspace::span(f, n, out)
    }

    pub fn intersect(&self, f: &FqContext, other: &Subspace) -> Subspace {
        self.annihilator(f)
            .sum(f, &other.annihilator(f))
            .annihilator(f)
    }

    pub fn contains(&self, f: &FqContext, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(f, v))
    }

    /// Reduce v against the echelon basis.
    pub fn contains_vector(&self, f: &FqContext, v: &[Fq]) -> bool {
        let mut r = v.to_vec();
        for row in &self.basis {
            let pc = row
                .iter()
                .position(|&x| x != 0)
                .expect("rref rows are nonzero");
            let k = r[pc];
            if k != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    /// Entrywise p-th power.
    pub fn frobenius(&self, f: &FqContext) -> Subspace {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| f.frob(x)).collect())
            .collect();
        Subspace::span(f, self.ambient, rows)
    }

    pub fn is_rational(&self, f: &FqContext) -> bool {
        self.basis
            .iter()
            .all(|r| r.iter().all(|&x| f.is_rational(x)))
    }
}

pub fn dot(f: &FqContext, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn mat_vec(f: &FqContext, m: &Mat, v: &[Fq]) -> Vec<Fq> {
    m.iter().map(|row| dot(f, row, v)).collect()
}
