//! Finite Weyl groups of types A, B and D in window notation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    D,
}

/// A signed permutation σ of [±d] with σ(−i) = −σ(i), stored as [σ(1), …, σ(d)].
/// Kind A uses unsigned windows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPerm {
    pub kind: Kind,
    pub window: Vec<i32>,
}

impl SignedPerm {
    pub fn new(kind: Kind, window: Vec<i32>) -> Result<Self> {
        let d = window.len();
        let mut seen = vec![false; d + 1];
        for &x in &window {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > d || seen[a] {
                return Err(Error::Invalid(format!(
                    "{window:?} is not a signed permutation"
                )));
            }
            seen[a] = true;
        }
        let neg = window.iter().filter(|&&x| x < 0).count();
        match kind {
            Kind::A if neg > 0 => return Err(Error::Invalid("type A windows are unsigned".into())),
            Kind::D if neg % 2 == 1 => {
                return Err(Error::Invalid(format!(
                    "{window:?} has an odd number of negatives"
                )))
            }
            _ => {}
        }
        Ok(SignedPerm { kind, window })
    }

    pub fn identity(kind: Kind, d: usize) -> Self {
        SignedPerm {
            kind,
            window: (1..=d as i32).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    /// σ(j) for j ∈ [±d].
    pub fn apply(&self, j: i32) -> i32 {
        let v = self.window[j.unsigned_abs() as usize - 1];
        if j < 0 {
            -v
        } else {
            v
        }
    }

    /// The product στ, acting as τ first.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let window: Vec<i32> = other.window.iter().map(|&j| self.apply(j)).collect();
        let neg = window.iter().filter(|&&x| x < 0).count();
        let kind = match (self.kind, other.kind) {
            (Kind::A, Kind::A) => Kind::A,
            (Kind::D, Kind::D) => Kind::D,
            (Kind::A, _) | (_, Kind::A) => {
                return Err(Error::Invalid("cannot mix type A with signed kinds".into()))
            }
            _ if neg % 2 == 0 && self.kind == Kind::D => Kind::D,
            _ => Kind::B,
        };
        Ok(SignedPerm { kind, window })
    }

    pub fn inverse(&self) -> SignedPerm {
        let d = self.rank();
        let mut window = vec![0; d];
        for (i, &v) in self.window.iter().enumerate() {
            let pos = v.unsigned_abs() as usize - 1;
            window[pos] = if v < 0 { -(i as i32 + 1) } else { i as i32 + 1 };
        }
        SignedPerm {
            kind: self.kind,
            window,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.window
            .iter()
            .enumerate()
            .all(|(i, &v)| v == i as i32 + 1)
    }
}

/// Length by counting inversions.
pub fn length(s: &SignedPerm) -> usize {
    let w = &s.window;
    let d = w.len();
    let mut inv = 0;
    for j in 0..d {
        for i in 0..j {
            if w[i] > w[j] {
                inv += 1;
            }
            if s.kind != Kind::A && -w[i] > w[j] {
                inv += 1;
            }
        }
        if s.kind == Kind::B && -w[j] > w[j] {
            inv += 1;
        }
    }
    inv
}

/// Simple reflections s_1, …, s_d in the indexing where e_i sits at window
/// position d+1−i. For kind D, s_{d−1} = t^+ and s_d = t^−. For kind A on
/// d letters, s_i swaps positions i and i+1 (i < d).
pub fn generators(kind: Kind, d: usize) -> Result<Vec<SignedPerm>> {
    let min = match kind {
        Kind::A | Kind::B => 1,
        Kind::D => 2,
    };
    if d < min {
        return Err(Error::Invalid(format!(
            "rank {d} too small for type {kind:?}"
        )));
    }
    let count = if kind == Kind::A { d - 1 } else { d };
    (1..=count).map(|i| simple(kind, d, i)).collect()
}

/// The simple reflection s_i.
pub fn simple(kind: Kind, d: usize, i: usize) -> Result<SignedPerm> {
    let mut w: Vec<i32> = (1..=d as i32).collect();
    match kind {
        Kind::A => {
            if i == 0 || i >= d {
                return Err(Error::OutOfRange(format!("s_{i} in S_{d}")));
            }
            w.swap(i - 1, i);
        }
        Kind::B | Kind::D => {
            if i == 0 || i > d {
                return Err(Error::OutOfRange(format!("s_{i} in rank {d}")));
            }
            if i < d {
                w.swap(d - i - 1, d - i);
            } else if kind == Kind::B {
                w[0] = -1;
            } else {
                if d < 2 {
                    return Err(Error::OutOfRange("t^- needs d ≥ 2".into()));
                }
                w[0] = -2;
                w[1] = -1;
            }
        }
    }
    Ok(SignedPerm { kind, window: w })
}

/// The product s_{i_1} ⋯ s_{i_k}.
pub fn word(kind: Kind, d: usize, letters: &[usize]) -> Result<SignedPerm> {
    let mut acc = SignedPerm::identity(kind, d);
    for &i in letters {
        acc = acc.compose(&simple(kind, d, i)?)?;
    }
    Ok(acc)
}

/// A subset of the simple reflections, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicSet {
    pub kind: Kind,
    pub rank: usize,
    pub members: BTreeSet<usize>,
}

impl ParabolicSet {
    pub fn new(kind: Kind, rank: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let top = if kind == Kind::A { rank - 1 } else { rank };
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.iter().any(|&i| i == 0 || i > top) {
            return Err(Error::OutOfRange(format!("{members:?} outside 1..={top}")));
        }
        Ok(ParabolicSet {
            kind,
            rank,
            members,
        })
    }

    pub fn empty(kind: Kind, rank: usize) -> Self {
        ParabolicSet {
            kind,
            rank,
            members: BTreeSet::new(),
        }
    }

    pub fn reflections(&self) -> Vec<SignedPerm> {
        self.members
            .iter()
            .map(|&i| simple(self.kind, self.rank, i).expect("validated"))
            .collect()
    }
}

/// Longest element of W_I, reached by ascending greedily.
pub fn longest_element(i: &ParabolicSet) -> SignedPerm {
    let gens = i.reflections();
    let mut w = SignedPerm::identity(i.kind, i.rank);
    let mut len = 0;
    loop {
        let next = gens
            .iter()
            .map(|s| s.compose(&w).expect("same rank"))
            .find(|x| length(x) > len);
        match next {
            Some(x) => {
                len += 1;
                w = x;
            }
            None => return w,
        }
    }
}

/// ℓ(w_I).
pub fn longest_parabolic_length(i: &ParabolicSet) -> usize {
    length(&longest_element(i))
}

/// The closed form for ℓ(w_{I_Λ}) in terms of h.
pub fn longest_parabolic_formula(h: usize) -> usize {
    if h % 2 == 0 {
        (h / 2) * (h / 2).saturating_sub(1)
    } else {
        ((h - 1) / 2).pow(2)
    }
}

/// True iff ℓ(sw) > ℓ(w) and ℓ(ws) > ℓ(w) for all s ∈ I.
pub fn is_minimal_rep(w: &SignedPerm, i: &ParabolicSet) -> bool {
    let l = length(w);
    i.reflections().iter().all(|s| {
        length(&s.compose(w).expect("same rank")) > l
            && length(&w.compose(s).expect("same rank")) > l
    })
}

/// I ∩ wIw⁻¹, as indices of simple reflections.
pub fn conjugate_intersection(w: &SignedPerm, i: &ParabolicSet) -> ParabolicSet {
    let winv = w.inverse();
    let refl: Vec<(usize, SignedPerm)> = i
        .members
        .iter()
        .map(|&k| (k, simple(i.kind, i.rank, k).expect("validated")))
        .collect();
    let conj: BTreeSet<SignedPerm> = refl
        .iter()
        .map(|(_, s)| {
            w.compose(s)
                .and_then(|x| x.compose(&winv))
                .expect("same rank")
        })
        .map(normalize_kind)
        .collect();
    let members = refl
        .into_iter()
        .filter(|(_, s)| conj.contains(&normalize_kind(s.clone())))
        .map(|(k, _)| k)
        .collect();
    ParabolicSet {
        kind: i.kind,
        rank: i.rank,
        members,
    }
}

fn normalize_kind(mut s: SignedPerm) -> SignedPerm {
    if s.kind == Kind::B && s.window.iter().filter(|&&x| x < 0).count() % 2 == 0 {
        s.kind = Kind::D;
    }
    s
}

/// dim X_{P_I}(w) = ℓ(w) + ℓ(w_I) − ℓ(w_{I ∩ wIw⁻¹}) for a minimal representative w.
pub fn dl_dimension(i: &ParabolicSet, w: &SignedPerm) -> Result<usize> {
    if w.rank() != i.rank {
        return Err(Error::RankMismatch(w.rank(), i.rank));
    }
    if !is_minimal_rep(w, i) {
        return Err(Error::NotMinimal);
    }
    let meet = conjugate_intersection(w, i);
    Ok(length(w) + longest_parabolic_length(i) - longest_parabolic_length(&meet))
}
