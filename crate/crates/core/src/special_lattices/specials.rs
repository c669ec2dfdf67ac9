//! Special lattices, the S_c(M) chains, the KR dichotomy and the point-level
//! Bruhat–Tits cover.

use super::lattice::{AmbientWindow, WVec, WittLattice};
use crate::error::{Error, Result};
use crate::finite_orthogonal::{Fq, FqContext, FqQuadSpace, Subspace};
use crate::padic_quadratic::legendre;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCertificate {
    /// [M^∨ : M], or None when M ⊄ M^∨.
    pub dual_index: Option<usize>,
    pub lower: bool,
    pub upper: bool,
    /// [M + Φ(M) : M].
    pub growth: usize,
    pub special: bool,
}

pub fn is_special(win: &AmbientWindow, m: &WittLattice, h: usize) -> Result<SpecialCertificate> {
    let md = win.dual(m)?;
    let upper = win.contains(&md, m);
    let lower = win.contains(m, &win.times_p(&md)?);
    let dual_index = if upper {
        Some(win.index(&md, m)?)
    } else {
        None
    };
    let phm = win.phi(m)?;
    let growth = win.index(&win.sum(m, &phm), m)?;
    let n = win.n();
    let growth_ok = if h == 0 || h == n {
        growth == 1
    } else {
        growth <= 1
    };
    Ok(SpecialCertificate {
        dual_index,
        lower,
        upper,
        growth,
        special: upper && lower && dual_index == Some(h) && growth_ok,
    })
}

/// S_0 ⊂ S_1 ⊂ … ⊂ S_c with S_i = X + Φ(X) + ⋯ + Φ^i(X) and c minimal with Φ(S_c) = S_c.
pub fn phi_sum_chain(win: &AmbientWindow, x: &WittLattice) -> Result<Vec<WittLattice>> {
    let mut chain = vec![x.clone()];
    let mut iterate = x.clone();
    let limit = 4 * win.n() * win.ring.precision + 4;
    loop {
        let last = chain.last().unwrap();
        if win.phi(last)? == *last {
            return Ok(chain);
        }
        if chain.len() > limit {
            return Err(Error::WindowOverflow("sum chain does not stabilize".into()));
        }
        iterate = win.phi(&iterate)?;
        let next = win.sum(last, &iterate);
        chain.push(next);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SChain {
    pub c: usize,
    pub chain: Vec<WittLattice>,
    pub d: usize,
    pub dual_chain: Vec<WittLattice>,
    /// [S_{i+1} : S_i] = 1 for every step of both chains.
    pub unit_steps: bool,
    /// Φ(S_i) ⊆ S_{i+1} and [S_{i+1} : Φ(S_i)] = 1 on the first chain.
    pub phi_steps: bool,
}

pub fn s_chain(win: &AmbientWindow, m: &WittLattice) -> Result<SChain> {
    let chain = phi_sum_chain(win, m)?;
    let md = win.dual(m)?;
    let dual_chain = phi_sum_chain(win, &md)?;
    let mut unit_steps = true;
    for ch in [&chain, &dual_chain] {
        for w in ch.windows(2) {
            unit_steps &= win.index(&w[1], &w[0])? == 1;
        }
    }
    let mut phi_steps = true;
    for w in chain.windows(2) {
        let ph = win.phi(&w[0])?;
        phi_steps &= win.contains(&w[1], &ph) && win.index(&w[1], &ph)? == 1;
    }
    Ok(SChain {
        c: chain.len() - 1,
        d: dual_chain.len() - 1,
        chain,
        dual_chain,
        unit_steps,
        phi_steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KrCase {
    /// Φ(M) ⊆ M^∨ only.
    ZSide,
    /// Φ(pM^∨) ⊆ M only.
    YSide,
    Both,
}

impl KrCase {
    pub fn name(self) -> &'static str {
        match self {
            KrCase::ZSide => "z_side",
            KrCase::YSide => "y_side",
            KrCase::Both => "both",
        }
    }
}

fn kr_flags(win: &AmbientWindow, m: &WittLattice, md: &WittLattice) -> Result<(bool, bool)> {
    let z = win.contains(md, &win.phi(m)?);
    let y = win.contains(m, &win.phi(&win.times_p(md)?)?);
    Ok((z, y))
}

pub fn kr_case(win: &AmbientWindow, m: &WittLattice) -> Result<KrCase> {
    let md = win.dual(m)?;
    match kr_flags(win, m, &md)? {
        (true, true) => Ok(KrCase::Both),
        (true, false) => Ok(KrCase::ZSide),
        (false, true) => Ok(KrCase::YSide),
        (false, false) => Err(Error::Invalid(
            "invariant violation: neither Φ(M) ⊆ M^∨ nor Φ(pM^∨) ⊆ M".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub kr: Option<KrCase>,
    pub c: usize,
    pub d: usize,
    /// Type of S_c(M) when display (1) holds as lattice inclusions.
    pub case1: Option<usize>,
    /// Type of S_d(M^∨)^∨ when display (2) holds.
    pub case2: Option<usize>,
    /// Which of the rules (a)–(d) apply.
    pub rules: Vec<char>,
    /// Every applicable rule's case holds.
    pub rules_hold: bool,
    /// [M + ΦM : M] = [M^∨ + ΦM^∨ : M^∨].
    pub same_index: bool,
    pub unit_steps: bool,
    pub phi_steps: bool,
    /// S_c(M) (the lattice of display (1)).
    pub upper: WittLattice,
    /// S_d(M^∨)^∨ (the lattice of display (2)).
    pub lower: WittLattice,
}

impl DichotomyVerdict {
    pub fn ok(&self) -> bool {
        self.kr.is_some()
            && (self.case1.is_some() || self.case2.is_some())
            && self.rules_hold
            && self.same_index
            && self.unit_steps
            && self.phi_steps
    }

    pub fn label(&self) -> String {
        match (self.case1.is_some(), self.case2.is_some()) {
            (true, true) => "both".into(),
            (true, false) => "case1".into(),
            (false, true) => "case2".into(),
            (false, false) => "neither".into(),
        }
    }
}

fn is_vertex(win: &AmbientWindow, x: &WittLattice) -> Result<Option<usize>> {
    let xd = win.dual(x)?;
    if win.contains(&xd, x) && win.contains(x, &win.times_p(&xd)?) {
        Ok(Some(win.index(&xd, x)?))
    } else {
        Ok(None)
    }
}

pub fn crucial_dichotomy(
    win: &AmbientWindow,
    m: &WittLattice,
    h: usize,
) -> Result<DichotomyVerdict> {
    let md = win.dual(m)?;
    let pmd = win.times_p(&md)?;
    let (z, y) = kr_flags(win, m, &md)?;
    let kr = match (z, y) {
        (true, true) => Some(KrCase::Both),
        (true, false) => Some(KrCase::ZSide),
        (false, true) => Some(KrCase::YSide),
        (false, false) => None,
    };
    let sc = s_chain(win, m)?;
    let s = sc.chain.last().unwrap().clone();
    let sd = sc.dual_chain.last().unwrap().clone();

    // (1): pS^∨ ⊆ pM^∨ ⊆ M ⊆ S ⊆ S^∨ ⊆ M^∨
    let s_dual = win.dual(&s)?;
    let display1 = win.contains(&pmd, &win.times_p(&s_dual)?)
        && win.contains(m, &pmd)
        && win.contains(&s, m)
        && win.contains(&s_dual, &s)
        && win.contains(&md, &s_dual);
    let case1 = if display1 && win.phi(&s)? == s {
        is_vertex(win, &s)?.filter(|&t| t <= h)
    } else {
        None
    };

    // (2): pM^∨ ⊆ pS_d ⊆ S_d^∨ ⊆ M ⊆ M^∨ ⊆ S_d
    let t = win.dual(&sd)?;
    let psd = win.times_p(&sd)?;
    let display2 = win.contains(&psd, &pmd)
        && win.contains(&t, &psd)
        && win.contains(m, &t)
        && win.contains(&md, m)
        && win.contains(&sd, &md);
    let case2 = if display2 && win.phi(&t)? == t {
        is_vertex(win, &t)?.filter(|&tt| tt >= h)
    } else {
        None
    };

    let mut rules = Vec::new();
    let mut rules_hold = true;
    if !y {
        rules.push('a');
        rules_hold &= case1.is_some();
    }
    if !z {
        rules.push('b');
        rules_hold &= case2.is_some();
    }
    if z && y && sc.c <= sc.d {
        rules.push('c');
        rules_hold &= case1.is_some();
    }
    if z && y && sc.d <= sc.c {
        rules.push('d');
        rules_hold &= case2.is_some();
    }

    let phm = win.phi(m)?;
    let phmd = win.phi(&md)?;
    let same_index = win.index(&win.sum(m, &phm), m)? == win.index(&win.sum(&md, &phmd), &md)?;
    Ok(DichotomyVerdict {
        kr,
        c: sc.c,
        d: sc.d,
        case1,
        case2,
        rules,
        rules_hold,
        same_index,
        unit_steps: sc.unit_steps,
        phi_steps: sc.phi_steps,
        upper: s,
        lower: t,
    })
}

/// M ↦ M^∨ read against the form p·( , ), whose dual is X ↦ p^{−1}X^∨:
/// M^∨ must be special of type n − h there, and the map is inverted by ∨.
pub fn sharp_transport(win: &AmbientWindow, m: &WittLattice, h: usize) -> Result<bool> {
    let n = win.n();
    let x = win.dual(m)?;
    let x_dual = win.div_p(m)?;
    let upper = win.contains(&x_dual, &x);
    let lower = win.contains(&x, &win.times_p(&x_dual)?);
    if !(upper && lower) || win.index(&x_dual, &x)? != n - h {
        return Ok(false);
    }
    let growth = win.index(&win.sum(&x, &win.phi(&x)?), &x)?;
    let growth_ok = if h == 0 || h == n {
        growth == 1
    } else {
        growth <= 1
    };
    Ok(growth_ok && win.dual(&x)? == *m)
}

/// A Φ-invariant vertex lattice of the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub lattice: WittLattice,
    pub dual: WittLattice,
    pub t: usize,
    /// Character of the discriminant of Λ^∨/Λ.
    pub chi: i8,
}

pub fn vertex_seed(win: &AmbientWindow, lam: &WittLattice) -> Result<Seed> {
    if win.phi(lam)? != *lam {
        return Err(Error::Invalid("seed is not Φ-invariant".into()));
    }
    let t = is_vertex(win, lam)?
        .ok_or_else(|| Error::Invalid("seed is not a vertex lattice".into()))?;
    let dual = win.dual(lam)?;
    let q = ResidueQuotient::new(win, &dual, lam, ResidueSide::Lattice)?;
    Ok(Seed {
        lattice: lam.clone(),
        dual,
        t,
        chi: q.chi(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResidueSide {
    /// Λ^∨/Λ with the form p·( , ) mod p.
    Lattice,
    /// Λ/pΛ^∨ with the form ( , ) mod p.
    Dual,
}

/// big/small with p·big ⊆ small, an F_p-rational basis and the residue form.
#[derive(Debug, Clone)]
pub struct ResidueQuotient {
    pub small: WittLattice,
    pub big: WittLattice,
    /// Window-coordinate representatives of a basis.
    pub basis: Vec<WVec>,
    /// Residue Gram matrix, entries in F_p.
    pub gram: Vec<Vec<Fq>>,
    p: u64,
}

impl ResidueQuotient {
    pub fn new(
        win: &AmbientWindow,
        big: &WittLattice,
        small: &WittLattice,
        side: ResidueSide,
    ) -> Result<Self> {
        let ring = &win.ring;
        if !win.contains(big, small) || !win.contains(small, &win.times_p(big)?) {
            return Err(Error::Invalid("need p·big ⊆ small ⊆ big".into()));
        }
        let mut cur = small.clone();
        let mut basis = Vec::new();
        for row in &big.rows {
            if win.contains_vector(&cur, row) {
                continue;
            }
            if !row.iter().all(|c| ring.is_rational(c)) {
                return Err(Error::Invalid("quotient of non-rational lattices".into()));
            }
            cur = win.sum(&cur, &win.from_scaled(vec![row.clone()]));
            basis.push(row.clone());
        }
        let shift = 2 * win.frame.a - usize::from(side == ResidueSide::Lattice);
        let mut gram = vec![vec![0 as Fq; basis.len()]; basis.len()];
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let v = ring.residue(&win.residue_pairing(&basis[i], &basis[j], shift)?);
                gram[i][j] = v;
                gram[j][i] = v;
            }
        }
        Ok(ResidueQuotient {
            small: small.clone(),
            big: big.clone(),
            basis,
            gram,
            p: win.p(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// χ((−1)^{k(k−1)/2} det) of the residue form.
    pub fn chi(&self) -> i8 {
        let k = self.dim();
        if k == 0 {
            return 1;
        }
        let det = det_mod_p(&self.gram, self.p as i64);
        let sign = if (k * (k - 1) / 2) % 2 == 1 { -1 } else { 1 };
        legendre(sign * det, self.p).unwrap_or(0)
    }

    pub fn space(&self, field: Arc<FqContext>) -> Result<FqQuadSpace> {
        FqQuadSpace::from_gram(self.gram.clone(), field)
    }

    /// small + the span of lifts of a subspace of big/small.
    pub fn lift(&self, win: &AmbientWindow, v: &Subspace) -> WittLattice {
        let ring = &win.ring;
        let mut rows = self.small.rows.clone();
        for coords in &v.basis {
            let mut acc = vec![ring.zero(); win.n()];
            for (coef, b) in coords.iter().zip(&self.basis) {
                if *coef == 0 {
                    continue;
                }
                let c = ring.lift(*coef);
                for (a, x) in acc.iter_mut().zip(b) {
                    *a = ring.add(a, &ring.mul(&c, x));
                }
            }
            rows.push(acc);
        }
        win.from_scaled(rows)
    }
}

fn det_mod_p(m: &[Vec<Fq>], p: i64) -> i64 {
    let k = m.len();
    let mut a: Vec<Vec<i64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    let mut det = 1i64;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| a[r][c] % p != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det = det * a[c][c] % p;
        let inv = mod_inv(a[c][c], p);
        for r in c + 1..k {
            let f = a[r][c] * inv % p;
            for j in c..k {
                a[r][j] = (a[r][j] - f * a[c][j]).rem_euclid(p);
            }
        }
    }
    det.rem_euclid(p)
}

fn mod_inv(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}
