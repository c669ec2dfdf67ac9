//! Quadratic spaces and vertex lattices over Q_p for odd p.
//!
//! Units are tracked only through their square class, which is all the
//! classification needs at odd p.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Reject anything that is not an odd prime. Primality is checked by trial division.
pub fn check_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::BadPrime(p));
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return Err(Error::BadPrime(p));
        }
        d += 2;
    }
    Ok(())
}

/// Legendre symbol (a/p).
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    check_prime(p)?;
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    let mut acc = 1u64;
    let mut base = r;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    Ok(if acc == 1 { 1 } else { -1 })
}

/// χ(−1) = (−1)^{(p−1)/2}.
pub fn chi_minus_one(p: u64) -> i8 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic nonresidue mod p.
pub fn least_nonsquare(p: u64) -> u64 {
    (2..p)
        .find(|&a| legendre(a as i64, p) == Ok(-1))
        .expect("odd prime has a nonresidue")
}

/// A nonzero element of Q_p up to squares: p^val times a unit of class `unit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareClass {
    pub val: i32,
    pub unit: i8,
}

impl SquareClass {
    pub fn new(val: i32, unit: i8) -> Self {
        SquareClass { val, unit }
    }

    pub fn mul(self, o: SquareClass) -> SquareClass {
        SquareClass::new(self.val + o.val, self.unit * o.unit)
    }

    /// Reduce the valuation to its parity.
    pub fn normalized(self) -> SquareClass {
        SquareClass::new(self.val.rem_euclid(2), self.unit)
    }

    pub fn is_square(self) -> bool {
        self.val % 2 == 0 && self.unit == 1
    }
}

/// Hilbert symbol (a, b)_p for p odd:
/// (p^α u, p^β v) = (−1)^{αβ(p−1)/2} χ(u)^β χ(v)^α.
pub fn hilbert_symbol(a: SquareClass, b: SquareClass, p: u64) -> Result<i8> {
    check_prime(p)?;
    for c in [a, b] {
        if c.unit != 1 && c.unit != -1 {
            return Err(Error::Invalid(format!("unit class {} not ±1", c.unit)));
        }
    }
    let (al, be) = (a.val.rem_euclid(2), b.val.rem_euclid(2));
    let mut s: i8 = 1;
    if al * be == 1 {
        s *= chi_minus_one(p);
    }
    if be == 1 {
        s *= a.unit;
    }
    if al == 1 {
        s *= b.unit;
    }
    Ok(s)
}

/// A diagonal quadratic form over Q_p given by (valuation, unit class) entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicForm {
    pub prime: u64,
    pub entries: Vec<SquareClass>,
}

impl PAdicForm {
    pub fn new(prime: u64, entries: Vec<(i32, i8)>) -> Result<Self> {
        check_prime(prime)?;
        if entries.is_empty() {
            return Err(Error::Invalid("empty form".into()));
        }
        let entries: Vec<SquareClass> = entries
            .into_iter()
            .map(|(v, u)| SquareClass::new(v, u))
            .collect();
        if entries.iter().any(|e| e.unit != 1 && e.unit != -1) {
            return Err(Error::Invalid("unit classes must be ±1".into()));
        }
        Ok(PAdicForm { prime, entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> SquareClass {
        self.entries
            .iter()
            .fold(SquareClass::new(0, 1), |a, &e| a.mul(e))
    }
}

/// Dimension, discriminant characters and Hasse invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceInvariants {
    pub dim: usize,
    pub chi: i8,
    pub chi_prime: i8,
    pub hasse: i8,
}

impl SpaceInvariants {
    pub fn new(dim: usize, chi: i8, chi_prime: i8, hasse: i8) -> Result<Self> {
        let ok = dim > 0
            && ((chi == 0) != (chi_prime == 0))
            && [chi, chi_prime].iter().all(|c| (-1..=1).contains(c))
            && (hasse == 1 || hasse == -1);
        if !ok {
            return Err(Error::Invalid(format!(
                "invariants dim={dim} chi={chi} chi'={chi_prime} hasse={hasse}"
            )));
        }
        Ok(SpaceInvariants {
            dim,
            chi,
            chi_prime,
            hasse,
        })
    }

    /// The discriminant as a square class (valuation parity, unit class).
    pub fn disc(&self) -> SquareClass {
        if self.chi != 0 {
            SquareClass::new(0, self.chi)
        } else {
            SquareClass::new(1, self.chi_prime)
        }
    }

    /// det = (−1)^{n(n−1)/2} disc.
    pub fn det(&self, p: u64) -> SquareClass {
        let d = self.disc();
        let n = self.dim;
        let sign = if (n * (n - 1) / 2) % 2 == 1 {
            chi_minus_one(p)
        } else {
            1
        };
        SquareClass::new(d.val, d.unit * sign)
    }

    /// All eight candidate tuples of a given dimension, realizable or not.
    pub fn all_tuples(dim: usize) -> Vec<SpaceInvariants> {
        let mut out = Vec::new();
        for (chi, chi_prime) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            for hasse in [1, -1] {
                out.push(SpaceInvariants {
                    dim,
                    chi,
                    chi_prime,
                    hasse,
                });
            }
        }
        out
    }
}

fn disc_of(det: SquareClass, n: usize, p: u64) -> SquareClass {
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        chi_minus_one(p)
    } else {
        1
    };
    SquareClass::new(det.val.rem_euclid(2), det.unit * sign)
}

/// Invariants computed directly from the diagonal entries.
pub fn space_invariants(f: &PAdicForm) -> SpaceInvariants {
    let p = f.prime;
    let n = f.dim();
    let disc = disc_of(f.det(), n, p);
    let (chi, chi_prime) = if disc.val == 0 {
        (disc.unit, 0)
    } else {
        (0, disc.unit)
    };
    let mut hasse = 1i8;
    for i in 0..n {
        for j in (i + 1)..n {
            hasse *= hilbert_symbol(f.entries[i], f.entries[j], p).expect("validated form");
        }
    }
    SpaceInvariants {
        dim: n,
        chi,
        chi_prime,
        hasse,
    }
}

/// Isometry test via the classification by dimension, discriminant and Hasse invariant.
pub fn isometric(f1: &PAdicForm, f2: &PAdicForm) -> Result<bool> {
    if f1.prime != f2.prime {
        return Err(Error::Invalid("forms over different primes".into()));
    }
    Ok(space_invariants(f1) == space_invariants(f2))
}

/// Witt index and anisotropic kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittDecomposition {
    pub witt_index: usize,
    pub anisotropic_kernel: Option<SpaceInvariants>,
}

impl WittDecomposition {
    pub fn kernel_dim(&self) -> usize {
        self.anisotropic_kernel.map_or(0, |k| k.dim)
    }
}

/// Isotropy of a space with invariants (n, det, ε), following the standard
/// criteria for n ≤ 4. Returns an error for tuples matching no space.
fn is_isotropic(n: usize, det: SquareClass, eps: i8, p: u64) -> Result<bool> {
    let m1 = SquareClass::new(0, chi_minus_one(p));
    let h = |a, b| hilbert_symbol(a, b, p).expect("odd prime");
    match n {
        0 => Ok(false),
        1 => {
            if eps != 1 {
                return Err(Error::Unrealizable("dimension 1 with ε = −1".into()));
            }
            Ok(false)
        }
        2 => {
            let neg_det = det.mul(m1);
            if neg_det.is_square() {
                if eps != h(m1, m1) {
                    return Err(Error::Unrealizable("hyperbolic plane with ε = −1".into()));
                }
                Ok(true)
            } else {
                Ok(false)
            }
        }
        3 => Ok(eps == h(m1, det.mul(m1))),
        4 => Ok(!det.is_square() || eps == h(m1, m1)),
        _ => Ok(true),
    }
}

/// Peel hyperbolic planes until the kernel is anisotropic.
pub fn witt_decompose(inv: &SpaceInvariants, p: u64) -> Result<WittDecomposition> {
    check_prime(p)?;
    SpaceInvariants::new(inv.dim, inv.chi, inv.chi_prime, inv.hasse)?;
    let m1 = SquareClass::new(0, chi_minus_one(p));
    let mut n = inv.dim;
    let mut det = inv.det(p);
    let mut eps = inv.hasse;
    let mut r = 0;
    while is_isotropic(n, det, eps, p)? {
        // V = H ⊥ V' with H = diag(1, −1): det' = −det, ε' = ε·(−1, det').
        det = det.mul(m1).normalized();
        eps *= hilbert_symbol(m1, det, p)?;
        n -= 2;
        r += 1;
    }
    let kernel = if n == 0 {
        if eps != 1 {
            return Err(Error::Unrealizable("split space with ε = −1".into()));
        }
        None
    } else {
        let disc = disc_of(det, n, p);
        let (chi, chi_prime) = if disc.val == 0 {
            (disc.unit, 0)
        } else {
            (0, disc.unit)
        };
        Some(SpaceInvariants {
            dim: n,
            chi,
            chi_prime,
            hasse: eps,
        })
    };
    Ok(WittDecomposition {
        witt_index: r,
        anisotropic_kernel: kernel,
    })
}

/// True iff some quadratic space has these invariants.
pub fn is_realizable(inv: &SpaceInvariants, p: u64) -> bool {
    witt_decompose(inv, p).is_ok()
}

/// Jordan data of a vertex lattice H_{n0}^{χ0} ⊥ Λ_{n1}^{χ1}.
///
/// χ of a block is the character of its discriminant (−1)^{k(k−1)/2}·det,
/// so that H_n^± carries χ(H) = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordanProfile {
    pub n0: usize,
    pub chi0: i8,
    pub n1: usize,
    pub chi1: i8,
}

impl JordanProfile {
    pub fn new(n0: usize, chi0: i8, n1: usize, chi1: i8) -> Self {
        let chi0 = if n0 == 0 { 1 } else { chi0 };
        let chi1 = if n1 == 0 { 1 } else { chi1 };
        JordanProfile { n0, chi0, n1, chi1 }
    }

    pub fn dim(&self) -> usize {
        self.n0 + self.n1
    }

    /// The type t = dim L^∨/L.
    pub fn type_t(&self) -> usize {
        self.n1
    }

    /// Invariants of the ambient space from the displayed character/Hasse formulas.
    pub fn invariants(&self, p: u64) -> SpaceInvariants {
        let n = self.dim();
        let t = self.n1;
        let c = self.chi0 * self.chi1;
        let cm1 = chi_minus_one(p);
        let pow = |e: usize| if e % 2 == 1 { cm1 } else { 1 };
        if t % 2 == 0 {
            SpaceInvariants {
                dim: n,
                chi: c,
                chi_prime: 0,
                hasse: self.chi1,
            }
        } else {
            SpaceInvariants {
                dim: n,
                chi: 0,
                chi_prime: pow(n - 1) * c,
                hasse: pow((n - 1) * n.saturating_sub(2) / 2) * self.chi0,
            }
        }
    }

    /// A diagonal form realizing the profile.
    pub fn realize(&self, p: u64) -> Result<PAdicForm> {
        let mut entries = Vec::with_capacity(self.dim());
        let cm1 = chi_minus_one(p);
        for (k, chi, val) in [(self.n0, self.chi0, 0), (self.n1, self.chi1, 1)] {
            if k == 0 {
                continue;
            }
            let sign = if (k * (k - 1) / 2) % 2 == 1 { cm1 } else { 1 };
            for _ in 0..k - 1 {
                entries.push((val, 1));
            }
            entries.push((val, chi * sign));
        }
        PAdicForm::new(p, entries)
    }
}

/// Group the entries of a vertex-lattice form by valuation.
pub fn jordan_profile(f: &PAdicForm) -> Result<JordanProfile> {
    let p = f.prime;
    let cm1 = chi_minus_one(p);
    let mut blocks = [(0usize, 1i8), (0usize, 1i8)];
    for e in &f.entries {
        if e.val != 0 && e.val != 1 {
            return Err(Error::Invalid(format!(
                "valuation {} outside {{0,1}}; diagonalize and rescale first",
                e.val
            )));
        }
        let b = &mut blocks[e.val as usize];
        b.0 += 1;
        b.1 *= e.unit;
    }
    let fix = |(k, prod): (usize, i8)| {
        if k == 0 {
            1
        } else if (k * (k - 1) / 2) % 2 == 1 {
            prod * cm1
        } else {
            prod
        }
    };
    Ok(JordanProfile::new(
        blocks[0].0,
        fix(blocks[0]),
        blocks[1].0,
        fix(blocks[1]),
    ))
}

/// ♯-dual: swap the unimodular and p-modular blocks.
pub fn sharp_dual(profile: &JordanProfile) -> JordanProfile {
    JordanProfile::new(profile.n1, profile.chi1, profile.n0, profile.chi0)
}

/// Extremal vertex lattices of a space and the realizable types between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexExtremes {
    pub lambda_max: JordanProfile,
    pub lambda_min: JordanProfile,
    pub allowed_types: BTreeSet<usize>,
    /// Row label of the classification table that was selected, e.g. "2b".
    pub row: String,
}

fn h(n0: usize, c0: i8, n1: usize, c1: i8) -> JordanProfile {
    JordanProfile::new(n0, c0, n1, c1)
}

/// Rows of the classification of extremal vertex lattices, one entry
/// per (label, Λ_max, Λ_min), with the free signs already substituted.
pub fn class_table_rows(n: usize, an: usize) -> Vec<(String, JordanProfile, JordanProfile)> {
    let mut rows = Vec::new();
    let pm = [1i8, -1];
    match an {
        0 => rows.push(("1".into(), h(0, 1, n, 1), h(n, 1, 0, 1))),
        1 => {
            for &c in &pm {
                rows.push((format!("2a({c:+})"), h(1, c, n - 1, 1), h(n, c, 0, 1)));
                rows.push((format!("2b({c:+})"), h(0, 1, n, c), h(n - 1, 1, 1, c)));
            }
        }
        2 => {
            rows.push(("3a".into(), h(2, -1, n - 2, 1), h(n, -1, 0, 1)));
            rows.push(("3b".into(), h(0, 1, n, -1), h(n - 2, 1, 2, -1)));
            for &c1 in &pm {
                for &c2 in &pm {
                    rows.push((
                        format!("3c({c1:+},{c2:+})"),
                        h(1, c2, n - 1, c1),
                        h(n - 1, c2, 1, c1),
                    ));
                }
            }
        }
        3 => {
            for &c in &pm {
                rows.push((
                    format!("4a({c:+})"),
                    h(1, -c, n - 1, -1),
                    h(n - 2, -c, 2, -1),
                ));
                rows.push((
                    format!("4b({c:+})"),
                    h(2, -1, n - 2, -c),
                    h(n - 1, -1, 1, -c),
                ));
            }
        }
        4 => rows.push(("5".into(), h(2, -1, n - 2, -1), h(n - 2, -1, 2, -1))),
        _ => {}
    }
    rows.retain(|(_, a, b)| a.dim() == n && b.dim() == n);
    rows
}

/// Λ_max, Λ_min and the allowed types, read off the classification rows.
pub fn vertex_extremes(inv: &SpaceInvariants, p: u64) -> Result<VertexExtremes> {
    let wd = witt_decompose(inv, p)?;
    let n = inv.dim;
    let an = wd.kernel_dim();
    let hits: Vec<_> = class_table_rows(n, an)
        .into_iter()
        .filter(|(_, mx, mn)| mx.invariants(p) == *inv && mn.invariants(p) == *inv)
        .collect();
    let (row, lambda_max, lambda_min) = match hits.as_slice() {
        [one] => one.clone(),
        [] => {
            return Err(Error::Unrealizable(format!(
                "no classification row matches {inv:?} (dim V_an = {an})"
            )))
        }
        many => {
            return Err(Error::Invalid(format!(
                "ambiguous classification rows {:?}",
                many.iter().map(|r| &r.0).collect::<Vec<_>>()
            )))
        }
    };
    let (lo, hi) = (lambda_min.type_t(), lambda_max.type_t());
    let allowed_types = (lo..=hi).step_by(2).collect();
    Ok(VertexExtremes {
        lambda_max,
        lambda_min,
        allowed_types,
        row,
    })
}

/// The Φ-fixed space 𝕍: same dimension and discriminant, Hasse invariant negated.
pub fn phi_twist(inv: &SpaceInvariants) -> Result<SpaceInvariants> {
    if inv.dim < 3 {
        return Err(Error::Invalid("phi_twist requires n ≥ 3".into()));
    }
    SpaceInvariants::new(inv.dim, inv.chi, inv.chi_prime, -inv.hasse)
}

/// The printed table of extremal vertex lattices of 𝕍, keyed by the class of V.
///
/// Three printed entries are not valid Jordan profiles as written and are
/// normalized here: in row 2b the second block "Λ_2^−" is read as H_2^−,
/// in row 4a "H_n^ε" is read as H_n^χ, and in row 4b "Λ_{n−1}^+ ⊥ Λ_1^χ"
/// is read as Λ_n^χ. In row 3c both block characters of 𝕍 are the negatives
/// of those of V, which agrees with the printed entry only when χ_1 = −χ_2.
pub fn vphi_table(v: &SpaceInvariants, p: u64) -> Result<(JordanProfile, JordanProfile)> {
    let n = v.dim;
    let ext = vertex_extremes(v, p)?;
    let mn = ext.lambda_min;
    let label = ext.row.chars().take(2).collect::<String>();
    let out = match label.as_str() {
        "1" => (h(2, -1, n - 2, -1), h(n - 2, -1, 2, -1)),
        "2a" => {
            let c = mn.chi0;
            (h(1, -c, n - 1, -1), h(n - 2, -c, 2, -1))
        }
        "2b" => {
            let c = mn.chi1;
            (h(2, -1, n - 2, -c), h(n - 1, -1, 1, -c))
        }
        "3a" => (h(0, 1, n, -1), h(n - 2, 1, 2, -1)),
        "3b" => (h(2, -1, n - 2, 1), h(n, -1, 0, 1)),
        "3c" => {
            let (c2, c1) = (mn.chi0, mn.chi1);
            (h(1, -c2, n - 1, -c1), h(n - 1, -c2, 1, -c1))
        }
        "4a" => {
            let c = -mn.chi0;
            (h(1, c, n - 1, 1), h(n, c, 0, 1))
        }
        "4b" => {
            let c = -mn.chi1;
            (h(0, 1, n, c), h(n - 1, 1, 1, c))
        }
        "5" => (h(0, 1, n, 1), h(n, 1, 0, 1)),
        other => return Err(Error::Invalid(format!("unknown row {other}"))),
    };
    Ok(out)
}

/// Types of vertex lattices in the space, found by realizing every profile
/// and comparing invariants computed from Hilbert symbols.
pub fn types_by_profile_search(inv: &SpaceInvariants, p: u64) -> BTreeSet<usize> {
    let n = inv.dim;
    let mut out = BTreeSet::new();
    for t in 0..=n {
        for c0 in [1i8, -1] {
            for c1 in [1i8, -1] {
                let prof = JordanProfile::new(n - t, c0, t, c1);
                if let Ok(f) = prof.realize(p) {
                    if space_invariants(&f) == *inv {
                        out.insert(t);
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn rat_val(r: &BigRational, p: &BigInt) -> i32 {
    let mut v = 0;
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while (&num % p).is_zero() {
        num /= p;
        v += 1;
    }
    while (&den % p).is_zero() {
        den /= p;
        v -= 1;
    }
    v
}

fn rat_unit_class(r: &BigRational, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while (&num % &pb).is_zero() {
        num /= &pb;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
    }
    let prod = (num * den).mod_floor_big(&pb);
    legendre(prod, p).expect("odd prime")
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> i64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> i64 {
        let r = ((self % m) + m) % m;
        r.to_i64().expect("residue fits")
    }
}

/// Diagonalize a symmetric integer Gram matrix over Q_p by p-adic pivoting.
///
/// The arithmetic is exact over Q, so no precision parameter is needed.
pub fn diagonalize(gram: &[Vec<i64>], p: u64) -> Result<PAdicForm> {
    check_prime(p)?;
    let n = gram.len();
    if n == 0 || gram.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(
            "Gram matrix must be square and nonempty".into(),
        ));
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::Invalid("Gram matrix must be symmetric".into()));
            }
        }
    }
    let pb = BigInt::from(p);
    let mut g: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut entries = Vec::with_capacity(n);
    while !active.is_empty() {
        let mut best: Option<(i32, usize, usize)> = None;
        for &i in &active {
            for &j in &active {
                if g[i][j].is_zero() {
                    continue;
                }
                let v = rat_val(&g[i][j], &pb);
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && bi != bj && i == j),
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        let (_, i, j) = best.ok_or_else(|| Error::Invalid("degenerate Gram matrix".into()))?;
        if i != j {
            // e_i ← e_i + e_j makes the diagonal entry attain the minimal valuation.
            for k in 0..n {
                let add = g[j][k].clone();
                g[i][k] = &g[i][k] + add;
            }
            for k in 0..n {
                let add = g[k][j].clone();
                g[k][i] = &g[k][i] + add;
            }
        }
        let piv = g[i][i].clone();
        active.retain(|&k| k != i);
        let cs: Vec<(usize, BigRational)> = active.iter().map(|&k| (k, &g[k][i] / &piv)).collect();
        for (k, c) in &cs {
            for l in 0..n {
                let sub = c * &g[i][l];
                g[*k][l] = &g[*k][l] - sub;
            }
        }
        for (k, c) in &cs {
            for l in 0..n {
                let sub = c * &g[l][i];
                g[l][*k] = &g[l][*k] - sub;
            }
        }
        entries.push((rat_val(&piv, &pb), rat_unit_class(&piv, p)));
    }
    PAdicForm::new(p, entries)
}
