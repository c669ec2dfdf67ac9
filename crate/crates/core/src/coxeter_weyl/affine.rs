//! Iwahori Weyl groups of SO(V) acting on the standard apartment, and the
//! μ-admissible set for μ = ε_1 in the four cases of the anisotropic kernel.
//!
//! Points are stored in doubled coordinates X = 2x, so every vertex x^(s)
//! and every group element has integer data.

use super::finite::{Kind, SignedPerm};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    /// V_an = 0, type D_n.
    C1,
    /// V_an = ⟨u⟩ with (u,u) = 1, type B_n.
    C2a,
    /// V_an = ⟨u⟩ with (u,u) = π, type B_n.
    C2b,
    /// V_an = ⟨u, v⟩ with (u,u) = π, (v,v) = 1, type C-B_n.
    C3,
}

impl CaseTag {
    pub fn all() -> [CaseTag; 4] {
        [CaseTag::C1, CaseTag::C2a, CaseTag::C2b, CaseTag::C3]
    }

    pub fn parse(s: &str) -> Result<CaseTag> {
        match s {
            "1" => Ok(CaseTag::C1),
            "2a" => Ok(CaseTag::C2a),
            "2b" => Ok(CaseTag::C2b),
            "3" => Ok(CaseTag::C3),
            _ => Err(Error::Invalid(format!(
                "unknown case {s}; expected 1, 2a, 2b or 3"
            ))),
        }
    }

    /// Type t(s) of L^(s).
    pub fn lattice_type(&self, s: usize) -> usize {
        match self {
            CaseTag::C1 | CaseTag::C2a => 2 * s,
            CaseTag::C2b | CaseTag::C3 => 2 * s + 1,
        }
    }

    /// dim V = 2n + dim V_an.
    pub fn dim_v(&self, n: usize) -> usize {
        2 * n
            + match self {
                CaseTag::C1 => 0,
                CaseTag::C2a | CaseTag::C2b => 1,
                CaseTag::C3 => 2,
            }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::C1 => "1",
            CaseTag::C2a => "2a",
            CaseTag::C2b => "2b",
            CaseTag::C3 => "3",
        };
        f.write_str(s)
    }
}

/// A point of the apartment in doubled coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ApartmentPoint {
    pub coords2: Vec<i32>,
}

impl ApartmentPoint {
    /// x^(s) = (½, …, ½, 0, …, 0) with s halves.
    pub fn x_s(n: usize, s: usize) -> Self {
        ApartmentPoint {
            coords2: (0..n).map(|i| if i < s { 1 } else { 0 }).collect(),
        }
    }

    /// Number of coordinates in ½ + ℤ.
    pub fn half_count(&self) -> usize {
        self.coords2.iter().filter(|x| x.rem_euclid(2) == 1).count()
    }
}

/// Exponents (⌈a_1⌉, …, ⌈a_n⌉, ⌈−a_1⌉, …, ⌈−a_n⌉) describing L_0(y).
pub fn lattice_exponents(y: &ApartmentPoint) -> Vec<i32> {
    let up = |x: i32| (x as f64 / 2.0).ceil() as i32;
    let mut e: Vec<i32> = y.coords2.iter().map(|&x| up(x)).collect();
    e.extend(y.coords2.iter().map(|&x| up(-x)));
    e
}

/// Length of (L(y1) + L(y2)) / L(y1).
pub fn relative_position_dim(y1: &ApartmentPoint, y2: &ApartmentPoint) -> usize {
    let (a, b) = (lattice_exponents(y1), lattice_exponents(y2));
    a.iter().zip(&b).map(|(x, y)| (x - y).max(0) as usize).sum()
}

/// L(y1) ⊆ L(y2)^∨, with L^∨ having exponents (−⌈−a_i⌉ on e_i, −⌈a_i⌉ on f_i).
pub fn inside_dual(y1: &ApartmentPoint, y2: &ApartmentPoint) -> bool {
    let (a, b) = (lattice_exponents(y1), lattice_exponents(y2));
    let n = y1.coords2.len();
    (0..n).all(|i| a[i] >= -b[n + i] && a[n + i] >= -b[i])
}

/// An element x ↦ σx + b of the Iwahori Weyl group, with b in doubled
/// coordinates. `tag` is the ℤ/2 torsion component in case (3) and 0 otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineElt {
    pub case_tag: CaseTag,
    pub finite: SignedPerm,
    pub translation2: Vec<i32>,
    pub tag: u8,
}

fn act_linear(s: &SignedPerm, v: &[i64]) -> Vec<i64> {
    let mut out = vec![0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        let w = s.window[i];
        let j = w.unsigned_abs() as usize - 1;
        out[j] = if w < 0 { -x } else { x };
    }
    out
}

impl AffineElt {
    pub fn identity(case_tag: CaseTag, n: usize) -> Self {
        AffineElt {
            case_tag,
            finite: SignedPerm::identity(Kind::B, n),
            translation2: vec![0; n],
            tag: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.translation2.len()
    }

    /// The translation t^λ for λ ∈ ℤ^n.
    pub fn translation(case_tag: CaseTag, lambda: &[i32]) -> Self {
        AffineElt {
            case_tag,
            finite: SignedPerm::identity(Kind::B, lambda.len()),
            translation2: lambda.iter().map(|x| 2 * x).collect(),
            tag: 0,
        }
    }

    /// A finite Weyl element, centered at x^(n) in case (2b) and at 0 otherwise.
    pub fn finite_part(case_tag: CaseTag, sigma: &SignedPerm) -> Result<Self> {
        let n = sigma.rank();
        if case_tag == CaseTag::C1 && sigma.window.iter().filter(|&&x| x < 0).count() % 2 == 1 {
            return Err(Error::Invalid(
                "case (1) needs an even number of sign changes".into(),
            ));
        }
        let mut finite = sigma.clone();
        finite.kind = Kind::B;
        let translation2 = if case_tag == CaseTag::C2b {
            let ones = vec![1i64; n];
            let moved = act_linear(&finite, &ones);
            ones.iter()
                .zip(&moved)
                .map(|(a, b)| (a - b) as i32)
                .collect()
        } else {
            vec![0; n]
        };
        Ok(AffineElt {
            case_tag,
            finite,
            translation2,
            tag: 0,
        })
    }

    /// Apply to doubled coordinates.
    pub fn apply2(&self, x: &[i64]) -> Vec<i64> {
        let mut y = act_linear(&self.finite, x);
        for (a, b) in y.iter_mut().zip(&self.translation2) {
            *a += *b as i64;
        }
        y
    }

    /// Apply to a point given in coordinates scaled by `scale` (even).
    fn apply_scaled(&self, x: &[i64], scale: i64) -> Vec<i64> {
        let mut y = act_linear(&self.finite, x);
        for (a, b) in y.iter_mut().zip(&self.translation2) {
            *a += *b as i64 * scale / 2;
        }
        y
    }

    /// The product self·other (other acts first).
    pub fn compose(&self, other: &AffineElt) -> AffineElt {
        let b = act_linear(
            &self.finite,
            &other
                .translation2
                .iter()
                .map(|&x| x as i64)
                .collect::<Vec<_>>(),
        );
        AffineElt {
            case_tag: self.case_tag,
            finite: self.finite.compose(&other.finite).expect("same rank"),
            translation2: b
                .iter()
                .zip(&self.translation2)
                .map(|(x, y)| *x as i32 + y)
                .collect(),
            tag: self.tag ^ other.tag,
        }
    }

    pub fn inverse(&self) -> AffineElt {
        let fi = self.finite.inverse();
        let b = act_linear(
            &fi,
            &self
                .translation2
                .iter()
                .map(|&x| -(x as i64))
                .collect::<Vec<_>>(),
        );
        AffineElt {
            case_tag: self.case_tag,
            finite: fi,
            translation2: b.iter().map(|&x| x as i32).collect(),
            tag: self.tag,
        }
    }

    /// True iff the finite part lies in the relative Weyl group of the case.
    pub fn is_valid(&self) -> bool {
        let neg = self.finite.window.iter().filter(|&&x| x < 0).count();
        let lin_ok = self.case_tag != CaseTag::C1 || neg % 2 == 0;
        let center_ok = if self.case_tag == CaseTag::C2b {
            let ones = vec![1i64; self.rank()];
            let moved = act_linear(&self.finite, &ones);
            ones.iter()
                .zip(&moved)
                .zip(&self.translation2)
                .all(|((a, b), t)| (t - (a - b) as i32) % 2 == 0)
        } else {
            self.translation2.iter().all(|t| t % 2 == 0)
        };
        lin_ok && center_ok
    }
}

/// An affine root α(x) = Σ c_i x_i together with the set of levels k at which
/// {α = k} is a wall, encoded as (step, offset): k ∈ offset + step·ℤ, both in
/// units of ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RootFamily {
    i: usize,
    j: Option<(usize, i64)>,
    step2: i64,
    offset2: i64,
}

impl RootFamily {
    /// α evaluated on a point scaled by S (so that the result is S·α(x)).
    fn eval(&self, p: &[i64]) -> i64 {
        p[self.i] + self.j.map_or(0, |(j, c)| c * p[j])
    }
}

/// A wall of the base alcove: the hyperplane α = k with k in units of ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub i: usize,
    pub j: Option<(usize, i64)>,
    pub level2: i64,
}

impl Wall {
    fn eval2(&self, x: &[i64]) -> i64 {
        x[self.i] + self.j.map_or(0, |(j, c)| c * x[j])
    }

    /// The reflection in this wall as an element of the Iwahori Weyl group.
    pub fn reflection(&self, case_tag: CaseTag, n: usize) -> AffineElt {
        let mut w: Vec<i32> = (1..=n as i32).collect();
        let mut b = vec![0i32; n];
        match self.j {
            None => {
                // x_i = k: x_i ↦ 2k − x_i
                w[self.i] = -(self.i as i32 + 1);
                b[self.i] = 2 * self.level2 as i32;
            }
            Some((j, c)) => {
                if c == -1 {
                    // x_i − x_j = k: x_i ↦ x_j + k, x_j ↦ x_i − k
                    w[self.i] = j as i32 + 1;
                    w[j] = self.i as i32 + 1;
                    b[self.i] = self.level2 as i32;
                    b[j] = -self.level2 as i32;
                } else {
                    // x_i + x_j = k: x_i ↦ k − x_j, x_j ↦ k − x_i
                    w[self.i] = -(j as i32 + 1);
                    w[j] = -(self.i as i32 + 1);
                    b[self.i] = self.level2 as i32;
                    b[j] = self.level2 as i32;
                }
            }
        }
        AffineElt {
            case_tag,
            finite: SignedPerm {
                kind: Kind::B,
                window: w,
            },
            translation2: b,
            tag: 0,
        }
    }
}

/// The affine Weyl apparatus for one case and rank.
#[derive(Debug, Clone)]
pub struct AffineSetup {
    pub case_tag: CaseTag,
    pub n: usize,
    pub walls: Vec<Wall>,
    families: Vec<RootFamily>,
    scale: i64,
    base: Vec<i64>,
}

impl AffineSetup {
    pub fn new(case_tag: CaseTag, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("affine data implemented for n ≥ 2".into()));
        }
        let mut walls = Vec::new();
        let diff = |i: usize| Wall {
            i,
            j: Some((i + 1, -1)),
            level2: 0,
        };
        if matches!(case_tag, CaseTag::C2b | CaseTag::C3) {
            walls.push(Wall {
                i: 0,
                j: None,
                level2: 1,
            });
        }
        for i in 0..n - 1 {
            walls.push(diff(i));
        }
        match case_tag {
            CaseTag::C1 => {
                walls.push(Wall {
                    i: n - 2,
                    j: Some((n - 1, 1)),
                    level2: 0,
                });
                walls.push(Wall {
                    i: 0,
                    j: Some((1, 1)),
                    level2: 2,
                });
                if n == 2 {
                    walls.push(Wall {
                        i: 0,
                        j: Some((1, -1)),
                        level2: 2,
                    });
                }
            }
            CaseTag::C2a => {
                walls.push(Wall {
                    i: n - 1,
                    j: None,
                    level2: 0,
                });
                walls.push(Wall {
                    i: 0,
                    j: Some((1, 1)),
                    level2: 2,
                });
            }
            CaseTag::C2b => walls.push(Wall {
                i: n - 2,
                j: Some((n - 1, 1)),
                level2: 0,
            }),
            CaseTag::C3 => walls.push(Wall {
                i: n - 1,
                j: None,
                level2: 0,
            }),
        }
        let mut families = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for c in [-1, 1] {
                    families.push(RootFamily {
                        i,
                        j: Some((j, c)),
                        step2: 2,
                        offset2: 0,
                    });
                }
            }
            match case_tag {
                CaseTag::C1 => {}
                CaseTag::C2a => families.push(RootFamily {
                    i,
                    j: None,
                    step2: 2,
                    offset2: 0,
                }),
                CaseTag::C2b => families.push(RootFamily {
                    i,
                    j: None,
                    step2: 2,
                    offset2: 1,
                }),
                CaseTag::C3 => families.push(RootFamily {
                    i,
                    j: None,
                    step2: 1,
                    offset2: 0,
                }),
            }
        }
        let scale = 2 * (n as i64 + 1);
        let base = (0..n).map(|i| (n - i) as i64).collect();
        Ok(AffineSetup {
            case_tag,
            n,
            walls,
            families,
            scale,
            base,
        })
    }

    pub fn identity(&self) -> AffineElt {
        AffineElt::identity(self.case_tag, self.n)
    }

    pub fn simple_reflections(&self) -> Vec<AffineElt> {
        self.walls
            .iter()
            .map(|w| w.reflection(self.case_tag, self.n))
            .collect()
    }

    /// Walls containing the point y.
    pub fn walls_through(&self, y: &ApartmentPoint) -> Vec<usize> {
        let x: Vec<i64> = y.coords2.iter().map(|&v| v as i64).collect();
        (0..self.walls.len())
            .filter(|&k| self.walls[k].eval2(&x) == self.walls[k].level2)
            .collect()
    }

    /// Sign of the base point relative to a wall, scaled coordinates.
    fn side(&self, wall: &Wall, p: &[i64]) -> i64 {
        (wall.eval2(p) - wall.level2 * self.scale / 2).signum()
    }

    fn side2(&self, wall: &Wall, x2: &[i64]) -> i64 {
        (wall.eval2(x2) - wall.level2).signum()
    }

    fn base_side(&self, wall: &Wall) -> i64 {
        self.side(wall, &self.base)
    }

    /// Affine length: the number of walls of the arrangement separating the
    /// base alcove from its image.
    pub fn length(&self, w: &AffineElt) -> usize {
        let q = w.apply_scaled(&self.base, self.scale);
        let mut count = 0i64;
        for f in &self.families {
            let (a, b) = (f.eval(&self.base), f.eval(&q));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            // levels k·(S/2) with k ≡ offset mod step, strictly between lo and hi
            let unit = self.scale / 2;
            let first = (lo.div_euclid(unit)) + 1;
            let last = (hi - 1).div_euclid(unit);
            for k in first..=last {
                if (k - f.offset2).rem_euclid(f.step2) == 0 {
                    count += 1;
                }
            }
        }
        count as usize
    }

    /// A reduced word s_{i_1} ⋯ s_{i_k} τ with τ in the length-zero subgroup.
    pub fn reduced_word(&self, w: &AffineElt) -> (Vec<usize>, AffineElt) {
        let refl = self.simple_reflections();
        let mut cur = w.clone();
        let mut word = Vec::new();
        loop {
            let q = cur.apply_scaled(&self.base, self.scale);
            let hit = self
                .walls
                .iter()
                .position(|wl| self.side(wl, &q) != self.base_side(wl));
            match hit {
                Some(k) => {
                    word.push(k);
                    cur = refl[k].compose(&cur);
                }
                None => return (word, cur),
            }
        }
    }

    /// Fold a point into the closure of the base alcove by simple reflections.
    pub fn fold(&self, y: &ApartmentPoint) -> ApartmentPoint {
        let refl = self.simple_reflections();
        let mut x: Vec<i64> = y.coords2.iter().map(|&v| v as i64).collect();
        loop {
            let hit = self.walls.iter().position(|wl| {
                let s = self.side2(wl, &x);
                s != 0 && s != self.base_side(wl)
            });
            match hit {
                Some(k) => x = refl[k].apply2(&x),
                None => {
                    return ApartmentPoint {
                        coords2: x.iter().map(|&v| v as i32).collect(),
                    }
                }
            }
        }
    }

    pub fn act(&self, g: &AffineElt, y: &ApartmentPoint) -> ApartmentPoint {
        let x: Vec<i64> = y.coords2.iter().map(|&v| v as i64).collect();
        ApartmentPoint {
            coords2: g.apply2(&x).iter().map(|&v| v as i32).collect(),
        }
    }

    /// Orbit of y under the reflections in the given walls.
    pub fn parabolic_orbit(&self, j: &[usize], y: &ApartmentPoint) -> BTreeSet<ApartmentPoint> {
        let refl: Vec<AffineElt> = j
            .iter()
            .map(|&k| self.walls[k].reflection(self.case_tag, self.n))
            .collect();
        let mut seen = BTreeSet::from([y.clone()]);
        let mut q = VecDeque::from([y.clone()]);
        while let Some(p) = q.pop_front() {
            for r in &refl {
                let z = self.act(r, &p);
                if seen.insert(z.clone()) {
                    q.push_back(z);
                }
            }
        }
        seen
    }

    /// τ_μ, the length-zero element in the coset of t^{ε_1}.
    pub fn tau_mu(&self) -> AffineElt {
        let t = self.mu_translation(0, 1);
        self.reduced_word(&t).1
    }

    /// t^{±ε_i}; in case (3) the torsion tag records the Kottwitz class of μ.
    pub fn mu_translation(&self, i: usize, sign: i32) -> AffineElt {
        let mut lam = vec![0; self.n];
        lam[i] = sign;
        let mut t = AffineElt::translation(self.case_tag, &lam);
        if self.case_tag == CaseTag::C3 {
            t.tag = 1;
        }
        t
    }

    /// All t^{μ′} with μ′ ∈ W_0 μ = {±ε_i}, labelled by (i, sign).
    pub fn mu_orbit(&self) -> Vec<((usize, i32), AffineElt)> {
        let mut v = Vec::new();
        for i in 0..self.n {
            for sg in [1, -1] {
                v.push(((i, sg), self.mu_translation(i, sg)));
            }
        }
        v
    }
}

/// Key of the double coset W_J w W_J: the least point of the W_J-orbit of
/// w·x^(s), together with the length-zero component of w.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetKey {
    pub point: ApartmentPoint,
    pub omega: AffineElt,
}

/// The admissible set Adm(μ)_{J_s}, computed twice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub case_tag: CaseTag,
    pub n: usize,
    pub s: usize,
    /// Image of {w ≤ t^{μ′}} in the double coset space.
    pub by_bruhat: BTreeSet<CosetKey>,
    /// Double cosets of relative position ≤ 1 with the Kottwitz class of μ.
    pub by_lattice: BTreeSet<CosetKey>,
    pub agree: bool,
    /// Double cosets of the translations t^{μ′}.
    pub maximal: BTreeSet<CosetKey>,
    pub tau_mu_present: bool,
    pub hyperspecial: bool,
}

impl AffineSetup {
    pub fn j_s(&self, s: usize) -> Vec<usize> {
        self.walls_through(&ApartmentPoint::x_s(self.n, s))
    }

    pub fn coset_key(&self, j: &[usize], w: &AffineElt, s: usize) -> CosetKey {
        let y = self.act(w, &ApartmentPoint::x_s(self.n, s));
        let point = self
            .parabolic_orbit(j, &y)
            .into_iter()
            .next()
            .expect("nonempty orbit");
        let omega = self.reduced_word(w).1;
        CosetKey { point, omega }
    }

    /// Elements below t^{μ′} in Bruhat order, via subwords of one reduced word.
    pub fn bruhat_interval(&self, top: &AffineElt) -> BTreeSet<AffineElt> {
        let (word, tau) = self.reduced_word(top);
        let refl = self.simple_reflections();
        let k = word.len();
        let mut out = BTreeSet::new();
        for mask in 0u32..(1u32 << k) {
            let mut acc = tau.clone();
            for idx in (0..k).rev() {
                if mask >> idx & 1 == 1 {
                    acc = refl[word[idx]].compose(&acc);
                }
            }
            out.insert(acc);
        }
        out
    }

    pub fn admissible_set(&self, s: usize) -> Result<AdmissibleSet> {
        if s > self.n {
            return Err(Error::OutOfRange(format!("s={s} > n={}", self.n)));
        }
        let j = self.j_s(s);
        let mut by_bruhat = BTreeSet::new();
        let mut maximal = BTreeSet::new();
        let tau = self.tau_mu();
        let mut tau_mu_present = false;
        for (_, t) in self.mu_orbit() {
            maximal.insert(self.coset_key(&j, &t, s));
            for w in self.bruhat_interval(&t) {
                if w == tau {
                    tau_mu_present = true;
                }
                by_bruhat.insert(self.coset_key(&j, &w, s));
            }
        }
        let xs = ApartmentPoint::x_s(self.n, s);
        let target = self.fold(&self.act(&tau, &xs));
        let mut by_lattice = BTreeSet::new();
        let n = self.n;
        let mut coords = vec![-4i32; n];
        loop {
            let y = ApartmentPoint {
                coords2: coords.clone(),
            };
            if y.half_count() == s && relative_position_dim(&xs, &y) <= 1 && self.fold(&y) == target
            {
                let point = self
                    .parabolic_orbit(&j, &y)
                    .into_iter()
                    .next()
                    .expect("nonempty");
                by_lattice.insert(CosetKey {
                    point,
                    omega: tau.clone(),
                });
            }
            let mut i = 0;
            while i < n && coords[i] == 4 {
                coords[i] = -4;
                i += 1;
            }
            if i == n {
                break;
            }
            coords[i] += 1;
        }
        let d = self.case_tag.lattice_type(s);
        Ok(AdmissibleSet {
            case_tag: self.case_tag,
            n,
            s,
            agree: by_bruhat == by_lattice,
            by_bruhat,
            by_lattice,
            maximal,
            tau_mu_present,
            hyperspecial: d == 0 || d == self.case_tag.dim_v(n),
        })
    }
}

/// A translation t^{±ε_i}, written as (sign, i) with i 1-based.
pub type SignedIndex = (i32, usize);

/// The printed tables of maximal admissible elements and of Z_K.
pub fn kr_tables(
    case_tag: CaseTag,
    n: usize,
    s: usize,
) -> Result<(BTreeSet<SignedIndex>, BTreeSet<SignedIndex>)> {
    if s > n || n < 2 {
        return Err(Error::OutOfRange(format!("s={s}, n={n}")));
    }
    let set = |v: Vec<SignedIndex>| v.into_iter().collect::<BTreeSet<_>>();
    let adm = match case_tag {
        CaseTag::C1 => match s {
            0 => set(vec![(1, 1)]),
            1 if n == 2 => set(vec![(1, 1), (-1, 1), (1, 2), (-1, 2)]),
            1 => set(vec![(1, 1), (-1, 1), (1, 2)]),
            _ if s < n - 1 => set(vec![(-1, s), (1, s + 1)]),
            _ if s == n - 1 => set(vec![(-1, n - 1), (1, n), (-1, n)]),
            _ => set(vec![(-1, n)]),
        },
        CaseTag::C2a => match s {
            0 => set(vec![(1, 1)]),
            1 => set(vec![(1, 1), (-1, 1), (1, 2)]),
            _ if s <= n - 1 => set(vec![(-1, s), (1, s + 1)]),
            _ => set(vec![(-1, n)]),
        },
        CaseTag::C2b => match s {
            0 => set(vec![(1, 1)]),
            _ if s < n - 1 => set(vec![(-1, s), (1, s + 1)]),
            _ if s == n - 1 => set(vec![(1, n), (-1, n), (-1, n - 1)]),
            _ => set(vec![(-1, n)]),
        },
        CaseTag::C3 => match s {
            0 => set(vec![(1, 1)]),
            _ if s <= n - 1 => set(vec![(-1, s), (1, s + 1)]),
            _ => set(vec![(-1, n)]),
        },
    };
    let z = match case_tag {
        CaseTag::C1 | CaseTag::C2b => {
            if s + 1 < n {
                set(vec![(1, s + 1)])
            } else if s + 1 == n {
                set(vec![(1, n), (-1, n)])
            } else {
                set(vec![])
            }
        }
        CaseTag::C2a | CaseTag::C3 => {
            if s < n {
                set(vec![(1, s + 1)])
            } else {
                set(vec![])
            }
        }
    };
    Ok((adm, z))
}

/// Computed counterparts of the tables: t^{μ′} minimal in W_K t^{μ′}, and
/// those t^{μ′} with L(t^{μ′}x^(s)) ⊄ L^(s)∨.
pub fn kr_computed(
    setup: &AffineSetup,
    s: usize,
) -> (BTreeSet<SignedIndex>, BTreeSet<SignedIndex>) {
    let j = setup.j_s(s);
    let refl = setup.simple_reflections();
    let xs = ApartmentPoint::x_s(setup.n, s);
    let mut adm = BTreeSet::new();
    let mut z = BTreeSet::new();
    for ((i, sg), t) in setup.mu_orbit() {
        let l = setup.length(&t);
        if j.iter().all(|&k| setup.length(&refl[k].compose(&t)) > l) {
            adm.insert((sg, i + 1));
            if !inside_dual(&setup.act(&t, &xs), &xs) {
                z.insert((sg, i + 1));
            }
        }
    }
    (adm, z)
}

/// θ(a) = (½, …, ½) − (a_n, …, a_1), exchanging cases (2a) and (2b).
pub fn theta(y: &ApartmentPoint) -> ApartmentPoint {
    ApartmentPoint {
        coords2: y.coords2.iter().rev().map(|&x| 1 - x).collect(),
    }
}

/// θ w θ⁻¹ for w in case (2a), as an element of case (2b).
pub fn theta_conjugate(w: &AffineElt) -> AffineElt {
    let n = w.rank();
    let theta_elt = AffineElt {
        case_tag: CaseTag::C2b,
        finite: SignedPerm {
            kind: Kind::B,
            window: (1..=n as i32).rev().map(|x| -x).collect(),
        },
        translation2: vec![1; n],
        tag: 0,
    };
    let mut inner = w.clone();
    inner.case_tag = CaseTag::C2b;
    theta_elt.compose(&inner).compose(&theta_elt.inverse())
}

/// Summary of the double cosets per case, keyed by s.
pub fn admissible_summary(case_tag: CaseTag, n: usize) -> Result<BTreeMap<usize, AdmissibleSet>> {
    let setup = AffineSetup::new(case_tag, n)?;
    (0..=n)
        .map(|s| setup.admissible_set(s).map(|a| (s, a)))
        .collect()
}
