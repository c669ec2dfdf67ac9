//! S_Λ, R_Λ, the ♥/†/Φ stratification and Deligne–Lusztig relative positions.

use super::field::FqContext;
use super::linalg::Subspace;
use super::space::{build_omega, FqQuadSpace, Side};
use crate::coxeter_weyl::{Kind, OrthoSetup, SignedPerm};
use crate::error::{Error, Result};
use crate::padic_quadratic::{sharp_dual, JordanProfile};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coarse {
    Heart,
    Dagger,
    PhiFixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumLabel {
    pub coarse: Coarse,
    pub fine_index: usize,
    /// The largest Φ-stable subspace of 𝒱.
    pub rational_hull: Subspace,
    /// The smallest Φ-stable subspace containing 𝒱.
    pub upper_hull: Subspace,
}

/// dim(E_a ∩ Φ(E_b)) over the flag attached to a point, extended by orthogonals.
pub type DlKey = Vec<Vec<usize>>;

/// Isotropic j-subspaces 𝒱 of Ω with dim(𝒱 + Φ𝒱) ≤ j + 1, or = j + 1 when strict.
#[derive(Debug, Clone)]
pub struct GrowthVariety {
    pub omega: FqQuadSpace,
    pub j: usize,
    pub strict: bool,
    /// Field-of-definition character of Ω_{F_p}, used by the standard model.
    pub chi: i8,
}

impl GrowthVariety {
    /// S_Λ^{[h]} inside OGr((t−h)/2, Ω_Λ).
    pub fn s_lambda(profile: &JordanProfile, h: usize, field: Arc<FqContext>) -> Result<Self> {
        let (t, n) = (profile.type_t(), profile.dim());
        if h > t || (t - h) % 2 != 0 {
            return Err(Error::Invalid(format!(
                "need t ≥ h with t ≡ h mod 2, got t={t}, h={h}"
            )));
        }
        Ok(GrowthVariety {
            omega: build_omega(profile, field, Side::Lattice)?,
            j: (t - h) / 2,
            strict: h == 0 || h == n,
            chi: profile.chi1,
        })
    }

    /// R_Λ^{[h]} inside OGr((h−t)/2, Ω_{Λ^∨}).
    pub fn r_lambda(profile: &JordanProfile, h: usize, field: Arc<FqContext>) -> Result<Self> {
        let (t, n) = (profile.type_t(), profile.dim());
        if h < t || h > n || (h - t) % 2 != 0 {
            return Err(Error::Invalid(format!(
                "need t ≤ h ≤ n with t ≡ h mod 2, got t={t}, h={h}"
            )));
        }
        Ok(GrowthVariety {
            omega: build_omega(profile, field, Side::Dual)?,
            j: (h - t) / 2,
            strict: h == 0 || h == n,
            chi: profile.chi0,
        })
    }

    pub fn field(&self) -> &FqContext {
        &self.omega.field
    }

    /// (t, h) of the S-type variety this is isomorphic to.
    pub fn t_h(&self) -> (usize, usize) {
        (self.omega.dim, self.omega.dim - 2 * self.j)
    }

    pub fn growth(&self, v: &Subspace) -> usize {
        v.sum(self.field(), &v.frobenius(self.field())).dim() - v.dim()
    }

    pub fn contains(&self, v: &Subspace) -> bool {
        if v.dim() != self.j || v.ambient != self.omega.dim || !self.omega.is_totally_isotropic(v) {
            return false;
        }
        let g = self.growth(v);
        if self.strict {
            g == 1
        } else {
            g <= 1
        }
    }

    pub fn points(&self) -> Vec<Subspace> {
        self.points_capped(None).0
    }

    /// The first `limit` points in enumeration order, and whether that is all of them.
    pub fn points_capped(&self, limit: Option<usize>) -> (Vec<Subspace>, bool) {
        let mut out = Vec::new();
        let mut complete = true;
        self.omega.try_for_each_isotropic(self.j, false, |v| {
            if self.contains(&v) {
                if limit.is_some_and(|l| out.len() >= l) {
                    complete = false;
                    return false;
                }
                out.push(v);
            }
            true
        });
        (out, complete)
    }

    /// C_0 = 𝒱 ⊋ C_1 ⊋ … with C_i = ∩_{ℓ ≤ i} Φ^ℓ 𝒱, up to stabilization.
    pub fn intersection_chain(&self, v: &Subspace) -> Vec<Subspace> {
        let f = self.field();
        let mut chain = vec![v.clone()];
        let mut iterate = v.clone();
        loop {
            iterate = iterate.frobenius(f);
            let next = chain.last().unwrap().intersect(f, &iterate);
            if next.dim() == chain.last().unwrap().dim() {
                return chain;
            }
            chain.push(next);
        }
    }

    fn sum_chain_top(&self, v: &Subspace) -> Subspace {
        let f = self.field();
        let mut acc = v.clone();
        let mut iterate = v.clone();
        loop {
            iterate = iterate.frobenius(f);
            let next = acc.sum(f, &iterate);
            if next.dim() == acc.dim() {
                return acc;
            }
            acc = next;
        }
    }

    pub fn stratify(&self, v: &Subspace) -> Result<StratumLabel> {
        if !self.contains(v) {
            return Err(Error::Invalid(
                "subspace is not a point of the variety".into(),
            ));
        }
        let f = self.field();
        let phi_v = v.frobenius(f);
        let chain = self.intersection_chain(v);
        let coarse = if phi_v == *v {
            Coarse::PhiFixed
        } else if self.omega.is_totally_isotropic(&v.sum(f, &phi_v)) {
            Coarse::Dagger
        } else {
            Coarse::Heart
        };
        Ok(StratumLabel {
            coarse,
            fine_index: chain.len() - 1,
            rational_hull: chain.last().unwrap().clone(),
            upper_hull: self.sum_chain_top(v),
        })
    }

    /// The flag of the parabolic attached to a label: C_i ⊂ ⋯ ⊂ C_0 for ♥ and
    /// Φ, and C_{i−1} ⊂ ⋯ ⊂ C_0 for †.
    fn flag_len(label: &StratumLabel) -> usize {
        match label.coarse {
            Coarse::Heart => label.fine_index + 1,
            Coarse::Dagger => label.fine_index,
            Coarse::PhiFixed => 1,
        }
    }

    pub fn dl_key(&self, v: &Subspace) -> Result<DlKey> {
        let label = self.stratify(v)?;
        let f = self.field();
        let chain = self.intersection_chain(v);
        let k = Self::flag_len(&label);
        let mut flag: Vec<Subspace> = chain[..k].iter().rev().cloned().collect();
        let perps: Vec<Subspace> = flag.iter().rev().map(|s| self.omega.perp(s)).collect();
        flag.extend(perps);
        let images: Vec<Subspace> = flag.iter().map(|s| s.frobenius(f)).collect();
        Ok(flag
            .iter()
            .map(|a| images.iter().map(|b| a.intersect(f, b).dim()).collect())
            .collect())
    }

    /// Keys of the Weyl elements the theorem assigns to the label, computed in
    /// the standard model; None when no Coxeter datum exists at this rank.
    pub fn expected_keys(&self, label: &StratumLabel) -> Option<Vec<DlKey>> {
        let (t, h) = self.t_h();
        let nonsplit = t % 2 == 0 && self.chi == -1;
        let k = Self::flag_len(label);
        let dims: Vec<usize> = (0..k).map(|a| self.j + 1 - k + a).collect();
        if label.coarse == Coarse::PhiFixed {
            let d = t / 2;
            let kind = if t % 2 == 0 { Kind::D } else { Kind::B };
            let id = SignedPerm {
                kind,
                window: (1..=d as i32).collect(),
            };
            return Some(vec![standard_key(t, &dims, &id, nonsplit)]);
        }
        // for h = 0 the parabolic carries both maximal isotropic families and
        // the flag attached to a point is not modelled
        if h == 0 {
            return None;
        }
        let setup = OrthoSetup::new(t, h).ok()?;
        let i = label.fine_index;
        let signs: &[i8] = if h == 2 && label.coarse == Coarse::Dagger {
            &[1, -1]
        } else {
            &[1]
        };
        let mut keys = Vec::new();
        for &sg in signs {
            let w = match label.coarse {
                Coarse::PhiFixed => unreachable!(),
                Coarse::Heart => setup.w_r(i, sg).ok()?,
                Coarse::Dagger => setup.w_r_prime(i, sg).ok()?,
            };
            keys.push(standard_key(t, &dims, &w, nonsplit));
        }
        keys.sort();
        keys.dedup();
        Some(keys)
    }

    pub fn counts(&self) -> StrataCounts {
        let mut c = StrataCounts::default();
        for v in self.points() {
            let label = self
                .stratify(&v)
                .expect("enumerated points lie on the variety");
            c.total += 1;
            match label.coarse {
                Coarse::Heart => c.heart += 1,
                Coarse::Dagger => c.dagger += 1,
                Coarse::PhiFixed => c.phi += 1,
            }
            *c.fine.entry((label.coarse, label.fine_index)).or_default() += 1;
            let key = self.dl_key(&v).expect("point");
            let expected = self.expected_keys(&label);
            let ok = match &expected {
                Some(ks) => ks.contains(&key),
                None => true,
            };
            if expected.is_none() {
                c.unmodelled += 1;
            }
            if !ok {
                c.key_mismatches += 1;
            }
            c.key_labels
                .entry(key)
                .or_default()
                .insert((label.coarse, label.fine_index));
        }
        c
    }
}

/// Key of w in the split (or, for even t with χ = −1, the e_d ↔ f_d twisted)
/// standard model with flag ⟨e_1, …, e_k⟩ for k in `dims`.
pub fn standard_key(t: usize, dims: &[usize], w: &SignedPerm, nonsplit: bool) -> DlKey {
    let d = w.rank() as i32;
    let odd = t % 2 == 1;
    let act = |x: i32| -> i32 {
        if x == 0 {
            return 0;
        }
        let k = x.abs();
        let v = w.window[(d - k) as usize];
        let img = (d + 1 - v.abs()) * v.signum();
        if x > 0 {
            img
        } else {
            -img
        }
    };
    let phi0 = |x: i32| if nonsplit && x.abs() == d { -x } else { x };
    let mut flag: Vec<BTreeSet<i32>> = dims.iter().map(|&k| (1..=k as i32).collect()).collect();
    let perps: Vec<BTreeSet<i32>> = dims
        .iter()
        .rev()
        .map(|&k| {
            let mut s: BTreeSet<i32> = (1..=d).collect();
            s.extend((k as i32 + 1..=d).map(|x| -x));
            if odd {
                s.insert(0);
            }
            s
        })
        .collect();
    flag.extend(perps);
    let images: Vec<BTreeSet<i32>> = flag
        .iter()
        .map(|s| s.iter().map(|&x| act(phi0(x))).collect())
        .collect();
    flag.iter()
        .map(|a| images.iter().map(|b| a.intersection(b).count()).collect())
        .collect()
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StrataCounts {
    pub total: usize,
    pub heart: usize,
    pub dagger: usize,
    pub phi: usize,
    pub fine: BTreeMap<(Coarse, usize), usize>,
    /// Labels observed for each relative-position key.
    pub key_labels: BTreeMap<DlKey, BTreeSet<(Coarse, usize)>>,
    pub key_mismatches: usize,
    pub unmodelled: usize,
}

impl StrataCounts {
    /// Each key determines a single label.
    pub fn keys_refine_labels(&self) -> bool {
        self.key_labels.values().all(|s| s.len() == 1)
    }
}

/// The index sets of the decomposition theorem for (t, h).
pub fn theorem_labels(t: usize, h: usize) -> BTreeSet<(Coarse, usize)> {
    let m = (t - h) / 2;
    let mut s = BTreeSet::new();
    for i in 1..=m {
        s.insert((Coarse::Heart, i));
        if h >= 2 {
            s.insert((Coarse::Dagger, i));
        }
    }
    if h != 0 {
        s.insert((Coarse::PhiFixed, 0));
    }
    s
}

/// U ⊆ 𝒱 and the image 𝒱/U ⊂ U^⊥/U satisfies the growth condition of S_{Λ′}.
pub fn substratum_membership(var: &GrowthVariety, v: &Subspace, u: &Subspace) -> Result<bool> {
    let f = var.field();
    if u.frobenius(f) != *u || !var.omega.is_totally_isotropic(u) {
        return Err(Error::Invalid(
            "U must be Φ-stable and totally isotropic".into(),
        ));
    }
    if !v.contains(f, u) {
        return Ok(false);
    }
    let perp = var.omega.perp(u);
    if !perp.contains(f, v) {
        return Ok(false);
    }
    let img = v.dim() - u.dim();
    let grown = v.sum(f, &v.frobenius(f)).dim() - u.dim();
    Ok(if var.strict {
        grown == img + 1
    } else {
        grown <= img + 1
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubstrataReport {
    pub rational_subspaces: usize,
    /// Σ_U |S°_{Λ_U}|, computed from the membership oracle.
    pub open_sum: usize,
    pub total: usize,
    /// The open piece of each point is indexed by its rational hull.
    pub open_matches_hull: bool,
    pub pairs_checked: usize,
    pub join_rule_holds: bool,
}

pub fn substrata_report(
    var: &GrowthVariety,
    points: &[Subspace],
    max_pairs: usize,
) -> Result<SubstrataReport> {
    let f = var.field();
    let mut us: Vec<Subspace> = Vec::new();
    for d in 0..=var.j {
        us.extend(var.omega.enumerate_rational_isotropic(d));
    }
    let index: HashMap<Subspace, usize> = us
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, u)| (u, i))
        .collect();
    let mut members: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); us.len()];
    for (ui, u) in us.iter().enumerate() {
        for (vi, v) in points.iter().enumerate() {
            if substratum_membership(var, v, u)? {
                members[ui].insert(vi);
            }
        }
    }
    let mut open_sum = 0;
    let mut open_matches_hull = true;
    let covers: Vec<Vec<usize>> = us
        .iter()
        .map(|u| {
            (0..us.len())
                .filter(|&wi| us[wi].dim() == u.dim() + 1 && us[wi].contains(f, u))
                .collect()
        })
        .collect();
    for (ui, u) in us.iter().enumerate() {
        for &vi in &members[ui] {
            let bigger = covers[ui].iter().any(|&wi| members[wi].contains(&vi));
            if !bigger {
                open_sum += 1;
                let hull = var.stratify(&points[vi])?.rational_hull;
                open_matches_hull &= hull == *u;
            }
        }
    }
    let mut pairs_checked = 0;
    let mut join_rule_holds = true;
    'outer: for a in 1..us.len() {
        for b in a + 1..us.len() {
            if pairs_checked >= max_pairs {
                break 'outer;
            }
            pairs_checked += 1;
            let common: BTreeSet<usize> = members[a].intersection(&members[b]).copied().collect();
            let join = us[a].sum(f, &us[b]);
            let expected = match index.get(&join) {
                Some(&ji) => members[ji].clone(),
                None => BTreeSet::new(),
            };
            join_rule_holds &= common == expected;
        }
    }
    Ok(SubstrataReport {
        rational_subspaces: us.len(),
        open_sum,
        total: points.len(),
        open_matches_hull,
        pairs_checked,
        join_rule_holds,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityReport {
    pub r_count: usize,
    pub s_count: usize,
    pub same_form: bool,
    pub bijective: bool,
    pub labels_preserved: bool,
}

/// R_Λ^{[h]} against S_{Λ♯}^{[n−h]} through Λ/pΛ^∨ ≅ (Λ♯)^∨/Λ♯.
pub fn duality_check(
    profile: &JordanProfile,
    h: usize,
    field: Arc<FqContext>,
) -> Result<DualityReport> {
    let r = GrowthVariety::r_lambda(profile, h, field.clone())?;
    let sharp = sharp_dual(profile);
    let s = GrowthVariety::s_lambda(&sharp, profile.dim() - h, field)?;
    let same_form = r.omega.gram == s.omega.gram && r.strict == s.strict;
    let rp = r.points();
    let sp: BTreeSet<Subspace> = s.points().into_iter().collect();
    let mapped: BTreeSet<Subspace> = rp.iter().map(duality_map).collect();
    let bijective = same_form && mapped == sp && mapped.len() == rp.len();
    let labels_preserved = bijective
        && rp.iter().all(|v| {
            let a = r.stratify(v).expect("point");
            let b = s.stratify(&duality_map(v)).expect("point");
            a.coarse == b.coarse && a.fine_index == b.fine_index
        });
    Ok(DualityReport {
        r_count: rp.len(),
        s_count: sp.len(),
        same_form,
        bijective,
        labels_preserved,
    })
}

/// The coordinate identification Λ/pΛ^∨ = (Λ♯)^∨/Λ♯ on the standard bases.
pub fn duality_map(v: &Subspace) -> Subspace {
    v.clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeEstimate {
    Conclusive(usize),
    Inconclusive(String),
}

/// Largest allowed gap between the final log-ratio and its rounding.
pub const DEGREE_TOLERANCE: f64 = 0.25;

/// Degree in q of a point count from its values at q_1 < q_2 < ….
pub fn dimension_estimate(samples: &[(u64, u64)]) -> DegreeEstimate {
    if samples.len() < 2 {
        return DegreeEstimate::Inconclusive("need at least two field sizes".into());
    }
    if let Some(&(q, _)) = samples.iter().find(|s| s.1 == 0) {
        return DegreeEstimate::Inconclusive(format!("no points over F_{q}"));
    }
    let last = samples.len() - 1;
    let (q0, c0) = samples[last - 1];
    let (q1, c1) = samples[last];
    let slope = ((c1 as f64) / (c0 as f64)).ln() / ((q1 as f64) / (q0 as f64)).ln();
    let d = slope.round();
    if d < 0.0 || (slope - d).abs() > DEGREE_TOLERANCE {
        return DegreeEstimate::Inconclusive(format!("log-ratio {slope:.3} not near an integer"));
    }
    DegreeEstimate::Conclusive(d as usize)
}

pub fn point_count_series(
    profile: &JordanProfile,
    h: usize,
    p: u64,
    max_m: usize,
) -> Result<Vec<(u64, u64)>> {
    (1..=max_m)
        .map(|m| {
            let f = Arc::new(FqContext::new(p, m)?);
            let q = f.q() as u64;
            let var = GrowthVariety::s_lambda(profile, h, f)?;
            Ok((q, var.points().len() as u64))
        })
        .collect()
}
