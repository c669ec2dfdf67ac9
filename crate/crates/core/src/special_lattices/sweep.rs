//! Enumeration of specials from the vertex lattices above L₀ and the
//! point-level cover, intersection and connectivity checks.

use super::lattice::{AmbientWindow, WindowFrame, WittLattice};
use super::specials::{
    crucial_dichotomy, is_special, kr_case, sharp_transport, vertex_seed, DichotomyVerdict,
    ResidueQuotient, ResidueSide, Seed,
};
use super::witt::WittRing;
use crate::error::{Error, Result};
use crate::finite_orthogonal::{Coarse, FqContext, GrowthVariety, StratumLabel};
use crate::padic_quadratic::{
    is_realizable, least_nonsquare, phi_twist, vertex_extremes, JordanProfile, SpaceInvariants,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

const MAX_LISTED_VIOLATIONS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub p: u64,
    pub m: usize,
    pub precision: usize,
    pub a: usize,
    pub b: usize,
    /// Points taken per family; a family hitting the cap is marked incomplete.
    pub cap: Option<usize>,
}

impl SweepConfig {
    pub fn default_for(n: usize) -> Self {
        SweepConfig {
            p: 3,
            m: n,
            precision: 4,
            a: 2,
            b: 2,
            cap: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub v: SpaceInvariants,
    pub h: usize,
}

/// Every realizable V of dimension n with each of its admissible types h.
pub fn case_list(n: usize, p: u64) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for v in SpaceInvariants::all_tuples(n) {
        if !is_realizable(&v, p) {
            continue;
        }
        let Ok(ext) = vertex_extremes(&v, p) else {
            continue;
        };
        for &h in &ext.allowed_types {
            out.push(CaseSpec { v, h });
        }
    }
    out
}

/// The window around Λ_max of 𝕍 in a diagonal basis, with Φ = σ there.
pub fn window_for(
    v: &SpaceInvariants,
    cfg: &SweepConfig,
) -> Result<(Arc<AmbientWindow>, JordanProfile)> {
    let vv = phi_twist(v)?;
    let lmax = vertex_extremes(&vv, cfg.p)?.lambda_max;
    let form = lmax.realize(cfg.p)?;
    let nonsq = least_nonsquare(cfg.p) as i64;
    let diag = form
        .entries
        .iter()
        .map(|e| (if e.unit == 1 { 1 } else { nonsq }, e.val as u32))
        .collect();
    let n = form.dim();
    let phi_matrix = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let frame = WindowFrame {
        n,
        diag,
        a: cfg.a,
        b: cfg.b,
        phi_matrix,
    };
    let ring = WittRing::new(cfg.p, cfg.m, cfg.precision)?;
    Ok((AmbientWindow::new(ring, frame)?, lmax))
}

/// All Φ-invariant vertex lattices containing L₀: L₀ + lift(U) for U a
/// rational isotropic subspace of L₀^∨/L₀. Sorted by (type, lattice).
pub fn star_seeds(win: &AmbientWindow) -> Result<Vec<Seed>> {
    let l0 = win.base();
    let q = ResidueQuotient::new(win, &win.dual(&l0)?, &l0, ResidueSide::Lattice)?;
    let fp = Arc::new(FqContext::new(win.p(), 1)?);
    let space = q.space(fp)?;
    let mut seeds = Vec::new();
    for j in 0..=space.dim / 2 {
        for u in space.enumerate_isotropic(j) {
            seeds.push(vertex_seed(win, &q.lift(win, &u))?);
        }
    }
    seeds.sort_by(|x, y| (x.t, &x.lattice).cmp(&(y.t, &y.lattice)));
    Ok(seeds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilySide {
    /// Z(Λ): specials M ⊇ Λ, from S_Λ.
    Z,
    /// Y(Λ): specials M ⊆ Λ, from R_Λ.
    Y,
}

/// One enumerated point with the finite-field data it came from.
#[derive(Debug, Clone)]
struct Point {
    lattice: WittLattice,
    label: StratumLabel,
    /// dim 𝒱 (Z) or dim 𝒰 (Y).
    sub_dim: usize,
    /// lift of the upper hull: S_c(M) (Z) or pS_d(M^∨) (Y).
    upper_lift: WittLattice,
    /// lift of the rational hull (Z only): S_d(M^∨)^∨.
    rational_lift: Option<WittLattice>,
}

#[derive(Debug, Clone)]
struct Family {
    side: FamilySide,
    points: Vec<Point>,
    complete: bool,
}

fn enumerate_family(
    win: &AmbientWindow,
    seed: &Seed,
    side: FamilySide,
    h: usize,
    field: &Arc<FqContext>,
    cap: Option<usize>,
) -> Result<Family> {
    let n = win.n();
    let (q, j) = match side {
        FamilySide::Z => (
            ResidueQuotient::new(win, &seed.dual, &seed.lattice, ResidueSide::Lattice)?,
            (seed.t - h) / 2,
        ),
        FamilySide::Y => (
            ResidueQuotient::new(
                win,
                &seed.lattice,
                &win.times_p(&seed.dual)?,
                ResidueSide::Dual,
            )?,
            (h - seed.t) / 2,
        ),
    };
    let var = GrowthVariety {
        omega: q.space(field.clone())?,
        j,
        strict: h == 0 || h == n,
        chi: q.chi(),
    };
    let (subs, complete) = var.points_capped(cap);
    let mut points = Vec::with_capacity(subs.len());
    for s in subs {
        let label = var.stratify(&s)?;
        let (lattice, rational_lift) = match side {
            FamilySide::Z => (q.lift(win, &s), Some(q.lift(win, &label.rational_hull))),
            FamilySide::Y => (q.lift(win, &var.omega.perp(&s)), None),
        };
        points.push(Point {
            lattice,
            sub_dim: s.dim(),
            upper_lift: q.lift(win, &label.upper_hull),
            rational_lift,
            label,
        });
    }
    Ok(Family {
        side,
        points,
        complete,
    })
}

/// The specials of one family, and whether the cap left it complete.
pub fn family_lattices(
    win: &AmbientWindow,
    seed: &Seed,
    side: FamilySide,
    h: usize,
    field: &Arc<FqContext>,
    cap: Option<usize>,
) -> Result<(Vec<WittLattice>, bool)> {
    let fam = enumerate_family(win, seed, side, h, field, cap)?;
    Ok((
        fam.points.into_iter().map(|p| p.lattice).collect(),
        fam.complete,
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub case: CaseSpec,
    pub config: SweepConfig,
    pub phi_matrix: Vec<Vec<i64>>,
    pub lambda_max: JordanProfile,
    pub seeds: usize,
    pub families: usize,
    pub count: usize,
    pub kr_histogram: BTreeMap<String, usize>,
    pub dichotomy_histogram: BTreeMap<String, usize>,
    pub rule_histogram: BTreeMap<String, usize>,
    /// Every point passes is_special and ♯-transport, and the lift data from the
    /// finite-field side agrees with the lattice chains.
    pub specials_ok: bool,
    /// KR dichotomy, the (1)/(2) displays with rules (a)–(d), same index and chain steps.
    pub dichotomy_ok: bool,
    /// Every special is covered (0 < h < n only).
    pub cover_ok: Option<bool>,
    pub intersections_ok: Option<bool>,
    pub connected: Option<bool>,
    pub pairs_checked: usize,
    /// No family was truncated by the cap.
    pub complete: bool,
    pub violation_count: usize,
    pub violations: Vec<String>,
}

struct Violations {
    count: usize,
    list: Vec<String>,
}

impl Violations {
    fn push(&mut self, msg: String) {
        self.count += 1;
        if self.list.len() < MAX_LISTED_VIOLATIONS {
            self.list.push(msg);
        }
    }
}

fn short(x: &WittLattice) -> String {
    serde_json::to_string(&x.rows).unwrap_or_default()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
    fn components(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Enumerate every special of type h in the families above L₀ and run all
/// per-lattice and cover checks.
pub fn sweep_case(case: &CaseSpec, cfg: &SweepConfig) -> Result<SweepReport> {
    let h = case.h;
    let (win, lambda_max) = window_for(&case.v, cfg)?;
    let n = win.n();
    if h > n {
        return Err(Error::Invalid(format!("type h = {h} exceeds n = {n}")));
    }
    let field = Arc::new(FqContext::new(cfg.p, cfg.m)?);
    let seeds = star_seeds(&win)?;
    let seed_index: HashMap<&WittLattice, usize> = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| (&s.lattice, i))
        .collect();

    let mut viol = Violations {
        count: 0,
        list: Vec::new(),
    };

    // families keyed by (seed, side)
    let mut families: BTreeMap<(usize, FamilySide), Family> = BTreeMap::new();
    for (i, s) in seeds.iter().enumerate() {
        if s.t >= h && (s.t - h) % 2 == 0 {
            families.insert(
                (i, FamilySide::Z),
                enumerate_family(&win, s, FamilySide::Z, h, &field, cfg.cap)?,
            );
        }
        if s.t <= h && (h - s.t) % 2 == 0 {
            families.insert(
                (i, FamilySide::Y),
                enumerate_family(&win, s, FamilySide::Y, h, &field, cfg.cap)?,
            );
        }
    }
    let complete = families.values().all(|f| f.complete);

    // unique specials with their verdicts
    let mut index: HashMap<WittLattice, usize> = HashMap::new();
    let mut specials: Vec<WittLattice> = Vec::new();
    let mut members: BTreeMap<(usize, FamilySide), BTreeSet<usize>> = BTreeMap::new();
    for (key, fam) in &families {
        let set = members.entry(*key).or_default();
        for pt in &fam.points {
            let id = *index.entry(pt.lattice.clone()).or_insert_with(|| {
                specials.push(pt.lattice.clone());
                specials.len() - 1
            });
            set.insert(id);
        }
    }

    let mut kr_histogram = BTreeMap::new();
    let mut dichotomy_histogram = BTreeMap::new();
    let mut rule_histogram = BTreeMap::new();
    let mut specials_ok = true;
    let mut dichotomy_ok = true;
    let mut verdicts: Vec<DichotomyVerdict> = Vec::with_capacity(specials.len());
    for m in &specials {
        let cert = is_special(&win, m, h)?;
        if !cert.special {
            specials_ok = false;
            viol.push(format!("not special: {cert:?} at {}", short(m)));
        }
        if !sharp_transport(&win, m, h)? {
            specials_ok = false;
            viol.push(format!("♯-transport fails at {}", short(m)));
        }
        match kr_case(&win, m) {
            Ok(k) => *kr_histogram.entry(k.name().to_string()).or_insert(0) += 1,
            Err(e) => {
                dichotomy_ok = false;
                viol.push(format!("{e} at {}", short(m)));
            }
        }
        let v = crucial_dichotomy(&win, m, h)?;
        *dichotomy_histogram.entry(v.label()).or_insert(0) += 1;
        for r in &v.rules {
            *rule_histogram.entry(r.to_string()).or_insert(0) += 1;
        }
        if !v.ok() {
            dichotomy_ok = false;
            viol.push(format!(
                "dichotomy: kr={:?} c={} d={} case1={:?} case2={:?} rules={:?} same_index={} unit_steps={} phi_steps={} at {}",
                v.kr, v.c, v.d, v.case1, v.case2, v.rules, v.same_index, v.unit_steps, v.phi_steps, short(m)
            ));
        }
        verdicts.push(v);
    }

    // the finite-field strata against the lattice chains
    for fam in families.values() {
        for pt in &fam.points {
            let id = index[&pt.lattice];
            let v = &verdicts[id];
            let m = &specials[id];
            let grows = pt.label.upper_hull.dim() - pt.sub_dim;
            let isotropic_sum = matches!(pt.label.coarse, Coarse::Dagger | Coarse::PhiFixed);
            let ok = match fam.side {
                FamilySide::Z => {
                    let md = win.dual(m)?;
                    v.upper == pt.upper_lift
                        && v.c == grows
                        && Some(&v.lower) == pt.rational_lift.as_ref()
                        && win.contains(&md, &win.phi(m)?) == isotropic_sum
                }
                FamilySide::Y => {
                    let md = win.dual(m)?;
                    let psd = win.times_p(&win.dual(&v.lower)?)?;
                    psd == pt.upper_lift
                        && v.d == grows
                        && win.contains(m, &win.phi(&win.times_p(&md)?)?) == isotropic_sum
                }
            };
            if !ok {
                specials_ok = false;
                viol.push(format!(
                    "{:?}-lift {:?} disagrees with the lattice chains at {}",
                    fam.side,
                    pt.label.coarse,
                    short(m)
                ));
            }
        }
    }

    let (mut cover_ok, mut intersections_ok, mut connected) = (None, None, None);
    let mut pairs_checked = 0;
    if 0 < h && h < n {
        // every special assigned by its verdict
        let mut occupied: BTreeSet<WittLattice> = BTreeSet::new();
        let mut covered = true;
        for (id, v) in verdicts.iter().enumerate() {
            let m = &specials[id];
            let mut hit = false;
            if v.case2.is_some() && win.contains(m, &v.lower) {
                occupied.insert(v.lower.clone());
                hit = true;
            }
            if v.case1.is_some() && win.contains(&v.upper, m) {
                occupied.insert(v.upper.clone());
                hit = true;
            }
            if !hit {
                covered = false;
                viol.push(format!("uncovered special {}", short(m)));
            }
        }

        // membership predicate against enumeration on complete families
        for ((i, side), fam) in &families {
            if !fam.complete {
                continue;
            }
            let lam = &seeds[*i].lattice;
            let predicted: BTreeSet<usize> = (0..specials.len())
                .filter(|&id| match side {
                    FamilySide::Z => win.contains(&specials[id], lam),
                    FamilySide::Y => win.contains(lam, &specials[id]),
                })
                .collect();
            if predicted != members[&(*i, *side)] {
                covered = false;
                viol.push(format!(
                    "{side:?}({i}): {} enumerated vs {} by membership",
                    members[&(*i, *side)].len(),
                    predicted.len()
                ));
            }
        }
        cover_ok = Some(covered);

        // pairwise intersection rules
        let mut inter_ok = true;
        let mut extra: HashMap<WittLattice, Option<BTreeSet<WittLattice>>> = HashMap::new();
        let keys: Vec<(usize, FamilySide)> = families
            .iter()
            .filter(|(_, f)| f.complete)
            .map(|(k, _)| *k)
            .collect();
        for (x, &(i, si)) in keys.iter().enumerate() {
            for &(k, sk) in &keys[x + 1..] {
                if si != sk {
                    continue;
                }
                pairs_checked += 1;
                let got: BTreeSet<usize> = members[&(i, si)]
                    .intersection(&members[&(k, sk)])
                    .copied()
                    .collect();
                let (li, lk) = (&seeds[i].lattice, &seeds[k].lattice);
                let expected: Option<BTreeSet<usize>> = match si {
                    FamilySide::Z => {
                        let join = win.sum(li, lk);
                        match seed_index.get(&join) {
                            Some(&jx) if seeds[jx].t >= h => {
                                members.get(&(jx, FamilySide::Z)).cloned()
                            }
                            _ => Some(BTreeSet::new()),
                        }
                    }
                    FamilySide::Y => {
                        let meet = win.intersect(li, lk);
                        match vertex_seed(&win, &meet) {
                            Ok(s) if s.t <= h => {
                                if let Some(&jx) = seed_index.get(&meet) {
                                    members.get(&(jx, FamilySide::Y)).cloned()
                                } else {
                                    let pts = extra.entry(meet.clone()).or_insert_with(|| {
                                        enumerate_family(
                                            &win,
                                            &s,
                                            FamilySide::Y,
                                            h,
                                            &field,
                                            cfg.cap,
                                        )
                                        .ok()
                                        .filter(|f| f.complete)
                                        .map(|f| f.points.into_iter().map(|p| p.lattice).collect())
                                    });
                                    // a point of Y(Λ∩Λ′) not found from the seeds maps to
                                    // usize::MAX, which no intersection contains
                                    pts.as_ref().map(|set| {
                                        set.iter()
                                            .map(|l| index.get(l).copied().unwrap_or(usize::MAX))
                                            .collect()
                                    })
                                }
                            }
                            _ => Some(BTreeSet::new()),
                        }
                    }
                };
                match expected {
                    Some(e) if e != got => {
                        inter_ok = false;
                        viol.push(format!(
                            "{si:?}({i}) ∩ {sk:?}({k}): {} points, rule predicts {}",
                            got.len(),
                            e.len()
                        ));
                    }
                    Some(_) => {}
                    None => pairs_checked -= 1,
                }
            }
        }
        intersections_ok = Some(inter_ok);

        // overlap graph of nonempty families and inclusion graph of occupied vertex lattices
        let nonempty: Vec<&BTreeSet<usize>> = members.values().filter(|s| !s.is_empty()).collect();
        let mut uf = UnionFind::new(nonempty.len());
        for a in 0..nonempty.len() {
            for b in a + 1..nonempty.len() {
                if !nonempty[a].is_disjoint(nonempty[b]) {
                    uf.union(a, b);
                }
            }
        }
        let overlap_connected = uf.components() <= 1;
        let occ: Vec<&WittLattice> = occupied.iter().collect();
        let mut uf = UnionFind::new(occ.len());
        for a in 0..occ.len() {
            for b in a + 1..occ.len() {
                if win.contains(occ[a], occ[b]) || win.contains(occ[b], occ[a]) {
                    uf.union(a, b);
                }
            }
        }
        let inclusion_connected = uf.components() <= 1;
        if complete && !overlap_connected {
            viol.push("family overlap graph is disconnected".into());
        }
        if complete && !inclusion_connected {
            viol.push("inclusion graph of occupied vertex lattices is disconnected".into());
        }
        // truncated families lose the points that link them
        connected = complete.then_some(overlap_connected && inclusion_connected);
    }

    Ok(SweepReport {
        case: *case,
        config: cfg.clone(),
        phi_matrix: win.frame.phi_matrix.clone(),
        lambda_max,
        seeds: seeds.len(),
        families: families.len(),
        count: specials.len(),
        kr_histogram,
        dichotomy_histogram,
        rule_histogram,
        specials_ok,
        dichotomy_ok,
        cover_ok,
        intersections_ok,
        connected,
        pairs_checked,
        complete,
        violation_count: viol.count,
        violations: viol.list,
    })
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.specials_ok
            && self.dichotomy_ok
            && self.cover_ok != Some(false)
            && self.intersections_ok != Some(false)
            && self.connected != Some(false)
            && self.violation_count == 0
    }
}
