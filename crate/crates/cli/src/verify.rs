//! The verification driver: named checks over bounded sweeps, each returning a
//! status, counts and, on failure, the first failing instance.

use basiclocus::coxeter_weyl::*;
use basiclocus::finite_orthogonal::*;
use basiclocus::padic_quadratic::*;
use basiclocus::special_lattices::{
    case_list, sweep_case, window_for, AmbientWindow, SweepConfig, SweepReport, WVec, WittLattice,
};
use basiclocus::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Symbols,
    Classification,
    Lengths,
    Dimensions,
    Admissible,
    Strata,
    Duality,
    Degree,
    Dichotomy,
    Cover,
    Stability,
    Lattices,
}

impl Target {
    pub fn all() -> [Target; 12] {
        use Target::*;
        [
            Symbols,
            Classification,
            Lengths,
            Dimensions,
            Admissible,
            Strata,
            Duality,
            Degree,
            Dichotomy,
            Cover,
            Stability,
            Lattices,
        ]
    }

    pub fn name(&self) -> &'static str {
        use Target::*;
        match self {
            Symbols => "symbols",
            Classification => "classification",
            Lengths => "lengths",
            Dimensions => "dimensions",
            Admissible => "admissible",
            Strata => "strata",
            Duality => "duality",
            Degree => "degree",
            Dichotomy => "dichotomy",
            Cover => "cover",
            Stability => "stability",
            Lattices => "lattices",
        }
    }

    pub fn parse(s: &str) -> Result<Target> {
        Target::all()
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown target {s}")))
    }

    /// Position in the acceptance list; the seeded lattice check has none.
    pub fn criterion(&self) -> Option<usize> {
        Target::all()[..11]
            .iter()
            .position(|t| t == self)
            .map(|i| i + 1)
    }

    /// Wall-clock allowance of the acceptance run at the default budget.
    pub fn time_budget(&self) -> Duration {
        use Target::*;
        Duration::from_secs(match self {
            Symbols | Classification => 1,
            Lengths | Dimensions => 10,
            Admissible => 300,
            Strata | Degree => 600,
            Duality => 120,
            Dichotomy | Cover => 900,
            Stability => 1800,
            Lattices => 10,
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size caps of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest dim V in the special-lattice sweeps.
    pub n: usize,
    /// Largest lattice type in the Weyl group sweeps.
    pub t: usize,
    /// Largest prime in the symbol check.
    pub p: u64,
    /// Largest residue degree.
    pub m: usize,
    /// Points per family in sweeps with n ≥ 5; None enumerates everything.
    pub cap: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        DESK_BUDGET
    }
}

/// The desk-scale envelope; larger plans need the force flag.
pub const DESK_BUDGET: Budget = Budget {
    n: 5,
    t: 14,
    p: 7,
    m: 5,
    cap: Some(300),
};

impl Budget {
    /// Parse `key=value` pairs separated by commas, e.g. `t=10,cap=none`.
    pub fn parse(s: &str) -> Result<Budget> {
        let mut b = Budget::default();
        for item in s.split(',').filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("budget entry {item} is not key=value")))?;
            let num = || {
                v.parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("budget {k}={v} is not a number")))
            };
            match k {
                "n" => b.n = num()?,
                "t" => b.t = num()?,
                "p" => b.p = num()? as u64,
                "m" => b.m = num()?,
                "cap" if v == "none" => b.cap = None,
                "cap" => b.cap = Some(num()?),
                _ => return Err(Error::Invalid(format!("unknown budget key {k}"))),
            }
        }
        Ok(b)
    }

    pub fn check(&self, force: bool) -> Result<()> {
        let d = DESK_BUDGET;
        let over = self.n > d.n
            || self.t > d.t
            || self.p > d.p
            || self.m > d.m
            || self.cap.is_none()
            || self.cap > d.cap;
        if over && !force {
            return Err(Error::Budget(format!("{self:?} exceeds {d:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyPlan {
    pub targets: Vec<Target>,
    pub budget: Budget,
    pub seed: u64,
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Partial,
}

impl Status {
    pub fn tag(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Partial => "PARTIAL",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub target: Target,
    pub criterion: Option<usize>,
    pub status: Status,
    pub counts: BTreeMap<String, usize>,
    pub detail: String,
    /// First failing instance.
    pub reproducer: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: Value,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    /// JSON form; wall-clock timings are included only on request so that
    /// the default output is byte-stable.
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if timings {
            let t: BTreeMap<String, f64> = self
                .checks
                .iter()
                .map(|c| (c.target.name().to_string(), c.elapsed.as_secs_f64()))
                .collect();
            v["timings"] = json!(t);
        }
        v
    }
}

struct Tally {
    target: Target,
    start: Instant,
    counts: BTreeMap<String, usize>,
    failures: Vec<Value>,
}

impl Tally {
    fn new(target: Target) -> Self {
        Tally {
            target,
            start: Instant::now(),
            counts: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn count(&mut self, key: &str, by: usize) {
        *self.counts.entry(key.to_string()).or_default() += by;
    }

    fn fail(&mut self, instance: Value) {
        self.failures.push(instance);
    }

    fn finish(self, status: Option<Status>, detail: String) -> CheckResult {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else {
            status.unwrap_or(Status::Pass)
        };
        let mut counts = self.counts;
        counts.insert("failures".into(), self.failures.len());
        CheckResult {
            target: self.target,
            criterion: self.target.criterion(),
            status,
            counts,
            detail,
            reproducer: self.failures.into_iter().next(),
            elapsed: self.start.elapsed(),
        }
    }
}

fn odd_primes_up_to(p: u64) -> Vec<u64> {
    (3..=p).filter(|&q| (2..q).all(|d| q % d != 0)).collect()
}

/// The Hilbert symbol read off from primitive solutions of z² = ax² + by² mod p³.
pub fn hilbert_by_solutions(a: i64, b: i64, p: i64) -> i8 {
    let m = p * p * p;
    let squares: BTreeSet<i64> = (0..m).map(|z| z * z % m).collect();
    for x in 0..m {
        for y in 0..m {
            if x % p == 0 && y % p == 0 {
                continue;
            }
            if squares.contains(&(a * x % m * x + b * y % m * y).rem_euclid(m)) {
                return 1;
            }
        }
    }
    -1
}

pub fn check_symbols(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Symbols);
    let classes = [(0, 1), (0, -1), (1, 1), (1, -1)];
    for p in odd_primes_up_to(b.p) {
        let rep = |c: SquareClass| {
            let u = if c.unit == 1 {
                1
            } else {
                least_nonsquare(p) as i64
            };
            u * (p as i64).pow(c.val as u32)
        };
        for a in classes {
            for c in classes {
                let (ca, cb) = (SquareClass::new(a.0, a.1), SquareClass::new(c.0, c.1));
                t.count("pairs", 1);
                let got = hilbert_symbol(ca, cb, p);
                let want = hilbert_by_solutions(rep(ca), rep(cb), p as i64);
                if got != Ok(want) {
                    t.fail(json!({"p": p, "a": ca, "b": cb, "symbol": got.ok(), "oracle": want}));
                }
            }
        }
    }
    t.finish(
        None,
        "Hilbert symbols against solution counts mod p³".into(),
    )
}

pub fn check_classification(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Classification);
    for p in odd_primes_up_to(b.p.min(5)) {
        for n in 3..=8 {
            for inv in SpaceInvariants::all_tuples(n) {
                if !is_realizable(&inv, p) {
                    continue;
                }
                t.count("spaces", 1);
                let ok = (|| -> Result<bool> {
                    let ext = vertex_extremes(&inv, p)?;
                    let tw = phi_twist(&inv)?;
                    let tw_ext = vertex_extremes(&tw, p)?;
                    Ok(ext.allowed_types == types_by_profile_search(&inv, p)
                        && ext.lambda_max.invariants(p) == inv
                        && ext.lambda_min.invariants(p) == inv
                        && tw.hasse == -inv.hasse
                        && tw.dim == inv.dim
                        && tw.disc() == inv.disc()
                        && vphi_table(&inv, p)? == (tw_ext.lambda_max, tw_ext.lambda_min)
                        && tw_ext.lambda_max.invariants(p) == tw
                        && tw_ext.lambda_min.invariants(p) == tw)
                })();
                if ok != Ok(true) {
                    t.fail(json!({"p": p, "space": inv}));
                }
            }
        }
    }
    t.finish(
        None,
        "vertex types and extremes, twisted space, n ≤ 8".into(),
    )
}

/// Builder of w_r for a given setup; replaced by a mutant in fault-injection tests.
pub type WrBuilder<'a> = &'a dyn Fn(&OrthoSetup, usize) -> Result<SignedPerm>;

pub fn standard_w_r(o: &OrthoSetup, r: usize) -> Result<SignedPerm> {
    o.w_r(r, 1)
}

/// w_r with an extra simple reflection in front, for fault injection.
pub fn mutated_w_r(o: &OrthoSetup, r: usize) -> Result<SignedPerm> {
    simple(o.kind, o.d, 1)?.compose(&o.w_r(r, 1)?)
}

/// Environment variable that swaps in `mutated_w_r` when set to `w_r`.
pub const FAULT_ENV: &str = "BASICLOCUS_INJECT_FAULT";

pub fn check_lengths(b: &Budget) -> CheckResult {
    if std::env::var(FAULT_ENV).is_ok_and(|v| v == "w_r") {
        return check_lengths_with(b, &mutated_w_r);
    }
    check_lengths_with(b, &standard_w_r)
}

pub fn check_lengths_with(b: &Budget, w_r: WrBuilder) -> CheckResult {
    let mut t = Tally::new(Target::Lengths);
    for t_ in 2..=b.t {
        for h in (1..=t_).filter(|h| (t_ - h) % 2 == 0) {
            let Ok(o) = OrthoSetup::new(t_, h) else {
                continue;
            };
            let Ok(il) = o.i_lambda() else {
                t.fail(json!({"t": t_, "h": h, "element": "I_Λ"}));
                continue;
            };
            if longest_parabolic_length(&il) != longest_parabolic_formula(h) {
                t.fail(json!({"t": t_, "h": h, "element": "w_I"}));
            }
            for r in 0..=o.r_max() {
                t.count("elements", 1);
                let ok = o.i_r(r).and_then(|i| {
                    let w = w_r(&o, r)?;
                    Ok(is_minimal_rep(&w, &i) && (r == 0 || length(&w) == r + h - 1))
                });
                if ok != Ok(true) {
                    t.fail(json!({"t": t_, "h": h, "r": r, "element": "w_r"}));
                }
                if h >= 2 && r >= 1 {
                    t.count("elements", 1);
                    let ok = o.i_r(r).and_then(|i| {
                        let w = o.w_r_prime(r, 1)?;
                        Ok(is_minimal_rep(&w, &i) && length(&w) == r)
                    });
                    if ok != Ok(true) {
                        t.fail(json!({"t": t_, "h": h, "r": r, "element": "w_r'"}));
                    }
                }
            }
        }
    }
    for t_ in 1..=b.t {
        for h in (t_ % 2..=t_).step_by(2) {
            for tp in (h % 2..=h).step_by(2) {
                let Ok(ls) = LinearSetup::new(t_, h, tp) else {
                    continue;
                };
                for (r, s) in ls.legal_pairs() {
                    t.count("elements", 1);
                    let ok = ls.w_rs(r, s).and_then(|w| {
                        let minimal = r > (t_ - h) / 2 || is_minimal_rep(&w, &ls.i_rs(r, s)?);
                        Ok(minimal && length(&w) == r + s)
                    });
                    if ok != Ok(true) {
                        t.fail(json!({"t": t_, "h": h, "t_prime": tp, "r": r, "s": s, "element": "w_rs"}));
                    }
                }
            }
        }
    }
    t.finish(
        None,
        format!("ℓ(w_r), ℓ(w_r'), ℓ(w_rs) and minimality, t ≤ {}", b.t),
    )
}

pub fn check_dimensions(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Dimensions);
    for t_ in 2..=b.t {
        for h in (1..t_).filter(|h| (t_ - h) % 2 == 0) {
            let Ok(o) = OrthoSetup::new(t_, h) else {
                continue;
            };
            t.count("formulas", 1);
            let heart = o
                .i_lambda()
                .and_then(|il| dl_dimension(&il, &o.w_lambda()?));
            if heart != Ok((t_ + h) / 2 - 1) {
                t.fail(json!({"t": t_, "h": h, "stratum": "heart", "dim": heart.ok()}));
            }
            if h >= 2 {
                t.count("formulas", 1);
                let dagger = o
                    .i_lambda()
                    .and_then(|il| dl_dimension(&il, &o.w_r_prime(o.r_max(), 1)?));
                if dagger != Ok((t_ + h) / 2 - 2) {
                    t.fail(json!({"t": t_, "h": h, "stratum": "dagger", "dim": dagger.ok()}));
                }
            }
        }
    }
    for t_ in 1..=b.t {
        for h in (t_ % 2..=t_).step_by(2) {
            for tp in (h % 2..=h).step_by(2) {
                let Ok(ls) = LinearSetup::new(t_, h, tp) else {
                    continue;
                };
                let rm = (t_ - h) / 2;
                if rm == 0 {
                    continue;
                }
                t.count("formulas", 1);
                let e = ParabolicSet::empty(Kind::A, ls.n() + 1);
                let d = ls
                    .w_rs(rm - 1, ls.s_max())
                    .and_then(|w| dl_dimension(&e, &w));
                if d != Ok((t_ - tp) / 2) {
                    t.fail(
                        json!({"t": t_, "h": h, "t_prime": tp, "stratum": "linear", "dim": d.ok()}),
                    );
                }
            }
        }
    }
    t.finish(
        None,
        format!("Deligne-Lusztig dimensions for h ≥ 1, t ≤ {}", b.t),
    )
}

pub fn check_admissible(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Admissible);
    for c in CaseTag::all() {
        for n in 2..=b.n.min(4) {
            let Ok(st) = AffineSetup::new(c, n) else {
                t.fail(json!({"case": c.to_string(), "n": n}));
                continue;
            };
            for s in 0..=n {
                t.count("cases", 1);
                let ok = (|| -> Result<bool> {
                    let a = st.admissible_set(s)?;
                    let (ta, tz) = kr_tables(c, n, s)?;
                    let (ca, cz) = kr_computed(&st, s);
                    let j = st.j_s(s);
                    let keys: BTreeSet<_> = ta
                        .iter()
                        .map(|&(sg, i)| st.coset_key(&j, &st.mu_translation(i - 1, sg), s))
                        .collect();
                    Ok(a.agree && ta == ca && tz == cz && keys == a.maximal)
                })();
                if ok != Ok(true) {
                    t.fail(json!({"case": c.to_string(), "n": n, "s": s}));
                }
            }
        }
    }
    t.finish(
        None,
        "Bruhat and lattice descriptions of Adm(μ) against the KR tables".into(),
    )
}

/// (t, h) with 1 ≤ t ≤ 6 and t − h ∈ {0, 2, 4}.
fn strata_envelope() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for t in 1..=6usize {
        for gap in [0, 2, 4] {
            if gap <= t {
                out.push((t, t - gap));
            }
        }
    }
    out
}

pub fn check_strata(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Strata);
    for m in 1..=b.m.min(2) {
        let f = Arc::new(FqContext::new(3, m).expect("F_3^m"));
        for (t_, h) in strata_envelope() {
            for chi in [1i8, -1] {
                t.count("varieties", 1);
                let prof = JordanProfile::new(2, 1, t_, chi);
                let ok = (|| -> Result<bool> {
                    let var = GrowthVariety::s_lambda(&prof, h, f.clone())?;
                    let c = var.counts();
                    let allowed = theorem_labels(t_, h);
                    let pts = var.points();
                    let r = substrata_report(&var, &pts, 2000)?;
                    Ok(c.heart + c.dagger + c.phi == c.total
                        && c.fine.values().sum::<usize>() == c.total
                        && c.fine.keys().all(|k| allowed.contains(k))
                        && c.keys_refine_labels()
                        && (h == 0 || c.key_mismatches == 0)
                        && (h > 1 || c.dagger == 0)
                        && r.open_sum == r.total
                        && r.open_matches_hull
                        && r.join_rule_holds)
                })();
                if ok != Ok(true) {
                    t.fail(json!({"p": 3, "m": m, "t": t_, "h": h, "chi": chi}));
                }
            }
        }
    }
    t.finish(
        None,
        "coarse and fine partitions, open substrata and join rule, t ≤ 6".into(),
    )
}

pub fn check_duality(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Duality);
    for m in 1..=b.m.min(2) {
        let f = Arc::new(FqContext::new(3, m).expect("F_3^m"));
        for n in 1..=6usize {
            for t_ in 0..=n {
                for h in (t_..=n).step_by(2) {
                    if n - t_ > 6 || h - t_ > 4 {
                        continue;
                    }
                    for (chi0, chi1) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
                        if (n == t_ && chi0 == -1) || (t_ == 0 && chi1 == -1) {
                            continue;
                        }
                        t.count("pairs", 1);
                        let prof = JordanProfile::new(n - t_, chi0, t_, chi1);
                        let ok = duality_check(&prof, h, f.clone()).map(|d| {
                            d.same_form
                                && d.bijective
                                && d.labels_preserved
                                && d.r_count == d.s_count
                        });
                        if ok != Ok(true) {
                            t.fail(json!({"p": 3, "m": m, "profile": prof, "h": h}));
                        }
                    }
                }
            }
        }
    }
    t.finish(None, "R_Λ against S_{Λ♯} with labels".into())
}

pub fn check_degree(b: &Budget) -> CheckResult {
    let mut t = Tally::new(Target::Degree);
    let mut lines = Vec::new();
    let mut inconclusive = false;
    for (t_, h) in [(2usize, 0usize), (4, 2), (4, 0)] {
        for chi in [1i8, -1] {
            t.count("series", 1);
            let prof = JordanProfile::new(3, 1, t_, chi);
            let want = (t_ + h) / 2 - 1;
            let series = match point_count_series(&prof, h, 3, b.m.min(3)) {
                Ok(s) => s,
                Err(e) => {
                    t.fail(json!({"t": t_, "h": h, "chi": chi, "error": e.to_string()}));
                    continue;
                }
            };
            let verdict = match dimension_estimate(&series) {
                DegreeEstimate::Conclusive(d) if d == want => "PASS".to_string(),
                DegreeEstimate::Conclusive(d) => {
                    t.fail(json!({"t": t_, "h": h, "chi": chi, "degree": d, "want": want, "series": series}));
                    format!("FAIL(degree {d})")
                }
                DegreeEstimate::Inconclusive(why) => {
                    inconclusive = true;
                    format!("INCONCLUSIVE({why})")
                }
            };
            lines.push(format!(
                "(t,h,χ)=({t_},{h},{chi}) want {want} counts {series:?} {verdict}"
            ));
        }
    }
    let status = inconclusive.then_some(Status::Inconclusive);
    t.finish(
        status,
        format!("tol {DEGREE_TOLERANCE}; {}", lines.join("; ")),
    )
}

/// Reports of every case for 3 ≤ n ≤ b.n at m = min(n, b.m).
pub fn sweep_all(b: &Budget, precision: usize, a: usize, bw: usize) -> Result<Vec<SweepReport>> {
    let mut out = Vec::new();
    for n in 3..=b.n {
        for case in case_list(n, 3) {
            let mut cfg = SweepConfig::default_for(n);
            cfg.m = n.min(b.m);
            cfg.precision = precision;
            cfg.a = a;
            cfg.b = bw;
            if n >= 5 {
                cfg.cap = b.cap;
            }
            out.push(sweep_case(&case, &cfg)?);
        }
    }
    Ok(out)
}

fn describe(r: &SweepReport) -> Value {
    json!({"v": r.case.v, "h": r.case.h, "config": r.config, "violation": r.violations.first()})
}

fn sweep_failure(t: Target, e: &Error) -> CheckResult {
    let mut tally = Tally::new(t);
    tally.fail(json!({"error": e.to_string()}));
    tally.finish(None, "sweep aborted".into())
}

pub fn check_dichotomy(b: &Budget, reports: &[SweepReport]) -> CheckResult {
    let mut t = Tally::new(Target::Dichotomy);
    for r in reports {
        t.count("cases", 1);
        t.count("specials", r.count);
        if !(r.specials_ok && r.dichotomy_ok) {
            t.fail(describe(r));
        }
    }
    let capped = reports.iter().filter(|r| !r.complete).count();
    t.count("capped", capped);
    let status = (capped > 0).then_some(Status::Partial);
    t.finish(
        status,
        format!("n ≤ {}, cap {:?} per family for n ≥ 5, tol 0", b.n, b.cap),
    )
}

pub fn check_cover(b: &Budget, reports: &[SweepReport]) -> CheckResult {
    let mut t = Tally::new(Target::Cover);
    for r in reports {
        if r.cover_ok.is_none() {
            continue;
        }
        t.count("cases", 1);
        t.count("pairs", r.pairs_checked);
        if r.cover_ok == Some(false)
            || r.intersections_ok == Some(false)
            || r.connected == Some(false)
        {
            t.fail(describe(r));
        }
    }
    let undecided = reports
        .iter()
        .filter(|r| r.cover_ok.is_some() && r.connected.is_none())
        .count();
    t.count("connectivity_undecided", undecided);
    let status = (undecided > 0).then_some(Status::Partial);
    t.finish(
        status,
        format!(
            "0 < h < n, n ≤ {}, cap {:?} per family for n ≥ 5, reusing the dichotomy sweep",
            b.n, b.cap
        ),
    )
}

/// The parts of a report that must not move with (K, a, b).
fn fingerprint(r: &SweepReport) -> Value {
    json!({
        "case": r.case,
        "count": r.count,
        "kr": r.kr_histogram,
        "dichotomy": r.dichotomy_histogram,
        "rules": r.rule_histogram,
        "specials_ok": r.specials_ok,
        "dichotomy_ok": r.dichotomy_ok,
        "cover_ok": r.cover_ok,
        "intersections_ok": r.intersections_ok,
        "connected": r.connected,
        "pairs": r.pairs_checked,
        "complete": r.complete,
    })
}

pub fn check_stability(b: &Budget, base: &[SweepReport]) -> CheckResult {
    let mut t = Tally::new(Target::Stability);
    for (k, a, bw) in [(5, 2, 2), (6, 3, 3)] {
        let other = match sweep_all(b, k, a, bw) {
            Ok(o) => o,
            Err(e) => {
                t.fail(json!({"window": [k, a, bw], "error": e.to_string()}));
                continue;
            }
        };
        for (x, y) in base.iter().zip(&other) {
            t.count("comparisons", 1);
            if fingerprint(x) != fingerprint(y) {
                t.fail(
                    json!({"window": [k, a, bw], "base": fingerprint(x), "moved": fingerprint(y)}),
                );
            }
        }
    }
    let status = base.iter().any(|r| !r.complete).then_some(Status::Partial);
    t.finish(
        status,
        "(K,a,b) = (4,2,2) against (5,2,2) and (6,3,3)".into(),
    )
}

fn random_lattice(win: &AmbientWindow, rng: &mut ChaCha8Rng) -> Result<WittLattice> {
    let (n, r) = (win.n(), &win.ring);
    let q = r.modulus_p_k() as i64;
    let mut gens: Vec<WVec> = (0..n)
        .map(|i| {
            let mut v = vec![r.zero(); n];
            v[i] = r.from_int(9);
            v
        })
        .collect();
    for _ in 0..rng.gen_range(1..=n) {
        let v = (0..n)
            .map(|_| {
                let mut x = r.from_int(rng.gen_range(0..q));
                for _ in 1..r.m {
                    x = r.add(&r.mul(&x, &r.gen()), &r.from_int(rng.gen_range(0..q)));
                }
                x
            })
            .collect();
        gens.push(v);
    }
    win.from_generators(&gens, 1)
}

/// Seeded random lattices in p^{-1}L₀: double duals, duals of sums, Φ^m and
/// the length formula for sums and intersections.
pub fn check_lattices(seed: u64) -> CheckResult {
    let mut t = Tally::new(Target::Lattices);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = SpaceInvariants::all_tuples(3)
        .into_iter()
        .find(|v| is_realizable(v, 3))
        .expect("a realizable ternary space");
    let mut cfg = SweepConfig::default_for(3);
    cfg.m = 2;
    let win = match window_for(&v, &cfg) {
        Ok((w, _)) => w,
        Err(e) => return sweep_failure(Target::Lattices, &e),
    };
    for sample in 0..40 {
        t.count("samples", 1);
        let ok = (|| -> Result<bool> {
            let x = random_lattice(&win, &mut rng)?;
            let y = random_lattice(&win, &mut rng)?;
            let s = win.sum(&x, &y);
            let i = win.intersect(&x, &y);
            let mut phi_m = x.clone();
            for _ in 0..cfg.m {
                phi_m = win.phi(&phi_m)?;
            }
            Ok(win.dual(&win.dual(&x)?)? == x
                && win.dual(&s)? == win.intersect(&win.dual(&x)?, &win.dual(&y)?)
                && phi_m == x
                && win.length(&s) + win.length(&i) == win.length(&x) + win.length(&y))
        })();
        if ok != Ok(true) {
            t.fail(
                json!({"seed": seed, "sample": sample, "error": ok.err().map(|e| e.to_string())}),
            );
        }
    }
    t.finish(None, format!("seed {seed}, n = 3, m = {}", cfg.m))
}

/// Lazily computed default sweep shared by the dichotomy, cover and stability checks.
pub struct SweepCache {
    budget: Budget,
    reports: Option<Result<Vec<SweepReport>>>,
}

impl SweepCache {
    pub fn new(budget: &Budget) -> Self {
        SweepCache {
            budget: budget.clone(),
            reports: None,
        }
    }

    pub fn get(&mut self) -> (&Result<Vec<SweepReport>>, Duration) {
        let start = Instant::now();
        if self.reports.is_none() {
            self.reports = Some(sweep_all(&self.budget, 4, 2, 2));
        }
        (self.reports.as_ref().expect("filled"), start.elapsed())
    }
}

pub fn run_check(target: Target, plan: &VerifyPlan, cache: &mut SweepCache) -> CheckResult {
    let b = &plan.budget;
    let with_sweep = |cache: &mut SweepCache, f: &dyn Fn(&[SweepReport]) -> CheckResult| {
        let (res, sweep_time) = cache.get();
        let mut out = match res {
            Ok(r) => f(r),
            Err(e) => sweep_failure(target, e),
        };
        out.elapsed += sweep_time;
        out
    };
    match target {
        Target::Symbols => check_symbols(b),
        Target::Classification => check_classification(b),
        Target::Lengths => check_lengths(b),
        Target::Dimensions => check_dimensions(b),
        Target::Admissible => check_admissible(b),
        Target::Strata => check_strata(b),
        Target::Duality => check_duality(b),
        Target::Degree => check_degree(b),
        Target::Dichotomy => with_sweep(cache, &|r| check_dichotomy(b, r)),
        Target::Cover => with_sweep(cache, &|r| check_cover(b, r)),
        Target::Stability => with_sweep(cache, &|r| check_stability(b, r)),
        Target::Lattices => check_lattices(plan.seed),
    }
}

/// Moduli, window and A_b used by the checks, echoed into the report.
pub fn config_echo(plan: &VerifyPlan) -> Value {
    let moduli: BTreeMap<String, Vec<u64>> = (1..=plan.budget.m)
        .map(|m| (format!("3^{m}"), least_irreducible(3, m)))
        .collect();
    json!({
        "targets": plan.targets,
        "budget": plan.budget,
        "seed": plan.seed,
        "force": plan.force,
        "moduli": moduli,
        "window": {"precision": 4, "a": 2, "b": 2, "stability": [[5, 2, 2], [6, 3, 3]]},
        "a_b": "identity",
    })
}

pub fn run_verify(plan: &VerifyPlan) -> Result<VerifyReport> {
    plan.budget.check(plan.force)?;
    let mut cache = SweepCache::new(&plan.budget);
    let checks: Vec<CheckResult> = plan
        .targets
        .iter()
        .map(|&t| run_check(t, plan, &mut cache))
        .collect();
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerifyReport {
        config: config_echo(plan),
        checks,
        passed,
    })
}
