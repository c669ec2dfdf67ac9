//! The non-verify subcommands. Each returns a JSON report, an optional CSV
//! count table and whether its internal checks held.

use crate::report::render_csv;
use basiclocus::coxeter_weyl::*;
use basiclocus::finite_orthogonal::*;
use basiclocus::padic_quadratic::*;
use basiclocus::special_lattices::{sweep_case, CaseSpec, SweepConfig};
use basiclocus::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub ok: bool,
}

impl Outcome {
    fn new(json: Value, ok: bool) -> Self {
        Outcome {
            json,
            csv: None,
            ok,
        }
    }
}

/// Desk-scale envelope for the finite-field enumerations.
pub fn check_envelope(p: u64, m: usize, t: usize, h: usize, force: bool) -> Result<()> {
    let inside = (p == 3 || p == 5) && m <= 3 && t.saturating_sub(h) <= 6;
    if !inside && !force {
        return Err(Error::Budget(format!(
            "p={p}, m={m}, t-h={}; allowed p ∈ {{3,5}}, m ≤ 3, t-h ≤ 6",
            t.saturating_sub(h)
        )));
    }
    Ok(())
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Invalid(format!("{x:?} is not an integer")))
        })
        .collect()
}

/// `diag` is a comma list of integers; `gram` a JSON integer matrix.
pub fn classify(p: u64, diag: Option<&str>, gram: Option<&str>) -> Result<Outcome> {
    let g: Vec<Vec<i64>> = match (diag, gram) {
        (Some(d), None) => {
            let e = parse_ints(d)?;
            (0..e.len())
                .map(|i| {
                    (0..e.len())
                        .map(|j| if i == j { e[i] } else { 0 })
                        .collect()
                })
                .collect()
        }
        (None, Some(g)) => serde_json::from_str(g)
            .map_err(|e| Error::Invalid(format!("gram is not an integer matrix: {e}")))?,
        _ => {
            return Err(Error::Invalid(
                "give exactly one of --diag or --gram".into(),
            ))
        }
    };
    if g.is_empty() || g.iter().any(|r| r.len() != g.len()) {
        return Err(Error::Invalid(
            "gram must be a nonempty square matrix".into(),
        ));
    }
    let form = diagonalize(&g, p)?;
    let inv = space_invariants(&form);
    let profile = jordan_profile(&form).ok();
    let twist = phi_twist(&inv).ok().filter(|tw| is_realizable(tw, p));
    let json = json!({
        "p": p,
        "form": form,
        "invariants": inv,
        "witt": witt_decompose(&inv, p)?,
        "jordan_profile": profile,
        "type": profile.map(|j| j.type_t()),
        "sharp_dual": profile.map(|j| sharp_dual(&j)),
        "vertex_extremes": vertex_extremes(&inv, p).ok(),
        "phi_twist": twist,
        "vphi": twist.and_then(|_| vphi_table(&inv, p).ok())
            .map(|(mx, mn)| json!({"lambda_max": mx, "lambda_min": mn})),
    });
    Ok(Outcome::new(json, true))
}

fn perm_json(w: &SignedPerm, i: &ParabolicSet, want: Option<usize>) -> (Value, bool) {
    let len = length(w);
    let minimal = is_minimal_rep(w, i);
    let ok = minimal && want.map_or(true, |x| x == len);
    let v = json!({
        "window": w.window,
        "length": len,
        "expected_length": want,
        "minimal": minimal,
        "parabolic": i.members,
    });
    (v, ok)
}

pub fn weyl(t: usize, h: usize, t_prime: Option<usize>, sign: i8) -> Result<Outcome> {
    if let Some(tp) = t_prime {
        let ls = LinearSetup::new(t, h, tp)?;
        let mut ok = true;
        let mut elements = Vec::new();
        for (r, s) in ls.legal_pairs() {
            let w = ls.w_rs(r, s)?;
            let (mut v, good) = perm_json(&w, &ls.i_rs(r, s)?, Some(r + s));
            let minimal_claimed = r <= (t - h) / 2;
            ok &= if minimal_claimed {
                good
            } else {
                length(&w) == r + s
            };
            v["r"] = json!(r);
            v["s"] = json!(s);
            v["word"] = json!(ls.w_rs_word(r, s)?);
            elements.push(v);
        }
        let json = json!({"t": t, "h": h, "t_prime": tp, "rank": ls.n(), "s_max": ls.s_max(), "w_rs": elements});
        return Ok(Outcome::new(json, ok));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid(format!("sign must be ±1, got {sign}")));
    }
    let o = OrthoSetup::new(t, h)?;
    let il = o.i_lambda()?;
    let mut ok = longest_parabolic_length(&il) == longest_parabolic_formula(h);
    let mut w_r = Vec::new();
    let mut w_r_prime = Vec::new();
    for r in 0..=o.r_max() {
        let i = o.i_r(r)?;
        let (mut v, good) = perm_json(&o.w_r(r, sign)?, &i, (r >= 1).then(|| r + h - 1));
        ok &= good;
        v["r"] = json!(r);
        v["word"] = json!(o.w_r_word(r, sign)?);
        w_r.push(v);
        if h >= 2 && r >= 1 {
            let (mut v, good) = perm_json(&o.w_r_prime(r, sign)?, &i, Some(r));
            ok &= good;
            v["r"] = json!(r);
            v["word"] = json!(o.w_r_prime_word(r, sign)?);
            w_r_prime.push(v);
        }
    }
    let mut dims = BTreeMap::new();
    if h >= 1 && h < t {
        let heart = dl_dimension(&il, &o.w_lambda()?)?;
        ok &= heart == (t + h) / 2 - 1;
        dims.insert("heart", heart);
        if h >= 2 {
            let dagger = dl_dimension(&il, &o.w_r_prime(o.r_max(), sign)?)?;
            ok &= dagger == (t + h) / 2 - 2;
            dims.insert("dagger", dagger);
        }
    }
    let json = json!({
        "setup": o,
        "r_max": o.r_max(),
        "i_lambda": il.members,
        "w_lambda": o.w_lambda()?.window,
        "longest_parabolic_length": longest_parabolic_length(&il),
        "w_r": w_r,
        "w_r_prime": w_r_prime,
        "dl_dimensions": dims,
    });
    Ok(Outcome::new(json, ok))
}

pub fn adm(case: &str, n: usize, s: Option<usize>) -> Result<Outcome> {
    let c = CaseTag::parse(case)?;
    let st = AffineSetup::new(c, n)?;
    let ss: Vec<usize> = match s {
        Some(s) if s > n => return Err(Error::OutOfRange(format!("s={s} > n={n}"))),
        Some(s) => vec![s],
        None => (0..=n).collect(),
    };
    let mut ok = true;
    let mut out = Vec::new();
    for s in ss {
        let a = st.admissible_set(s)?;
        let (ta, tz) = kr_tables(c, n, s)?;
        let (ca, cz) = kr_computed(&st, s);
        let matches = ta == ca && tz == cz;
        ok &= a.agree && matches;
        out.push(json!({
            "s": s,
            "lattice_type": c.lattice_type(s),
            "admissible_count": a.by_bruhat.len(),
            "lattice_count": a.by_lattice.len(),
            "maximal_count": a.maximal.len(),
            "agree": a.agree,
            "tau_mu_present": a.tau_mu_present,
            "hyperspecial": a.hyperspecial,
            "kr_table": {"maximal": ta, "z_k": tz},
            "kr_computed": {"maximal": ca, "z_k": cz},
            "tables_match": matches,
        }));
    }
    let json = json!({"case": c.to_string(), "n": n, "dim_v": c.dim_v(n), "levels": out});
    Ok(Outcome::new(json, ok))
}

fn coarse_name(c: Coarse) -> &'static str {
    match c {
        Coarse::Heart => "heart",
        Coarse::Dagger => "dagger",
        Coarse::PhiFixed => "phi",
    }
}

pub struct StrataArgs {
    pub n0: usize,
    pub chi0: i8,
    pub t: usize,
    pub h: usize,
    pub chi: i8,
    pub p: u64,
    pub m: usize,
    pub pairs: usize,
    pub series_m: usize,
    pub force: bool,
}

pub fn strata(a: &StrataArgs) -> Result<Outcome> {
    check_envelope(a.p, a.m.max(a.series_m), a.t, a.h, a.force)?;
    let prof = JordanProfile::new(a.n0, a.chi0, a.t, a.chi);
    let f = Arc::new(FqContext::new(a.p, a.m)?);
    let var = GrowthVariety::s_lambda(&prof, a.h, f.clone())?;
    let c = var.counts();
    let pts = var.points();
    let sub = substrata_report(&var, &pts, a.pairs)?;
    // S_Λ^{[h]} is the dual side of R_{Λ♯}^{[n−h]}
    let dual = duality_check(&sharp_dual(&prof), prof.dim() - a.h, f.clone())?;
    let duality_ok = dual.same_form && dual.bijective && dual.labels_preserved;
    let series = if a.series_m > 0 {
        Some(point_count_series(&prof, a.h, a.p, a.series_m)?)
    } else {
        None
    };
    let degree = series.as_ref().map(|s| dimension_estimate(s));
    let allowed = theorem_labels(a.t, a.h);
    let ok = c.heart + c.dagger + c.phi == c.total
        && c.fine.values().sum::<usize>() == c.total
        && c.fine.keys().all(|k| allowed.contains(k))
        && c.keys_refine_labels()
        && (a.h > 1 || c.dagger == 0)
        && sub.open_sum == sub.total
        && sub.open_matches_hull
        && sub.join_rule_holds
        && duality_ok;
    let fine: BTreeMap<String, usize> = c
        .fine
        .iter()
        .map(|(&(k, i), &n)| (format!("{}_{i}", coarse_name(k)), n))
        .collect();
    let json = json!({
        "profile": prof,
        "h": a.h,
        "p": a.p,
        "m": a.m,
        "modulus": f.modulus,
        "total": c.total,
        "heart": c.heart,
        "dagger": c.dagger,
        "phi": c.phi,
        "fine": fine,
        "key_mismatches": c.key_mismatches,
        "substrata": sub,
        "duality_check": duality_ok,
        "duality": dual,
        "point_counts": series,
        "degree_estimate": degree,
        "degree_tolerance": DEGREE_TOLERANCE,
    });
    let rows: Vec<Vec<String>> = c
        .fine
        .iter()
        .map(|(&(k, i), &n)| vec![coarse_name(k).to_string(), i.to_string(), n.to_string()])
        .collect();
    Ok(Outcome {
        json,
        csv: Some(render_csv(&["coarse", "index", "count"], &rows)),
        ok,
    })
}

pub struct SpecialArgs {
    pub v: SpaceInvariants,
    pub h: usize,
    pub config: SweepConfig,
    pub force: bool,
}

pub fn special(a: &SpecialArgs) -> Result<Outcome> {
    let cfg = &a.config;
    let inside = (cfg.p == 3 || cfg.p == 5) && a.v.dim <= 5 && cfg.m <= 5 && cfg.precision <= 6;
    if !inside && !a.force {
        return Err(Error::Budget(format!(
            "p={}, n={}, m={}, K={}; allowed p ∈ {{3,5}}, n ≤ 5, m ≤ 5, K ≤ 6",
            cfg.p, a.v.dim, cfg.m, cfg.precision
        )));
    }
    if !is_realizable(&a.v, cfg.p) {
        return Err(Error::Unrealizable(format!("{:?}", a.v)));
    }
    let r = sweep_case(&CaseSpec { v: a.v, h: a.h }, cfg)?;
    let mut rows = Vec::new();
    for (kind, hist) in [
        ("kr", &r.kr_histogram),
        ("dichotomy", &r.dichotomy_histogram),
        ("rule", &r.rule_histogram),
    ] {
        for (label, n) in hist {
            rows.push(vec![kind.to_string(), label.clone(), n.to_string()]);
        }
    }
    let mut json = serde_json::to_value(&r).expect("report serializes");
    json["modulus"] = json!(least_irreducible(cfg.p, cfg.m));
    json["passed"] = json!(r.passed());
    Ok(Outcome {
        json,
        csv: Some(render_csv(&["histogram", "label", "count"], &rows)),
        ok: r.passed(),
    })
}
