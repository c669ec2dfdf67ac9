use basiclocus::finite_orthogonal::*;
use basiclocus::padic_quadratic::JordanProfile;
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::sync::Arc;

fn all_vectors(q: usize, n: usize) -> Vec<Vec<Fq>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q as Fq).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Totally isotropic j-subspaces (j ≤ 2) as spans of isotropic vectors.
fn brute_isotropic(space: &FqQuadSpace, j: usize) -> BTreeSet<Subspace> {
    let f = &space.field;
    let iso: Vec<Vec<Fq>> = all_vectors(f.q(), space.dim)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0) && space.pair(v, v) == 0)
        .collect();
    let mut out = BTreeSet::new();
    match j {
        0 => {
            out.insert(Subspace::zero(space.dim));
        }
        1 => {
            for v in &iso {
                out.insert(Subspace::span(f, space.dim, vec![v.clone()]));
            }
        }
        2 => {
            for (a, v) in iso.iter().enumerate() {
                for w in &iso[a + 1..] {
                    if space.pair(v, w) != 0 {
                        continue;
                    }
                    let s = Subspace::span(f, space.dim, vec![v.clone(), w.clone()]);
                    if s.dim() == 2 {
                        out.insert(s);
                    }
                }
            }
        }
        _ => panic!("brute force only for j ≤ 2"),
    }
    out
}

fn gaussian(d: usize, j: usize, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..j {
        num *= q.pow((d - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Closed count of totally isotropic j-subspaces of a nondegenerate space.
fn isotropic_count(dim: usize, chi: i8, j: usize, q: u64) -> u64 {
    let (d, e) = if dim % 2 == 1 {
        ((dim - 1) / 2, 1)
    } else if chi == 1 {
        (dim / 2, 0)
    } else {
        (dim / 2 - 1, 2)
    };
    if j > d {
        return 0;
    }
    let mut c = gaussian(d, j, q);
    for i in 1..=j {
        c *= q.pow((d + e - i) as u32) + 1;
    }
    c
}

#[test]
fn isotropic_lines_in_four_space() {
    let f = Arc::new(FqContext::new(3, 1).unwrap());
    let split = FqQuadSpace::standard(4, 1, f.clone()).unwrap();
    let nonsplit = FqQuadSpace::standard(4, -1, f.clone()).unwrap();
    assert_eq!(split.enumerate_isotropic(1).len(), 16);
    assert_eq!(nonsplit.enumerate_isotropic(1).len(), 10);
    assert_eq!(nonsplit.enumerate_isotropic(2).len(), 0);
}

#[test]
fn anisotropic_plane_has_no_isotropic_vectors() {
    for (p, m) in [(3, 1), (5, 1), (7, 1)] {
        let f = Arc::new(FqContext::new(p, m).unwrap());
        let plane = FqQuadSpace::standard(2, -1, f).unwrap();
        assert_eq!(plane.isotropic_vector_count(), 0, "p={p}");
    }
}

#[test]
fn enumeration_matches_brute_force_and_closed_count() {
    for (p, m) in [(3, 1), (5, 1), (3, 2)] {
        let f = Arc::new(FqContext::new(p, m).unwrap());
        let q = f.q() as u64;
        for dim in 1..=5 {
            for chi in [1i8, -1] {
                let space = FqQuadSpace::standard(dim, chi, f.clone()).unwrap();
                for j in 0..=2 {
                    if q == 9 && dim == 5 && j == 2 {
                        continue;
                    }
                    let fast: BTreeSet<Subspace> =
                        space.enumerate_isotropic(j).into_iter().collect();
                    let brute = brute_isotropic(&space, j);
                    assert_eq!(fast, brute, "q={q} dim={dim} chi={chi} j={j}");
                    // the form is defined over F_p, so it splits over even-degree extensions
                    let chi_q = if m % 2 == 0 { 1 } else { chi };
                    assert_eq!(
                        fast.len() as u64,
                        isotropic_count(dim, chi_q, j, q),
                        "q={q} dim={dim} chi={chi} j={j}"
                    );
                }
            }
        }
    }
}

#[test]
fn rational_enumeration_counts_over_prime_field() {
    let f = Arc::new(FqContext::new(3, 2).unwrap());
    for dim in 2..=6 {
        for chi in [1i8, -1] {
            let space = FqQuadSpace::standard(dim, chi, f.clone()).unwrap();
            for j in 0..=dim / 2 {
                let r = space.enumerate_rational_isotropic(j);
                assert!(r.iter().all(|s| s.is_rational(&f)));
                assert_eq!(
                    r.len() as u64,
                    isotropic_count(dim, chi, j, 3),
                    "dim={dim} chi={chi} j={j}"
                );
            }
        }
    }
}

#[test]
fn growth_variety_matches_direct_filter() {
    let f = Arc::new(FqContext::new(3, 2).unwrap());
    for (t, h, chi) in [
        (2, 0, 1),
        (2, 0, -1),
        (3, 1, 1),
        (4, 2, 1),
        (4, 2, -1),
        (4, 0, 1),
        (5, 3, -1),
    ] {
        let prof = JordanProfile::new(2, 1, t, chi);
        let var = GrowthVariety::s_lambda(&prof, h, f.clone()).unwrap();
        let expected: BTreeSet<Subspace> = brute_isotropic(&var.omega, (t - h) / 2)
            .into_iter()
            .filter(|v| {
                let g = v.sum(&f, &v.frobenius(&f)).dim() - v.dim();
                if h == 0 {
                    g == 1
                } else {
                    g <= 1
                }
            })
            .collect();
        let got: BTreeSet<Subspace> = var.points().into_iter().collect();
        assert_eq!(got, expected, "t={t} h={h} chi={chi}");
    }
}

#[test]
fn strata_partition_and_labels() {
    for m in [1, 2] {
        let f = Arc::new(FqContext::new(3, m).unwrap());
        for (t, h) in [
            (2, 0),
            (3, 1),
            (4, 2),
            (4, 0),
            (5, 1),
            (5, 3),
            (6, 2),
            (6, 4),
        ] {
            if m == 2 && t == 6 && h == 2 {
                continue;
            }
            for chi in [1i8, -1] {
                let prof = JordanProfile::new(2, 1, t, chi);
                let var = GrowthVariety::s_lambda(&prof, h, f.clone()).unwrap();
                let c = var.counts();
                assert_eq!(c.heart + c.dagger + c.phi, c.total);
                assert_eq!(c.fine.values().sum::<usize>(), c.total);
                let allowed = theorem_labels(t, h);
                assert!(
                    c.fine.keys().all(|k| allowed.contains(k)),
                    "t={t} h={h} m={m}"
                );
                assert!(c.keys_refine_labels());
                if h >= 1 {
                    assert_eq!(c.key_mismatches, 0, "t={t} h={h} chi={chi} m={m}");
                }
                if h <= 1 {
                    assert_eq!(c.dagger, 0);
                }
                if m == 1 {
                    assert_eq!(c.phi, c.total);
                }
            }
        }
    }
}

#[test]
fn substrata_and_duality_small() {
    let f = Arc::new(FqContext::new(3, 2).unwrap());
    for (t, h, chi) in [(4, 2, 1), (4, 2, -1), (5, 3, 1)] {
        let prof = JordanProfile::new(2, 1, t, chi);
        let var = GrowthVariety::s_lambda(&prof, h, f.clone()).unwrap();
        let pts = var.points();
        let r = substrata_report(&var, &pts, 500).unwrap();
        assert_eq!(r.open_sum, r.total);
        assert!(r.open_matches_hull && r.join_rule_holds);
    }
    for (n0, t, h) in [(4, 0, 2), (4, 2, 4), (5, 1, 3)] {
        for chi0 in [1i8, -1] {
            let prof = JordanProfile::new(n0, chi0, t, 1);
            let d = duality_check(&prof, h, f.clone()).unwrap();
            assert!(d.same_form && d.bijective && d.labels_preserved, "{d:?}");
            assert_eq!(d.r_count, d.s_count);
        }
    }
}

#[test]
fn degree_estimate_on_surface() {
    for chi in [1i8, -1] {
        let prof = JordanProfile::new(3, 1, 4, chi);
        let s = point_count_series(&prof, 2, 3, 3).unwrap();
        assert_eq!(
            dimension_estimate(&s),
            DegreeEstimate::Conclusive(2),
            "{s:?}"
        );
    }
    assert!(matches!(
        dimension_estimate(&[(3, 0), (9, 2), (27, 0)]),
        DegreeEstimate::Inconclusive(_)
    ));
}

fn field_strategy() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![
        Just((3, 1)),
        Just((3, 3)),
        Just((3, 2)),
        Just((5, 2)),
        Just((7, 1)),
        Just((11, 1))
    ]
}

proptest! {
    #[test]
    fn field_axioms((p, m) in field_strategy(), a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
        let f = FqContext::new(p, m).unwrap();
        let q = f.q() as u16;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.frob(f.mul(a, b)), f.mul(f.frob(a), f.frob(b)));
        prop_assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
        prop_assert_eq!(f.pow(a, q as u64), a);
        prop_assert_eq!(f.is_rational(a), f.frob(a) == a);
    }

    #[test]
    fn subspace_dimension_formula(
        rows_a in prop::collection::vec(prop::collection::vec(0u16..9, 5), 0..4),
        rows_b in prop::collection::vec(prop::collection::vec(0u16..9, 5), 0..4),
    ) {
        let f = FqContext::new(3, 2).unwrap();
        let a = Subspace::span(&f, 5, rows_a);
        let b = Subspace::span(&f, 5, rows_b);
        let s = a.sum(&f, &b);
        let i = a.intersect(&f, &b);
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(s.contains(&f, &a) && a.contains(&f, &i) && b.contains(&f, &i));
        prop_assert_eq!(a.annihilator(&f).dim(), 5 - a.dim());
        prop_assert_eq!(a.annihilator(&f).annihilator(&f), a.clone());
        prop_assert_eq!(a.frobenius(&f).frobenius(&f), a.clone());
        prop_assert_eq!(a.frobenius(&f).dim(), a.dim());
    }
}
