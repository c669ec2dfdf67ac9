use basiclocus::padic_quadratic::*;
use proptest::prelude::*;

/// (a, b) = 1 iff z² = ax² + by² has a primitive solution mod p³.
fn hilbert_brute(a: i64, b: i64, p: i64) -> i8 {
    let m = p * p * p;
    let mut is_sq = vec![false; m as usize];
    for z in 0..m {
        is_sq[(z * z % m) as usize] = true;
    }
    for x in 0..m {
        for y in 0..m {
            if x % p == 0 && y % p == 0 {
                continue;
            }
            let r = (a * x % m * x + b * y % m * y).rem_euclid(m);
            if is_sq[r as usize] {
                return 1;
            }
        }
    }
    -1
}

fn rep(c: SquareClass, p: u64) -> i64 {
    let u = if c.unit == 1 {
        1
    } else {
        least_nonsquare(p) as i64
    };
    u * (p as i64).pow(c.val as u32)
}

#[test]
fn hilbert_matches_brute_force() {
    for p in [3u64, 5, 7] {
        for a in [(0, 1), (0, -1), (1, 1), (1, -1)] {
            for b in [(0, 1), (0, -1), (1, 1), (1, -1)] {
                let (ca, cb) = (SquareClass::new(a.0, a.1), SquareClass::new(b.0, b.1));
                let want = hilbert_brute(rep(ca, p), rep(cb, p), p as i64);
                assert_eq!(
                    hilbert_symbol(ca, cb, p).unwrap(),
                    want,
                    "p={p} a={a:?} b={b:?}"
                );
            }
        }
    }
}

#[test]
fn classification_matches_profile_search() {
    for p in [3u64, 5] {
        for n in 1..=8 {
            for inv in SpaceInvariants::all_tuples(n) {
                let searched = types_by_profile_search(&inv, p);
                match vertex_extremes(&inv, p) {
                    Ok(ext) => {
                        assert_eq!(ext.allowed_types, searched, "p={p} {inv:?}");
                        assert_eq!(ext.lambda_min.type_t(), *searched.iter().next().unwrap());
                        assert_eq!(
                            ext.lambda_max.type_t(),
                            *searched.iter().next_back().unwrap()
                        );
                    }
                    Err(_) => {
                        assert!(
                            searched.is_empty(),
                            "p={p} {inv:?} has lattices {searched:?}"
                        );
                        assert!(!is_realizable(&inv, p));
                    }
                }
            }
        }
    }
}

#[test]
fn phi_table_matches_twist() {
    for p in [3u64, 5] {
        for n in 3..=8 {
            for inv in SpaceInvariants::all_tuples(n) {
                if !is_realizable(&inv, p) {
                    continue;
                }
                let tw = vertex_extremes(&phi_twist(&inv).unwrap(), p).unwrap();
                let table = vphi_table(&inv, p).unwrap();
                assert_eq!(table, (tw.lambda_max, tw.lambda_min), "p={p} {inv:?}");
            }
        }
    }
}

#[test]
fn every_realizable_tuple_has_a_vertex_lattice() {
    for p in [3u64, 5, 7] {
        for n in 1..=8 {
            let count = SpaceInvariants::all_tuples(n)
                .iter()
                .filter(|i| is_realizable(i, p))
                .count();
            let want = match n {
                1 => 4,
                2 => 7,
                _ => 8,
            };
            assert_eq!(count, want, "p={p} n={n}");
        }
    }
}

fn arb_form() -> impl Strategy<Value = (u64, Vec<(i32, i8)>)> {
    (
        prop::sample::select(vec![3u64, 5, 7, 11]),
        prop::collection::vec((0i32..4, prop::sample::select(vec![1i8, -1])), 1..7),
    )
}

proptest! {
    #[test]
    fn profile_formulas_match_direct_invariants(
        p in prop::sample::select(vec![3u64, 5, 7]),
        n0 in 0usize..6, n1 in 0usize..6,
        c0 in prop::sample::select(vec![1i8, -1]),
        c1 in prop::sample::select(vec![1i8, -1]),
    ) {
        prop_assume!(n0 + n1 > 0);
        let prof = JordanProfile::new(n0, c0, n1, c1);
        let f = prof.realize(p).unwrap();
        prop_assert_eq!(jordan_profile(&f).unwrap(), prof);
        prop_assert_eq!(space_invariants(&f), prof.invariants(p));
        prop_assert_eq!(sharp_dual(&sharp_dual(&prof)), prof);
    }

    #[test]
    fn witt_decomposition_is_consistent((p, e) in arb_form()) {
        let f = PAdicForm::new(p, e).unwrap();
        let inv = space_invariants(&f);
        let wd = witt_decompose(&inv, p).unwrap();
        prop_assert_eq!(2 * wd.witt_index + wd.kernel_dim(), inv.dim);
        prop_assert!(wd.kernel_dim() <= 4);
        if let Some(k) = wd.anisotropic_kernel {
            prop_assert_eq!(witt_decompose(&k, p).unwrap().witt_index, 0);
        }
    }

    #[test]
    fn hilbert_is_symmetric_and_bimultiplicative(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        a in (0i32..3, prop::sample::select(vec![1i8, -1])),
        b in (0i32..3, prop::sample::select(vec![1i8, -1])),
        c in (0i32..3, prop::sample::select(vec![1i8, -1])),
    ) {
        let (a, b, c) = (SquareClass::new(a.0, a.1), SquareClass::new(b.0, b.1), SquareClass::new(c.0, c.1));
        let hs = |x, y| hilbert_symbol(x, y, p).unwrap();
        prop_assert_eq!(hs(a, b), hs(b, a));
        prop_assert_eq!(hs(a, b.mul(c)), hs(a, b) * hs(a, c));
        prop_assert_eq!(hs(a, SquareClass::new(a.val, a.unit * chi_minus_one(p))), 1);
    }

    #[test]
    fn diagonalize_preserves_invariants(
        p in prop::sample::select(vec![3u64, 5, 7]),
        m in prop::collection::vec(-9i64..10, 9),
    ) {
        // G = Aᵀ D A with A a random integer matrix and D diagonal.
        let n = 3;
        let d = [1i64, p as i64, (p * p) as i64 * 2];
        let a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| m[i * n + j]).collect()).collect();
        let mut det = 0i64;
        for j in 0..n {
            det += a[0][j] * (a[1][(j + 1) % 3] * a[2][(j + 2) % 3] - a[1][(j + 2) % 3] * a[2][(j + 1) % 3]);
        }
        prop_assume!(det != 0);
        let g: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[k][i] * d[k] * a[k][j]).sum()).collect()).collect();
        let f1 = diagonalize(&g, p).unwrap();
        let f2 = diagonalize(&[vec![d[0], 0, 0], vec![0, d[1], 0], vec![0, 0, d[2]]], p).unwrap();
        prop_assert!(isometric(&f1, &f2).unwrap());
    }
}
