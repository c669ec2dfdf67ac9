use basiclocus::coxeter_weyl::*;
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Word length of every group element by breadth-first search on generators.
fn bfs_lengths(kind: Kind, d: usize, gens: &[SignedPerm]) -> BTreeMap<SignedPerm, usize> {
    let mut dist = BTreeMap::new();
    let id = SignedPerm::identity(kind, d);
    dist.insert(id.clone(), 0);
    let mut q = VecDeque::from([id]);
    while let Some(w) = q.pop_front() {
        let l = dist[&w];
        for s in gens {
            let x = s.compose(&w).unwrap();
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), l + 1);
                q.push_back(x);
            }
        }
    }
    dist
}

fn group_order(kind: Kind, d: usize) -> usize {
    let f: usize = (1..=d).product();
    match kind {
        Kind::A => f,
        Kind::B => f << d,
        Kind::D => f << (d - 1),
    }
}

#[test]
fn inversion_count_equals_word_length() {
    for (kind, d) in [
        (Kind::A, 4),
        (Kind::B, 1),
        (Kind::B, 2),
        (Kind::B, 3),
        (Kind::B, 4),
        (Kind::D, 2),
        (Kind::D, 3),
        (Kind::D, 4),
    ] {
        let gens = generators(kind, d).unwrap();
        let all = bfs_lengths(kind, d, &gens);
        assert_eq!(all.len(), group_order(kind, d), "{kind:?}{d}");
        for (w, l) in &all {
            assert_eq!(length(w), *l, "{kind:?}{d} {w:?}");
        }
    }
}

#[test]
fn generator_windows() {
    let g = generators(Kind::B, 3).unwrap();
    assert_eq!(g[1].window, vec![2, 1, 3]);
    assert_eq!(g[2].window, vec![-1, 2, 3]);
    let g = generators(Kind::D, 4).unwrap();
    assert_eq!(g[3].window, vec![-2, -1, 3, 4]);
    assert_eq!(g[2].window, vec![2, 1, 3, 4]);
    assert!(generators(Kind::D, 1).is_err());
    assert!(generators(Kind::B, 0).is_err());
}

fn brute_longest(i: &ParabolicSet) -> usize {
    let gens = i.reflections();
    bfs_lengths(i.kind, i.rank, &gens)
        .keys()
        .map(length)
        .max()
        .unwrap()
}

#[test]
fn longest_parabolic_matches_brute_force_and_formula() {
    for t in 2..=10 {
        for h in (t % 2..=t).step_by(2) {
            let Ok(o) = OrthoSetup::new(t, h) else {
                continue;
            };
            let il = o.i_lambda().unwrap();
            let want = longest_parabolic_formula(h);
            assert_eq!(longest_parabolic_length(&il), want, "t={t} h={h}");
            if o.d <= 4 {
                assert_eq!(brute_longest(&il), want, "t={t} h={h}");
            }
        }
    }
    let o = OrthoSetup::new(9, 5).unwrap();
    assert_eq!(brute_longest(&o.i_lambda().unwrap()), 4);
}

#[test]
fn paper_elements_are_minimal_with_expected_lengths() {
    for t in 2..=14 {
        for h in (t % 2..=t).step_by(2) {
            let Ok(o) = OrthoSetup::new(t, h) else {
                continue;
            };
            for r in 0..=o.r_max() {
                let i = o.i_r(r).unwrap();
                let signs: &[i8] = if h == 0 { &[1, -1] } else { &[1] };
                for &sg in signs {
                    if h == 0 && r == o.d {
                        assert!(o.w_r(r, sg).is_err());
                        continue;
                    }
                    let w = o.w_r(r, sg).unwrap();
                    assert!(is_minimal_rep(&w, &i), "w_r t={t} h={h} r={r}");
                    let wl = o.w_r_word(r, sg).unwrap().len();
                    assert_eq!(length(&w), wl, "w_r reduced t={t} h={h} r={r}");
                    if h >= 1 && r >= 1 {
                        assert_eq!(length(&w), r + h - 1, "t={t} h={h} r={r}");
                    }
                }
                if h >= 2 && r >= 1 {
                    let signs: &[i8] = if h == 2 && o.kind == Kind::D {
                        &[1, -1]
                    } else {
                        &[1]
                    };
                    for &sg in signs {
                        let w = o
                            .w_r_prime(r, sg)
                            .unwrap_or_else(|e| panic!("t={t} h={h} r={r} {e}"));
                        assert!(is_minimal_rep(&w, &i), "w_r' t={t} h={h} r={r}");
                        assert_eq!(length(&w), r);
                    }
                }
            }
        }
    }
}

#[test]
fn even_w_r_window_matches_closed_form() {
    for t in (6..=14).step_by(2) {
        for h in (4..=t).step_by(2) {
            let o = OrthoSetup::new(t, h).unwrap();
            for r in 1..=o.r_max() {
                let d = o.d as i32;
                let hh = h as i32 / 2;
                let r = r as i32;
                let mut want = vec![-1];
                want.extend(2..=hh);
                want.extend(hh + 2..=hh + r);
                want.push(-(hh + 1));
                want.extend(hh + r + 1..=d);
                assert_eq!(
                    o.w_r(r as usize, 1).unwrap().window,
                    want,
                    "t={t} h={h} r={r}"
                );
            }
        }
    }
}

#[test]
fn dl_dimensions() {
    for t in 3..=14 {
        for h in (1 + t % 2..t).step_by(2) {
            let Ok(o) = OrthoSetup::new(t, h) else {
                continue;
            };
            let il = o.i_lambda().unwrap();
            let w = o.w_lambda().unwrap();
            assert_eq!(
                dl_dimension(&il, &w).unwrap(),
                (t + h) / 2 - 1,
                "t={t} h={h}"
            );
            if h >= 2 {
                let wp = o.w_r_prime(o.r_max(), 1).unwrap();
                assert_eq!(
                    dl_dimension(&il, &wp).unwrap(),
                    (t + h) / 2 - 2,
                    "t={t} h={h}"
                );
            }
            let dims: Vec<usize> = (0..=o.r_max())
                .map(|r| dl_dimension(&o.i_r(r).unwrap(), &o.w_r(r, 1).unwrap()).unwrap())
                .collect();
            assert!(dims.windows(2).all(|p| p[0] < p[1]), "t={t} h={h} {dims:?}");
        }
    }
}

#[test]
fn linear_elements() {
    for t in 1..=12 {
        for h in (t % 2..=t).step_by(2) {
            for tp in (h % 2..=h).step_by(2) {
                let Ok(ls) = LinearSetup::new(t, h, tp) else {
                    continue;
                };
                for (r, s) in ls.legal_pairs() {
                    let w = ls.w_rs(r, s).unwrap();
                    assert_eq!(length(&w), r + s);
                    if r <= (t - h) / 2 {
                        let i = ls.i_rs(r, s).unwrap();
                        assert!(is_minimal_rep(&w, &i), "t={t} h={h} t'={tp} r={r} s={s}");
                    }
                    if s >= 1 {
                        let k = ((t - h) / 2) as i32;
                        assert_eq!(w.apply(k - r as i32), k + 1);
                        assert_eq!(w.apply(k + s as i32), k);
                    }
                }
                let rm = (t - h) / 2;
                if rm >= 1 {
                    let top = ls.w_rs(rm - 1, ls.s_max()).unwrap();
                    let e = ParabolicSet::empty(Kind::A, ls.n() + 1);
                    assert_eq!(dl_dimension(&e, &top).unwrap(), (t - tp) / 2);
                }
            }
        }
    }
}

#[test]
fn conjugate_intersection_of_w_lambda_is_everything() {
    for t in (6..=12).step_by(2) {
        let o = OrthoSetup::new(t, 4).unwrap();
        let il = o.i_lambda().unwrap();
        assert_eq!(conjugate_intersection(&o.w_lambda().unwrap(), &il), il);
    }
}

#[test]
fn printed_i_r_for_h1_differs_only_for_middle_r() {
    let o = OrthoSetup::new(9, 1).unwrap();
    let printed: BTreeSet<usize> = o.i_r_printed(1).unwrap().members;
    assert_eq!(printed, BTreeSet::from([1, 3]));
    assert_eq!(o.i_r(1).unwrap().members, BTreeSet::from([1, 2]));
    assert_eq!(o.i_r(0).unwrap(), o.i_r_printed(0).unwrap());
    assert_eq!(o.i_lambda().unwrap(), o.i_r_printed(o.r_max()).unwrap());
}

fn arb_elt(kind: Kind, d: usize) -> impl Strategy<Value = SignedPerm> {
    let n = if kind == Kind::A { d - 1 } else { d };
    prop::collection::vec(1..=n, 0..12).prop_map(move |w| word(kind, d, &w).unwrap())
}

proptest! {
    #[test]
    fn simple_multiplication_changes_length_by_one(
        (kind, d) in prop::sample::select(vec![(Kind::B, 5), (Kind::D, 5), (Kind::A, 6), (Kind::B, 2), (Kind::D, 3)]),
        letters in prop::collection::vec(1usize..=6, 0..14),
    ) {
        let top = if kind == Kind::A { d - 1 } else { d };
        let letters: Vec<usize> = letters.into_iter().map(|x| 1 + (x - 1) % top).collect();
        let w = word(kind, d, &letters).unwrap();
        for s in generators(kind, d).unwrap() {
            let a = length(&s.compose(&w).unwrap()) as i64 - length(&w) as i64;
            let b = length(&w.compose(&s).unwrap()) as i64 - length(&w) as i64;
            prop_assert_eq!(a.abs(), 1);
            prop_assert_eq!(b.abs(), 1);
            prop_assert!(s.compose(&s).unwrap().is_identity());
        }
        prop_assert!(w.compose(&w.inverse()).unwrap().is_identity());
        prop_assert_eq!(length(&w), length(&w.inverse()));
    }

    #[test]
    fn length_is_subadditive(a in arb_elt(Kind::B, 4), b in arb_elt(Kind::B, 4)) {
        prop_assert!(length(&a.compose(&b).unwrap()) <= length(&a) + length(&b));
    }
}
