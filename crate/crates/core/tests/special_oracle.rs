use basiclocus::finite_orthogonal::FqContext;
use basiclocus::padic_quadratic::SpaceInvariants;
use basiclocus::special_lattices::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

fn random_w(ring: &WittRing, rng: &mut impl Rng) -> W {
    let mut w = ring.zero();
    for c in w.iter_mut().take(ring.m) {
        *c = rng.gen_range(0..ring.modulus_p_k()) as u32;
    }
    w
}

#[test]
fn witt_ring_sigma_is_a_ring_lift_of_frobenius() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, m, k) in [
        (3, 1, 4),
        (3, 2, 4),
        (3, 3, 5),
        (3, 4, 4),
        (5, 2, 3),
        (7, 3, 2),
    ] {
        let ring = WittRing::new(p, m, k).unwrap();
        let f = FqContext::new(p, m).unwrap();
        for _ in 0..100 {
            let a = random_w(&ring, &mut rng);
            let b = random_w(&ring, &mut rng);
            assert_eq!(
                ring.sigma(&ring.add(&a, &b)),
                ring.add(&ring.sigma(&a), &ring.sigma(&b))
            );
            assert_eq!(
                ring.sigma(&ring.mul(&a, &b)),
                ring.mul(&ring.sigma(&a), &ring.sigma(&b))
            );
            assert_eq!(ring.residue(&ring.sigma(&a)), f.frob(ring.residue(&a)));
            assert_eq!(
                ring.residue(&ring.mul(&a, &b)),
                f.mul(ring.residue(&a), ring.residue(&b))
            );
            let mut s = a;
            for _ in 0..m {
                s = ring.sigma(&s);
            }
            assert_eq!(s, a, "σ^m = id for p={p} m={m}");
            if m == 1 {
                assert_eq!(ring.sigma(&a), a);
            }
            if ring.is_unit(&a) {
                assert_eq!(ring.mul(&a, &ring.inv(&a).unwrap()), ring.one());
            }
        }
        // σ(x) has residue x^p
        let g = ring.gen();
        assert_eq!(ring.residue(&ring.sigma(&g)), f.pow(ring.residue(&g), p));
    }
}

#[test]
fn reducible_structural_polynomial_rejected() {
    assert!(WittRing::with_modulus(3, 2, 4, vec![0, 0]).is_err());
    assert!(WittRing::with_modulus(3, 2, 4, vec![2, 0]).is_err()); // x^2 + 2 = (x−1)(x+1)
    assert!(WittRing::with_modulus(3, 2, 4, vec![1, 0]).is_ok());
    assert!(WittRing::new(2, 2, 4).is_err());
    assert!(WittRing::new(3, 2, 1).is_err());
}

fn all_vectors(ring: &WittRing, n: usize) -> Vec<WVec> {
    let elems: Vec<W> = {
        let pk = ring.modulus_p_k();
        let mut out = vec![ring.zero()];
        for i in 0..ring.m {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..pk).map(move |c| {
                        let mut v = w;
                        v[i] = c as u32;
                        v
                    })
                })
                .collect();
        }
        out
    };
    let mut out: Vec<WVec> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(*e);
                    w
                })
            })
            .collect();
    }
    out
}

/// The submodule generated by `gens`, by closure under addition and scalars.
fn brute_span(ring: &WittRing, n: usize, gens: &[WVec]) -> BTreeSet<WVec> {
    let scalars = all_vectors(ring, 1);
    let mut span: BTreeSet<WVec> = BTreeSet::new();
    span.insert(vec![ring.zero(); n]);
    for g in gens {
        let multiples: Vec<WVec> = scalars
            .iter()
            .map(|s| g.iter().map(|x| ring.mul(&s[0], x)).collect())
            .collect();
        let mut next = BTreeSet::new();
        for v in &span {
            for w in &multiples {
                next.insert(v.iter().zip(w).map(|(a, b)| ring.add(a, b)).collect());
            }
        }
        span = next;
    }
    span
}

#[test]
fn howell_form_matches_brute_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, m, k, n) in [(3, 1, 2, 3), (3, 1, 3, 2), (3, 2, 2, 2), (5, 1, 2, 2)] {
        let ring = WittRing::new(p, m, k).unwrap();
        let universe = all_vectors(&ring, n);
        for _ in 0..20 {
            let count = rng.gen_range(1..=3);
            let gens: Vec<WVec> = (0..count)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let w = random_w(&ring, &mut rng);
                            // bias toward non-units so that torsion pivots appear
                            let e = rng.gen_range(0..k as u32);
                            ring.scale(&w, p.pow(e))
                        })
                        .collect()
                })
                .collect();
            let span = brute_span(&ring, n, &gens);
            let form = howell_form(&ring, gens.clone(), n);
            for v in &universe {
                assert_eq!(
                    howell_contains(&ring, &form, v),
                    span.contains(v),
                    "p={p} m={m} k={k}"
                );
            }
            // the form depends only on the submodule
            let mut mixed = gens.clone();
            for _ in 0..3 {
                let pick: Vec<&WVec> = span.iter().collect();
                mixed.push(pick[rng.gen_range(0..pick.len())].clone());
            }
            mixed.reverse();
            assert_eq!(howell_form(&ring, mixed, n), form);
            let squared: usize = span.len();
            let length: usize = form
                .iter()
                .map(|r| {
                    let c = r.iter().position(|x| !ring.is_zero(x)).unwrap();
                    k - ring.valuation(&r[c])
                })
                .sum();
            assert_eq!(squared, (p.pow(m as u32) as usize).pow(length as u32));
        }
    }
}

fn window(diag: Vec<(i64, u32)>, m: usize) -> Arc<AmbientWindow> {
    let n = diag.len();
    let ring = WittRing::new(3, m, 4).unwrap();
    let frame = WindowFrame {
        n,
        diag,
        a: 2,
        b: 2,
        phi_matrix: (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect(),
    };
    AmbientWindow::new(ring, frame).unwrap()
}

/// pL₀ ⊆ X ⊆ p^{−1}L₀ from a few random generators.
fn random_lattice(win: &AmbientWindow, rng: &mut impl Rng) -> WittLattice {
    let ring = &win.ring;
    let n = win.n();
    let mut rows: Vec<WVec> = (0..n)
        .map(|i| {
            let mut v = vec![ring.zero(); n];
            v[i] = ring.from_int(27);
            v
        })
        .collect();
    for _ in 0..rng.gen_range(1..=n) {
        rows.push(
            (0..n)
                .map(|_| ring.scale(&random_w(ring, rng), 3))
                .collect(),
        );
    }
    win.from_scaled(rows)
}

#[test]
fn dual_is_an_involution_and_fixes_self_dual_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let win = window(vec![(1, 0), (1, 0), (2, 0)], 2);
    let l0 = win.base();
    assert_eq!(win.dual(&l0).unwrap(), l0);
    let win = window(vec![(1, 0), (1, 1), (2, 1), (1, 0)], 2);
    for _ in 0..50 {
        let x = random_lattice(&win, &mut rng);
        let xd = win.dual(&x).unwrap();
        assert_eq!(win.dual(&xd).unwrap(), x);
        let y = random_lattice(&win, &mut rng);
        // (X + Y)^∨ = X^∨ ∩ Y^∨
        assert_eq!(
            win.dual(&win.sum(&x, &y)).unwrap(),
            win.intersect(&xd, &win.dual(&y).unwrap())
        );
        let i = win.intersect(&x, &y);
        assert!(win.contains(&x, &i) && win.contains(&y, &i));
        assert_eq!(
            win.length(&win.sum(&x, &y)) + win.length(&i),
            win.length(&x) + win.length(&y)
        );
    }
}

#[test]
fn vertex_lattice_types_and_duals() {
    // L₀ with Gram diag(1, 3, 6, 1): type 2, and the star above it
    let win = window(vec![(1, 0), (1, 1), (2, 1), (1, 0)], 1);
    let seeds = star_seeds(&win).unwrap();
    assert!(seeds.iter().any(|s| s.lattice == win.base() && s.t == 2));
    for s in &seeds {
        let q = ResidueQuotient::new(&win, &s.dual, &s.lattice, ResidueSide::Lattice).unwrap();
        assert_eq!(q.dim(), s.t);
        assert_eq!(win.index(&s.dual, &s.lattice).unwrap(), s.t);
        // type of pΛ^∨ read against p·( , ) is n − t
        let pd = win.times_p(&s.dual).unwrap();
        assert_eq!(win.index(&s.lattice, &pd).unwrap(), win.n() - s.t);
    }
}

#[test]
fn invariant_vertex_lattice_is_special_with_no_growth() {
    let win = window(vec![(1, 0), (1, 1), (2, 1), (1, 0)], 2);
    let base = win.base();
    let cert = is_special(&win, &base, 2).unwrap();
    assert!(cert.special && cert.growth == 0 && cert.dual_index == Some(2));
    assert_eq!(kr_case(&win, &base).unwrap(), KrCase::Both);
    let v = crucial_dichotomy(&win, &base, 2).unwrap();
    assert!(v.ok());
    assert_eq!((v.c, v.d, v.case1, v.case2), (0, 0, Some(2), Some(2)));
    assert!(!is_special(&win, &base, 0).unwrap().special);
    // seed of type h gives exactly one special, itself
    let field = Arc::new(FqContext::new(3, 2).unwrap());
    let seeds = star_seeds(&win).unwrap();
    let s = seeds.iter().find(|s| s.lattice == base).unwrap();
    for side in [FamilySide::Z, FamilySide::Y] {
        let (pts, complete) = family_lattices(&win, s, side, 2, &field, None).unwrap();
        assert!(complete);
        assert_eq!(pts, vec![base.clone()]);
    }
}

#[test]
fn perturbed_lattice_is_not_special() {
    let win = window(vec![(1, 0), (1, 1), (2, 1), (1, 0)], 2);
    let ring = &win.ring;
    let base = win.base();
    // add p^{-1}e_0: the dual shrinks and M ⊄ M^∨
    let mut extra = vec![ring.zero(); 4];
    extra[0] = ring.from_int(3);
    let mut rows = base.rows.clone();
    rows.push(extra);
    let bad = win.from_scaled(rows);
    let cert = is_special(&win, &bad, 2).unwrap();
    assert!(!cert.special && !cert.upper && cert.dual_index.is_none());
    // drop to pL₀ + (e_1, e_2, e_3): contained in its dual with the wrong index
    let mut rows: Vec<WVec> = base.rows[1..].to_vec();
    let mut pe0 = vec![ring.zero(); 4];
    pe0[0] = ring.from_int(27);
    rows.push(pe0);
    let small = win.from_scaled(rows);
    let cert = is_special(&win, &small, 2).unwrap();
    assert!(!cert.special);
    assert_eq!(cert.dual_index, Some(4));
}

#[test]
fn z_lift_from_a_larger_seed_has_verdict_two() {
    // Λ of type 4 in a split 4-space over F_9, specials of type 2
    let win = window(vec![(1, 1), (1, 1), (1, 1), (1, 1)], 2);
    let field = Arc::new(FqContext::new(3, 2).unwrap());
    let base = win.base();
    let seed = vertex_seed(&win, &base).unwrap();
    assert_eq!(seed.t, 4);
    let (pts, complete) = family_lattices(&win, &seed, FamilySide::Z, 2, &field, None).unwrap();
    assert!(complete && !pts.is_empty());
    for m in &pts {
        assert!(is_special(&win, m, 2).unwrap().special);
        assert!(sharp_transport(&win, m, 2).unwrap());
        let v = crucial_dichotomy(&win, m, 2).unwrap();
        assert!(v.ok(), "{v:?}");
        assert!(v.case2.is_some());
        assert!(win.contains(&v.lower, &base) && win.contains(m, &v.lower));
    }
}

#[test]
fn small_sweep_passes() {
    let v = SpaceInvariants::all_tuples(3)
        .into_iter()
        .find(|v| basiclocus::padic_quadratic::is_realizable(v, 3))
        .unwrap();
    for c in case_list(3, 3).into_iter().filter(|c| c.v == v) {
        let mut cfg = SweepConfig::default_for(3);
        cfg.m = 2;
        let r = sweep_case(&c, &cfg).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.complete && r.count > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dual_type_is_complementary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let win = window(vec![(1, 0), (2, 1), (1, 1)], 3);
        let x = random_lattice(&win, &mut rng);
        let xd = win.dual(&x).unwrap();
        prop_assert_eq!(win.dual(&xd).unwrap(), x.clone());
        if win.contains(&xd, &x) && win.contains(&x, &win.times_p(&xd).unwrap()) {
            let t = win.index(&xd, &x).unwrap();
            // the dual read against p·( , ) is p^{-1}X, of type n − t
            let sharp = win.div_p(&x).unwrap();
            prop_assert_eq!(win.index(&sharp, &xd).unwrap(), win.n() - t);
        }
        prop_assert_eq!(win.phi(&win.phi(&win.phi(&x).unwrap()).unwrap()).unwrap(), x);
    }
}
