use basiclocus::finite_orthogonal::{FqContext, GrowthVariety};
use basiclocus::special_lattices::{
    case_list, howell_form, sweep_case, SweepConfig, WVec, WittRing,
};
use basiclocus::JordanProfile;
use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn field_ops(c: &mut Criterion) {
    let f = FqContext::new(3, 3).unwrap();
    let elems: Vec<_> = f.elements().collect();
    c.bench_function("fq_27_mul_all_pairs", |b| {
        b.iter(|| {
            let mut acc = f.from_int(1);
            for &x in &elems {
                for &y in &elems {
                    acc = f.add(acc, f.mul(x, y));
                }
            }
            black_box(acc)
        })
    });
    c.bench_function("fq_27_frobenius_inverse", |b| {
        b.iter(|| {
            elems[1..].iter().for_each(|&x| {
                black_box(f.inv(f.frob(x)).unwrap());
            })
        })
    });
}

fn howell(c: &mut Criterion) {
    let ring = WittRing::new(3, 3, 4).unwrap();
    let q = ring.modulus_p_k() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut random_rows = move || -> Vec<WVec> {
        (0..6)
            .map(|_| {
                (0..5)
                    .map(|_| {
                        let mut x = ring.from_int(rng.gen_range(0..q));
                        for _ in 1..ring.m {
                            x = ring.add(
                                &ring.mul(&x, &ring.gen()),
                                &ring.from_int(rng.gen_range(0..q)),
                            );
                        }
                        x
                    })
                    .collect()
            })
            .collect()
    };
    let ring = WittRing::new(3, 3, 4).unwrap();
    c.bench_function("howell_form_6x5_gr_81_3", |b| {
        b.iter_batched(
            &mut random_rows,
            |rows| howell_form(&ring, rows, 5),
            BatchSize::SmallInput,
        )
    });
}

fn enumeration(c: &mut Criterion) {
    let f = Arc::new(FqContext::new(3, 2).unwrap());
    let var = GrowthVariety::s_lambda(&JordanProfile::new(2, 1, 4, -1), 2, f).unwrap();
    c.bench_function("s_lambda_points_t4_h2_q9", |b| {
        b.iter(|| var.points().len())
    });
}

fn sweep(c: &mut Criterion) {
    let cases = case_list(3, 3);
    let cfg = SweepConfig::default_for(3);
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("special_sweep_n3_m3", |b| {
        b.iter(|| {
            cases
                .iter()
                .map(|k| sweep_case(k, &cfg).unwrap().count)
                .sum::<usize>()
        })
    });
    g.finish();
}

criterion_group!(benches, field_ops, howell, enumeration, sweep);
criterion_main!(benches);
