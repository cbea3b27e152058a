use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omegaclone::finite::{generate_clone, pol, FinOp, FinRel};
use omegaclone::galois::{duedue2_condition4_check, SearchBounds};
use omegaclone::omega_ops::{generate_omega_clone, ROp};
use omegaclone::omega_rel::{local_closure, EvSet};
use omegaclone::FiniteDomain;

fn dom(n: usize) -> FiniteDomain {
    FiniteDomain::new(n).unwrap()
}

fn finite(c: &mut Criterion) {
    let d2 = dom(2);
    let maj = FinOp::from_fn(d2, 3, |x| (x[0] & x[1]) | (x[1] & x[2]) | (x[0] & x[2])).unwrap();
    c.bench_function("clone of majority, arity 3", |b| {
        b.iter(|| generate_clone(d2, black_box(std::slice::from_ref(&maj)), 3).unwrap())
    });

    let d3 = dom(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gens: Vec<FinOp> =
        (0..2).map(|_| FinOp::new(d3, 2, (0..9).map(|_| rng.gen_range(0..3)).collect()).unwrap()).collect();
    let mut slow = c.benchmark_group("slow");
    slow.sample_size(10);
    slow.bench_function("clone of two random binary ops on 3 elements, arity 2", |b| {
        b.iter(|| generate_clone(d3, black_box(&gens), 2).unwrap())
    });
    slow.finish();

    let leq = FinRel::from_tuples(d2, 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
    c.bench_function("pol of order, arity 3", |b| b.iter(|| pol(d2, black_box(std::slice::from_ref(&leq)), 3).unwrap()));
}

fn omega(c: &mut Criterion) {
    let d2 = dom(2);
    let tail = ROp::tail_op(d2);
    c.bench_function("omega clone of tail, width 2", |b| {
        b.iter(|| generate_omega_clone(d2, black_box(std::slice::from_ref(&tail)), 2).unwrap())
    });

    let r: EvSet = "0* | 1".parse().unwrap();
    let closure = local_closure(d2, &r).unwrap();
    let s = "0 0 0 0 0 0 0 0 | 0".parse().unwrap();
    c.bench_function("limit membership at depth 12", |b| b.iter(|| closure.lim_membership(black_box(&s), 12).unwrap()));

    let c0 = ROp::constant(d2, 0).unwrap();
    let bounds = SearchBounds { depth: 3, prefix: 3, columns: 3, alpha: 3 };
    c.bench_function("row-injective check of tail over projections", |b| {
        b.iter(|| duedue2_condition4_check(black_box(&tail), &[], bounds).unwrap())
    });
    c.bench_function("row-injective check of a constant over projections", |b| {
        b.iter(|| duedue2_condition4_check(black_box(&c0), &[], bounds).unwrap())
    });
}

criterion_group!(benches, finite, omega);
criterion_main!(benches);
