use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use hcolour_bench::{regular, triangle_free};
use hcolour_core::colouring::{colour, iterated_split, phase2_finish, random_cover, ColourConfig, FinishingFactor};
use hcolour_core::graph::{max_average_degree, petersen};
use hcolour_core::hardcore::{exact_sample, independence_polynomial, Fugacity};
use hcolour_core::occupancy::{mad_params, uniform_from, verify_local_occupancy};
use hcolour_core::seeded_rng;
use hcolour_core::special::{k_function, lambert_w0};
use std::hint::black_box;

fn polynomial(c: &mut Criterion) {
    let g = regular(40, 3);
    c.bench_function("independence polynomial, cubic n=40", |b| b.iter(|| independence_polynomial(black_box(&g)).unwrap()));
}

fn special(c: &mut Criterion) {
    c.bench_function("lambert w0 + K", |b| b.iter(|| lambert_w0(black_box(1234.5)).unwrap() + k_function(black_box(17.0)).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let g = regular(60, 3);
    let lambda = Fugacity::new(1.0).unwrap();
    let mut rng = seeded_rng(1);
    c.bench_function("exact sample, cubic n=60", |b| b.iter(|| exact_sample(&g, lambda, &mut rng).unwrap()));
}

fn occupancy(c: &mut Criterion) {
    let g = triangle_free(60, 8);
    let lambda = Fugacity::new(0.5).unwrap();
    let form = mad_params(0.0, g.max_degree() as f64, lambda).unwrap();
    let p = uniform_from(&g, lambda, &form).unwrap().strong(true);
    c.bench_function("strong verification, triangle-free n=60", |b| b.iter(|| verify_local_occupancy(&g, &p).unwrap()));
    let pet = petersen();
    c.bench_function("max average degree, petersen", |b| b.iter(|| max_average_degree(black_box(&pet)).unwrap()));
}

fn colouring(c: &mut Criterion) {
    let g = triangle_free(30, 6);
    let cover = random_cover(&g, 30, &mut seeded_rng(2)).unwrap();
    let ell = vec![12; g.n()];
    let lambda = Fugacity::new(0.2).unwrap();
    let config = ColourConfig { phase1_rounds: 50, phase2_rounds: 200, ..Default::default() };
    c.bench_function("two-phase colouring, n=30, k=30", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            colour(&cover, lambda, &ell, &config, seed)
        })
    });
    let cubic = regular(30, 3);
    let cover = random_cover(&cubic, 24, &mut seeded_rng(3)).unwrap();
    let ell = vec![24; 30];
    c.bench_function("finishing phase, cubic n=30, k=24", |b| {
        b.iter_batched(
            || seeded_rng(4),
            |mut rng| phase2_finish(&cover, &ell, 1000, FinishingFactor::Eighth, &mut rng).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let dense = regular(200, 6);
    c.bench_function("iterated split, 6-regular n=200", |b| {
        b.iter_batched(|| seeded_rng(5), |mut rng| iterated_split(&dense, 1.01, 0.005, 0.04, 500, &mut rng).unwrap(), BatchSize::SmallInput)
    });
}

criterion_group!(benches, polynomial, special, sampling, occupancy, colouring);
criterion_main!(benches);
