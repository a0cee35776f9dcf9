use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gfsga_core::attack::{
    decode_keystream, encode_keystream, gf2_solve, gfsga_recover, AttackOptions, Gf2LinearSystem,
    KeystreamFile,
};
use gfsga_core::complexity::{constant_sigma_sweep, CUBIC_SOLVER};
use gfsga_core::fixtures::{
    EXAMPLE1_LEN, EXAMPLE1_M, EXAMPLE1_N, EXAMPLE1_TAPS, GRAIN_LEN, GRAIN_NFSR_TAPS,
};
use gfsga_core::optimizer::step_b_best_ordering;
use gfsga_core::sampling::{cyclic_schedule, greedy_schedule};
use gfsga_core::{
    BitVec, FilterSpec, GeneratorSpec, LfsrSpec, Register, SamplingSchedule, StopRule, TapSet, Taps,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn profiles(c: &mut Criterion) {
    let ex1 = TapSet::new(EXAMPLE1_TAPS.to_vec(), EXAMPLE1_LEN).unwrap();
    let grain = TapSet::new(GRAIN_NFSR_TAPS.to_vec(), GRAIN_LEN).unwrap();
    c.bench_function("greedy profile L=80", |b| {
        b.iter(|| greedy_schedule(black_box(&ex1), StopRule::Rank))
    });
    c.bench_function("greedy profile L=128", |b| {
        b.iter(|| greedy_schedule(black_box(&grain), StopRule::Rank))
    });
    c.bench_function("cyclic profile L=80", |b| {
        b.iter(|| cyclic_schedule(black_box(&ex1), StopRule::Rank))
    });
    c.bench_function("step sweep L=80", |b| {
        b.iter(|| constant_sigma_sweep(black_box(&ex1), EXAMPLE1_M, CUBIC_SOLVER))
    });
}

fn optimizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("optimizer");
    g.sample_size(10);
    g.bench_function("step-b over 6 differences", |b| {
        b.iter(|| {
            step_b_best_ordering(
                black_box(&[5, 13, 7, 26, 11, 17]),
                EXAMPLE1_N,
                EXAMPLE1_M,
                EXAMPLE1_LEN,
            )
        })
    });
    g.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let vars = 128;
    let rows = (0..vars + 16)
        .map(|_| {
            let bits: Vec<bool> = (0..vars).map(|_| rng.gen()).collect();
            (BitVec::from_bits(&bits), rng.gen())
        })
        .collect();
    let system = Gf2LinearSystem { vars, rows };
    c.bench_function("gf2 solve 144x128", |b| {
        b.iter(|| gf2_solve(black_box(&system)))
    });
}

fn attack(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let len = 20;
    let gen = GeneratorSpec::new(
        Register::Lfsr(LfsrSpec::primitive(len).unwrap()),
        Taps::Single(TapSet::new(vec![1, 4, 9, 15, 20], len).unwrap()),
        FilterSpec::random_uniform(5, 2, &mut rng).unwrap(),
    )
    .unwrap();
    let state = BitVec::from_u64(0xa5f3e, len);
    let ks = gen.keystream(&state, 2 * len).unwrap();
    let schedule = SamplingSchedule::constant(1, 4 * len);
    let opts = AttackOptions {
        workers: Some(1),
        ..AttackOptions::default()
    };
    let mut g = c.benchmark_group("attack");
    g.sample_size(20);
    g.bench_function("toy LFSR recovery L=20", |b| {
        b.iter(|| gfsga_recover(&gen, black_box(&ks), &schedule, &opts))
    });
    g.finish();

    let file = KeystreamFile {
        n: 5,
        m: 2,
        register_length: len as u32,
        blocks: (0..100_000).map(|_| rng.gen_range(0..4)).collect(),
    };
    c.bench_function("keystream encode+decode 100k", |b| {
        b.iter(|| decode_keystream(&encode_keystream(black_box(&file)).unwrap()).unwrap())
    });
}

criterion_group!(benches, profiles, optimizer, linear_algebra, attack);
criterion_main!(benches);
