use gfsga_core::attack::{
    candidate_tree_size, decode_keystream, encode_keystream, filtered_preimages, gf2_solve,
    gfsga_recover, AttackOptions, Echelon, Gf2LinearSystem, Gf2Solution, Insert, KeystreamFile,
};
use gfsga_core::registers::preimage_table;
use gfsga_core::sampling::greedy_schedule;
use gfsga_core::{BitVec, FilterSpec, GeneratorSpec, LfsrSpec, Register, StopRule, TapSet, Taps};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_row(rng: &mut ChaCha8Rng, vars: usize) -> BitVec {
    let bits: Vec<bool> = (0..vars).map(|_| rng.gen()).collect();
    BitVec::from_bits(&bits)
}

#[test]
fn full_rank_systems_recover_the_planted_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut trials = 0;
    while trials < 1000 {
        let x = random_row(&mut rng, 64);
        let rows: Vec<(BitVec, bool)> = (0..64)
            .map(|_| {
                let r = random_row(&mut rng, 64);
                let b = r.and_parity(&x);
                (r, b)
            })
            .collect();
        match gf2_solve(&Gf2LinearSystem {
            vars: 64,
            rows: rows.clone(),
        }) {
            Gf2Solution::Unique(s) => {
                assert_eq!(s, x);
                for (r, b) in &rows {
                    assert_eq!(r.and_parity(&s), *b);
                }
                trials += 1;
            }
            Gf2Solution::Underdetermined { rank } => assert!(rank < 64),
            Gf2Solution::Inconsistent => panic!("consistent system reported inconsistent"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn classification_matches_brute_force(vars in 1usize..=10, rows in 0usize..14, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys: Vec<(BitVec, bool)> = (0..rows).map(|_| (random_row(&mut rng, vars), rng.gen())).collect();
        let sols: Vec<u64> = (0..1u64 << vars)
            .filter(|&a| {
                let x = BitVec::from_u64(a, vars);
                sys.iter().all(|(r, b)| r.and_parity(&x) == *b)
            })
            .collect();
        let mut e = Echelon::new(vars);
        let mut contradiction = false;
        for (r, b) in &sys {
            contradiction |= e.insert(r, *b) == Insert::Contradiction;
        }
        match gf2_solve(&Gf2LinearSystem { vars, rows: sys.clone() }) {
            Gf2Solution::Inconsistent => prop_assert!(sols.is_empty() && contradiction),
            Gf2Solution::Unique(x) => prop_assert_eq!(sols, vec![x.to_u64()]),
            Gf2Solution::Underdetermined { rank } => {
                prop_assert!(!contradiction);
                prop_assert_eq!(sols.len() as u64, 1u64 << (vars - rank));
                let mut got: Vec<u64> = e.solutions(vars).unwrap().iter().map(|s| s.to_u64()).collect();
                got.sort_unstable();
                prop_assert_eq!(got, sols);
            }
        }
    }

    #[test]
    fn truncation_undoes_insertions(vars in 1usize..=40, rows in 1usize..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut e = Echelon::new(vars);
        let base: Vec<(BitVec, bool)> = (0..rows / 2).map(|_| (random_row(&mut rng, vars), rng.gen())).collect();
        for (r, b) in &base {
            e.insert(r, *b);
        }
        let snapshot = e.clone();
        let rank = e.rank();
        for _ in 0..rows {
            e.insert(&random_row(&mut rng, vars), rng.gen());
        }
        e.truncate(rank);
        prop_assert_eq!(e.solutions(12), snapshot.solutions(12));
        let probe = random_row(&mut rng, vars);
        let mut a = e.clone();
        let mut b = snapshot.clone();
        prop_assert_eq!(a.insert(&probe, true), b.insert(&probe, true));
    }

    #[test]
    fn filtering_matches_exhaustive_scan(n in 1usize..=10, mfrac in 0.0f64..1.0, seed in any::<u64>(), uniform in any::<bool>()) {
        let m = 1 + (mfrac * (n - 1) as f64) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = if uniform {
            FilterSpec::random_uniform(n, m, &mut rng).unwrap()
        } else {
            FilterSpec::random(n, m, &mut rng).unwrap()
        };
        let z = rng.gen_range(0..1u32 << m);
        let mut known = Vec::new();
        for i in 1..=n {
            if rng.gen_bool(0.4) {
                known.push((i, rng.gen::<bool>()));
            }
        }
        let table = preimage_table(&f);
        let got = filtered_preimages(&table[z as usize], n, &known).unwrap();
        let expected: Vec<u32> = (0..1u32 << n)
            .filter(|&x| f.eval(x) == z && known.iter().all(|&(i, b)| ((x >> (i - 1)) & 1 == 1) == b))
            .collect();
        prop_assert_eq!(got.members, expected);
    }

    #[test]
    fn keystream_files_round_trip(n in 1u32..32, m in 1u32..=32, len in 1u32..1000, blocks in proptest::collection::vec(any::<u32>(), 0..50)) {
        let mask = if m == 32 { u32::MAX } else { (1 << m) - 1 };
        let file = KeystreamFile { n, m, register_length: len, blocks: blocks.iter().map(|b| b & mask).collect() };
        let bytes = encode_keystream(&file).unwrap();
        prop_assert_eq!(bytes.len(), 16 + file.blocks.len() * (m as usize).div_ceil(8));
        prop_assert_eq!(decode_keystream(&bytes).unwrap(), file);
        if bytes.len() > 16 {
            prop_assert!(decode_keystream(&bytes[..bytes.len() - 1]).is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn planted_states_are_recovered(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = rng.gen_range(10..=18);
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range((n - 2).max(1)..=n);
        let mut pos: Vec<usize> = rand::seq::index::sample(&mut rng, len, n).into_iter().map(|x| x + 1).collect();
        pos.sort_unstable();
        let taps = TapSet::new(pos, len).unwrap();
        let (schedule, prof) = match greedy_schedule(&taps, StopRule::Rank) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        let gen = GeneratorSpec::new(
            Register::Lfsr(LfsrSpec::primitive(len).unwrap()),
            Taps::Single(taps),
            FilterSpec::random_uniform(n, m, &mut rng).unwrap(),
        )
        .unwrap();
        let state = BitVec::from_u64(rng.gen::<u64>() & ((1 << len) - 1), len);
        let ks = gen.keystream(&state, prof.shifts().last().unwrap() + 3 * len).unwrap();
        let quick = gfsga_recover(&gen, &ks, &schedule, &AttackOptions { workers: Some(2), ..AttackOptions::default() }).unwrap();
        let found = quick.recovered_state.unwrap();
        prop_assert_eq!(gen.keystream(&found, ks.len()).unwrap(), ks.clone());
        let full = gfsga_recover(
            &gen,
            &ks,
            &schedule,
            &AttackOptions { exhaustive: true, early_solve: false, workers: Some(3), ..AttackOptions::default() },
        )
        .unwrap();
        prop_assert_eq!(full.systems_solved, candidate_tree_size(&gen, &ks, &schedule).unwrap());
        prop_assert!(full.verified_solutions >= 1);
        let mut corrupt = ks.clone();
        let last = corrupt.len() - 1;
        corrupt[last] ^= 1;
        let bad = gfsga_recover(&gen, &corrupt, &schedule, &AttackOptions::default()).unwrap();
        if let Some(s) = bad.recovered_state {
            prop_assert_eq!(gen.keystream(&s, corrupt.len()).unwrap(), corrupt);
        }
    }
}
