//! Engine properties over the protocol machines: dedup equivalence,
//! determinism across worker counts, and serialization round trips.

use std::collections::BTreeSet;

use afav_core::machine::{
    decide, emit_machine, enumerate_paths, parse_machine, EnumerateOptions, MachineSpec,
};
use afav_core::oracles::naive_enumerate;
use afav_core::protocols::{
    build_subsetsum_verifier, build_unary_verifier, build_upoly_verifier, build_usquare_verifier,
    AmplificationParam, UnaryLanguageSpec, UnaryVerifier, UnaryVerifierConfig,
};
use afav_core::{PolynomialSpec, Rational};
use proptest::prelude::*;

fn t(n: u64) -> AmplificationParam {
    AmplificationParam::new(n).unwrap()
}

fn unary(pre: &str, period: &str) -> MachineSpec<Rational> {
    let lang = UnaryLanguageSpec::from_bits(pre, period, 32).unwrap();
    let cfg = UnaryVerifierConfig::with_default_k(lang).unwrap();
    match build_unary_verifier(&cfg).unwrap() {
        UnaryVerifier::Exact(m) => m,
        UnaryVerifier::Interval(_) => unreachable!("periodic languages are exact"),
    }
}

fn options(dedup: bool, threads: Option<usize>) -> EnumerateOptions {
    EnumerateOptions {
        dedup,
        threads,
        check_invariants: true,
        ..EnumerateOptions::default()
    }
}

/// Distinct (state, vector) pairs among the final configurations.
fn final_set(m: &MachineSpec<Rational>, input: &str, dedup: bool) -> BTreeSet<String> {
    enumerate_paths(m, input, &options(dedup, Some(1)), None)
        .unwrap()
        .finals
        .iter()
        .map(|c| format!("{} {:?}", m.state_name(c.state), c.affine.entries()))
        .collect()
}

fn machines() -> Vec<(MachineSpec<Rational>, &'static str)> {
    vec![
        (build_subsetsum_verifier(t(2)), "101#1#100#1"),
        (build_subsetsum_verifier(t(1)), "0#0#0#0#0"),
        (build_usquare_verifier(t(3)), "0000000"),
        (build_upoly_verifier(&PolynomialSpec::new(vec![1, 0, 1]).unwrap(), t(1)), "00000"),
        (unary("", "10"), "aaaaaa"),
        (unary("1101", "0"), "aaaaa"),
    ]
}

#[test]
fn dedup_keeps_the_set_of_final_configurations() {
    for (m, input) in machines() {
        assert_eq!(final_set(&m, input, true), final_set(&m, input, false), "{}", m.name());
    }
}

#[test]
fn merged_counts_cover_every_path() {
    for (m, input) in machines() {
        let plain = enumerate_paths(&m, input, &options(false, None), None).unwrap();
        let merged = enumerate_paths(&m, input, &options(true, None), None).unwrap();
        let covered: usize = merged.finals.iter().map(|c| 1 + c.merged).sum();
        assert_eq!(covered, plain.finals.len(), "{}", m.name());
    }
}

#[test]
fn worker_count_does_not_change_results() {
    // wide enough to cross the parallel threshold
    let m = unary("", "110");
    let input = "a".repeat(11);
    let single = enumerate_paths(&m, &input, &options(false, Some(1)), None).unwrap();
    let pooled = enumerate_paths(&m, &input, &options(false, Some(4)), None).unwrap();
    assert_eq!(single.finals, pooled.finals);
    assert!(single.finals.windows(2).all(|w| w[0].choices < w[1].choices));
}

#[test]
fn naive_walk_matches_engine_path_for_path() {
    for (m, input) in machines() {
        let naive = naive_enumerate(&m, input, 1 << 12).unwrap();
        let engine = enumerate_paths(&m, input, &options(false, None), None)
            .unwrap()
            .outcomes(&m);
        assert_eq!(naive.len(), engine.len(), "{}", m.name());
        for (a, b) in naive.iter().zip(&engine) {
            assert_eq!(a.choices, b.choices);
            assert_eq!(Rational::from(a.probability.clone()), b.probability);
        }
    }
}

#[test]
fn emitted_machines_parse_back_and_run_identically() {
    for (m, input) in machines() {
        let text = emit_machine(&m).unwrap();
        let back = parse_machine(&text).unwrap();
        assert_eq!(emit_machine(&back).unwrap(), text, "{}", m.name());
        let eps = Rational::new(1, 5);
        let run = |m: &MachineSpec<Rational>| {
            let e = enumerate_paths(m, input, &options(true, None), None).unwrap();
            decide(e.outcomes(m), &eps).unwrap()
        };
        assert_eq!(run(&m), run(&back), "{}", m.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subsetsum_dedup_equivalence(blocks in prop::collection::vec(0u32..16, 1..6), target in 0u32..40) {
        let text = std::iter::once(target)
            .chain(blocks)
            .map(|v| format!("{v:b}"))
            .collect::<Vec<_>>()
            .join("#");
        let m = build_subsetsum_verifier(t(1));
        prop_assert_eq!(final_set(&m, &text, true), final_set(&m, &text, false));
        let eps = Rational::new(1, 3);
        let summary = |dedup| {
            let e = enumerate_paths(&m, &text, &options(dedup, None), None).unwrap();
            let v = decide(e.outcomes(&m), &eps).unwrap();
            (v.max_probability, v.min_probability, v.decision)
        };
        prop_assert_eq!(summary(true), summary(false));
    }

    #[test]
    fn unary_runs_are_reproducible(pre in "[01]{0,4}", period in "[01]{1,3}", l in 0usize..8) {
        let m = unary(&pre, &period);
        let input = "a".repeat(l);
        let a = enumerate_paths(&m, &input, &options(true, None), None).unwrap().outcomes(&m);
        let b = enumerate_paths(&m, &input, &options(true, Some(1)), None).unwrap().outcomes(&m);
        prop_assert_eq!(a, b);
    }
}
