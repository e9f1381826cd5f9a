//! Properties of the decision procedure: trace replay, insensitivity to
//! admissible choices, and star-step value invariance checked against the
//! polynomial engine.

use kl_core::{
    decide_mu, decide_mu_with_options, enumerate_by_length, enumerate_interval,
    is_fully_commutative, left_star, replay_decision, right_star, AffinePermutation,
    DecideOptions, FcCaseTag, GroupContext, KlCache, Side, TraceStep,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(n: usize) -> GroupContext {
    GroupContext::new(n).unwrap()
}

fn fc_pairs(c: &GroupContext, max_len: usize) -> Vec<(AffinePermutation, AffinePermutation)> {
    let mut out = Vec::new();
    for w in enumerate_by_length(c, max_len).unwrap().into_iter().flatten() {
        for x in enumerate_interval(c, &w).unwrap() {
            if x != w && is_fully_commutative(c, &x).unwrap() {
                out.push((x, w.clone()));
            }
        }
    }
    out
}

fn mu_sym(engine: &KlCache, a: &AffinePermutation, b: &AffinePermutation) -> i64 {
    if a.length() <= b.length() {
        engine.mu(a, b).unwrap()
    } else {
        engine.mu(b, a).unwrap()
    }
}

#[test]
fn every_trace_replays() {
    for n in [3usize, 4] {
        let c = ctx(n);
        let max = if n == 3 { 6 } else { 5 };
        for (x, w) in fc_pairs(&c, max) {
            let d = decide_mu(&c, &x, &w).unwrap();
            assert!(d.value <= 1);
            replay_decision(&c, &x, &w, &d).unwrap();
        }
    }
}

#[test]
fn branch_two_choice_independence() {
    // Whenever w is complex with a noncommutative left descent set, every
    // admissible missing descent decides the same value.
    let c = ctx(3);
    let mut exercised = 0usize;
    for (x, w) in fc_pairs(&c, 6) {
        if is_fully_commutative(&c, &w).unwrap() || w.left_descents().is_commutative() {
            continue;
        }
        if x.length() % 2 == w.length() % 2 || w.length() == x.length() + 1 {
            continue;
        }
        let lx = x.left_descents();
        let choices: Vec<usize> = w.left_descents().iter().filter(|&s| !lx.contains(s)).collect();
        assert!(!choices.is_empty(), "x={x} w={w}");
        let outcomes: Vec<bool> = choices
            .iter()
            .map(|&s| x == c.generator(s).unwrap().mul(&w).unwrap())
            .collect();
        assert!(
            outcomes.windows(2).all(|p| p[0] == p[1]),
            "inconsistent outcomes at x={x} w={w}"
        );
        exercised += 1;
    }
    assert!(exercised > 0);
}

#[test]
fn priority_permutations_agree() {
    let orders = [
        [
            FcCaseTag::LeftStarReducible,
            FcCaseTag::RightStarReducible,
            FcCaseTag::CommutingProduct,
            FcCaseTag::AlternatingProduct,
        ],
        [
            FcCaseTag::RightStarReducible,
            FcCaseTag::LeftStarReducible,
            FcCaseTag::AlternatingProduct,
            FcCaseTag::CommutingProduct,
        ],
        [
            FcCaseTag::CommutingProduct,
            FcCaseTag::AlternatingProduct,
            FcCaseTag::LeftStarReducible,
            FcCaseTag::RightStarReducible,
        ],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xdecade);
    for n in [3usize, 4] {
        let c = ctx(n);
        let max = if n == 3 { 6 } else { 5 };
        let pairs = fc_pairs(&c, max);
        for _ in 0..150 {
            let (x, w) = pairs.choose(&mut rng).unwrap();
            let base = decide_mu(&c, x, w).unwrap().value;
            for order in &orders {
                let opts = DecideOptions { case_priority: *order };
                let alt = decide_mu_with_options(&c, x, w, &opts).unwrap();
                assert_eq!(alt.value, base, "x={x} w={w} order={order:?}");
            }
        }
    }
}

#[test]
fn star_steps_preserve_symmetrized_mu() {
    // Re-walk each trace and check against the engine that every star step
    // left the (unordered) mu value unchanged.
    let mut rng = ChaCha8Rng::seed_from_u64(0x57a7);
    for n in [3usize, 4] {
        let c = ctx(n);
        let engine = KlCache::new(c.clone());
        let max = if n == 3 { 6 } else { 5 };
        let pairs = fc_pairs(&c, max);
        let mut sampled = 0usize;
        for _ in 0..400 {
            let (x0, w0) = pairs.choose(&mut rng).unwrap();
            let d = decide_mu(&c, x0, w0).unwrap();
            if !d.trace.iter().any(|s| matches!(s, TraceStep::StarStep { .. })) {
                continue;
            }
            let mut x = x0.clone();
            let mut w = w0.clone();
            for step in &d.trace {
                if let TraceStep::StarStep { side, pair } = step {
                    let before = mu_sym(&engine, &x, &w);
                    let (xn, wn) = match side {
                        Side::Left => (
                            left_star(&c, &x, pair).unwrap().unwrap(),
                            left_star(&c, &w, pair).unwrap().unwrap(),
                        ),
                        Side::Right => (
                            right_star(&c, &x, pair).unwrap().unwrap(),
                            right_star(&c, &w, pair).unwrap().unwrap(),
                        ),
                    };
                    let after = mu_sym(&engine, &xn, &wn);
                    assert_eq!(before, after, "star step broke mu at x={x} w={w}");
                    x = xn;
                    w = wn;
                    sampled += 1;
                }
            }
        }
        assert!(sampled > 0, "n={n}: no star steps sampled");
    }
}

#[test]
fn decide_rejects_complex_x() {
    let c = ctx(3);
    let braid = {
        let w = c.generator(0).unwrap();
        let w = w.mul_gen(1).unwrap();
        w.mul_gen(0).unwrap()
    };
    let target = c.generator(2).unwrap();
    assert!(decide_mu(&c, &braid, &target).is_err());
}
