//! Fast decision procedure for the leading coefficient mu(x, w) with `x`
//! fully commutative, plus the exhaustive differential verifier against the
//! polynomial engine.
//!
//! The procedure never computes a polynomial. It loops over four branch
//! families: zero gates (not below / parity), the missing-descent rule, star
//! steps along a shortest star sequence while `w` is not fully commutative,
//! and the structural cases of fully commutative `w`. Every run carries a
//! replayable trace.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::fc::{
    classify_fc, is_fully_commutative, left_star, right_star, shi_sequence, FcCaseTag, StarPair,
};
use crate::group::{AffinePermutation, GroupContext};
use crate::kl::KlCache;
use crate::order::{bruhat_leq, enumerate_by_length, enumerate_interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One step of a decision trace. Replaying the steps re-validates each
/// precondition and reproduces the decided value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    /// `x` is not below `w`; value 0.
    NotBelowZero,
    /// `x = w` or the lengths share parity; value 0.
    ParityZero,
    /// `x < w` with `len(w) = len(x) + 1`: the polynomial is 1 (degree
    /// bound 0, constant term 1), so the value is 1.
    CoveringPair,
    /// `s` is a descent of `w` but not of `x` on the given side; the value
    /// is 1 iff `x` equals `sw` (left) or `ws` (right).
    DescentRule { side: Side, s: usize, outcome: u8 },
    /// Simultaneous star step applied to both `x` and `w`.
    StarStep { side: Side, pair: StarPair },
    /// Dispatch on a structural case of fully commutative `w`.
    FcCase { tag: FcCaseTag },
}

impl std::fmt::Display for TraceStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceStep::NotBelowZero => write!(f, "not-below-zero"),
            TraceStep::ParityZero => write!(f, "parity-zero"),
            TraceStep::CoveringPair => write!(f, "covering-pair"),
            TraceStep::DescentRule { side, s, outcome } => {
                write!(f, "descent-rule({side:?},s{s},outcome={outcome})")
            }
            TraceStep::StarStep { side, pair } => write!(f, "star-step({side:?},{pair})"),
            TraceStep::FcCase { tag } => write!(f, "fc-case({})", tag.name()),
        }
    }
}

/// The decided value together with its replayable derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuDecision {
    pub value: u8,
    pub trace: Vec<TraceStep>,
}

/// Order in which the structural cases of a fully commutative `w` are
/// consumed. Reduction cases come first by default so `w` keeps shrinking
/// before terminal analysis; any order must decide the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub case_priority: [FcCaseTag; 4],
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            case_priority: [
                FcCaseTag::LeftStarReducible,
                FcCaseTag::RightStarReducible,
                FcCaseTag::CommutingProduct,
                FcCaseTag::AlternatingProduct,
            ],
        }
    }
}

const DECIDE_ITERATION_CAP: usize = 10_000;

/// Decides `mu(x, w)` for fully commutative `x` without computing any
/// Kazhdan-Lusztig polynomial.
///
/// Errors with [`Error::Argument`] when `x` is not fully commutative and
/// with [`Error::FallbackRequired`] if a live run ever violates the branch
/// preconditions (none are expected; each occurrence is a counterexample
/// candidate and the caller should recompute through [`KlCache::mu`]).
pub fn decide_mu(
    ctx: &GroupContext,
    x: &AffinePermutation,
    w: &AffinePermutation,
) -> Result<MuDecision> {
    decide_mu_with_options(ctx, x, w, &DecideOptions::default())
}

pub fn decide_mu_with_options(
    ctx: &GroupContext,
    x0: &AffinePermutation,
    w0: &AffinePermutation,
    opts: &DecideOptions,
) -> Result<MuDecision> {
    ctx.check_rank(x0)?;
    ctx.check_rank(w0)?;
    if !is_fully_commutative(ctx, x0)? {
        return Err(Error::Argument(format!(
            "decision procedure requires fully commutative x, got x={x0}"
        )));
    }
    let mut x = x0.clone();
    let mut w = w0.clone();
    let mut trace = Vec::new();
    let mut entry = true;

    for _ in 0..DECIDE_ITERATION_CAP {
        if !entry && !is_fully_commutative(ctx, &x)? {
            return Err(Error::FallbackRequired(format!(
                "star-transformed x={x} left the fully commutative class"
            )));
        }
        entry = false;

        if !bruhat_leq(&x, &w)? {
            trace.push(TraceStep::NotBelowZero);
            return Ok(MuDecision { value: 0, trace });
        }
        if x == w || x.length() % 2 == w.length() % 2 {
            trace.push(TraceStep::ParityZero);
            return Ok(MuDecision { value: 0, trace });
        }
        // Covering pairs decide to 1 immediately. This keeps len(x) < len(w)
        // across star steps: the star identity preserves the value of the
        // unordered pair, and a star step from distance 1 could reverse the
        // length order.
        if w.length() == x.length() + 1 {
            trace.push(TraceStep::CoveringPair);
            return Ok(MuDecision { value: 1, trace });
        }

        if !is_fully_commutative(ctx, &w)? {
            let lw = w.left_descents();
            let lx = x.left_descents();
            if !lw.is_commutative() {
                // Some left descent of w is missing from the commutative
                // descent set of x; the missing-descent rule decides.
                let s = lw.iter().find(|&i| !lx.contains(i)).ok_or_else(|| {
                    Error::FallbackRequired(format!(
                        "noncommutative descent set of w={w} is contained in the \
                         descent set of fully commutative x={x}"
                    ))
                })?;
                let outcome = u8::from(x == ctx.generator(s)?.mul(&w)?);
                trace.push(TraceStep::DescentRule { side: Side::Left, s, outcome });
                return Ok(MuDecision { value: outcome, trace });
            }
            // Walk the first step of a shortest star sequence.
            let seq = shi_sequence(ctx, &w)?;
            let (pair, w_next) = seq
                .first()
                .cloned()
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "empty star sequence for w={w} with commutative descents"
                    ))
                })?;
            let s = match (lw.contains(pair.s()), lw.contains(pair.t())) {
                (true, false) => pair.s(),
                (false, true) => pair.t(),
                _ => {
                    return Err(Error::FallbackRequired(format!(
                        "star step pair {pair} does not meet the descent set of w={w} \
                         in a single generator"
                    )))
                }
            };
            if !x.has_left_descent(s) {
                let outcome = u8::from(x == ctx.generator(s)?.mul(&w)?);
                trace.push(TraceStep::DescentRule { side: Side::Left, s, outcome });
                return Ok(MuDecision { value: outcome, trace });
            }
            let x_next = left_star(ctx, &x, &pair)?.ok_or_else(|| {
                Error::FallbackRequired(format!(
                    "left star of x={x} undefined for {pair} despite singleton descent"
                ))
            })?;
            trace.push(TraceStep::StarStep { side: Side::Left, pair });
            x = x_next;
            w = w_next;
            continue;
        }

        // w is fully commutative: dispatch on its structural cases.
        let cls = classify_fc(ctx, &w)?;
        let mut advanced = false;
        for tag in opts.case_priority {
            match tag {
                FcCaseTag::LeftStarReducible if !cls.left_reducible.is_empty() => {
                    let (pair, target) = cls.left_reducible[0].clone();
                    let s = pair.s();
                    trace.push(TraceStep::FcCase { tag });
                    if !x.has_left_descent(s) {
                        // target = s w, the string partner
                        let outcome = u8::from(x == target);
                        trace.push(TraceStep::DescentRule { side: Side::Left, s, outcome });
                        return Ok(MuDecision { value: outcome, trace });
                    }
                    let x_next = left_star(ctx, &x, &pair)?.ok_or_else(|| {
                        Error::FallbackRequired(format!(
                            "left star of x={x} undefined for {pair}"
                        ))
                    })?;
                    trace.push(TraceStep::StarStep { side: Side::Left, pair });
                    x = x_next;
                    w = target;
                    advanced = true;
                    break;
                }
                FcCaseTag::RightStarReducible if !cls.right_reducible.is_empty() => {
                    let (pair, target) = cls.right_reducible[0].clone();
                    let s = pair.s();
                    trace.push(TraceStep::FcCase { tag });
                    if !x.has_right_descent(s) {
                        let outcome = u8::from(x == target);
                        trace.push(TraceStep::DescentRule { side: Side::Right, s, outcome });
                        return Ok(MuDecision { value: outcome, trace });
                    }
                    let x_next = right_star(ctx, &x, &pair)?.ok_or_else(|| {
                        Error::FallbackRequired(format!(
                            "right star of x={x} undefined for {pair}"
                        ))
                    })?;
                    trace.push(TraceStep::StarStep { side: Side::Right, pair });
                    x = x_next;
                    w = target;
                    advanced = true;
                    break;
                }
                FcCaseTag::CommutingProduct if cls.commuting.is_some() => {
                    trace.push(TraceStep::FcCase { tag });
                    let outcome = u8::from(w.length() == x.length() + 1);
                    return Ok(MuDecision { value: outcome, trace });
                }
                FcCaseTag::AlternatingProduct if cls.alternating.is_some() => {
                    trace.push(TraceStep::FcCase { tag });
                    let lw = w.left_descents();
                    let lx = x.left_descents();
                    if let Some(s) = lw.iter().find(|&i| !lx.contains(i)) {
                        let outcome = u8::from(x == ctx.generator(s)?.mul(&w)?);
                        trace.push(TraceStep::DescentRule { side: Side::Left, s, outcome });
                        return Ok(MuDecision { value: outcome, trace });
                    }
                    let rw = w.right_descents();
                    let rx = x.right_descents();
                    if let Some(s) = rw.iter().find(|&i| !rx.contains(i)) {
                        let outcome = u8::from(x == w.mul(&ctx.generator(s)?)?);
                        trace.push(TraceStep::DescentRule { side: Side::Right, s, outcome });
                        return Ok(MuDecision { value: outcome, trace });
                    }
                    return Ok(MuDecision { value: 0, trace });
                }
                _ => {}
            }
        }
        if !advanced {
            return Err(Error::Internal(format!(
                "no structural case advanced the decision at w={w}"
            )));
        }
    }
    Err(Error::Internal(format!(
        "decision loop exceeded {DECIDE_ITERATION_CAP} iterations for x={x0}, w={w0}"
    )))
}

/// Replays a decision trace from the original pair, re-validating every
/// step's precondition and checking that the trace reproduces the value.
pub fn replay_decision(
    ctx: &GroupContext,
    x0: &AffinePermutation,
    w0: &AffinePermutation,
    decision: &MuDecision,
) -> Result<()> {
    let mut x = x0.clone();
    let mut w = w0.clone();
    let mut value: Option<u8> = None;
    let last = decision.trace.len().saturating_sub(1);
    for (idx, step) in decision.trace.iter().enumerate() {
        let is_last = idx == last;
        match step {
            TraceStep::NotBelowZero => {
                if bruhat_leq(&x, &w)? {
                    return Err(Error::Internal(format!("replay: x={x} is below w={w}")));
                }
                value = Some(0);
            }
            TraceStep::ParityZero => {
                if x != w && x.length() % 2 != w.length() % 2 {
                    return Err(Error::Internal(format!(
                        "replay: lengths of x={x}, w={w} have opposite parity"
                    )));
                }
                value = Some(0);
            }
            TraceStep::CoveringPair => {
                if !bruhat_leq(&x, &w)? || w.length() != x.length() + 1 {
                    return Err(Error::Internal(format!(
                        "replay: x={x}, w={w} is not a covering pair"
                    )));
                }
                value = Some(1);
            }
            TraceStep::DescentRule { side, s, outcome } => {
                let (dw, dx, product) = match side {
                    Side::Left => (
                        w.has_left_descent(*s),
                        x.has_left_descent(*s),
                        ctx.generator(*s)?.mul(&w)?,
                    ),
                    Side::Right => (
                        w.has_right_descent(*s),
                        x.has_right_descent(*s),
                        w.mul(&ctx.generator(*s)?)?,
                    ),
                };
                if !dw || dx {
                    return Err(Error::Internal(format!(
                        "replay: s{s} is not a {side:?}-missing descent for x={x}, w={w}"
                    )));
                }
                if (x == product) != (*outcome == 1) {
                    return Err(Error::Internal(format!(
                        "replay: descent rule outcome mismatch at x={x}, w={w}, s={s}"
                    )));
                }
                value = Some(*outcome);
            }
            TraceStep::StarStep { side, pair } => {
                let (xn, wn) = match side {
                    Side::Left => (left_star(ctx, &x, pair)?, left_star(ctx, &w, pair)?),
                    Side::Right => (right_star(ctx, &x, pair)?, right_star(ctx, &w, pair)?),
                };
                let xn = xn.ok_or_else(|| {
                    Error::Internal(format!("replay: star of x={x} undefined for {pair}"))
                })?;
                let wn = wn.ok_or_else(|| {
                    Error::Internal(format!("replay: star of w={w} undefined for {pair}"))
                })?;
                x = xn;
                w = wn;
                value = None;
            }
            TraceStep::FcCase { tag } => {
                let cls = classify_fc(ctx, &w)?;
                if !cls.has(*tag) {
                    return Err(Error::Internal(format!(
                        "replay: case {tag:?} does not apply to w={w}"
                    )));
                }
                match tag {
                    FcCaseTag::CommutingProduct => {
                        if !is_last {
                            return Err(Error::Internal(
                                "replay: commuting-product step must be terminal".into(),
                            ));
                        }
                        value = Some(u8::from(w.length() == x.length() + 1));
                    }
                    FcCaseTag::AlternatingProduct if is_last => {
                        let missing_left = w
                            .left_descents()
                            .iter()
                            .any(|i| !x.has_left_descent(i));
                        let missing_right = w
                            .right_descents()
                            .iter()
                            .any(|i| !x.has_right_descent(i));
                        if missing_left || missing_right {
                            return Err(Error::Internal(format!(
                                "replay: terminal alternating step at x={x}, w={w} has an \
                                 unused missing descent"
                            )));
                        }
                        value = Some(0);
                    }
                    _ => value = None,
                }
            }
        }
    }
    match value {
        Some(v) if v == decision.value => Ok(()),
        Some(v) => Err(Error::Internal(format!(
            "replay: trace yields {v}, decision says {}",
            decision.value
        ))),
        None => Err(Error::Internal("replay: trace ends without a value".into())),
    }
}

/// One failed pair in a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub x: Vec<i64>,
    pub w: Vec<i64>,
    pub kind: FailureKind,
    pub engine_mu: i64,
    pub decided: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Engine and decision procedure returned different values.
    Disagreement,
    /// Engine mu outside {0, 1}.
    MuOutOfRange,
    /// The decision procedure demanded a fallback.
    Fallback,
}

impl FailureKind {
    pub fn name(&self) -> &'static str {
        match self {
            FailureKind::Disagreement => "disagreement",
            FailureKind::MuOutOfRange => "mu_out_of_range",
            FailureKind::Fallback => "fallback",
        }
    }
}

const MAX_RECORDED_FAILURES: usize = 32;

/// Aggregate result of a verification sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: usize,
    pub max_len_w: usize,
    pub pairs_checked: u64,
    pub mu_zero: u64,
    pub mu_one: u64,
    pub disagreements: u64,
    pub fallbacks: u64,
    pub mu_out_of_range: u64,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.fallbacks == 0 && self.mu_out_of_range == 0
    }

    fn absorb(&mut self, other: VerifyReport) {
        self.pairs_checked += other.pairs_checked;
        self.mu_zero += other.mu_zero;
        self.mu_one += other.mu_one;
        self.disagreements += other.disagreements;
        self.fallbacks += other.fallbacks;
        self.mu_out_of_range += other.mu_out_of_range;
        self.failures.extend(other.failures);
    }

    // Sort first, then truncate, so the recorded sample does not depend on
    // worker scheduling.
    fn finish(&mut self) {
        self.failures.sort_by(|a, b| (&a.w, &a.x).cmp(&(&b.w, &b.x)));
        self.failures.truncate(MAX_RECORDED_FAILURES);
    }
}

/// Exhaustive differential sweep: for every `w` up to `max_len_w` and every
/// fully commutative `x < w`, computes mu through the polynomial engine,
/// checks it lies in {0, 1}, and checks the decision procedure agrees.
///
/// `jobs > 1` distributes the outer loop over that many worker threads; the
/// report is a commutative merge of per-worker counts.
pub fn verify_theorem(engine: &KlCache, max_len_w: usize, jobs: usize) -> Result<VerifyReport> {
    let ctx = engine.context();
    let cap = ctx.caps().engine_len;
    if max_len_w > cap {
        return Err(Error::CapExceeded {
            what: "verification sweep length",
            cap,
            needed: max_len_w,
        });
    }
    let ws: Vec<AffinePermutation> = enumerate_by_length(ctx, max_len_w)?
        .into_iter()
        .flatten()
        .collect();

    let mut report = VerifyReport {
        n: ctx.rank(),
        max_len_w,
        ..VerifyReport::default()
    };

    if jobs <= 1 {
        let mut fc_memo = HashMap::new();
        for w in &ws {
            report.absorb(verify_one(engine, w, &mut fc_memo)?);
        }
        report.finish();
        return Ok(report);
    }

    let cursor = AtomicUsize::new(0);
    let results: Vec<Result<VerifyReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = VerifyReport::default();
                    let mut fc_memo = HashMap::new();
                    loop {
                        let k = cursor.fetch_add(1, Ordering::Relaxed);
                        let Some(w) = ws.get(k) else {
                            return Ok(local);
                        };
                        local.absorb(verify_one(engine, w, &mut fc_memo)?);
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for r in results {
        report.absorb(r?);
    }
    report.finish();
    Ok(report)
}

fn verify_one(
    engine: &KlCache,
    w: &AffinePermutation,
    fc_memo: &mut HashMap<Vec<i64>, bool>,
) -> Result<VerifyReport> {
    let ctx = engine.context();
    let mut local = VerifyReport::default();
    for x in enumerate_interval(ctx, w)? {
        if &x == w {
            continue;
        }
        let fc = match fc_memo.get(x.window()) {
            Some(&hit) => hit,
            None => {
                let fresh = is_fully_commutative(ctx, &x)?;
                fc_memo.insert(x.window().to_vec(), fresh);
                fresh
            }
        };
        if !fc {
            continue;
        }
        let m = engine.mu(&x, w)?;
        local.pairs_checked += 1;
        match m {
            0 => local.mu_zero += 1,
            1 => local.mu_one += 1,
            _ => {
                local.mu_out_of_range += 1;
                local.failures.push(VerifyFailure {
                    x: x.window().to_vec(),
                    w: w.window().to_vec(),
                    kind: FailureKind::MuOutOfRange,
                    engine_mu: m,
                    decided: None,
                });
            }
        }
        match decide_mu(ctx, &x, w) {
            Ok(decision) => {
                if i64::from(decision.value) != m {
                    local.disagreements += 1;
                    local.failures.push(VerifyFailure {
                        x: x.window().to_vec(),
                        w: w.window().to_vec(),
                        kind: FailureKind::Disagreement,
                        engine_mu: m,
                        decided: Some(decision.value),
                    });
                }
            }
            Err(Error::FallbackRequired(_)) => {
                local.fallbacks += 1;
                local.failures.push(VerifyFailure {
                    x: x.window().to_vec(),
                    w: w.window().to_vec(),
                    kind: FailureKind::Fallback,
                    engine_mu: m,
                    decided: None,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Word;

    fn ctx(n: usize) -> GroupContext {
        GroupContext::new(n).unwrap()
    }

    fn from_letters(ctx: &GroupContext, letters: &[usize]) -> AffinePermutation {
        let word = Word::new(ctx, letters.to_vec()).unwrap();
        AffinePermutation::from_word(ctx, &word).unwrap()
    }

    #[test]
    fn basic_decisions() {
        let c = ctx(3);
        let e = c.identity();
        let s1 = c.generator(1).unwrap();
        let d = decide_mu(&c, &e, &s1).unwrap();
        assert_eq!(d.value, 1);
        replay_decision(&c, &e, &s1, &d).unwrap();

        // parity gate
        let s1s2 = from_letters(&c, &[1, 2]);
        let d = decide_mu(&c, &e, &s1s2).unwrap();
        assert_eq!(d.value, 0);
        assert_eq!(d.trace, vec![TraceStep::ParityZero]);

        // not-below gate
        let s2 = c.generator(2).unwrap();
        let d = decide_mu(&c, &s2, &s1).unwrap();
        assert_eq!(d.value, 0);
        assert_eq!(d.trace, vec![TraceStep::NotBelowZero]);

        // non-fc x rejected
        let braid = from_letters(&c, &[0, 1, 0]);
        assert!(matches!(
            decide_mu(&c, &braid, &s1),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn known_finite_pair_agrees_with_engine() {
        let c = ctx(4);
        let x = from_letters(&c, &[2]);
        let w = from_letters(&c, &[2, 1, 3, 2]);
        let d = decide_mu(&c, &x, &w).unwrap();
        assert_eq!(d.value, 1);
        replay_decision(&c, &x, &w, &d).unwrap();
        let engine = KlCache::new(c.clone());
        assert_eq!(engine.mu(&x, &w).unwrap(), 1);
    }

    #[test]
    fn tiny_verify_sweep() {
        let c = ctx(3);
        let engine = KlCache::new(c);
        let report = verify_theorem(&engine, 1, 1).unwrap();
        assert_eq!(report.pairs_checked, 3);
        assert_eq!(report.mu_one, 3);
        assert_eq!(report.mu_zero, 0);
        assert!(report.passed());
    }

    #[test]
    fn parallel_matches_sequential() {
        let c = ctx(3);
        let engine = KlCache::new(c);
        let seq = verify_theorem(&engine, 4, 1).unwrap();
        let par = verify_theorem(&engine, 4, 4).unwrap();
        assert_eq!(seq, par);
        assert!(seq.passed());
    }

    #[test]
    fn verify_cap() {
        let c = ctx(3);
        let engine = KlCache::new(c);
        assert!(matches!(
            verify_theorem(&engine, 13, 1),
            Err(Error::CapExceeded { .. })
        ));
    }
}
