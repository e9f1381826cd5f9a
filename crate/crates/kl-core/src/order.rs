//! Strong Bruhat order and breadth-first enumeration.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::group::{AffinePermutation, GroupContext};

type WindowPair = (Vec<i64>, Vec<i64>);

// Global memo, keyed by window pairs. Windows of different ranks have
// different lengths, so ranks can never collide in one table.
static BRUHAT_MEMO: OnceLock<DashMap<WindowPair, bool>> = OnceLock::new();

fn memo() -> &'static DashMap<WindowPair, bool> {
    BRUHAT_MEMO.get_or_init(DashMap::new)
}

/// Strong Bruhat order test `x <= w`.
///
/// Recursive descent formulation: for `s` a left descent of `w`,
/// `x <= w` iff `min(x, sx) <= sw`, with `min` the shorter of the two.
/// The subword characterization is the test-suite oracle for this routine.
pub fn bruhat_leq(x: &AffinePermutation, w: &AffinePermutation) -> Result<bool> {
    if x.rank() != w.rank() {
        return Err(Error::RankMismatch(x.rank(), w.rank()));
    }
    Ok(bruhat_leq_inner(x, w))
}

fn bruhat_leq_inner(x: &AffinePermutation, w: &AffinePermutation) -> bool {
    if x.is_identity() {
        return true;
    }
    if w.is_identity() {
        return false;
    }
    if x == w {
        return true;
    }
    if x.length() >= w.length() {
        return false;
    }
    let key = (x.window().to_vec(), w.window().to_vec());
    if let Some(hit) = memo().get(&key) {
        return *hit;
    }
    let s = w
        .left_descents()
        .iter()
        .next()
        .expect("non-identity element has a left descent");
    let n = x.rank();
    let gen = AffinePermutation::identity(n)
        .mul_gen(s)
        .expect("valid generator");
    let sw = gen.mul(w).expect("same rank");
    let sx = gen.mul(x).expect("same rank");
    let shorter = if sx.length() < x.length() { &sx } else { x };
    let result = bruhat_leq_inner(shorter, &sw);
    memo().insert(key, result);
    result
}

/// The full lower interval `{ x : x <= w }`, by enumerating subwords of one
/// reduced expression of `w` and deduplicating products by window.
///
/// Returned sorted by `(length, window)` so iteration order is reproducible.
pub fn enumerate_interval(
    ctx: &GroupContext,
    w: &AffinePermutation,
) -> Result<Vec<AffinePermutation>> {
    ctx.check_rank(w)?;
    let len = w.length();
    let cap = ctx.caps().interval_len;
    if len > cap {
        return Err(Error::CapExceeded {
            what: "interval enumeration length",
            cap,
            needed: len,
        });
    }
    let letters = w.reduced_word().letters().to_vec();
    let mut seen = HashSet::new();
    for mask in 0u64..(1u64 << letters.len()) {
        let mut u = ctx.identity();
        for (k, &i) in letters.iter().enumerate() {
            if mask & (1 << k) != 0 {
                u = u.mul_gen(i)?;
            }
        }
        seen.insert(u);
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.length(), a.window()).cmp(&(b.length(), b.window())));
    Ok(out)
}

/// Closure of the identity under right multiplication, bucketed by length:
/// bucket `k` holds exactly the elements of length `k`, sorted by window.
pub fn enumerate_by_length(
    ctx: &GroupContext,
    max_len: usize,
) -> Result<Vec<Vec<AffinePermutation>>> {
    let cap = ctx.caps().sweep_len;
    if max_len > cap {
        return Err(Error::CapExceeded {
            what: "length sweep",
            cap,
            needed: max_len,
        });
    }
    let mut buckets = vec![vec![ctx.identity()]];
    let mut seen: HashSet<AffinePermutation> = buckets[0].iter().cloned().collect();
    for _ in 0..max_len {
        let last = buckets.last().unwrap();
        let mut next = Vec::new();
        for w in last {
            for i in 0..ctx.rank() {
                if !w.has_right_descent(i) {
                    let u = w.mul_gen(i)?;
                    if seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
        }
        next.sort();
        buckets.push(next);
    }
    Ok(buckets)
}

/// Subword membership oracle used by differential tests: materializes the
/// interval below `w` as a set keyed by window.
pub fn interval_set(
    ctx: &GroupContext,
    w: &AffinePermutation,
) -> Result<HashMap<Vec<i64>, AffinePermutation>> {
    Ok(enumerate_interval(ctx, w)?
        .into_iter()
        .map(|x| (x.window().to_vec(), x))
        .collect())
}
