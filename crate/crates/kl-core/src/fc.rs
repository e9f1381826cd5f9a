//! Fully commutative elements, coset strings, star operations, and the
//! structural classification that drives the mu decision procedure.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::{adjacent, AffinePermutation, DescentSet, GroupContext, Word};

/// An ordered pair of noncommuting generators `{s, t}`.
///
/// The order matters only for labeling (which of the two coset strings an
/// element sits on); the star operation itself is order-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarPair {
    s: usize,
    t: usize,
}

impl StarPair {
    pub fn new(ctx: &GroupContext, s: usize, t: usize) -> Result<Self> {
        ctx.check_generator(s)?;
        ctx.check_generator(t)?;
        if ctx.coxeter_m(s, t)? != 3 {
            return Err(Error::Argument(format!(
                "generators s{s}, s{t} do not form a noncommuting pair"
            )));
        }
        Ok(StarPair { s, t })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn contains(&self, i: usize) -> bool {
        self.s == i || self.t == i
    }

    /// The member of the pair other than `i`.
    pub fn other(&self, i: usize) -> usize {
        debug_assert!(self.contains(i));
        if i == self.s {
            self.t
        } else {
            self.s
        }
    }

    pub fn swapped(&self) -> StarPair {
        StarPair { s: self.t, t: self.s }
    }

    /// The `n` adjacent pairs `(i, i+1 mod n)` in index order.
    pub fn canonical_pairs(ctx: &GroupContext) -> Vec<StarPair> {
        let n = ctx.rank();
        (0..n)
            .map(|i| StarPair { s: i, t: (i + 1) % n })
            .collect()
    }
}

impl std::fmt::Display for StarPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{s{}, s{}}}", self.s, self.t)
    }
}

/// Where `w` sits in the four-case coset analysis for a pair `I = {s, t}`:
/// shortest in its coset, longest, or on one of the two strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringCase {
    /// `w_I = e`.
    Minimal,
    /// `w_I = sts`.
    Maximal,
    /// `w` is one of `{ s w^I, ts w^I }`.
    StringIii,
    /// `w` is one of `{ t w^I, st w^I }`.
    StringIv,
}

/// The unique reduced decomposition `w = w_I * w^I` with `w_I` in the rank-2
/// parabolic generated by the pair and the left descents of `w^I` disjoint
/// from the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringPosition {
    pub case: StringCase,
    /// `w_I` as an explicit word over `{s, t}`, length at most 3.
    pub coset_word: Word,
    /// The coset-minimal part `w^I`.
    pub minimal_part: AffinePermutation,
}

/// Computes the coset decomposition by stripping members of the pair from
/// the left while possible (at most three strips).
pub fn string_position(
    ctx: &GroupContext,
    w: &AffinePermutation,
    pair: &StarPair,
) -> Result<StringPosition> {
    ctx.check_rank(w)?;
    let mut u = w.clone();
    let mut letters = Vec::new();
    loop {
        let c = if u.has_left_descent(pair.s) {
            pair.s
        } else if u.has_left_descent(pair.t) {
            pair.t
        } else {
            break;
        };
        u = ctx.generator(c)?.mul(&u)?;
        letters.push(c);
        if letters.len() > 3 {
            return Err(Error::Internal(format!(
                "coset stripping for {pair} did not terminate at w={w}"
            )));
        }
    }
    let case = match letters.as_slice() {
        [] => StringCase::Minimal,
        [c] if *c == pair.s => StringCase::StringIii,
        [_] => StringCase::StringIv,
        [c1, _] if *c1 == pair.t => StringCase::StringIii, // w_I = ts
        [_, _] => StringCase::StringIv,                    // w_I = st
        _ => StringCase::Maximal,
    };
    Ok(StringPosition {
        case,
        coset_word: Word::new(ctx, letters)?,
        minimal_part: u,
    })
}

/// The left star operation: the other element of `w`'s left string for the
/// pair, or `None` when `w` is coset-minimal or coset-maximal.
pub fn left_star(
    ctx: &GroupContext,
    w: &AffinePermutation,
    pair: &StarPair,
) -> Result<Option<AffinePermutation>> {
    let pos = string_position(ctx, w, pair)?;
    let partner_gen = match pos.case {
        StringCase::Minimal | StringCase::Maximal => return Ok(None),
        // {s w^I, ts w^I}: left-multiplying by t swaps the two.
        StringCase::StringIii => pair.t,
        // {t w^I, st w^I}: left-multiplying by s swaps the two.
        StringCase::StringIv => pair.s,
    };
    Ok(Some(ctx.generator(partner_gen)?.mul(w)?))
}

/// The right star operation, defined through inverses:
/// `w* = (left_star(w^-1))^-1`.
pub fn right_star(
    ctx: &GroupContext,
    w: &AffinePermutation,
    pair: &StarPair,
) -> Result<Option<AffinePermutation>> {
    Ok(left_star(ctx, &w.inverse(), pair)?.map(|u| u.inverse()))
}

fn braid_factor_at(word: &[u8], j: usize, n: usize) -> bool {
    word[j] == word[j + 2] && adjacent(n, word[j] as usize, word[j + 1] as usize)
}

fn has_braid_factor(word: &[u8], n: usize) -> bool {
    (0..word.len().saturating_sub(2)).any(|j| braid_factor_at(word, j, n))
}

/// Tests full commutativity by breadth-first exploration of the commutation
/// class of one reduced word: `false` as soon as any word in the class
/// contains a factor `s_i s_j s_i` with noncommuting `s_i, s_j`, `true` if
/// the class is exhausted without one.
pub fn is_fully_commutative(ctx: &GroupContext, w: &AffinePermutation) -> Result<bool> {
    ctx.check_rank(w)?;
    let n = ctx.rank();
    let start: Vec<u8> = w.reduced_word().letters().iter().map(|&i| i as u8).collect();
    if has_braid_factor(&start, n) {
        return Ok(false);
    }
    let cap = ctx.caps().commutation_class;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(word) = queue.pop_front() {
        for j in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[j] as usize, word[j + 1] as usize);
            if a == b || adjacent(n, a, b) {
                continue;
            }
            let mut next = word.clone();
            next.swap(j, j + 1);
            if seen.contains(&next) {
                continue;
            }
            if has_braid_factor(&next, n) {
                return Ok(false);
            }
            if seen.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "commutation class size",
                    cap,
                    needed: cap + 1,
                });
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Ok(true)
}

/// For even rank, the generator subset `S_b`: even indices for `b = 0`,
/// odd indices for `b = 1`. Each consists of mutually commuting generators.
pub fn alternating_generator_set(ctx: &GroupContext, b: usize) -> Result<Vec<usize>> {
    if !ctx.rank().is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "alternating generator sets need even rank, got n={}",
            ctx.rank()
        )));
    }
    if b > 1 {
        return Err(Error::Argument(format!("set index must be 0 or 1, got {b}")));
    }
    Ok((b..ctx.rank()).step_by(2).collect())
}

fn alternating_factor(ctx: &GroupContext, b: usize) -> Result<AffinePermutation> {
    let mut w = ctx.identity();
    for i in alternating_generator_set(ctx, b)? {
        w = w.mul_gen(i)?;
    }
    Ok(w)
}

/// The product of `count` factors alternating `I_start, I_{1-start}, ...`,
/// where `I_b` is the product of the commuting set `S_b`. Requires even
/// rank; the result has length `count * n/2`.
pub fn alternating_product(
    ctx: &GroupContext,
    start: usize,
    count: usize,
) -> Result<AffinePermutation> {
    if count == 0 {
        return Err(Error::Argument("factor count must be >= 1".into()));
    }
    let factors = [alternating_factor(ctx, start)?, alternating_factor(ctx, 1 - start)?];
    let mut w = ctx.identity();
    for k in 0..count {
        w = w.mul(&factors[k % 2])?;
    }
    Ok(w)
}

/// Greedy recognizer for alternating products: while the left descent set is
/// exactly `S_b`, strip `I_b`; succeed iff the strips alternate and the
/// residue reaches the identity. Always `None` for odd rank.
pub fn recognize_alternating(
    ctx: &GroupContext,
    w: &AffinePermutation,
) -> Result<Option<(usize, usize)>> {
    ctx.check_rank(w)?;
    let n = ctx.rank();
    if !n.is_multiple_of(2) {
        return Ok(None);
    }
    let half = n / 2;
    let sets = [
        DescentSet::from_members(n, &alternating_generator_set(ctx, 0)?),
        DescentSet::from_members(n, &alternating_generator_set(ctx, 1)?),
    ];
    let factors = [alternating_factor(ctx, 0)?, alternating_factor(ctx, 1)?];
    let mut u = w.clone();
    let mut strips: Vec<usize> = Vec::new();
    while !u.is_identity() {
        let ld = u.left_descents();
        let b = if ld == sets[0] {
            0
        } else if ld == sets[1] {
            1
        } else {
            return Ok(None);
        };
        if let Some(&prev) = strips.last() {
            if b != 1 - prev {
                return Ok(None);
            }
        }
        let before = u.length();
        u = factors[b].mul(&u)?;
        if u.length() + half != before {
            return Err(Error::Internal(format!(
                "stripping a fully descending commuting product failed to shorten w={w}"
            )));
        }
        strips.push(b);
    }
    match strips.first() {
        None => Ok(None),
        Some(&start) => Ok(Some((start, strips.len()))),
    }
}

/// Tags for the structural cases a fully commutative element can satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FcCaseTag {
    CommutingProduct,
    AlternatingProduct,
    LeftStarReducible,
    RightStarReducible,
}

impl FcCaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            FcCaseTag::CommutingProduct => "commuting_product",
            FcCaseTag::AlternatingProduct => "alternating_product",
            FcCaseTag::LeftStarReducible => "left_star_reducible",
            FcCaseTag::RightStarReducible => "right_star_reducible",
        }
    }
}

/// All applicable structural cases for a fully commutative element, with
/// witnesses. At least one case always applies; an empty classification is
/// an internal error in [`classify_fc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcClassification {
    /// Sorted generator set whose product is `w`, when `w` is a product of
    /// pairwise commuting generators (the identity gives the empty set).
    pub commuting: Option<Vec<usize>>,
    /// `(start, count)` such that the alternating product rebuilds `w`.
    pub alternating: Option<(usize, usize)>,
    /// Pairs `(s, t)` with `w = s t v` reduced, together with the shorter
    /// string partner `t v`; one entry per applicable pair, in index order.
    pub left_reducible: Vec<(StarPair, AffinePermutation)>,
    /// Mirror image: `w = v t s` reduced with partner `v t`.
    pub right_reducible: Vec<(StarPair, AffinePermutation)>,
}

impl FcClassification {
    pub fn tags(&self) -> Vec<FcCaseTag> {
        let mut tags = Vec::new();
        if self.commuting.is_some() {
            tags.push(FcCaseTag::CommutingProduct);
        }
        if self.alternating.is_some() {
            tags.push(FcCaseTag::AlternatingProduct);
        }
        if !self.left_reducible.is_empty() {
            tags.push(FcCaseTag::LeftStarReducible);
        }
        if !self.right_reducible.is_empty() {
            tags.push(FcCaseTag::RightStarReducible);
        }
        tags
    }

    pub fn has(&self, tag: FcCaseTag) -> bool {
        self.tags().contains(&tag)
    }
}

/// Classifies a fully commutative element into all applicable cases.
pub fn classify_fc(ctx: &GroupContext, w: &AffinePermutation) -> Result<FcClassification> {
    if !is_fully_commutative(ctx, w)? {
        return Err(Error::Argument(format!(
            "classification requires a fully commutative element, got w={w}"
        )));
    }

    let letters = w.reduced_word().letters().to_vec();
    let mut commuting = Some(());
    for (a, &i) in letters.iter().enumerate() {
        for &j in &letters[a + 1..] {
            if i == j || adjacent(ctx.rank(), i, j) {
                commuting = None;
            }
        }
    }
    let commuting = commuting.map(|_| {
        let mut set = letters.clone();
        set.sort_unstable();
        set
    });

    let alternating = recognize_alternating(ctx, w)?;

    let mut left_reducible = Vec::new();
    let mut right_reducible = Vec::new();
    let winv = w.inverse();
    for pair in StarPair::canonical_pairs(ctx) {
        let pos = string_position(ctx, w, &pair)?;
        if let [c1, c2] = pos.coset_word.letters() {
            let ordered = StarPair::new(ctx, *c1, *c2)?;
            let target = ctx.generator(*c1)?.mul(w)?;
            left_reducible.push((ordered, target));
        }
        let pos = string_position(ctx, &winv, &pair)?;
        if let [d1, d2] = pos.coset_word.letters() {
            let ordered = StarPair::new(ctx, *d1, *d2)?;
            let target = w.mul(&ctx.generator(*d1)?)?;
            right_reducible.push((ordered, target));
        }
    }

    let classification = FcClassification {
        commuting,
        alternating,
        left_reducible,
        right_reducible,
    };
    if classification.tags().is_empty() {
        return Err(Error::Internal(format!(
            "no structural case applies to fully commutative element w={w}"
        )));
    }
    Ok(classification)
}

/// Shortest chain of left star operations from a non-fully-commutative `w`
/// to an element whose left descent set is noncommutative, found by
/// breadth-first search over all applicable pairs.
///
/// Returns `(pair, element)` steps; the empty sequence iff the left descent
/// set of `w` is already noncommutative.
pub fn shi_sequence(
    ctx: &GroupContext,
    w: &AffinePermutation,
) -> Result<Vec<(StarPair, AffinePermutation)>> {
    if is_fully_commutative(ctx, w)? {
        return Err(Error::Argument(format!(
            "star-sequence search requires a non-fully-commutative element, got w={w}"
        )));
    }
    if !w.left_descents().is_commutative() {
        return Ok(Vec::new());
    }
    let pairs = StarPair::canonical_pairs(ctx);
    let cap = ctx.caps().star_bfs;
    // window -> (parent element, pair that produced this node)
    let mut parents: HashMap<Vec<i64>, Option<(AffinePermutation, StarPair)>> = HashMap::new();
    parents.insert(w.window().to_vec(), None);
    let mut queue = VecDeque::new();
    queue.push_back(w.clone());
    while let Some(u) = queue.pop_front() {
        for pair in &pairs {
            let Some(v) = left_star(ctx, &u, pair)? else {
                continue;
            };
            if parents.contains_key(v.window()) {
                continue;
            }
            if parents.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "star-sequence search frontier",
                    cap,
                    needed: cap + 1,
                });
            }
            parents.insert(v.window().to_vec(), Some((u.clone(), *pair)));
            if !v.left_descents().is_commutative() {
                let mut steps = Vec::new();
                let mut cur = v;
                while let Some(Some((parent, pair))) = parents.get(cur.window()).cloned() {
                    steps.push((pair, cur));
                    cur = parent;
                }
                steps.reverse();
                return Ok(steps);
            }
            queue.push_back(v.clone());
        }
    }
    Err(Error::Internal(format!(
        "star-sequence search exhausted the orbit of w={w} without reaching a \
         noncommutative descent set"
    )))
}

/// Breadth-first closure restricted to fully commutative elements, bucketed
/// by length. Complete because every reduced prefix of a fully commutative
/// element is fully commutative.
pub fn enumerate_fc_by_length(
    ctx: &GroupContext,
    max_len: usize,
) -> Result<Vec<Vec<AffinePermutation>>> {
    let cap = ctx.caps().sweep_len;
    if max_len > cap {
        return Err(Error::CapExceeded {
            what: "fully commutative length sweep",
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
                    if !seen.contains(&u) && is_fully_commutative(ctx, &u)? {
                        seen.insert(u.clone());
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
