//! Element arithmetic for the affine symmetric group in window notation.
//!
//! Elements are periodic bijections `w` of the integers with
//! `w(i + n) = w(i) + n`, stored as the base window `[w(1), ..., w(n)]`.
//! Generators `s_0, ..., s_{n-1}` act on the right by swapping positions
//! `i, i+1` (periodically), so `s_0` wraps around the window boundary.

use crate::error::{Error, Result};

/// Resource caps for the exponentially growing enumerations.
///
/// Defaults are sized for desk-scale exhaustive sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum `len(w)` accepted by [`crate::order::enumerate_interval`].
    pub interval_len: usize,
    /// Maximum length accepted by the breadth-first length sweeps.
    pub sweep_len: usize,
    /// Maximum `len(w)` accepted by the polynomial engine.
    pub engine_len: usize,
    /// Maximum number of words visited when exploring a commutation class.
    pub commutation_class: usize,
    /// Maximum number of elements visited by the star-sequence search.
    pub star_bfs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            interval_len: 12,
            sweep_len: 10,
            engine_len: 12,
            commutation_class: 1_000_000,
            star_bfs: 1_000_000,
        }
    }
}

/// The ambient Coxeter system: rank parameter `n >= 3` plus resource caps.
///
/// Generators are indexed `0..n`. The Coxeter matrix is `m(i,i) = 1`,
/// `m(i,j) = 3` for cyclically adjacent indices and `m(i,j) = 2` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupContext {
    n: usize,
    caps: Caps,
}

/// Descent sets live in a `u64` bitmask, which bounds the supported rank.
pub const MAX_RANK: usize = 64;

impl GroupContext {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_caps(n, Caps::default())
    }

    pub fn with_caps(n: usize, caps: Caps) -> Result<Self> {
        // The presentation's m-rules need n >= 3 (n = 2 collapses the two
        // adjacency conditions onto the same pair).
        if n < 3 {
            return Err(Error::Argument(format!("rank n must be >= 3, got {n}")));
        }
        if n > MAX_RANK {
            return Err(Error::Argument(format!(
                "rank n must be <= {MAX_RANK}, got {n}"
            )));
        }
        Ok(GroupContext { n, caps })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Order of `s_i s_j`: 1 on the diagonal, 3 for cyclically adjacent
    /// indices, 2 otherwise.
    pub fn coxeter_m(&self, i: usize, j: usize) -> Result<u8> {
        self.check_generator(i)?;
        self.check_generator(j)?;
        Ok(coxeter_m(self.n, i, j))
    }

    /// True iff `s_i` and `s_j` commute (distinct, not cyclically adjacent).
    pub fn generators_commute(&self, i: usize, j: usize) -> bool {
        i != j && !adjacent(self.n, i, j)
    }

    pub fn identity(&self) -> AffinePermutation {
        AffinePermutation::identity(self.n)
    }

    pub fn generator(&self, i: usize) -> Result<AffinePermutation> {
        self.identity().mul_gen(i)
    }

    pub fn check_generator(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::InvalidGenerator { index: i, n: self.n })
        }
    }

    pub(crate) fn check_rank(&self, w: &AffinePermutation) -> Result<()> {
        if w.rank() == self.n {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.n, w.rank()))
        }
    }
}

pub(crate) fn adjacent(n: usize, i: usize, j: usize) -> bool {
    let d = (j + n - i) % n;
    d == 1 || d == n - 1
}

pub(crate) fn coxeter_m(n: usize, i: usize, j: usize) -> u8 {
    if i == j {
        1
    } else if adjacent(n, i, j) {
        3
    } else {
        2
    }
}

/// An element of the affine symmetric group, canonically represented by its
/// base window `[w(1), ..., w(n)]`.
///
/// Invariants: the residues `w(i) mod n` are pairwise distinct and the window
/// sums to `n(n+1)/2`. Equality and hashing are on the window, so the window
/// doubles as the canonical form used by every memo table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl AffinePermutation {
    pub fn identity(n: usize) -> Self {
        AffinePermutation {
            window: (1..=n as i64).collect(),
        }
    }

    /// Validates the window invariants for rank `ctx.rank()`.
    pub fn from_window(ctx: &GroupContext, window: Vec<i64>) -> Result<Self> {
        let n = ctx.rank();
        if window.len() != n {
            return Err(Error::InvalidWindow {
                window,
                reason: format!("expected {n} entries"),
            });
        }
        let mut seen = vec![false; n];
        for &v in &window {
            let r = v.rem_euclid(n as i64) as usize;
            if seen[r] {
                return Err(Error::InvalidWindow {
                    window,
                    reason: format!("duplicate residue {r} mod {n}"),
                });
            }
            seen[r] = true;
        }
        let sum: i64 = window.iter().sum();
        let expect = (n * (n + 1) / 2) as i64;
        if sum != expect {
            return Err(Error::InvalidWindow {
                window,
                reason: format!("window sums to {sum}, expected {expect}"),
            });
        }
        Ok(AffinePermutation { window })
    }

    /// Left-to-right product of the word's letters.
    pub fn from_word(ctx: &GroupContext, word: &Word) -> Result<Self> {
        let mut w = ctx.identity();
        for &i in word.letters() {
            w = w.mul_gen(i)?;
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn is_identity(&self) -> bool {
        self.window
            .iter()
            .enumerate()
            .all(|(k, &v)| v == k as i64 + 1)
    }

    /// Value of the periodic bijection at an arbitrary integer.
    pub fn apply(&self, i: i64) -> i64 {
        let n = self.rank() as i64;
        let p = (i - 1).rem_euclid(n); // 0-based base position
        let shift = (i - 1 - p) / n;
        self.window[p as usize] + shift * n
    }

    /// Right multiplication by `s_i`: swaps the window entries in positions
    /// `i` and `i+1`, with position 0 read as position `n` shifted down by
    /// `n` (so `i = 0` wraps the window boundary).
    pub fn mul_gen(&self, i: usize) -> Result<Self> {
        let n = self.rank();
        if i >= n {
            return Err(Error::InvalidGenerator { index: i, n });
        }
        let mut window = self.window.clone();
        if i == 0 {
            window[0] = self.window[n - 1] - n as i64;
            window[n - 1] = self.window[0] + n as i64;
        } else {
            window.swap(i - 1, i);
        }
        Ok(AffinePermutation { window })
    }

    /// Composition `(self * other)(j) = self(other(j))`, so right
    /// multiplication by a generator agrees with [`Self::mul_gen`].
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let n = self.rank();
        let window = (1..=n as i64).map(|j| self.apply(other.apply(j))).collect();
        Ok(AffinePermutation { window })
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank() as i64;
        let mut window = vec![0i64; self.rank()];
        for (p, &v) in self.window.iter().enumerate() {
            // self(p+1) = v, so inverse(v) = p+1; shift v into the base
            // window and shift the preimage along with it.
            let r = (v - 1).rem_euclid(n); // v's base representative is r+1
            let shift = (v - 1 - r) / n;
            window[r as usize] = p as i64 + 1 - shift * n;
        }
        AffinePermutation { window }
    }

    /// True iff `len(w * s_i) < len(w)`, read off the window as
    /// `w(i) > w(i+1)` with the periodic convention `w(0) = w(n) - n`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let n = self.rank();
        debug_assert!(i < n);
        if i == 0 {
            self.window[n - 1] - n as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    pub fn right_descents(&self) -> DescentSet {
        let n = self.rank();
        let mut d = DescentSet::empty(n);
        for i in 0..n {
            if self.has_right_descent(i) {
                d.insert(i);
            }
        }
        d
    }

    pub fn left_descents(&self) -> DescentSet {
        self.inverse().right_descents()
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        // i is a left descent iff the value i appears to the right of i+1,
        // i.e. iff i is a right descent of the inverse.
        let n = self.rank() as i64;
        let pos = |v: i64| {
            let r = (v - 1).rem_euclid(n);
            let shift = (v - 1 - r) / n;
            // inverse(v) where v = r+1 + shift*n
            let p = self
                .window
                .iter()
                .position(|&x| (x - 1).rem_euclid(n) == r)
                .expect("window residues cover all classes");
            let base_shift = (self.window[p] - 1 - r) / n;
            p as i64 + 1 + (shift - base_shift) * n
        };
        if i == 0 {
            pos(0) > pos(1)
        } else {
            pos(i as i64) > pos(i as i64 + 1)
        }
    }

    /// Minimal word length, computed by greedy descent stripping (always
    /// picking the smallest right descent).
    pub fn length(&self) -> usize {
        let mut w = self.clone();
        let mut count = 0usize;
        while !w.is_identity() {
            let i = (0..w.rank())
                .find(|&i| w.has_right_descent(i))
                .expect("non-identity element has a right descent");
            w = w.mul_gen(i).expect("descent index is valid");
            count += 1;
            if count > LENGTH_STEP_CAP {
                panic!("internal error: descent stripping exceeded {LENGTH_STEP_CAP} steps");
            }
        }
        count
    }

    /// Closed-form inversion count `sum_{i<j} |floor((w(j)-w(i))/n)|`.
    ///
    /// Cross-check only: the test suite validates this against [`Self::length`]
    /// on exhaustive sweeps; `length` remains the operational definition.
    pub fn length_formula(&self) -> usize {
        let n = self.rank() as i64;
        let mut total = 0i64;
        for i in 0..self.rank() {
            for j in (i + 1)..self.rank() {
                total += (self.window[j] - self.window[i]).div_euclid(n).abs();
            }
        }
        total as usize
    }

    /// A reduced word for `w`: the greedy descent-stripping sequence,
    /// reversed. Deterministic via the smallest-descent tie-break.
    pub fn reduced_word(&self) -> Word {
        let mut w = self.clone();
        let mut letters = Vec::new();
        while !w.is_identity() {
            let i = (0..w.rank())
                .find(|&i| w.has_right_descent(i))
                .expect("non-identity element has a right descent");
            w = w.mul_gen(i).expect("descent index is valid");
            letters.push(i);
            if letters.len() > LENGTH_STEP_CAP {
                panic!("internal error: descent stripping exceeded {LENGTH_STEP_CAP} steps");
            }
        }
        letters.reverse();
        Word { letters }
    }
}

const LENGTH_STEP_CAP: usize = 1 << 20;

impl std::fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.window.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A word in the generators: a sequence of indices in `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(ctx: &GroupContext, letters: Vec<usize>) -> Result<Self> {
        for &i in &letters {
            ctx.check_generator(i)?;
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, i) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

/// A set of generator indices, used for left and right descent sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DescentSet {
    bits: u64,
    n: u32,
}

impl DescentSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_RANK);
        DescentSet { bits: 0, n: n as u32 }
    }

    pub fn from_members(n: usize, members: &[usize]) -> Self {
        let mut d = DescentSet::empty(n);
        for &i in members {
            debug_assert!(i < n);
            d.insert(i);
        }
        d
    }

    pub fn insert(&mut self, i: usize) {
        self.bits |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n as usize && self.bits & (1 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n as usize).filter(|&i| self.contains(i))
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True iff no two members are cyclically adjacent, i.e. the set
    /// consists of mutually commuting generators.
    pub fn is_commutative(&self) -> bool {
        let n = self.n as usize;
        let members = self.members();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if adjacent(n, i, j) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Display for DescentSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> GroupContext {
        GroupContext::new(n).unwrap()
    }

    fn from_letters(ctx: &GroupContext, letters: &[usize]) -> AffinePermutation {
        let word = Word::new(ctx, letters.to_vec()).unwrap();
        AffinePermutation::from_word(ctx, &word).unwrap()
    }

    #[test]
    fn rank_bounds() {
        assert!(GroupContext::new(2).is_err());
        assert!(GroupContext::new(3).is_ok());
        assert!(GroupContext::new(65).is_err());
    }

    #[test]
    fn coxeter_matrix() {
        let c = ctx(4);
        assert_eq!(c.coxeter_m(1, 1).unwrap(), 1);
        assert_eq!(c.coxeter_m(0, 1).unwrap(), 3);
        assert_eq!(c.coxeter_m(0, 3).unwrap(), 3); // wrap-around adjacency
        assert_eq!(c.coxeter_m(0, 2).unwrap(), 2);
        assert_eq!(c.coxeter_m(1, 3).unwrap(), 2);
        assert!(c.coxeter_m(0, 4).is_err());
        // n = 3: every distinct pair is adjacent
        let c3 = ctx(3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(c3.coxeter_m(i, j).unwrap(), 3);
                }
            }
        }
    }

    #[test]
    fn generator_action_matches_swap_rule() {
        let c = ctx(3);
        let e = c.identity();
        assert_eq!(e.mul_gen(1).unwrap().window(), &[2, 1, 3]);
        // involution
        assert_eq!(e.mul_gen(1).unwrap().mul_gen(1).unwrap(), e);
        // wrap-around rule for i = 0
        let s0 = e.mul_gen(0).unwrap();
        assert_eq!(s0.window(), &[0, 2, 4]);
        AffinePermutation::from_window(&c, s0.window().to_vec()).unwrap();
    }

    #[test]
    fn multiply_consistent_with_generator_action() {
        let c = ctx(3);
        let e = c.identity();
        let s1 = c.generator(1).unwrap();
        let s2 = c.generator(2).unwrap();
        assert_eq!(e.mul(&s1).unwrap(), s1);
        let s1s2 = s1.mul(&s2).unwrap();
        assert_eq!(s1s2, e.mul_gen(1).unwrap().mul_gen(2).unwrap());
        assert_eq!(s1s2.window(), &[2, 3, 1]);
        // identity is neutral on both sides
        assert_eq!(s1s2.mul(&e).unwrap(), s1s2);
        assert_eq!(e.mul(&s1s2).unwrap(), s1s2);
    }

    #[test]
    fn rank_mismatch_rejected() {
        let a = ctx(3).identity();
        let b = ctx(4).identity();
        assert!(matches!(a.mul(&b), Err(Error::RankMismatch(3, 4))));
    }

    #[test]
    fn inverse_roundtrip() {
        let c = ctx(3);
        let e = c.identity();
        assert_eq!(e.inverse(), e);
        let s1 = c.generator(1).unwrap();
        assert_eq!(s1.inverse(), s1);
        let s1s2 = from_letters(&c, &[1, 2]);
        let s2s1 = from_letters(&c, &[2, 1]);
        assert_eq!(s1s2.inverse(), s2s1);
        assert_eq!(s1s2.mul(&s1s2.inverse()).unwrap(), e);
    }

    #[test]
    fn length_examples() {
        let c = ctx(3);
        assert_eq!(c.identity().length(), 0);
        for i in 0..3 {
            assert_eq!(c.generator(i).unwrap().length(), 1);
        }
        assert_eq!(from_letters(&c, &[0, 1, 0]).length(), 3);
    }

    #[test]
    fn length_formula_matches_on_words() {
        let c = ctx(4);
        let words: &[&[usize]] = &[
            &[],
            &[0],
            &[0, 1, 0],
            &[1, 2, 3, 0],
            &[0, 1, 2, 3, 0, 1],
            &[3, 2, 1, 0, 3, 2, 1],
        ];
        for letters in words {
            let w = from_letters(&c, letters);
            assert_eq!(w.length(), w.length_formula(), "word {letters:?}");
        }
    }

    #[test]
    fn descent_examples() {
        let c = ctx(3);
        assert!(c.identity().right_descents().is_empty());
        let s1 = c.generator(1).unwrap();
        assert_eq!(s1.right_descents().members(), vec![1]);
        let s1s0 = from_letters(&c, &[1, 0]);
        assert_eq!(s1s0.right_descents().members(), vec![0]);
        let s1s2 = from_letters(&c, &[1, 2]);
        assert_eq!(s1s2.left_descents().members(), vec![1]);
    }

    #[test]
    fn left_descents_of_commuting_product() {
        let c = ctx(4);
        let i0 = from_letters(&c, &[0, 2]);
        assert_eq!(i0.left_descents().members(), vec![0, 2]);
        assert_eq!(i0.right_descents().members(), vec![0, 2]);
    }

    #[test]
    fn has_left_descent_matches_inverse_route() {
        let c = ctx(4);
        let words: &[&[usize]] = &[&[], &[0], &[1, 2], &[0, 2, 1, 3], &[3, 0, 1, 2, 3]];
        for letters in words {
            let w = from_letters(&c, letters);
            let via_inverse = w.left_descents();
            for i in 0..4 {
                assert_eq!(w.has_left_descent(i), via_inverse.contains(i), "{letters:?} i={i}");
            }
        }
    }

    #[test]
    fn reduced_word_examples() {
        let c = ctx(3);
        assert!(c.identity().reduced_word().is_empty());
        assert_eq!(c.generator(2).unwrap().reduced_word().letters(), &[2]);
        let s1s2 = from_letters(&c, &[1, 2]);
        let rw = s1s2.reduced_word();
        assert_eq!(rw.len(), s1s2.length());
        assert_eq!(AffinePermutation::from_word(&c, &rw).unwrap(), s1s2);
        assert_eq!(rw.letters(), &[1, 2]);
    }

    #[test]
    fn window_validation() {
        let c = ctx(3);
        assert_eq!(
            AffinePermutation::from_window(&c, vec![1, 2, 3]).unwrap(),
            c.identity()
        );
        // duplicate residue
        let err = AffinePermutation::from_window(&c, vec![1, 1, 4]).unwrap_err();
        assert!(matches!(err, Error::InvalidWindow { .. }));
        assert!(err.to_string().contains("duplicate residue"));
        // wrong sum
        let err = AffinePermutation::from_window(&c, vec![2, 3, 4]).unwrap_err();
        assert!(err.to_string().contains("sums to"));
        // wrong arity
        assert!(AffinePermutation::from_window(&c, vec![1, 2]).is_err());
    }

    #[test]
    fn word_validation() {
        let c = ctx(3);
        assert!(Word::new(&c, vec![0, 1, 2]).is_ok());
        assert!(matches!(
            Word::new(&c, vec![0, 3]),
            Err(Error::InvalidGenerator { index: 3, n: 3 })
        ));
    }

    #[test]
    fn apply_is_periodic() {
        let c = ctx(3);
        let w = from_letters(&c, &[0, 1]);
        for i in -7..7i64 {
            assert_eq!(w.apply(i + 3), w.apply(i) + 3);
        }
    }

    #[test]
    fn descent_set_commutativity() {
        assert!(DescentSet::empty(4).is_commutative());
        assert!(DescentSet::from_members(4, &[0, 2]).is_commutative());
        assert!(!DescentSet::from_members(4, &[0, 1]).is_commutative());
        assert!(!DescentSet::from_members(4, &[0, 3]).is_commutative()); // wrap
        assert!(!DescentSet::from_members(3, &[0, 2]).is_commutative()); // n=3: all adjacent
    }
}
