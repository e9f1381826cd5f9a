//! Exact Kazhdan-Lusztig polynomials via the descent recurrence.
//!
//! For `s` a left descent of `w` and `v = sw`, with `c = 0` if `x < sx`
//! and `c = 1` otherwise:
//!
//! ```text
//! P(x,w) = q^(1-c) P(sx,v) + q^c P(x,v)
//!            - sum over { z < v : mu(z,v) != 0, sz < z } of
//!              mu(z,v) * q^((len(w)-len(z))/2) * P(x,z)
//! ```
//!
//! anchored by `P(w,w) = 1` and `P(x,w) = 0` unless `x <= w`. The
//! mu-coefficient is the coefficient of `q^((len(w)-len(x)-1)/2)`, always
//! derived from the stored polynomial and never cached separately.

use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::group::{AffinePermutation, GroupContext};
use crate::order::{bruhat_leq, enumerate_interval};
use crate::poly::IntPolynomial;

/// How the recurrence picks its descent `s` of `w`.
///
/// The computed polynomial must not depend on this; the test suite
/// recomputes with different choices and compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DescentChoice {
    /// First letter of the canonical reduced word.
    #[default]
    FirstLetter,
    SmallestLeftDescent,
    LargestLeftDescent,
}

type PairKey = (Vec<i64>, Vec<i64>);

/// Memoizing polynomial engine for a fixed rank.
///
/// Concurrent callers may race on the same pair; recomputation is idempotent
/// and insert-if-absent keeps one canonical value.
pub struct KlCache {
    ctx: GroupContext,
    choice: DescentChoice,
    table: DashMap<PairKey, IntPolynomial>,
    intervals: DashMap<Vec<i64>, Arc<Vec<AffinePermutation>>>,
}

impl KlCache {
    pub fn new(ctx: GroupContext) -> Self {
        Self::with_choice(ctx, DescentChoice::default())
    }

    pub fn with_choice(ctx: GroupContext, choice: DescentChoice) -> Self {
        KlCache {
            ctx,
            choice,
            table: DashMap::new(),
            intervals: DashMap::new(),
        }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// The polynomial `P(x, w)`.
    pub fn polynomial(
        &self,
        x: &AffinePermutation,
        w: &AffinePermutation,
    ) -> Result<IntPolynomial> {
        self.ctx.check_rank(x)?;
        self.ctx.check_rank(w)?;
        let lw = w.length();
        let cap = self.ctx.caps().engine_len;
        if lw > cap {
            return Err(Error::CapExceeded {
                what: "polynomial engine length",
                cap,
                needed: lw,
            });
        }
        self.poly_inner(x, w)
    }

    /// The leading coefficient `mu(x, w)`: zero when `len(x) >= len(w)`,
    /// when the length difference is even, or when `x` is not below `w`;
    /// otherwise the coefficient of `q^((len(w)-len(x)-1)/2)`.
    pub fn mu(&self, x: &AffinePermutation, w: &AffinePermutation) -> Result<i64> {
        self.ctx.check_rank(x)?;
        self.ctx.check_rank(w)?;
        let (lx, lw) = (x.length(), w.length());
        if lx >= lw || (lw - lx).is_multiple_of(2) || !bruhat_leq(x, w)? {
            return Ok(0);
        }
        let p = self.polynomial(x, w)?;
        Ok(p.coeff((lw - lx - 1) / 2))
    }

    fn poly_inner(&self, x: &AffinePermutation, w: &AffinePermutation) -> Result<IntPolynomial> {
        if !bruhat_leq(x, w)? {
            return Ok(IntPolynomial::zero());
        }
        if x == w {
            return Ok(IntPolynomial::one());
        }
        let key = (x.window().to_vec(), w.window().to_vec());
        if let Some(hit) = self.table.get(&key) {
            return Ok(hit.clone());
        }

        let s = self.pick_descent(w);
        let gen = self.ctx.generator(s)?;
        let v = gen.mul(w)?;
        let sx = gen.mul(x)?;
        let c = if x.has_left_descent(s) { 1usize } else { 0 };

        let mut acc = IntPolynomial::zero();
        acc.add_scaled_shifted(&self.poly_inner(&sx, &v)?, 1, 1 - c);
        acc.add_scaled_shifted(&self.poly_inner(x, &v)?, 1, c);

        let lw = w.length();
        for z in self.interval(&v)?.iter() {
            if z == &v || !z.has_left_descent(s) {
                continue;
            }
            let m = self.mu_unchecked(z, &v)?;
            if m == 0 {
                continue;
            }
            let diff = lw - z.length();
            if !diff.is_multiple_of(2) {
                return Err(Error::Internal(format!(
                    "odd exponent {diff}/2 in mu-sum at z={z}, w={w}"
                )));
            }
            let pz = self.poly_inner(x, z)?;
            acc.add_scaled_shifted(&pz, -m, diff / 2);
        }

        if acc.has_negative_coeff() {
            return Err(Error::Internal(format!(
                "negative coefficient in P(x={x}, w={w}) = {acc}"
            )));
        }
        if !degree_bound_check(x, w, &acc) {
            return Err(Error::Internal(format!(
                "degree bound exceeded for P(x={x}, w={w}) = {acc}"
            )));
        }
        self.table.insert(key, acc.clone());
        Ok(acc)
    }

    // mu for internal use after length gates; z < v is guaranteed by the
    // interval filter.
    fn mu_unchecked(&self, z: &AffinePermutation, v: &AffinePermutation) -> Result<i64> {
        let (lz, lv) = (z.length(), v.length());
        if (lv - lz).is_multiple_of(2) {
            return Ok(0);
        }
        let p = self.poly_inner(z, v)?;
        Ok(p.coeff((lv - lz - 1) / 2))
    }

    fn pick_descent(&self, w: &AffinePermutation) -> usize {
        match self.choice {
            DescentChoice::FirstLetter => w.reduced_word().letters()[0],
            DescentChoice::SmallestLeftDescent => {
                w.left_descents().iter().next().expect("w != e")
            }
            DescentChoice::LargestLeftDescent => {
                w.left_descents().iter().last().expect("w != e")
            }
        }
    }

    fn interval(&self, v: &AffinePermutation) -> Result<Arc<Vec<AffinePermutation>>> {
        if let Some(hit) = self.intervals.get(v.window()) {
            return Ok(hit.clone());
        }
        let iv = Arc::new(enumerate_interval(&self.ctx, v)?);
        self.intervals.insert(v.window().to_vec(), iv.clone());
        Ok(iv)
    }

    /// Deterministic snapshot of the memo table, sorted by window pair.
    pub fn entries_sorted(&self) -> Vec<(PairKey, IntPolynomial)> {
        let mut out: Vec<_> = self
            .table
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Inserts a persisted entry. Windows are validated against this cache's
    /// rank; the polynomial value is trusted as previously computed.
    pub fn insert_loaded(&self, x: Vec<i64>, w: Vec<i64>, p: IntPolynomial) -> Result<()> {
        let x = AffinePermutation::from_window(&self.ctx, x)?;
        let w = AffinePermutation::from_window(&self.ctx, w)?;
        self.table
            .insert((x.window().to_vec(), w.window().to_vec()), p);
        Ok(())
    }
}

/// True iff `deg p <= (len(w) - len(x) - 1)/2`; the zero polynomial passes
/// vacuously. Applied as a post-assertion to every computed pair with x < w.
pub fn degree_bound_check(
    x: &AffinePermutation,
    w: &AffinePermutation,
    p: &IntPolynomial,
) -> bool {
    match p.degree() {
        None => true,
        Some(d) => 2 * d as i64 <= w.length() as i64 - x.length() as i64 - 1,
    }
}
