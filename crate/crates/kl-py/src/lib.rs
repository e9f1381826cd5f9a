//! Python bindings: `kl_affine` exposes the affine permutations, the
//! polynomial engine, and the mu decision procedure.
//!
//! ```python
//! import kl_affine as kl
//! x = kl.AffinePerm.from_word(4, [2])
//! w = kl.AffinePerm.from_word(4, [2, 1, 3, 2])
//! kl.KlEngine(4).p(x, w)      # [1, 1]
//! kl.decide_mu(x, w)          # 1
//! ```

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kl_core::{
    bruhat_leq, classify_fc, decide_mu, enumerate_fc_by_length, is_fully_commutative,
    left_star, right_star, verify_theorem, AffinePermutation, Error as CoreError, GroupContext,
    KlCache, StarPair, Word,
};

fn to_py_err(e: CoreError) -> PyErr {
    match e {
        CoreError::Internal(_) | CoreError::FallbackRequired(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn context(n: usize) -> PyResult<GroupContext> {
    GroupContext::new(n).map_err(to_py_err)
}

/// An element of the affine symmetric group in window notation.
#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct AffinePerm {
    inner: AffinePermutation,
}

#[pymethods]
impl AffinePerm {
    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        Ok(AffinePerm { inner: context(n)?.identity() })
    }

    /// Left-to-right product of generator indices.
    #[staticmethod]
    fn from_word(n: usize, letters: Vec<usize>) -> PyResult<Self> {
        let ctx = context(n)?;
        let word = Word::new(&ctx, letters).map_err(to_py_err)?;
        Ok(AffinePerm {
            inner: AffinePermutation::from_word(&ctx, &word).map_err(to_py_err)?,
        })
    }

    /// Validates and wraps a full window `[w(1), ..., w(n)]`.
    #[staticmethod]
    fn from_window(window: Vec<i64>) -> PyResult<Self> {
        let ctx = context(window.len())?;
        Ok(AffinePerm {
            inner: AffinePermutation::from_window(&ctx, window).map_err(to_py_err)?,
        })
    }

    fn window(&self) -> Vec<i64> {
        self.inner.window().to_vec()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn length(&self) -> usize {
        self.inner.length()
    }

    fn reduced_word(&self) -> Vec<usize> {
        self.inner.reduced_word().letters().to_vec()
    }

    fn left_descents(&self) -> Vec<usize> {
        self.inner.left_descents().members()
    }

    fn right_descents(&self) -> Vec<usize> {
        self.inner.right_descents().members()
    }

    fn inverse(&self) -> Self {
        AffinePerm { inner: self.inner.inverse() }
    }

    fn is_fully_commutative(&self) -> PyResult<bool> {
        let ctx = context(self.inner.rank())?;
        is_fully_commutative(&ctx, &self.inner).map_err(to_py_err)
    }

    fn __mul__(&self, other: &AffinePerm) -> PyResult<Self> {
        Ok(AffinePerm {
            inner: self.inner.mul(&other.inner).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("AffinePerm({})", self.inner)
    }
}

/// Memoizing Kazhdan-Lusztig polynomial engine for a fixed rank.
#[pyclass]
struct KlEngine {
    cache: KlCache,
}

#[pymethods]
impl KlEngine {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(KlEngine { cache: KlCache::new(context(n)?) })
    }

    /// Coefficient list of P(x, w), constant term first.
    fn p(&self, x: &AffinePerm, w: &AffinePerm) -> PyResult<Vec<i64>> {
        Ok(self
            .cache
            .polynomial(&x.inner, &w.inner)
            .map_err(to_py_err)?
            .coeffs()
            .to_vec())
    }

    fn mu(&self, x: &AffinePerm, w: &AffinePerm) -> PyResult<i64> {
        self.cache.mu(&x.inner, &w.inner).map_err(to_py_err)
    }

    /// Number of memoized polynomial entries.
    fn size(&self) -> usize {
        self.cache.len()
    }
}

/// Decides mu(x, w) in {0, 1} without computing polynomials; x must be
/// fully commutative.
#[pyfunction(name = "decide_mu")]
fn decide_mu_py(x: &AffinePerm, w: &AffinePerm) -> PyResult<u8> {
    let ctx = context(x.inner.rank())?;
    Ok(decide_mu(&ctx, &x.inner, &w.inner).map_err(to_py_err)?.value)
}

/// Like `decide_mu`, also returning the derivation trace as strings.
#[pyfunction]
fn decide_mu_trace(x: &AffinePerm, w: &AffinePerm) -> PyResult<(u8, Vec<String>)> {
    let ctx = context(x.inner.rank())?;
    let d = decide_mu(&ctx, &x.inner, &w.inner).map_err(to_py_err)?;
    let steps = d.trace.iter().map(|s| s.to_string()).collect();
    Ok((d.value, steps))
}

#[pyfunction(name = "bruhat_leq")]
fn bruhat_leq_py(x: &AffinePerm, w: &AffinePerm) -> PyResult<bool> {
    bruhat_leq(&x.inner, &w.inner).map_err(to_py_err)
}

/// Structural case tags of a fully commutative element.
#[pyfunction(name = "classify_fc")]
fn classify_fc_py(w: &AffinePerm) -> PyResult<Vec<String>> {
    let ctx = context(w.inner.rank())?;
    let cls = classify_fc(&ctx, &w.inner).map_err(to_py_err)?;
    Ok(cls.tags().iter().map(|t| t.name().to_string()).collect())
}

/// The star partner of `w` for the noncommuting pair `(s, t)`, or None.
#[pyfunction]
#[pyo3(signature = (w, s, t, side = "left"))]
fn star(w: &AffinePerm, s: usize, t: usize, side: &str) -> PyResult<Option<AffinePerm>> {
    let ctx = context(w.inner.rank())?;
    let pair = StarPair::new(&ctx, s, t).map_err(to_py_err)?;
    let result = match side {
        "left" => left_star(&ctx, &w.inner, &pair),
        "right" => right_star(&ctx, &w.inner, &pair),
        other => {
            return Err(PyValueError::new_err(format!(
                "side must be 'left' or 'right', got {other:?}"
            )))
        }
    };
    Ok(result.map_err(to_py_err)?.map(|inner| AffinePerm { inner }))
}

/// Fully commutative elements up to the given length, as windows.
#[pyfunction]
fn enum_fc(n: usize, max_len: usize) -> PyResult<Vec<Vec<i64>>> {
    let ctx = context(n)?;
    Ok(enumerate_fc_by_length(&ctx, max_len)
        .map_err(to_py_err)?
        .into_iter()
        .flatten()
        .map(|w| w.window().to_vec())
        .collect())
}

/// Exhaustive differential sweep; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (n, max_len, jobs = 1))]
fn verify(py: Python<'_>, n: usize, max_len: usize, jobs: usize) -> PyResult<Py<PyDict>> {
    let engine = KlCache::new(context(n)?);
    let report = verify_theorem(&engine, max_len, jobs.max(1)).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("n", report.n)?;
    out.set_item("max_len_w", report.max_len_w)?;
    out.set_item("pairs_checked", report.pairs_checked)?;
    out.set_item("mu_zero", report.mu_zero)?;
    out.set_item("mu_one", report.mu_one)?;
    out.set_item("disagreements", report.disagreements)?;
    out.set_item("fallbacks", report.fallbacks)?;
    out.set_item("mu_out_of_range", report.mu_out_of_range)?;
    out.set_item("passed", report.passed())?;
    Ok(out.into())
}

#[pymodule]
fn kl_affine(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<AffinePerm>()?;
    m.add_class::<KlEngine>()?;
    m.add_function(wrap_pyfunction!(decide_mu_py, m)?)?;
    m.add_function(wrap_pyfunction!(decide_mu_trace, m)?)?;
    m.add_function(wrap_pyfunction!(bruhat_leq_py, m)?)?;
    m.add_function(wrap_pyfunction!(classify_fc_py, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(enum_fc, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
