//! Dense integer polynomials in `q`, the carrier for Kazhdan-Lusztig
//! polynomials. All arithmetic is exact; there is no floating point here.

/// Coefficient vector indexed by exponent, kept trimmed: no trailing zeros,
/// and the zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    /// The monomial `q^k`.
    pub fn q_power(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff(0)
    }

    /// `self += scale * q^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &IntPolynomial, scale: i64, shift: usize) {
        if other.is_zero() || scale == 0 {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift] += scale * c;
        }
        self.trim();
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shifted(other, 1, 0);
        out
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shifted(other, -1, 0);
        out
    }

    /// `q^k * self`.
    pub fn shifted(&self, k: usize) -> IntPolynomial {
        let mut out = IntPolynomial::zero();
        out.add_scaled_shifted(self, 1, k);
        out
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.iter().any(|&c| c < 0)
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (a, k) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "q^{k}")?,
                (_, 1) => write!(f, "{a}q")?,
                (_, _) => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}
