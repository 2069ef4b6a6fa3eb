//! Blow-up weight sequences a_n with closed-form sums and tail bounds.

use crate::error::{Error, Result};

/// Two-sided geometric weight family a_n = c * r^|n|, n in Z.
///
/// The total sum c*(1+r)/(1-r) must stay strictly below 1; its complement
/// b = 1 - sum is the Lebesgue coefficient of the blow-up measure. Truncation
/// to |n| <= N leaves a tail mass tail(N) = 2*c*r^(N+1)/(1-r) that callers
/// fold back into the Lebesgue part, so tolerances widen by at most 2*tail(N).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSequence {
    scale: f64, // c
    ratio: f64, // r
}

impl WeightSequence {
    pub fn geometric(scale: f64, ratio: f64) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::Domain {
                name: "scale",
                value: scale,
                domain: "(0, inf)",
            });
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Domain {
                name: "ratio",
                value: ratio,
                domain: "(0, 1)",
            });
        }
        let w = Self { scale, ratio };
        if w.total() >= 1.0 {
            return Err(Error::Precondition(format!(
                "weight total {} must be < 1 (scale {}, ratio {})",
                w.total(),
                scale,
                ratio
            )));
        }
        Ok(w)
    }

    /// Defaults used throughout: a_n = (1/4) * 3^-|n|, so a_0 = 1/4 and the
    /// Lebesgue coefficient is b = 1/2.
    pub fn default_quarter() -> Self {
        Self::geometric(0.25, 1.0 / 3.0).expect("default weights are valid")
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// a_n
    pub fn weight(&self, n: i64) -> f64 {
        self.scale
            * self
                .ratio
                .powi(n.unsigned_abs().min(i32::MAX as u64) as i32)
    }

    /// sum over all n in Z, in closed form: c * (1 + r) / (1 - r).
    pub fn total(&self) -> f64 {
        self.scale * (1.0 + self.ratio) / (1.0 - self.ratio)
    }

    /// Lebesgue coefficient b = 1 - total.
    pub fn lebesgue_coeff(&self) -> f64 {
        1.0 - self.total()
    }

    /// tail(N) = sum over |n| > N. For N < 0 this is the whole sum (the
    /// blow-up is disabled and every atom is in the tail).
    pub fn tail(&self, trunc: i64) -> f64 {
        if trunc < 0 {
            return self.total();
        }
        let n = trunc.min(i32::MAX as i64) as i32;
        2.0 * self.scale * self.ratio.powi(n + 1) / (1.0 - self.ratio)
    }

    /// Partial sum over |n| <= N.
    pub fn partial(&self, trunc: i64) -> f64 {
        self.total() - self.tail(trunc)
    }
}
