use crate::error::{Error, Result};

/// A finite metric stored as a dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    n: usize,
    d: Vec<f64>,
}

impl Metric {
    /// Validates symmetry, zero diagonal, positivity off the diagonal and the triangle inequality.
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "metric on {n} points needs {} entries, got {}",
                n * n,
                d.len()
            )));
        }
        let metric = Metric { n, d };
        metric.validate(1e-9)?;
        Ok(metric)
    }

    pub(crate) fn new_unchecked(n: usize, d: Vec<f64>) -> Self {
        debug_assert_eq!(d.len(), n * n);
        Metric { n, d }
    }

    /// Builds a metric from a distance function on index pairs.
    pub fn from_fn(n: usize, dist: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut d = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    d[a * n + b] = dist(a, b);
                }
            }
        }
        Self::new(n, d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.d[a * self.n + b]
    }

    fn validate(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            if self.dist(a, a) != 0.0 {
                return Err(Error::InvalidDiversity(format!("d({a},{a}) is not zero")));
            }
            for b in 0..n {
                let v = self.dist(a, b);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidDiversity(format!("d({a},{b}) = {v} is not a finite non-negative value")));
                }
                if a != b && v == 0.0 {
                    return Err(Error::InvalidDiversity(format!("d({a},{b}) = 0 for distinct points")));
                }
                if (v - self.dist(b, a)).abs() > tol {
                    return Err(Error::InvalidDiversity(format!("d({a},{b}) != d({b},{a})")));
                }
            }
        }
        if let Some((a, b, c)) = self.triangle_violation(tol) {
            return Err(Error::InvalidDiversity(format!(
                "triangle inequality fails for d({a},{c}) > d({a},{b}) + d({b},{c})"
            )));
        }
        Ok(())
    }

    /// First triple `(a, b, c)` with `d(a,c) > d(a,b) + d(b,c) + tol`, if any.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.dist(a, c) > self.dist(a, b) + self.dist(b, c) + tol {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}
