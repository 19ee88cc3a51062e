use crate::diversity::SetFunction;
use crate::error::{Error, Result};
use crate::subset;

/// `n` points in `dim`-dimensional real space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

/// Point sets feeding the generators share the same representation.
pub type PointSet = PointConfiguration;

impl PointConfiguration {
    pub fn new(n: usize, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != n * dim {
            return Err(Error::DimensionMismatch(format!(
                "{n} points of dimension {dim} need {} coordinates, got {}",
                n * dim,
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDiversity("coordinates must be finite".into()));
        }
        Ok(PointConfiguration { n, dim, coords })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {bad} has {} coordinates, expected {dim}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), dim, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, p: usize) -> &[f64] {
        &self.coords[p * self.dim..(p + 1) * self.dim]
    }

    pub fn coord(&self, p: usize, axis: usize) -> f64 {
        self.coords[p * self.dim + axis]
    }

    pub fn euclidean(&self, a: usize, b: usize) -> f64 {
        self.point(a)
            .iter()
            .zip(self.point(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// `δ_1(A) = Σ_i (max_{a∈A} a_i − min_{a∈A} a_i)`.
    pub fn l1_diversity(&self, a: u64) -> f64 {
        if a.count_ones() < 2 {
            return 0.0;
        }
        (0..self.dim)
            .map(|axis| {
                let (lo, hi) = subset::elements(a)
                    .map(|p| self.coord(p, axis))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
                hi - lo
            })
            .sum()
    }
}

impl SetFunction for PointConfiguration {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, mask: u64) -> f64 {
        self.l1_diversity(mask)
    }

    /// Per-axis running min/max over subsets, `O(dim · 2^n)`.
    fn tabulate(&self) -> Vec<f64> {
        let size = 1usize << self.n;
        let mut total = vec![0.0; size];
        let mut lo = vec![0.0; size];
        let mut hi = vec![0.0; size];
        for axis in 0..self.dim {
            for mask in 1..size {
                let p = mask.trailing_zeros() as usize;
                let x = self.coord(p, axis);
                let rest = mask & (mask - 1);
                if rest == 0 {
                    lo[mask] = x;
                    hi[mask] = x;
                } else {
                    lo[mask] = lo[rest].min(x);
                    hi[mask] = hi[rest].max(x);
                    total[mask] += hi[mask] - lo[mask];
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_diversity_of_three_points() {
        let p = PointConfiguration::from_rows(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(p.l1_diversity(0b111), 3.0);
        assert_eq!(p.l1_diversity(0b011), 1.0);
        assert_eq!(p.l1_diversity(0b101), 2.0);
        assert_eq!(p.l1_diversity(0b110), 3.0);
        assert_eq!(p.l1_diversity(0b010), 0.0);
        let table = p.tabulate();
        for m in 0..8u64 {
            assert_eq!(table[m as usize], p.l1_diversity(m));
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(PointConfiguration::from_rows(2, &[vec![0.0, 0.0], vec![1.0]]).is_err());
        assert!(PointConfiguration::new(1, 1, vec![f64::NAN]).is_err());
    }
}
