//! Exact binomial coefficients from Pascal's triangle.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Rows `0..=max_n` of Pascal's triangle in arbitrary precision.
#[derive(Debug, Clone)]
pub struct Binomials {
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for a in 1..=max_n {
            let prev = &rows[a - 1];
            let mut row = Vec::with_capacity(a + 1);
            row.push(BigUint::one());
            for b in 1..a {
                row.push(&prev[b - 1] + &prev[b]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)`, zero when `b < 0`, `b > a` or `a < 0`.
    pub fn get(&self, a: i64, b: i64) -> BigUint {
        if a < 0 || b < 0 || b > a {
            return BigUint::zero();
        }
        self.rows[a as usize][b as usize].clone()
    }
}

/// `C(a, b)` in machine integers, `None` on overflow. Zero outside `0 <= b <= a`.
pub fn binomial_u128(a: i64, b: i64) -> Option<u128> {
    if a < 0 || b < 0 || b > a {
        return Some(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for t in 0..b {
        // acc * (a - t) / (t + 1) stays integral at every step
        acc = acc.checked_mul(a - t)? / (t + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = Binomials::new(10);
        assert_eq!(t.get(5, 2), BigUint::from(10u32));
        assert_eq!(t.get(5, -1), BigUint::zero());
        assert_eq!(t.get(5, 6), BigUint::zero());
        assert_eq!(t.get(-1, 0), BigUint::zero());
        assert_eq!(binomial_u128(10, 5), Some(252));
        assert_eq!(binomial_u128(3, 7), Some(0));
    }

    #[test]
    fn machine_and_exact_agree() {
        let t = Binomials::new(63);
        for a in 0..=63i64 {
            for b in 0..=a {
                assert_eq!(BigUint::from(binomial_u128(a, b).unwrap()), t.get(a, b));
            }
        }
    }
}
