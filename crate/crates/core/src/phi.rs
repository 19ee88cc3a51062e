//! The L1-embeddable symmetric basis `φ_ℓ`, its saturation level `x(ℓ)`, the capped
//! truncations `Ψ_x(k) = min(x, k)` and the choice of `ℓ` approximating each `ψ_i`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::binomial::Binomials;
use crate::error::{Error, Result};

/// Largest `n` accepted by the φ evaluators.
pub const PHI_CAP: usize = 512;

fn check_phi_args(n: usize, ell: usize, k: usize) -> Result<()> {
    if !(2..=PHI_CAP).contains(&n) || ell == 0 || ell >= n || k >= n {
        return Err(Error::OutOfRange(format!("phi(n = {n}, ell = {ell}, k = {k})")));
    }
    Ok(())
}

/// `φ_ℓ(k) = (C(n,ℓ) − C(n−k−1, n−ℓ) − C(n−k−1, ℓ)) / (2·C(n−2, ℓ−1))` as an exact rational.
fn phi_rational(table: &Binomials, n: usize, ell: usize, k: usize) -> BigRational {
    let (n, ell, k) = (n as i64, ell as i64, k as i64);
    let numerator = BigInt::from(table.get(n, ell))
        - BigInt::from(table.get(n - k - 1, n - ell))
        - BigInt::from(table.get(n - k - 1, ell));
    let denominator = BigInt::from(table.get(n - 2, ell - 1)) * 2;
    BigRational::new(numerator, denominator)
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("phi values are finite")
}

/// `φ_ℓ(k)` evaluated exactly.
pub fn phi_exact(n: usize, ell: usize, k: usize) -> Result<BigRational> {
    check_phi_args(n, ell, k)?;
    Ok(phi_rational(&Binomials::new(n), n, ell, k))
}

/// `φ_ℓ(k)` evaluated exactly, then rounded to `f64`.
pub fn phi(n: usize, ell: usize, k: usize) -> Result<f64> {
    phi_exact(n, ell, k).map(|r| to_f64(&r))
}

/// All rows `φ_1..φ_{n−1}` on `k = 0..n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl PhiTable {
    pub fn new(n: usize) -> Result<Self> {
        check_phi_args(n, 1, 0)?;
        let table = Binomials::new(n);
        let rows = (1..n)
            .map(|ell| (0..n).map(|k| to_f64(&phi_rational(&table, n, ell, k))).collect())
            .collect();
        Ok(PhiTable { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row `φ_ℓ` for `1 <= ℓ <= n − 1`.
    pub fn row(&self, ell: usize) -> &[f64] {
        &self.rows[ell - 1]
    }

    pub fn get(&self, ell: usize, k: usize) -> f64 {
        self.rows[ell - 1][k]
    }
}

/// Checks `φ_ℓ(1) = 1` in exact integer arithmetic: `C(n,ℓ) − C(n−2,n−ℓ) − C(n−2,ℓ) = 2·C(n−2,ℓ−1)`.
pub fn phi_at_one_is_exact(table: &Binomials, n: usize, ell: usize) -> bool {
    let (n, ell) = (n as i64, ell as i64);
    let lhs = BigInt::from(table.get(n, ell)) - BigInt::from(table.get(n - 2, n - ell)) - BigInt::from(table.get(n - 2, ell));
    lhs == BigInt::from(table.get(n - 2, ell - 1)) * 2
}

/// `x(ℓ) = φ_ℓ(n−1) = n(n−1) / (2ℓ(n−ℓ))` for `1 <= ℓ <= ⌊n/2⌋`.
pub fn x_of_ell(n: usize, ell: usize) -> Result<f64> {
    if n < 2 || ell == 0 || ell > n / 2 {
        return Err(Error::OutOfRange(format!("x(ell = {ell}) on n = {n}")));
    }
    Ok(saturation(n, ell))
}

#[inline]
fn saturation(n: usize, ell: usize) -> f64 {
    (n * (n - 1)) as f64 / (2 * ell * (n - ell)) as f64
}

/// Whether `x(ℓ) <= k`, decided in integers.
#[inline]
pub fn saturation_at_most(n: usize, ell: usize, k: usize) -> bool {
    (n as u128) * (n as u128 - 1) <= 2 * (k as u128) * (ell as u128) * ((n - ell) as u128)
}

/// `Ψ_x(k) = min(x, k)`.
#[inline]
pub fn capped_psi(x: f64, k: usize) -> f64 {
    x.min(k as f64)
}

/// The `ℓ` whose capped truncation `Ψ_{x(ℓ)}` approximates `ψ_i`.
///
/// `i = 1` maps to `⌊n/2⌋`; otherwise the smallest `ℓ` with `x(ℓ) <= i`, which
/// satisfies `x(ℓ) <= i <= 2x(ℓ)`.
pub fn choose_ell(n: usize, i: usize) -> Result<usize> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("choose_ell(n = {n}, i = {i})")));
    }
    if i == 1 {
        return Ok(n / 2);
    }
    let ell = (1..=n / 2)
        .find(|&ell| saturation_at_most(n, ell, i))
        .ok_or_else(|| Error::Internal(format!("no ell with x(ell) <= {i} for n = {n}")))?;
    // i <= 2x(ℓ)  ⇔  i·ℓ(n−ℓ) <= n(n−1)
    let upper = (i as u128) * (ell as u128) * ((n - ell) as u128) <= (n as u128) * (n as u128 - 1);
    if !upper {
        return Err(Error::Internal(format!("choose_ell(n = {n}, i = {i}) broke i <= 2x(ell)")));
    }
    Ok(ell)
}

/// Minimum of `φ_ℓ(k) / Ψ_{x(ℓ)}(k)` over `ℓ <= ⌊n/2⌋` and `x(ℓ) <= k <= n − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeskyReport {
    pub n: usize,
    pub min_ratio: f64,
    pub argmin_ell: usize,
    pub argmin_k: usize,
}

pub fn verify_pesky_bound(n: usize) -> Result<PeskyReport> {
    if !(2..=PHI_CAP).contains(&n) {
        return Err(Error::OutOfRange(format!("pesky bound for n = {n}")));
    }
    let table = Binomials::new(n);
    let mut best = PeskyReport {
        n,
        min_ratio: f64::INFINITY,
        argmin_ell: 0,
        argmin_k: 0,
    };
    for ell in 1..=n / 2 {
        let x = saturation(n, ell);
        for k in (0..n).filter(|&k| saturation_at_most(n, ell, k)) {
            let ratio = to_f64(&phi_rational(&table, n, ell, k)) / capped_psi(x, k);
            if ratio < best.min_ratio {
                best = PeskyReport {
                    n,
                    min_ratio: ratio,
                    argmin_ell: ell,
                    argmin_k: k,
                };
            }
        }
    }
    Ok(best)
}
