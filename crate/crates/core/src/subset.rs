//! Bitmask helpers for subsets of a ground set `{0, .., n-1}`.
//!
//! A subset is a `u64` whose bit `i` is set when element `i` belongs to it.

use crate::error::{Error, Result};

/// Largest ground set a bitmask can address.
pub const MAX_GROUND_SET: usize = 63;

/// Mask of the full ground set of size `n`.
#[inline]
pub fn full(n: usize) -> u64 {
    debug_assert!(n <= MAX_GROUND_SET);
    (1u64 << n) - 1
}

#[inline]
pub fn len(mask: u64) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn contains(mask: u64, element: usize) -> bool {
    mask >> element & 1 == 1
}

/// Iterates the elements of `mask` in increasing order.
pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Builds a mask from element indices, rejecting indices `>= n`.
pub fn from_indices(n: usize, indices: &[usize]) -> Result<u64> {
    indices.iter().try_fold(0u64, |acc, &i| {
        if i >= n {
            Err(Error::IndexOutOfRange { index: i, n })
        } else {
            Ok(acc | 1u64 << i)
        }
    })
}

pub fn to_indices(mask: u64) -> Vec<usize> {
    elements(mask).collect()
}

/// Fails unless `mask` only uses elements of a ground set of size `n`.
pub fn check_within(n: usize, mask: u64) -> Result<()> {
    if n < 64 && mask >> n != 0 {
        Err(Error::SubsetOutOfRange { mask, n })
    } else {
        Ok(())
    }
}

/// Iterates every subset of `mask`, including the empty set and `mask` itself.
pub fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == mask {
            None
        } else {
            Some((current.wrapping_sub(mask)) & mask)
        };
        Some(current)
    })
}

/// Iterates all masks over `{0..n-1}` with exactly `k` elements, in increasing order.
pub fn with_cardinality(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            // Gosper's hack
            let c = current & current.wrapping_neg();
            let r = current + c;
            let candidate = (((r ^ current) >> 2) / c) | r;
            (candidate < limit).then_some(candidate)
        };
        Some(current)
    })
}

/// Canonical representative of the split `mask | complement`: the side not containing element 0.
#[inline]
pub fn canonical_split(n: usize, mask: u64) -> u64 {
    if mask & 1 == 1 {
        full(n) & !mask
    } else {
        mask
    }
}

/// Whether the bipartition `split | complement` separates `set`.
#[inline]
pub fn cuts(split: u64, set: u64) -> bool {
    set & split != 0 && set & !split != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_power_set() {
        let all: Vec<u64> = subsets_of(0b1011).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|s| s & !0b1011 == 0));
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn cardinality_iteration_counts_binomials() {
        assert_eq!(with_cardinality(6, 3).count(), 20);
        assert_eq!(with_cardinality(6, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(with_cardinality(6, 6).collect::<Vec<_>>(), vec![0b111111]);
        assert_eq!(with_cardinality(3, 4).count(), 0);
        assert!(with_cardinality(7, 2).all(|m| len(m) == 2));
    }

    #[test]
    fn canonical_split_drops_element_zero() {
        assert_eq!(canonical_split(4, 0b0011), 0b1100);
        assert_eq!(canonical_split(4, 0b0110), 0b0110);
    }

    #[test]
    fn from_indices_rejects_out_of_range() {
        assert_eq!(from_indices(4, &[0, 2]).unwrap(), 0b101);
        assert!(matches!(
            from_indices(4, &[4]),
            Err(Error::IndexOutOfRange { index: 4, n: 4 })
        ));
    }
}
