//! Closed-form cost and height bounds.

use crate::oracle::ceil_log2;
use crate::tree::Color;

/// `ceil(log2(1 + size))`: no tree of this size has a larger black height.
pub fn black_height_upper(size: u64) -> u32 {
    ceil_log2(size.saturating_add(1))
}

/// `floor((ceil(log2(1 + size)) - 1) / 2)`; negative only for the empty tree.
pub fn black_height_lower(size: u64) -> i64 {
    (i64::from(black_height_upper(size)) - 1).div_euclid(2)
}

/// One-sided join of a tree of black height `n1` (root `color`) with a
/// shorter tree of black height `n2`.
pub fn join_right_cost(color: Color, n1: u32, n2: u32) -> u64 {
    let d = 2 * u64::from(n1.saturating_sub(n2));
    match color {
        Color::Red => d + 1,
        Color::Black => d,
    }
}

/// `1 + 2 (max(n1, n2) - min(n1, n2))`.
pub fn join_cost(n1: u32, n2: u32) -> u64 {
    1 + 2 * u64::from(n1.abs_diff(n2))
}

/// The join bound restated in sizes, through the black-height lemmas.
pub fn join_cost_by_size(size1: u64, size2: u64) -> u64 {
    let (big, small) = (size1.max(size2), size1.min(size2));
    let spread = i64::from(black_height_upper(big)) - black_height_lower(small);
    (1 + 2 * spread) as u64
}

/// Span of the parallel sum over a tree with black height `n`.
pub fn sum_span(color: Color, n: u32) -> u64 {
    let d = 2 * u64::from(n);
    match color {
        Color::Red => d + 1,
        Color::Black => d,
    }
}

pub fn sum_span_by_size(size: u64) -> u64 {
    1 + 2 * u64::from(black_height_upper(size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_forms() {
        assert_eq!(black_height_upper(0), 0);
        assert_eq!(black_height_lower(0), -1);
        assert_eq!(black_height_upper(1), 1);
        assert_eq!(black_height_lower(1), 0);
        assert_eq!(black_height_upper(6), 3);
        assert_eq!(black_height_lower(6), 1);
        // two leaves: 1 + 2 (0 - (-1))
        assert_eq!(join_cost_by_size(0, 0), 3);
        assert_eq!(join_cost_by_size(6, 0), 1 + 2 * (3 + 1));
        assert_eq!(join_cost_by_size(0, 6), join_cost_by_size(6, 0));
    }

    #[test]
    fn height_forms() {
        assert_eq!(join_cost(1, 0), 3);
        assert_eq!(join_cost(2, 5), 7);
        assert_eq!(join_right_cost(Color::Red, 1, 0), 3);
        assert_eq!(join_right_cost(Color::Black, 3, 1), 4);
        assert_eq!(sum_span(Color::Black, 0), 0);
        assert_eq!(sum_span(Color::Red, 1), 3);
        assert_eq!(sum_span_by_size(6), 7);
    }
}
