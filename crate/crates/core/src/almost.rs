//! Intermediate results of the one-sided joins.
//!
//! Joining a smaller tree into the right spine of a larger one may leave a
//! single red-red edge between the result root and its right child. That is
//! only allowed when the larger input had a red root, which is recorded in
//! `left_color` for valid results and implied for violations.

use crate::error::{Error, Invariant, Result};
use crate::tree::{Color, RedBlackTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostRight<K> {
    Valid {
        left_color: Color,
        tree: RedBlackTree<K>,
    },
    /// A red root over a black `left` and a red `right`. The implied
    /// `left_color` is red.
    Violation {
        left: RedBlackTree<K>,
        key: K,
        right: RedBlackTree<K>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostLeft<K> {
    Valid {
        right_color: Color,
        tree: RedBlackTree<K>,
    },
    /// A red root over a red `left` and a black `right`. The implied
    /// `right_color` is red.
    Violation {
        left: RedBlackTree<K>,
        key: K,
        right: RedBlackTree<K>,
    },
}

fn check_violation<K>(
    outer: &RedBlackTree<K>,
    inner: &RedBlackTree<K>,
    inner_side: &str,
) -> Result<()> {
    if outer.color() != Color::Black {
        return Err(Error::invariant(
            Invariant::RedRed,
            format!("violation record needs a black child opposite the {inner_side} side"),
        ));
    }
    if inner.is_leaf() || inner.color() != Color::Red {
        return Err(Error::invariant(
            Invariant::RedRed,
            format!("violation record needs a red {inner_side} child"),
        ));
    }
    if outer.black_height() != inner.black_height() {
        return Err(Error::invariant(
            Invariant::BlackHeight,
            "violation record children differ in black height",
        ));
    }
    Ok(())
}

impl<K> AlmostRight<K> {
    pub fn violation(left: RedBlackTree<K>, key: K, right: RedBlackTree<K>) -> Result<Self> {
        check_violation(&left, &right, "right")?;
        Ok(AlmostRight::Violation { left, key, right })
    }

    pub fn left_color(&self) -> Color {
        match self {
            AlmostRight::Valid { left_color, .. } => *left_color,
            AlmostRight::Violation { .. } => Color::Red,
        }
    }

    pub fn black_height(&self) -> u32 {
        match self {
            AlmostRight::Valid { tree, .. } => tree.black_height(),
            AlmostRight::Violation { left, .. } => left.black_height(),
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            AlmostRight::Valid { tree, .. } => tree.size(),
            AlmostRight::Violation { left, right, .. } => left.size() + 1 + right.size(),
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, AlmostRight::Violation { .. })
    }
}

impl<K: Clone> AlmostRight<K> {
    pub fn in_order(&self) -> Vec<K> {
        match self {
            AlmostRight::Valid { tree, .. } => tree.in_order(),
            AlmostRight::Violation { left, key, right } => {
                let mut v = left.in_order();
                v.push(key.clone());
                v.extend(right.iter().cloned());
                v
            }
        }
    }

    pub fn mirror(&self) -> AlmostLeft<K> {
        match self {
            AlmostRight::Valid { left_color, tree } => AlmostLeft::Valid {
                right_color: *left_color,
                tree: tree.mirror(),
            },
            AlmostRight::Violation { left, key, right } => AlmostLeft::Violation {
                left: right.mirror(),
                key: key.clone(),
                right: left.mirror(),
            },
        }
    }
}

impl<K> AlmostLeft<K> {
    pub fn violation(left: RedBlackTree<K>, key: K, right: RedBlackTree<K>) -> Result<Self> {
        check_violation(&right, &left, "left")?;
        Ok(AlmostLeft::Violation { left, key, right })
    }

    pub fn right_color(&self) -> Color {
        match self {
            AlmostLeft::Valid { right_color, .. } => *right_color,
            AlmostLeft::Violation { .. } => Color::Red,
        }
    }

    pub fn black_height(&self) -> u32 {
        match self {
            AlmostLeft::Valid { tree, .. } => tree.black_height(),
            AlmostLeft::Violation { right, .. } => right.black_height(),
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, AlmostLeft::Violation { .. })
    }
}

impl<K: Clone> AlmostLeft<K> {
    pub fn in_order(&self) -> Vec<K> {
        match self {
            AlmostLeft::Valid { tree, .. } => tree.in_order(),
            AlmostLeft::Violation { left, key, right } => {
                let mut v = left.in_order();
                v.push(key.clone());
                v.extend(right.iter().cloned());
                v
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type T = RedBlackTree<i64>;

    #[test]
    fn violation_shape_is_checked() {
        let blk = T::black(T::leaf(), 1, T::leaf()).unwrap();
        let red = T::red(
            T::black(T::leaf(), 3, T::leaf()).unwrap(),
            4,
            T::black(T::leaf(), 5, T::leaf()).unwrap(),
        )
        .unwrap();
        let v = AlmostRight::violation(blk.clone(), 2, red.clone()).unwrap();
        assert_eq!(v.left_color(), Color::Red);
        assert_eq!(v.black_height(), 1);
        assert_eq!(v.size(), 5);
        assert_eq!(v.in_order(), vec![1, 2, 3, 4, 5]);

        assert!(AlmostRight::violation(red.clone(), 2, blk.clone()).is_err());
        assert!(AlmostRight::violation(blk.clone(), 2, blk.clone()).is_err());
        let small_red = T::red(T::leaf(), 9, T::leaf()).unwrap();
        assert!(AlmostRight::violation(blk.clone(), 2, small_red).is_err());

        let m = v.mirror();
        assert!(m.is_violation());
        assert_eq!(m.in_order(), vec![5, 4, 3, 2, 1]);
        assert!(AlmostLeft::violation(red, 2, blk).is_ok());
    }
}
