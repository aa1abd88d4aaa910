//! Persistent red-black trees with invariants enforced at construction.
//!
//! Every node caches its black height and size, so the smart constructors
//! [`RedBlackTree::red`] and [`RedBlackTree::black`] can check the red-black
//! rules in O(1). [`RedBlackTree::validate`] re-derives everything from scratch
//! without trusting the caches.
//!
//! The root may be either color. Leaves are black with black height 0.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Invariant, Result, TreePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Black,
            Color::Black => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "R",
            Color::Black => "B",
        })
    }
}

#[derive(Debug)]
pub struct Node<K> {
    color: Color,
    left: RedBlackTree<K>,
    key: K,
    right: RedBlackTree<K>,
    black_height: u32,
    size: u64,
}

impl<K> Node<K> {
    pub fn color(&self) -> Color {
        self.color
    }

    pub fn left(&self) -> &RedBlackTree<K> {
        &self.left
    }

    pub fn key(&self) -> &K {
        &self.key
    }

    pub fn right(&self) -> &RedBlackTree<K> {
        &self.right
    }
}

/// An immutable, structurally shared red-black tree. Cloning is O(1).
pub struct RedBlackTree<K>(Option<Arc<Node<K>>>);

impl<K> Clone for RedBlackTree<K> {
    fn clone(&self) -> Self {
        RedBlackTree(self.0.clone())
    }
}

impl<K> Default for RedBlackTree<K> {
    fn default() -> Self {
        Self::leaf()
    }
}

impl<K: fmt::Debug> fmt::Debug for RedBlackTree<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            None => f.write_str("."),
            Some(n) => write!(f, "({} {:?} {:?} {:?})", n.color, n.left, n.key, n.right),
        }
    }
}

/// Structural equality: same shape, colors and keys.
impl<K: PartialEq> PartialEq for RedBlackTree<K> {
    fn eq(&self, other: &Self) -> bool {
        match (self.node(), other.node()) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                (std::ptr::eq(a, b))
                    || (a.color == b.color
                        && a.size == b.size
                        && a.key == b.key
                        && a.left == b.left
                        && a.right == b.right)
            }
            _ => false,
        }
    }
}

impl<K: Eq> Eq for RedBlackTree<K> {}

impl<K> RedBlackTree<K> {
    pub const fn leaf() -> Self {
        RedBlackTree(None)
    }

    fn from_node(color: Color, left: Self, key: K, right: Self, black_height: u32) -> Self {
        let size = left.size() + 1 + right.size();
        RedBlackTree(Some(Arc::new(Node {
            color,
            left,
            key,
            right,
            black_height,
            size,
        })))
    }

    /// A red node. Both children must be black with equal black height.
    pub fn red(left: Self, key: K, right: Self) -> Result<Self> {
        if left.color() == Color::Red || right.color() == Color::Red {
            return Err(Error::invariant(
                Invariant::RedRed,
                "red constructor given a red child",
            ));
        }
        if left.black_height() != right.black_height() {
            return Err(Error::invariant(
                Invariant::BlackHeight,
                format!(
                    "red constructor given children of black height {} and {}",
                    left.black_height(),
                    right.black_height()
                ),
            ));
        }
        let bh = left.black_height();
        Ok(Self::from_node(Color::Red, left, key, right, bh))
    }

    /// A black node over children of equal black height, any colors.
    pub fn black(left: Self, key: K, right: Self) -> Result<Self> {
        if left.black_height() != right.black_height() {
            return Err(Error::invariant(
                Invariant::BlackHeight,
                format!(
                    "black constructor given children of black height {} and {}",
                    left.black_height(),
                    right.black_height()
                ),
            ));
        }
        let bh = left.black_height() + 1;
        Ok(Self::from_node(Color::Black, left, key, right, bh))
    }

    pub fn node_of(color: Color, left: Self, key: K, right: Self) -> Result<Self> {
        match color {
            Color::Red => Self::red(left, key, right),
            Color::Black => Self::black(left, key, right),
        }
    }

    /// Builds a node without any checks. Caches are derived from the left
    /// child. Only meant for producing deliberately broken trees in tests.
    pub fn assemble_unchecked(color: Color, left: Self, key: K, right: Self) -> Self {
        let bh = match color {
            Color::Red => left.black_height(),
            Color::Black => left.black_height() + 1,
        };
        Self::from_node(color, left, key, right, bh)
    }

    /// Builds a node with explicitly supplied caches, unchecked.
    #[doc(hidden)]
    pub fn assemble_with_caches(
        color: Color,
        left: Self,
        key: K,
        right: Self,
        black_height: u32,
        size: u64,
    ) -> Self {
        RedBlackTree(Some(Arc::new(Node {
            color,
            left,
            key,
            right,
            black_height,
            size,
        })))
    }

    pub fn node(&self) -> Option<&Node<K>> {
        self.0.as_deref()
    }

    pub fn is_leaf(&self) -> bool {
        self.0.is_none()
    }

    pub fn color(&self) -> Color {
        self.node().map_or(Color::Black, |n| n.color)
    }

    pub fn black_height(&self) -> u32 {
        self.node().map_or(0, |n| n.black_height)
    }

    pub fn size(&self) -> u64 {
        self.node().map_or(0, |n| n.size)
    }

    /// Address of the root allocation, for identity checks on shared subtrees.
    pub fn node_addr(&self) -> Option<usize> {
        self.0.as_ref().map(|n| Arc::as_ptr(n) as usize)
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// Longest root-to-leaf path, counted in nodes.
    pub fn height(&self) -> u32 {
        match self.node() {
            None => 0,
            Some(n) => 1 + n.left.height().max(n.right.height()),
        }
    }

    pub fn iter(&self) -> InOrder<'_, K> {
        let mut it = InOrder { stack: Vec::new() };
        it.push_left(self);
        it
    }

    /// Full re-check of the red-black rules and the cached indices.
    pub fn validate(&self) -> Result<()> {
        validate_at(self, &TreePath::root()).map(|_| ())
    }
}

impl<K: Clone> RedBlackTree<K> {
    pub fn in_order(&self) -> Vec<K> {
        let mut out = Vec::with_capacity(self.size() as usize);
        out.extend(self.iter().cloned());
        out
    }

    /// Swaps every left and right child. Colors and black heights carry over.
    pub fn mirror(&self) -> Self {
        match self.node() {
            None => Self::leaf(),
            Some(n) => Self::from_node(
                n.color,
                n.right.mirror(),
                n.key.clone(),
                n.left.mirror(),
                n.black_height,
            ),
        }
    }
}

impl<K> RedBlackTree<K> {
    /// Same shape and colors, keys rewritten by `f`.
    pub fn map_keys<L>(&self, f: &mut impl FnMut(&K) -> L) -> RedBlackTree<L> {
        match self.node() {
            None => RedBlackTree::leaf(),
            Some(n) => {
                let left = n.left.map_keys(f);
                let key = f(&n.key);
                let right = n.right.map_keys(f);
                RedBlackTree::from_node(n.color, left, key, right, n.black_height)
            }
        }
    }
}

/// Returns (black height, size) computed without the caches.
fn validate_at<K>(t: &RedBlackTree<K>, path: &TreePath) -> Result<(u32, u64)> {
    let Some(n) = t.node() else {
        return Ok((0, 0));
    };
    let violation = |invariant, detail: String| Error::InvariantViolation {
        path: path.clone(),
        invariant,
        detail,
    };
    let (lbh, lsize) = validate_at(&n.left, &path.child('L'))?;
    let (rbh, rsize) = validate_at(&n.right, &path.child('R'))?;
    if n.color == Color::Red && (n.left.color() == Color::Red || n.right.color() == Color::Red) {
        return Err(violation(
            Invariant::RedRed,
            "red node has a red child".into(),
        ));
    }
    if lbh != rbh {
        return Err(violation(
            Invariant::BlackHeight,
            format!("left black height {lbh}, right black height {rbh}"),
        ));
    }
    let bh = lbh + u32::from(n.color == Color::Black);
    let size = lsize + 1 + rsize;
    if n.size != size {
        return Err(violation(
            Invariant::CachedSize,
            format!("cached {}, actual {size}", n.size),
        ));
    }
    if n.black_height != bh {
        return Err(violation(
            Invariant::CachedBlackHeight,
            format!("cached {}, actual {bh}", n.black_height),
        ));
    }
    Ok((bh, size))
}

pub struct InOrder<'a, K> {
    stack: Vec<&'a Node<K>>,
}

impl<'a, K> InOrder<'a, K> {
    fn push_left(&mut self, mut t: &'a RedBlackTree<K>) {
        while let Some(n) = t.node() {
            self.stack.push(n);
            t = &n.left;
        }
    }
}

impl<'a, K> Iterator for InOrder<'a, K> {
    type Item = &'a K;

    fn next(&mut self) -> Option<&'a K> {
        let n = self.stack.pop()?;
        self.push_left(&n.right);
        Some(&n.key)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    type T = RedBlackTree<i64>;

    fn leaf() -> T {
        T::leaf()
    }

    fn r(l: T, k: i64, rt: T) -> T {
        T::red(l, k, rt).unwrap()
    }

    fn b(l: T, k: i64, rt: T) -> T {
        T::black(l, k, rt).unwrap()
    }

    /// Sample tree of black height 1 over keys 0..=5, red root at key 2.
    pub(crate) fn sample_bh1() -> T {
        r(
            b(r(leaf(), 0, leaf()), 1, leaf()),
            2,
            b(r(leaf(), 3, leaf()), 4, r(leaf(), 5, leaf())),
        )
    }

    #[test]
    fn leaf_observers() {
        let t = leaf();
        assert_eq!(
            (t.color(), t.black_height(), t.size()),
            (Color::Black, 0, 0)
        );
        assert!(t.in_order().is_empty());
        assert!(t.validate().is_ok());
    }

    #[test]
    fn red_constructor() {
        let t = r(leaf(), 5, leaf());
        assert_eq!((t.color(), t.black_height(), t.size()), (Color::Red, 0, 1));

        let err = T::red(t.clone(), 6, leaf()).unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation {
                invariant: Invariant::RedRed,
                ..
            }
        ));

        let b1 = b(leaf(), 1, leaf());
        let b2 = b(leaf(), 3, leaf());
        let t = r(b1, 2, b2);
        assert_eq!((t.black_height(), t.size()), (1, 3));

        let err = T::red(b(leaf(), 1, leaf()), 2, leaf()).unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation {
                invariant: Invariant::BlackHeight,
                ..
            }
        ));
    }

    #[test]
    fn black_constructor() {
        let t = b(leaf(), 5, leaf());
        assert_eq!((t.black_height(), t.size()), (1, 1));
        let t = b(r(leaf(), 1, leaf()), 2, leaf());
        assert_eq!((t.black_height(), t.size()), (1, 2));
        let err = T::black(b(leaf(), 1, leaf()), 2, leaf()).unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation {
                invariant: Invariant::BlackHeight,
                ..
            }
        ));
    }

    #[test]
    fn sample_tree_observers() {
        let t = sample_bh1();
        assert_eq!(t.black_height(), 1);
        assert_eq!(t.size(), 6);
        assert_eq!(t.color(), Color::Red);
        assert_eq!(t.in_order(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(t.height(), 3);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn validate_catches_hand_built_violations() {
        let bad = T::assemble_unchecked(
            Color::Red,
            T::assemble_unchecked(Color::Red, leaf(), 1, leaf()),
            2,
            leaf(),
        );
        match bad.validate().unwrap_err() {
            Error::InvariantViolation {
                invariant, path, ..
            } => {
                assert_eq!(invariant, Invariant::RedRed);
                assert_eq!(path, TreePath::root());
            }
            e => panic!("{e}"),
        }

        let bad = T::assemble_unchecked(Color::Black, leaf(), 1, b(leaf(), 2, leaf()));
        match bad.validate().unwrap_err() {
            Error::InvariantViolation { invariant, .. } => {
                assert_eq!(invariant, Invariant::BlackHeight)
            }
            e => panic!("{e}"),
        }

        // violation below the root reports its path
        let bad = T::assemble_unchecked(
            Color::Black,
            b(leaf(), -1, leaf()),
            0,
            T::assemble_unchecked(
                Color::Black,
                leaf(),
                1,
                T::assemble_unchecked(Color::Red, r(leaf(), 2, leaf()), 3, leaf()),
            ),
        );
        match bad.validate().unwrap_err() {
            Error::InvariantViolation { path, .. } => assert_eq!(path.to_string(), "RR"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn validate_does_not_trust_caches() {
        let bad = T::assemble_with_caches(Color::Black, leaf(), 1, leaf(), 1, 7);
        assert!(matches!(
            bad.validate().unwrap_err(),
            Error::InvariantViolation {
                invariant: Invariant::CachedSize,
                ..
            }
        ));
        let bad = T::assemble_with_caches(Color::Black, leaf(), 1, leaf(), 2, 1);
        assert!(matches!(
            bad.validate().unwrap_err(),
            Error::InvariantViolation {
                invariant: Invariant::CachedBlackHeight,
                ..
            }
        ));
    }

    #[test]
    fn mirror_basics() {
        assert_eq!(leaf().mirror(), leaf());
        let s = r(leaf(), 1, leaf());
        assert_eq!(s.mirror(), s);
        let t = sample_bh1();
        let m = t.mirror();
        assert!(m.validate().is_ok());
        assert_eq!(m.in_order(), vec![5, 4, 3, 2, 1, 0]);
        assert_eq!(m.mirror(), t);
        assert_eq!((m.size(), m.black_height()), (t.size(), t.black_height()));
    }

    #[test]
    fn map_keys_keeps_shape() {
        let t = sample_bh1();
        let u = t.map_keys(&mut |k| k * 10);
        assert!(u.validate().is_ok());
        assert_eq!(u.in_order(), vec![0, 10, 20, 30, 40, 50]);
        assert_eq!(u.height(), t.height());
    }
}
