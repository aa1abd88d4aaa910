//! Join of two red-black trees around a middle key.
//!
//! [`join_right`] walks down the right spine of the taller tree until it meets
//! a subtree one black level above the shorter tree, then rebalances on the
//! way back up. The only step charges are on entry to case I (red root) and on
//! the descending branch of a black root (cases V and VI); the base cases II,
//! III and IV are free, as is [`join`] itself.

use std::cmp::Ordering;

use crate::almost::{AlmostLeft, AlmostRight};
use crate::cost::{Charged, Cost};
use crate::error::{Error, Result};
use crate::tree::{Color, RedBlackTree};

type Tree<K> = RedBlackTree<K>;

/// Places `t2` on the right spine of the strictly taller `t1`.
///
/// The result has the black height of `t1`. It is always valid when `t1` is
/// black; a red `t1` may yield a red-red violation at the root.
pub fn join_right<K: Clone>(t1: &Tree<K>, a: K, t2: &Tree<K>) -> Result<Charged<AlmostRight<K>>> {
    join_right_impl::<K, false>(t1, a, t2)
}

fn join_right_impl<K: Clone, const BREAK_CASE_III: bool>(
    t1: &Tree<K>,
    a: K,
    t2: &Tree<K>,
) -> Result<Charged<AlmostRight<K>>> {
    let (n1, n2) = (t1.black_height(), t2.black_height());
    if n1 <= n2 {
        return Err(Error::PreconditionViolation(format!(
            "join_right needs a taller left tree, got black heights {n1} and {n2}"
        )));
    }
    let Some(node1) = t1.node() else {
        return Err(Error::UnreachableCase(
            "join_right: leaf cannot be the taller tree",
        ));
    };
    let (t11, a1, t12) = (node1.left(), node1.key(), node1.right());

    match node1.color() {
        // Case I
        Color::Red => {
            let step = Cost::step(1);
            let (r, cost) = join_right_impl::<K, BREAK_CASE_III>(t12, a, t2)?.into_parts();
            let cost = step.seq(cost)?;
            let AlmostRight::Valid { tree: t_new, .. } = r else {
                return Err(Error::UnreachableCase(
                    "join_right case I: black subtree produced a violation",
                ));
            };
            let value = match t_new.color() {
                Color::Red => AlmostRight::violation(t11.clone(), a1.clone(), t_new)?,
                Color::Black => AlmostRight::Valid {
                    left_color: Color::Red,
                    tree: Tree::red(t11.clone(), a1.clone(), t_new)?,
                },
            };
            Ok(Charged::new(value, cost))
        }
        Color::Black if n1 == n2 + 1 => {
            let valid = |tree| AlmostRight::Valid {
                left_color: Color::Black,
                tree,
            };
            let tree = match (t2.node(), t2.color()) {
                // Case II
                (Some(node2), Color::Red) => Tree::red(
                    t1.clone(),
                    a,
                    Tree::black(
                        node2.left().clone(),
                        node2.key().clone(),
                        node2.right().clone(),
                    )?,
                )?,
                _ => match t12.node() {
                    // Case III
                    Some(node12) if node12.color() == Color::Red => {
                        let (inner_l, inner_r) = if BREAK_CASE_III {
                            (node12.right(), node12.left())
                        } else {
                            (node12.left(), node12.right())
                        };
                        let x1 = Tree::black(t11.clone(), a1.clone(), inner_l.clone())?;
                        let x2 = Tree::black(inner_r.clone(), a, t2.clone())?;
                        Tree::red(x1, node12.key().clone(), x2)?
                    }
                    // Case IV
                    _ => {
                        let x2 = Tree::red(t12.clone(), a, t2.clone())?;
                        Tree::black(t11.clone(), a1.clone(), x2)?
                    }
                },
            };
            Ok(Charged::free(valid(tree)))
        }
        Color::Black => {
            let step = Cost::step(1);
            let (r, cost) = join_right_impl::<K, BREAK_CASE_III>(t12, a, t2)?.into_parts();
            let cost = step.seq(cost)?;
            let tree = match r {
                // Case V
                AlmostRight::Valid { tree: t_new, .. } => {
                    Tree::black(t11.clone(), a1.clone(), t_new)?
                }
                // Case VI
                AlmostRight::Violation { left, key, right } => {
                    let Some(rn) = right.node() else {
                        return Err(Error::UnreachableCase(
                            "join_right case VI: violation with a leaf on the right",
                        ));
                    };
                    let x1 = Tree::black(t11.clone(), a1.clone(), left)?;
                    let x2 = Tree::black(rn.left().clone(), rn.key().clone(), rn.right().clone())?;
                    Tree::red(x1, key, x2)?
                }
            };
            Ok(Charged::new(
                AlmostRight::Valid {
                    left_color: Color::Black,
                    tree,
                },
                cost,
            ))
        }
    }
}

/// Mirror image of [`join_right`]: places `t1` on the left spine of the
/// strictly taller `t2`.
pub fn join_left<K: Clone>(t1: &Tree<K>, a: K, t2: &Tree<K>) -> Result<Charged<AlmostLeft<K>>> {
    let (n1, n2) = (t1.black_height(), t2.black_height());
    if n1 >= n2 {
        return Err(Error::PreconditionViolation(format!(
            "join_left needs a taller right tree, got black heights {n1} and {n2}"
        )));
    }
    let Some(node2) = t2.node() else {
        return Err(Error::UnreachableCase(
            "join_left: leaf cannot be the taller tree",
        ));
    };
    let (t21, a2, t22) = (node2.left(), node2.key(), node2.right());

    match node2.color() {
        Color::Red => {
            let step = Cost::step(1);
            let (r, cost) = join_left(t1, a, t21)?.into_parts();
            let cost = step.seq(cost)?;
            let AlmostLeft::Valid { tree: t_new, .. } = r else {
                return Err(Error::UnreachableCase(
                    "join_left case I: black subtree produced a violation",
                ));
            };
            let value = match t_new.color() {
                Color::Red => AlmostLeft::violation(t_new, a2.clone(), t22.clone())?,
                Color::Black => AlmostLeft::Valid {
                    right_color: Color::Red,
                    tree: Tree::red(t_new, a2.clone(), t22.clone())?,
                },
            };
            Ok(Charged::new(value, cost))
        }
        Color::Black if n2 == n1 + 1 => {
            let valid = |tree| AlmostLeft::Valid {
                right_color: Color::Black,
                tree,
            };
            let tree = match (t1.node(), t1.color()) {
                (Some(node1), Color::Red) => Tree::red(
                    Tree::black(
                        node1.left().clone(),
                        node1.key().clone(),
                        node1.right().clone(),
                    )?,
                    a,
                    t2.clone(),
                )?,
                _ => match t21.node() {
                    Some(node21) if node21.color() == Color::Red => {
                        let x1 = Tree::black(t1.clone(), a, node21.left().clone())?;
                        let x2 = Tree::black(node21.right().clone(), a2.clone(), t22.clone())?;
                        Tree::red(x1, node21.key().clone(), x2)?
                    }
                    _ => {
                        let x1 = Tree::red(t1.clone(), a, t21.clone())?;
                        Tree::black(x1, a2.clone(), t22.clone())?
                    }
                },
            };
            Ok(Charged::free(valid(tree)))
        }
        Color::Black => {
            let step = Cost::step(1);
            let (r, cost) = join_left(t1, a, t21)?.into_parts();
            let cost = step.seq(cost)?;
            let tree = match r {
                AlmostLeft::Valid { tree: t_new, .. } => {
                    Tree::black(t_new, a2.clone(), t22.clone())?
                }
                AlmostLeft::Violation { left, key, right } => {
                    let Some(ln) = left.node() else {
                        return Err(Error::UnreachableCase(
                            "join_left case VI: violation with a leaf on the left",
                        ));
                    };
                    let x1 = Tree::black(ln.left().clone(), ln.key().clone(), ln.right().clone())?;
                    let x2 = Tree::black(right, a2.clone(), t22.clone())?;
                    Tree::red(x1, key, x2)?
                }
            };
            Ok(Charged::new(
                AlmostLeft::Valid {
                    right_color: Color::Black,
                    tree,
                },
                cost,
            ))
        }
    }
}

/// Concatenates `t1`, `a` and `t2` into one valid red-black tree.
pub fn join<K: Clone>(t1: &Tree<K>, a: K, t2: &Tree<K>) -> Result<Charged<Tree<K>>> {
    join_impl::<K, false>(t1, a, t2)
}

fn join_impl<K: Clone, const BREAK_CASE_III: bool>(
    t1: &Tree<K>,
    a: K,
    t2: &Tree<K>,
) -> Result<Charged<Tree<K>>> {
    match t1.black_height().cmp(&t2.black_height()) {
        Ordering::Greater => {
            let (r, cost) = join_right_impl::<K, BREAK_CASE_III>(t1, a, t2)?.into_parts();
            let tree = match r {
                AlmostRight::Valid { tree, .. } => tree,
                AlmostRight::Violation { left, key, right } => Tree::black(left, key, right)?,
            };
            Ok(Charged::new(tree, cost))
        }
        Ordering::Less => {
            let (r, cost) = join_left(t1, a, t2)?.into_parts();
            let tree = match r {
                AlmostLeft::Valid { tree, .. } => tree,
                AlmostLeft::Violation { left, key, right } => Tree::black(left, key, right)?,
            };
            Ok(Charged::new(tree, cost))
        }
        Ordering::Equal => {
            let tree = if t1.color() == Color::Black && t2.color() == Color::Black {
                Tree::red(t1.clone(), a, t2.clone())?
            } else {
                Tree::black(t1.clone(), a, t2.clone())?
            };
            Ok(Charged::free(tree))
        }
    }
}

/// Deliberately broken variants for mutation smoke tests.
#[cfg(any(test, feature = "mutants"))]
pub mod mutants {
    use super::*;

    /// [`super::join`] with the case III rotation wiring the inner subtrees
    /// crosswise. Produces valid-looking trees with scrambled order.
    pub fn join_broken_case_iii<K: Clone>(
        t1: &Tree<K>,
        a: K,
        t2: &Tree<K>,
    ) -> Result<Charged<Tree<K>>> {
        join_impl::<K, true>(t1, a, t2)
    }
}
