//! Ordered sequences backed by red-black trees.
//!
//! The whole interface is `empty`, [`Seq::join`] and the recursor [`rec`].
//! Everything else here (sum, map, reverse, split, insert, union) is written
//! against that interface.
//!
//! The recursor hands each node the results for its subtrees as [`Deferred`]
//! computations. A combiner only pays for the subtrees it actually forces,
//! which is what keeps `split` on a single root-to-leaf path.

use std::cell::OnceCell;
use std::cmp::Ordering;
use std::rc::Rc;

use num_traits::{CheckedAdd, Zero};

use crate::cost::{Charged, Cost};
use crate::error::{Error, Result};
use crate::join::join;
use crate::tree::RedBlackTree;

/// A sequence: the in-order traversal of a valid red-black tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seq<K>(RedBlackTree<K>);

impl<K> Seq<K> {
    pub fn empty() -> Self {
        Seq(RedBlackTree::leaf())
    }

    /// Wraps a tree after a full validation.
    pub fn from_tree(tree: RedBlackTree<K>) -> Result<Self> {
        tree.validate()?;
        Ok(Seq(tree))
    }

    pub fn tree(&self) -> &RedBlackTree<K> {
        &self.0
    }

    pub fn into_tree(self) -> RedBlackTree<K> {
        self.0
    }

    pub fn len(&self) -> u64 {
        self.0.size()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_leaf()
    }
}

impl<K: Clone> Seq<K> {
    pub fn join(&self, a: K, right: &Seq<K>) -> Result<Charged<Seq<K>>> {
        Ok(join(&self.0, a, &right.0)?.map(Seq))
    }

    pub fn in_order(&self) -> Vec<K> {
        self.0.in_order()
    }
}

impl<K: Ord> Seq<K> {
    pub fn is_strictly_sorted(&self) -> bool {
        let mut it = self.0.iter();
        let Some(mut prev) = it.next() else {
            return true;
        };
        for k in it {
            if prev >= k {
                return false;
            }
            prev = k;
        }
        true
    }
}

/// Result for an empty sequence.
pub type LeafFn<'a, R> = dyn Fn() -> Result<Charged<R>> + 'a;

/// Combiner for a node: left subsequence, deferred left result, key, right
/// subsequence, deferred right result.
pub type NodeFn<'a, K, R> = dyn Fn(Seq<K>, Deferred<'a, K, R>, &'a K, Seq<K>, Deferred<'a, K, R>) -> Result<Charged<R>>
    + 'a;

/// The recursor's result for one subtree, computed on first use.
///
/// The first successful [`force`](Deferred::force) returns the full cost of
/// the recursive call; later forces return the memoized value for free.
pub struct Deferred<'a, K, R> {
    tree: &'a RedBlackTree<K>,
    leaf: &'a LeafFn<'a, R>,
    node: &'a NodeFn<'a, K, R>,
    result: OnceCell<R>,
}

impl<'a, K: Clone, R: Clone> Deferred<'a, K, R> {
    pub fn force(&self) -> Result<Charged<R>> {
        if let Some(v) = self.result.get() {
            return Ok(Charged::free(v.clone()));
        }
        let out = rec_tree(self.tree, self.leaf, self.node)?;
        let _ = self.result.set(out.value.clone());
        Ok(out)
    }

    pub fn is_forced(&self) -> bool {
        self.result.get().is_some()
    }
}

fn rec_tree<'a, K: Clone, R: Clone>(
    t: &'a RedBlackTree<K>,
    leaf: &'a LeafFn<'a, R>,
    node: &'a NodeFn<'a, K, R>,
) -> Result<Charged<R>> {
    match t.node() {
        None => leaf(),
        Some(n) => {
            let defer = |tree| Deferred {
                tree,
                leaf,
                node,
                result: OnceCell::new(),
            };
            node(
                Seq(n.left().clone()),
                defer(n.left()),
                n.key(),
                Seq(n.right().clone()),
                defer(n.right()),
            )
        }
    }
}

/// Structural recursion over the sequence's backing tree. The recursor itself
/// charges nothing; all cost comes from `leaf`, `node`, and whatever deferred
/// results `node` forces.
pub fn rec<'a, K: Clone, R: Clone>(
    s: &'a Seq<K>,
    leaf: &'a LeafFn<'a, R>,
    node: &'a NodeFn<'a, K, R>,
) -> Result<Charged<R>> {
    rec_tree(&s.0, leaf, node)
}

/// Parallel sum: one step per node, subtrees summed side by side.
pub fn sum<K: Clone + Zero + CheckedAdd>(s: &Seq<K>) -> Result<Charged<K>> {
    let leaf: &LeafFn<'_, K> = &|| Ok(Charged::free(K::zero()));
    let node: &NodeFn<'_, K, K> = &|_, left, a, _, right| {
        let (x1, c1) = left.force()?.into_parts();
        let (x2, c2) = right.force()?.into_parts();
        let cost = Cost::step(1).seq(c1.par(c2)?)?;
        let total = x1
            .checked_add(a)
            .and_then(|v| v.checked_add(&x2))
            .ok_or(Error::ValueOverflow)?;
        Ok(Charged::new(total, cost))
    };
    rec(s, leaf, node)
}

pub fn map<K: Clone, L: Clone>(s: &Seq<K>, f: impl Fn(&K) -> L) -> Result<Charged<Seq<L>>> {
    let leaf: &LeafFn<'_, Seq<L>> = &|| Ok(Charged::free(Seq::empty()));
    let node: &NodeFn<'_, K, Seq<L>> = &|_, left, a, _, right| {
        let (s1, c1) = left.force()?.into_parts();
        let (s2, c2) = right.force()?.into_parts();
        let joined = s1.join(f(a), &s2)?;
        joined.after(c1.par(c2)?).map_err(Error::from)
    };
    rec(s, leaf, node)
}

pub fn reverse<K: Clone>(s: &Seq<K>) -> Result<Charged<Seq<K>>> {
    let leaf: &LeafFn<'_, Seq<K>> = &|| Ok(Charged::free(Seq::empty()));
    let node: &NodeFn<'_, K, Seq<K>> = &|_, left, a, _, right| {
        let (s1, c1) = left.force()?.into_parts();
        let (s2, c2) = right.force()?.into_parts();
        let joined = s2.join(a.clone(), &s1)?;
        joined.after(c1.par(c2)?).map_err(Error::from)
    };
    rec(s, leaf, node)
}

pub type SplitResult<K> = (Seq<K>, Option<K>, Seq<K>);

fn require_sorted<K: Ord>(s: &Seq<K>, what: &str) -> Result<()> {
    if cfg!(debug_assertions) && !s.is_strictly_sorted() {
        return Err(Error::PreconditionViolation(format!(
            "{what} is not strictly sorted"
        )));
    }
    Ok(())
}

/// Splits a sorted sequence into the keys below `a`, `a` itself if present,
/// and the keys above `a`.
pub fn split<K: Ord + Clone>(s: &Seq<K>, a: &K) -> Result<Charged<SplitResult<K>>> {
    require_sorted(s, "split input")?;
    split_sorted(s, a)
}

fn split_sorted<K: Ord + Clone>(s: &Seq<K>, a: &K) -> Result<Charged<SplitResult<K>>> {
    let leaf: &LeafFn<'_, SplitResult<K>> =
        &|| Ok(Charged::free((Seq::empty(), None, Seq::empty())));
    let node: &NodeFn<'_, K, SplitResult<K>> = &|s1, r1, pivot, s2, r2| match a.cmp(pivot) {
        Ordering::Equal => Ok(Charged::free((s1, Some(a.clone()), s2))),
        Ordering::Less => {
            let ((s11, found, s12), c) = r1.force()?.into_parts();
            let (joined, cj) = s12.join(pivot.clone(), &s2)?.into_parts();
            Ok(Charged::new((s11, found, joined), c.seq(cj)?))
        }
        Ordering::Greater => {
            let ((s21, found, s22), c) = r2.force()?.into_parts();
            let (joined, cj) = s1.join(pivot.clone(), &s21)?.into_parts();
            Ok(Charged::new((joined, found, s22), c.seq(cj)?))
        }
    };
    rec(s, leaf, node)
}

/// Inserts `a` into a sorted sequence. Inserting a present key is a no-op on
/// the key set.
pub fn insert<K: Ord + Clone>(s: &Seq<K>, a: K) -> Result<Charged<Seq<K>>> {
    require_sorted(s, "insert input")?;
    insert_sorted(s, a)
}

pub(crate) fn insert_sorted<K: Ord + Clone>(s: &Seq<K>, a: K) -> Result<Charged<Seq<K>>> {
    let ((s1, _, s2), c) = split_sorted(s, &a)?.into_parts();
    s1.join(a, &s2)?.after(c).map_err(Error::from)
}

type UnionFn<'a, K> = Rc<dyn Fn(Seq<K>) -> Result<Charged<Seq<K>>> + 'a>;

/// Sorted union. On keys present in both, the element from `s1` is kept.
pub fn union<K: Ord + Clone>(s1: &Seq<K>, s2: &Seq<K>) -> Result<Charged<Seq<K>>> {
    require_sorted(s1, "first union input")?;
    require_sorted(s2, "second union input")?;
    let leaf: &LeafFn<'_, UnionFn<'_, K>> = &|| {
        let identity: UnionFn<'_, K> = Rc::new(|s| Ok(Charged::free(s)));
        Ok(Charged::free(identity))
    };
    let node: &NodeFn<'_, K, UnionFn<'_, K>> = &|_, f1, a, _, f2| {
        let go: UnionFn<'_, K> = Rc::new(move |other: Seq<K>| {
            let ((o1, _, o2), c_split) = split_sorted(&other, a)?.into_parts();
            let (g1, cf1) = f1.force()?.into_parts();
            let (g2, cf2) = f2.force()?.into_parts();
            let (u1, cu1) = g1(o1)?.into_parts();
            let (u2, cu2) = g2(o2)?.into_parts();
            let halves = cf1.seq(cu1)?.par(cf2.seq(cu2)?)?;
            let (u, cj) = u1.join(a.clone(), &u2)?.into_parts();
            Ok(Charged::new(u, c_split.seq(halves)?.seq(cj)?))
        });
        Ok(Charged::free(go))
    };
    let (f, c) = rec(s1, leaf, node)?.into_parts();
    f(s2.clone())?.after(c).map_err(Error::from)
}
