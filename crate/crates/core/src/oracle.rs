//! Reference models and generators for brute-force checking.
//!
//! The list functions are the plain-`Vec` meaning of each tree operation and
//! share no code with the tree side. The enumerator builds every tree shape of
//! a given black height straight from the inductive rules (leaf; red over two
//! black trees of height n; black over any two trees of height n).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::join::join;
use crate::sequence::{insert_sorted, Seq};
use crate::tree::{Color, RedBlackTree};

pub const DEFAULT_ENUMERATION_LIMIT: u32 = 2;

/// The seeded generator used by every randomized suite: ChaCha8 seeded from a
/// 64-bit value.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of shapes with the given root color and black height, from
/// `B(0) = 1, R(h) = B(h)^2, B(h+1) = (B(h) + R(h))^2`.
/// `None` on overflow.
pub fn shape_count(color: Color, bh: u32) -> Option<u128> {
    let mut black: u128 = 1;
    let mut red: u128 = 1;
    for _ in 0..bh {
        let all = black.checked_add(red)?;
        black = all.checked_mul(all)?;
        red = black.checked_mul(black)?;
    }
    Some(match color {
        Color::Black => black,
        Color::Red => red,
    })
}

/// All unlabeled shapes of each root color, indexed by black height.
pub struct Shapes {
    black: Vec<Vec<RedBlackTree<()>>>,
    red: Vec<Vec<RedBlackTree<()>>>,
}

impl Shapes {
    pub fn new(max_bh: u32, limit: u32) -> Result<Self> {
        if max_bh > limit {
            return Err(Error::LimitExceeded {
                requested: max_bh,
                limit,
            });
        }
        let mut black = vec![vec![RedBlackTree::leaf()]];
        let mut red = Vec::new();
        for h in 0..=max_bh as usize {
            let r: Vec<_> = pairs(&black[h], &black[h])
                .map(|(l, rt)| RedBlackTree::red(l.clone(), (), rt.clone()))
                .collect::<Result<_>>()?;
            red.push(r);
            if h < max_bh as usize {
                let any: Vec<_> = black[h].iter().chain(&red[h]).cloned().collect();
                let b: Vec<_> = pairs(&any, &any)
                    .map(|(l, rt)| RedBlackTree::black(l.clone(), (), rt.clone()))
                    .collect::<Result<_>>()?;
                black.push(b);
            }
        }
        Ok(Shapes { black, red })
    }

    pub fn get(&self, color: Color, bh: u32) -> &[RedBlackTree<()>] {
        let table = match color {
            Color::Black => &self.black,
            Color::Red => &self.red,
        };
        table.get(bh as usize).map_or(&[], Vec::as_slice)
    }
}

fn pairs<'a, T>(xs: &'a [T], ys: &'a [T]) -> impl Iterator<Item = (&'a T, &'a T)> {
    xs.iter().flat_map(move |x| ys.iter().map(move |y| (x, y)))
}

/// Relabels a shape, giving the node at in-order position `i` the key
/// `key_of(i)`.
pub fn label<K>(shape: &RedBlackTree<()>, key_of: impl Fn(u64) -> K) -> RedBlackTree<K> {
    let mut i = 0;
    shape.map_keys(&mut |_| {
        let k = key_of(i);
        i += 1;
        k
    })
}

/// Every tree of black height `bh` (and root color `color`, if given), keyed
/// by in-order position through `key_of`. Black shapes come first.
pub fn enumerate<K>(
    color: Option<Color>,
    bh: u32,
    key_of: impl Fn(u64) -> K,
) -> Result<Vec<RedBlackTree<K>>> {
    enumerate_with_limit(color, bh, DEFAULT_ENUMERATION_LIMIT, key_of)
}

pub fn enumerate_with_limit<K>(
    color: Option<Color>,
    bh: u32,
    limit: u32,
    key_of: impl Fn(u64) -> K,
) -> Result<Vec<RedBlackTree<K>>> {
    let shapes = Shapes::new(bh, limit)?;
    let colors: &[Color] = match color {
        Some(Color::Black) => &[Color::Black],
        Some(Color::Red) => &[Color::Red],
        None => &[Color::Black, Color::Red],
    };
    Ok(colors
        .iter()
        .flat_map(|&c| shapes.get(c, bh))
        .map(|s| label(s, &key_of))
        .collect())
}

/// A tree over keys `0..size`, built by inserting a seeded permutation of the
/// keys one at a time into an empty sequence.
pub fn random_tree(size: u64, seed: u64) -> RedBlackTree<i64> {
    let mut keys: Vec<i64> = (0..size as i64).collect();
    keys.shuffle(&mut rng(seed));
    keys.into_iter()
        .fold(Seq::empty(), |s, k| {
            insert_sorted(&s, k)
                .expect("insert into a sorted sequence")
                .value
        })
        .into_tree()
}

/// A tree over keys `0..size`, built by joining around seeded random pivots.
/// Linear time, so it scales to large randomized populations; uneven pivots
/// give a wide spread of shapes.
pub fn random_joined_tree(size: u64, seed: u64) -> RedBlackTree<i64> {
    fn build(lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> RedBlackTree<i64> {
        if lo >= hi {
            return RedBlackTree::leaf();
        }
        let pivot = rng.gen_range(lo..hi);
        let left = build(lo, pivot, rng);
        let right = build(pivot + 1, hi, rng);
        join(&left, pivot, &right)
            .expect("join of valid trees")
            .value
    }
    build(0, size as i64, &mut rng(seed))
}

pub fn list_join<K: Clone>(l1: &[K], a: K, l2: &[K]) -> Vec<K> {
    let mut out = l1.to_vec();
    out.push(a);
    out.extend_from_slice(l2);
    out
}

pub fn list_sum(xs: &[i64]) -> Option<i64> {
    let mut total: i64 = 0;
    for x in xs {
        total = total.checked_add(*x)?;
    }
    Some(total)
}

pub fn list_map<K, L>(xs: &[K], f: impl Fn(&K) -> L) -> Vec<L> {
    xs.iter().map(f).collect()
}

pub fn list_reverse<K: Clone>(xs: &[K]) -> Vec<K> {
    let mut out = xs.to_vec();
    out.reverse();
    out
}

/// Partition of a sorted list around `a`.
pub fn list_split<K: Ord + Clone>(xs: &[K], a: &K) -> (Vec<K>, Option<K>, Vec<K>) {
    let mut below = Vec::new();
    let mut found = None;
    let mut above = Vec::new();
    for x in xs {
        if x < a {
            below.push(x.clone());
        } else if x == a {
            found = Some(x.clone());
        } else {
            above.push(x.clone());
        }
    }
    (below, found, above)
}

/// Merge of two sorted lists, dropping duplicates.
pub fn list_union<K: Ord + Clone>(xs: &[K], ys: &[K]) -> Vec<K> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(xs.len() + ys.len());
    while i < xs.len() && j < ys.len() {
        if xs[i] < ys[j] {
            out.push(xs[i].clone());
            i += 1;
        } else if ys[j] < xs[i] {
            out.push(ys[j].clone());
            j += 1;
        } else {
            out.push(xs[i].clone());
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&xs[i..]);
    out.extend_from_slice(&ys[j..]);
    out
}

/// Sorted, duplicate-free version of `xs`.
pub fn list_set<K: Ord + Clone>(xs: &[K]) -> Vec<K> {
    let mut out = xs.to_vec();
    out.sort();
    out.dedup();
    out
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1);
    if x == 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_counts() {
        assert_eq!(shape_count(Color::Black, 0), Some(1));
        assert_eq!(shape_count(Color::Red, 0), Some(1));
        assert_eq!(shape_count(Color::Black, 1), Some(4));
        assert_eq!(shape_count(Color::Red, 1), Some(16));
        assert_eq!(shape_count(Color::Black, 2), Some(400));
        assert_eq!(shape_count(Color::Red, 2), Some(160_000));
    }

    #[test]
    fn enumerated_counts_match_recurrence() {
        for bh in 0..=2 {
            for color in [Color::Black, Color::Red] {
                let trees = enumerate(Some(color), bh, |i| i as i64).unwrap();
                assert_eq!(trees.len() as u128, shape_count(color, bh).unwrap());
            }
        }
    }

    #[test]
    fn enumerated_trees_are_valid_and_distinct() {
        for bh in 0..=1 {
            let trees = enumerate(None, bh, |i| i as i64).unwrap();
            for (i, t) in trees.iter().enumerate() {
                t.validate().unwrap();
                assert_eq!(t.black_height(), bh);
                assert_eq!(t.in_order(), (0..t.size() as i64).collect::<Vec<_>>());
                for u in &trees[i + 1..] {
                    assert_ne!(t, u);
                }
            }
        }
        for t in enumerate(Some(Color::Black), 2, |i| i as i64).unwrap() {
            t.validate().unwrap();
        }
    }

    #[test]
    fn enumeration_limit() {
        assert_eq!(
            enumerate(None, 3, |i| i).unwrap_err(),
            Error::LimitExceeded {
                requested: 3,
                limit: 2
            }
        );
    }

    #[test]
    fn random_trees_are_valid_and_deterministic() {
        assert!(random_tree(0, 9).is_leaf());
        for n in [1, 10, 100, 1000] {
            let t = random_tree(n, 42);
            t.validate().unwrap();
            assert_eq!(t.size(), n);
            assert_eq!(t.in_order(), (0..n as i64).collect::<Vec<_>>());
            assert_eq!(t, random_tree(n, 42));
            let j = random_joined_tree(n, 42);
            j.validate().unwrap();
            assert_eq!(j.in_order(), (0..n as i64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn list_oracles() {
        assert_eq!(list_join(&[], 1, &[]), vec![1]);
        assert_eq!(list_join(&[1], 2, &[3]), vec![1, 2, 3]);
        assert_eq!(list_union(&[1, 2], &[2, 3]), vec![1, 2, 3]);
        assert_eq!(list_split(&[1, 3, 5], &3), (vec![1], Some(3), vec![5]));
        assert_eq!(list_split(&[1, 3, 5], &4), (vec![1, 3], None, vec![5]));
        assert_eq!(list_sum(&[1, 2, 3]), Some(6));
        assert_eq!(list_sum(&[i64::MAX, 1]), None);
        assert_eq!(list_reverse(&[1, 2, 3]), vec![3, 2, 1]);
        assert_eq!(list_map(&[1, 2], |x| x + 1), vec![2, 3]);
        assert_eq!(list_set(&[3, 1, 3, 2]), vec![1, 2, 3]);
    }

    #[test]
    fn ceil_log2_values() {
        let expected = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)];
        for (x, e) in expected {
            assert_eq!(ceil_log2(x), e, "{x}");
        }
    }
}
