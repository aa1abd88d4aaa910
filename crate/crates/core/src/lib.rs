//! Persistent sequences on joinable red-black trees, with every operation
//! charged in an abstract work/span cost model.
//!
//! The single rebalancing primitive is [`join::join`]. Sequences
//! ([`sequence::Seq`]) are built from `empty`, `join` and a recursor; sum, map,
//! reverse, split, insert and union are derived from those three.

pub mod almost;
pub mod bench;
pub mod bounds;
pub mod cost;
pub mod error;
pub mod join;
pub mod oracle;
pub mod props;
pub mod sequence;
pub mod sexpr;
pub mod tree;

pub use almost::{AlmostLeft, AlmostRight};
pub use cost::{Charged, Cost, CostOverflow};
pub use error::{Error, Invariant, Result, TreePath};
pub use join::{join, join_left, join_right};
pub use sequence::Seq;
pub use tree::{Color, RedBlackTree};
