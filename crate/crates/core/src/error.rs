use std::fmt;

use thiserror::Error;

use crate::cost::CostOverflow;

/// Which red-black rule (or cached index) a tree broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    /// Both children of a red node must be black.
    RedRed,
    /// Every root-to-leaf path crosses the same number of black nodes.
    BlackHeight,
    /// Cached node count disagrees with the subtree.
    CachedSize,
    /// Cached black height disagrees with the subtree.
    CachedBlackHeight,
}

impl Invariant {
    /// Number of the classical red-black rule, if this is one.
    pub fn number(self) -> Option<u8> {
        match self {
            Invariant::RedRed => Some(3),
            Invariant::BlackHeight => Some(4),
            Invariant::CachedSize | Invariant::CachedBlackHeight => None,
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::RedRed => f.write_str("invariant 3 (red node with a red child)"),
            Invariant::BlackHeight => f.write_str("invariant 4 (unequal black heights)"),
            Invariant::CachedSize => f.write_str("cached size mismatch"),
            Invariant::CachedBlackHeight => f.write_str("cached black height mismatch"),
        }
    }
}

/// Position of a node as the sequence of turns taken from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreePath(pub String);

impl TreePath {
    pub fn root() -> Self {
        TreePath(String::new())
    }

    pub fn child(&self, turn: char) -> Self {
        let mut s = self.0.clone();
        s.push(turn);
        TreePath(s)
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("root")
        } else {
            f.write_str(&self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{invariant} at {path}: {detail}")]
    InvariantViolation {
        path: TreePath,
        invariant: Invariant,
        detail: String,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// A case the join analysis proves impossible was reached.
    #[error("unreachable case reached: {0}")]
    UnreachableCase(&'static str),

    #[error(transparent)]
    CostOverflow(#[from] CostOverflow),

    #[error("value arithmetic overflowed")]
    ValueOverflow,

    #[error("black height {requested} exceeds the enumeration limit {limit}")]
    LimitExceeded { requested: u32, limit: u32 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invariant(invariant: Invariant, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            path: TreePath::root(),
            invariant,
            detail: detail.into(),
        }
    }
}
