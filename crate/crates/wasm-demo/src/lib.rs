//! Browser bindings for the static demo page in `www/`.
//!
//! Every entry point returns a JSON string; the page parses it and draws the
//! trees as SVG. Node positions are in-order index (x) and depth (y).

use rbjoin::oracle::random_tree;
use rbjoin::sequence::{self, Seq};
use rbjoin::sexpr::to_sexpr;
use rbjoin::{bounds, join, Color, Cost, RedBlackTree};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Tree = RedBlackTree<i64>;

/// Trees larger than this are not drawn, only summarized.
pub const MAX_DRAWN: u64 = 512;
pub const MAX_SIZE: u32 = 100_000;

#[derive(Debug, Serialize, PartialEq)]
pub struct NodeView {
    pub key: i64,
    pub red: bool,
    pub x: u64,
    pub depth: u32,
    pub parent: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct TreeView {
    pub size: u64,
    pub black_height: u32,
    pub height: u32,
    pub red_root: bool,
    /// Empty when the tree has more than [`MAX_DRAWN`] keys.
    pub nodes: Vec<NodeView>,
    pub text: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CostView {
    pub work: u64,
    pub span: u64,
}

impl From<Cost> for CostView {
    fn from(c: Cost) -> Self {
        CostView {
            work: c.work,
            span: c.span,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct JoinView {
    pub left: TreeView,
    pub key: i64,
    pub right: TreeView,
    pub result: TreeView,
    pub cost: CostView,
    pub bound_bh: u64,
    pub bound_size: u64,
}

#[derive(Debug, Serialize)]
pub struct SumView {
    pub tree: TreeView,
    pub value: i64,
    pub cost: CostView,
    pub bound_bh: u64,
    pub bound_size: u64,
}

pub fn view(t: &Tree) -> TreeView {
    let mut nodes = Vec::new();
    if t.size() <= MAX_DRAWN {
        let mut x = 0;
        layout(t, 0, None, &mut x, &mut nodes);
    }
    TreeView {
        size: t.size(),
        black_height: t.black_height(),
        height: t.height(),
        red_root: t.color() == Color::Red,
        text: (t.size() <= MAX_DRAWN).then(|| to_sexpr(t)),
        nodes,
    }
}

fn layout(t: &Tree, depth: u32, parent: Option<usize>, x: &mut u64, out: &mut Vec<NodeView>) {
    let Some(n) = t.node() else { return };
    let me = out.len();
    out.push(NodeView {
        key: *n.key(),
        red: n.color() == Color::Red,
        x: 0,
        depth,
        parent,
    });
    layout(n.left(), depth + 1, Some(me), x, out);
    out[me].x = *x;
    *x += 1;
    layout(n.right(), depth + 1, Some(me), x, out);
}

fn check_size(size: u32) -> Result<u64, String> {
    if size > MAX_SIZE {
        Err(format!("size {size} is above {MAX_SIZE}"))
    } else {
        Ok(u64::from(size))
    }
}

pub fn generate_view(size: u32, seed: u32) -> Result<TreeView, String> {
    Ok(view(&random_tree(check_size(size)?, u64::from(seed))))
}

/// Joins a random tree over `0..size1` and one over `size1+1..`, around `size1`.
pub fn join_view(size1: u32, seed1: u32, size2: u32, seed2: u32) -> Result<JoinView, String> {
    let t1 = random_tree(check_size(size1)?, u64::from(seed1));
    let a = i64::from(size1);
    let t2 = random_tree(check_size(size2)?, u64::from(seed2)).map_keys(&mut |k| k + a + 1);
    let joined = join(&t1, a, &t2).map_err(|e| e.to_string())?;
    Ok(JoinView {
        bound_bh: bounds::join_cost(t1.black_height(), t2.black_height()),
        bound_size: bounds::join_cost_by_size(t1.size(), t2.size()),
        left: view(&t1),
        key: a,
        right: view(&t2),
        result: view(&joined.value),
        cost: joined.cost.into(),
    })
}

pub fn sum_view(size: u32, seed: u32) -> Result<SumView, String> {
    let t = random_tree(check_size(size)?, u64::from(seed));
    let summed = sequence::sum(&Seq::from_tree(t.clone()).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    Ok(SumView {
        bound_bh: bounds::sum_span(t.color(), t.black_height()),
        bound_size: bounds::sum_span_by_size(t.size()),
        tree: view(&t),
        value: summed.value,
        cost: summed.cost.into(),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn generate(size: u32, seed: u32) -> Result<String, JsError> {
    to_js(generate_view(size, seed))
}

#[wasm_bindgen]
pub fn join_trees(size1: u32, seed1: u32, size2: u32, seed2: u32) -> Result<String, JsError> {
    to_js(join_view(size1, seed1, size2, seed2))
}

#[wasm_bindgen]
pub fn sum_tree(size: u32, seed: u32) -> Result<String, JsError> {
    to_js(sum_view(size, seed))
}
