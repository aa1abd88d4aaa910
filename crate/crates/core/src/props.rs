//! Property suites over enumerated or random tree populations.
//!
//! The exhaustive level takes every tree shape up to the given black height,
//! except that any class larger than [`SAMPLED_CLASS_SIZE`] shapes (the red
//! trees of black height 2 have 160,000) is sampled down with the seeded
//! generator. Join properties run over all ordered pairs of the population.
//!
//! The first failing case is reported with its inputs serialized.

use std::collections::HashSet;
use std::fmt;
use std::iter;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::almost::{AlmostLeft, AlmostRight};
use crate::bounds;
use crate::cost::{Charged, Cost};
use crate::error::Result;
use crate::join::{join, join_left, join_right};
use crate::oracle::{self, random_joined_tree, Shapes};
use crate::sequence::{self, Seq};
use crate::sexpr::{parse, to_sexpr};
use crate::tree::{Color, RedBlackTree};

type Tree = RedBlackTree<i64>;

/// Signature of the join under test.
pub type JoinFn = fn(&Tree, i64, &Tree) -> Result<Charged<Tree>>;

pub const SAMPLED_CLASS_SIZE: usize = 1000;
/// Trees taken from the front of an exhaustive population for pairwise union
/// checks. Random populations pair each tree with its successor instead.
pub const UNION_POPULATION: usize = 450;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub level: Level,
    pub max_bh: u32,
    /// Population size for the random level.
    pub trials: u64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            level: Level::Exhaustive,
            max_bh: 2,
            trials: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub property: &'static str,
    pub cases: u64,
    /// Extra measurements, e.g. the largest cost seen for unbounded operations.
    pub note: Option<String>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ok {} ({} cases)", self.property, self.cases)?;
        if let Some(note) = &self.note {
            write!(f, " {note}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub property: &'static str,
    pub detail: String,
    pub counterexample: Vec<(&'static str, String)>,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FAIL {}: {}", self.property, self.detail)?;
        for (name, value) in &self.counterexample {
            writeln!(f, "  {name} = {value}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Failure {}

fn fail(property: &'static str, detail: impl Into<String>) -> Failure {
    Failure {
        property,
        detail: detail.into(),
        counterexample: Vec::new(),
    }
}

impl Failure {
    fn with(mut self, name: &'static str, t: &Tree) -> Self {
        self.counterexample.push((name, to_sexpr(t)));
        self
    }

    fn with_key(mut self, name: &'static str, k: i64) -> Self {
        self.counterexample.push((name, k.to_string()));
        self
    }
}

fn ensure(
    cond: bool,
    property: &'static str,
    detail: impl FnOnce() -> String,
) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(fail(property, detail()))
    }
}

/// Trees with keys `0..size`, in the order the suites walk them.
pub fn population(config: &Config) -> Result<Vec<Tree>> {
    match config.level {
        Level::Exhaustive => {
            let shapes = Shapes::new(config.max_bh, oracle::DEFAULT_ENUMERATION_LIMIT)?;
            let mut rng = oracle::rng(config.seed);
            let mut out = Vec::new();
            for bh in 0..=config.max_bh {
                for color in [Color::Black, Color::Red] {
                    let class = shapes.get(color, bh);
                    let picked: Vec<usize> = if class.len() > SAMPLED_CLASS_SIZE {
                        let mut idx = sample(&mut rng, class.len(), SAMPLED_CLASS_SIZE).into_vec();
                        idx.sort_unstable();
                        idx
                    } else {
                        (0..class.len()).collect()
                    };
                    out.extend(
                        picked
                            .into_iter()
                            .map(|i| oracle::label(&class[i], |k| k as i64)),
                    );
                }
            }
            Ok(out)
        }
        Level::Random => {
            let mut rng = oracle::rng(config.seed);
            let max_size = (1u64 << config.max_bh.min(40)) - 1;
            Ok((0..config.trials)
                .map(|_| {
                    let size = rng.gen_range(0..=max_size);
                    random_joined_tree(size, rng.gen())
                })
                .collect())
        }
    }
}

pub fn run(config: &Config) -> Result<Result<Vec<Outcome>, Failure>> {
    run_with(config, join)
}

/// Runs every suite with `join_fn` standing in for [`join`].
pub fn run_with(config: &Config, join_fn: JoinFn) -> Result<Result<Vec<Outcome>, Failure>> {
    let pop = population(config)?;
    Ok(run_on(&pop, config.level, join_fn))
}

pub fn run_on(pop: &[Tree], level: Level, join_fn: JoinFn) -> Result<Vec<Outcome>, Failure> {
    let mut outcomes = tree_properties(pop)?;
    outcomes.extend(join_properties(pop, level, join_fn)?);
    outcomes.extend(sorted_set_properties(pop, level)?);
    Ok(outcomes)
}

/// Runs `check` on every index in parallel and returns the lowest-index failure.
fn first_failure<F>(n: usize, check: F) -> Result<(), Failure>
where
    F: Fn(usize) -> Result<(), Failure> + Sync + Send,
{
    let results: Vec<Result<(), Failure>> = (0..n).into_par_iter().map(check).collect();
    results.into_iter().collect()
}

fn tree_properties(pop: &[Tree]) -> Result<Vec<Outcome>, Failure> {
    first_failure(pop.len(), |i| {
        check_tree(&pop[i]).map_err(|f| f.with("t", &pop[i]))
    })?;
    let n = pop.len() as u64;
    Ok([
        "tree-validity",
        "black-height-lemmas",
        "height-bound",
        "in-order-and-mirror",
        "format-roundtrip",
        "sum-bounds",
        "map-reverse",
    ]
    .into_iter()
    .map(|property| Outcome {
        property,
        cases: n,
        note: None,
    })
    .collect())
}

fn check_tree(t: &Tree) -> Result<(), Failure> {
    t.validate()
        .map_err(|e| fail("tree-validity", e.to_string()))?;

    let (n, size) = (t.black_height(), t.size());
    ensure(
        n <= bounds::black_height_upper(size),
        "black-height-lemmas",
        || format!("black height {n} above upper bound for size {size}"),
    )?;
    ensure(
        bounds::black_height_lower(size) <= i64::from(n),
        "black-height-lemmas",
        || format!("black height {n} below lower bound for size {size}"),
    )?;
    ensure(t.height() <= 2 * n + 1, "height-bound", || {
        format!("height {} exceeds 2 * {n} + 1", t.height())
    })?;

    let keys = t.in_order();
    ensure(keys.len() as u64 == size, "in-order-and-mirror", || {
        format!("in-order length {} but size {size}", keys.len())
    })?;
    let m = t.mirror();
    ensure(
        m.size() == size && m.black_height() == n && m.iter().eq(keys.iter().rev()),
        "in-order-and-mirror",
        || "mirror does not reverse the traversal".into(),
    )?;
    ensure(m.mirror() == *t, "in-order-and-mirror", || {
        "mirror is not an involution".into()
    })?;

    let text = to_sexpr(t);
    let back = parse(&text).map_err(|e| fail("format-roundtrip", e.to_string()))?;
    ensure(
        back == *t && to_sexpr(&back) == text,
        "format-roundtrip",
        || "parse of serialization differs".into(),
    )?;

    let s = Seq::from_tree(t.clone()).map_err(|e| fail("sum-bounds", e.to_string()))?;
    let summed = sequence::sum(&s).map_err(|e| fail("sum-bounds", e.to_string()))?;
    ensure(
        Some(summed.value) == oracle::list_sum(&keys),
        "sum-bounds",
        || format!("sum {} disagrees with list sum", summed.value),
    )?;
    let c = summed.cost;
    ensure(c.work == size, "sum-bounds", || {
        format!("work {} for size {size}", c.work)
    })?;
    ensure(
        c.span <= bounds::sum_span_by_size(size),
        "sum-bounds",
        || {
            format!(
                "span {} above size bound {}",
                c.span,
                bounds::sum_span_by_size(size)
            )
        },
    )?;
    ensure(
        c.span <= bounds::sum_span(t.color(), n),
        "sum-bounds",
        || {
            format!(
                "span {} above black-height bound {}",
                c.span,
                bounds::sum_span(t.color(), n)
            )
        },
    )?;

    let mapped = sequence::map(&s, |k| k * 3).map_err(|e| fail("map-reverse", e.to_string()))?;
    ensure(
        mapped.value.tree().validate().is_ok()
            && mapped.value.in_order() == oracle::list_map(&keys, |k| k * 3),
        "map-reverse",
        || "map disagrees with list map".into(),
    )?;
    let rev = sequence::reverse(&s).map_err(|e| fail("map-reverse", e.to_string()))?;
    ensure(
        rev.value.tree().validate().is_ok() && rev.value.in_order() == oracle::list_reverse(&keys),
        "map-reverse",
        || "reverse disagrees with list reverse".into(),
    )?;
    Ok(())
}

fn node_addrs(t: &Tree, out: &mut HashSet<usize>) {
    if let Some(n) = t.node() {
        out.insert(t.node_addr().expect("node"));
        node_addrs(n.left(), out);
        node_addrs(n.right(), out);
    }
}

/// Nodes of `t` that are not shared with the inputs.
pub fn fresh_nodes(t: &Tree, inputs: &HashSet<usize>) -> u64 {
    match t.node() {
        None => 0,
        Some(_) if inputs.contains(&t.node_addr().expect("node")) => 0,
        Some(n) => 1 + fresh_nodes(n.left(), inputs) + fresh_nodes(n.right(), inputs),
    }
}

struct PairWorld<'p> {
    pop: &'p [Tree],
    /// Population with keys moved above `middle`.
    shifted: Vec<Tree>,
    mirrored: Vec<Tree>,
    mirrored_shifted: Vec<Tree>,
    middle: i64,
}

impl<'p> PairWorld<'p> {
    fn new(pop: &'p [Tree]) -> Self {
        let max = pop.iter().map(|t| t.size()).max().unwrap_or(0) as i64;
        let middle = max;
        let shifted: Vec<Tree> = pop
            .iter()
            .map(|t| t.map_keys(&mut |k| k + max + 1))
            .collect();
        PairWorld {
            pop,
            mirrored: pop.iter().map(Tree::mirror).collect(),
            mirrored_shifted: shifted.iter().map(Tree::mirror).collect(),
            shifted,
            middle,
        }
    }
}

fn join_properties(pop: &[Tree], level: Level, join_fn: JoinFn) -> Result<Vec<Outcome>, Failure> {
    let world = PairWorld::new(pop);
    let n = pop.len();
    let partners: Box<dyn Fn(usize) -> Vec<usize> + Sync> = match level {
        Level::Exhaustive => Box::new(move |_| (0..n).collect()),
        Level::Random => Box::new(move |i| vec![i, (i + 1) % n, (i * 7 + 3) % n]),
    };
    first_failure(n, |i| {
        for j in partners(i) {
            check_pair(&world, i, j, join_fn).map_err(|f| {
                f.with("t1", &world.pop[i])
                    .with_key("a", world.middle)
                    .with("t2", &world.shifted[j])
            })?;
        }
        Ok(())
    })?;
    let pairs: u64 = (0..n).map(|i| partners(i).len() as u64).sum();
    Ok([
        "join-correctness",
        "join-cost-bounds",
        "join-right-strengthened-bound",
        "mirror-duality",
        "structural-sharing",
    ]
    .into_iter()
    .map(|property| Outcome {
        property,
        cases: pairs,
        note: None,
    })
    .collect())
}

fn check_pair(w: &PairWorld<'_>, i: usize, j: usize, join_fn: JoinFn) -> Result<(), Failure> {
    let (t1, t2, a) = (&w.pop[i], &w.shifted[j], w.middle);
    let (n1, n2) = (t1.black_height(), t2.black_height());
    let (s1, s2) = (t1.size(), t2.size());

    let out = join_fn(t1, a, t2).map_err(|e| fail("join-correctness", e.to_string()))?;
    let r = &out.value;
    r.validate()
        .map_err(|e| fail("join-correctness", e.to_string()))?;
    ensure(
        r.iter()
            .eq(t1.iter().chain(iter::once(&a)).chain(t2.iter())),
        "join-correctness",
        || "in-order traversal is not t1 ++ [a] ++ t2".into(),
    )?;
    let top = n1.max(n2);
    ensure(
        r.black_height() == top || r.black_height() == top + 1,
        "join-correctness",
        || format!("black height {} for inputs {n1} and {n2}", r.black_height()),
    )?;

    let c = out.cost;
    ensure(c.work == c.span, "join-cost-bounds", || {
        format!("work {} != span {}", c.work, c.span)
    })?;
    ensure(
        c.work <= bounds::join_cost(n1, n2),
        "join-cost-bounds",
        || format!("cost {} above {}", c.work, bounds::join_cost(n1, n2)),
    )?;
    ensure(
        c.work <= bounds::join_cost_by_size(s1, s2),
        "join-cost-bounds",
        || {
            format!(
                "cost {} above size bound {}",
                c.work,
                bounds::join_cost_by_size(s1, s2)
            )
        },
    )?;
    if n1 == n2 {
        ensure(c == Cost::ZERO, "join-cost-bounds", || {
            format!("equal heights cost {c}")
        })?;
    }

    let mut inputs = HashSet::new();
    node_addrs(t1, &mut inputs);
    node_addrs(t2, &mut inputs);
    let fresh = fresh_nodes(r, &inputs);
    let limit = 2 * u64::from(n1.abs_diff(n2)) + 3;
    ensure(fresh <= limit, "structural-sharing", || {
        format!("{fresh} fresh nodes, limit {limit}")
    })?;

    if n1 > n2 {
        let jr = join_right(t1, a, t2)
            .map_err(|e| fail("join-right-strengthened-bound", e.to_string()))?;
        check_join_right(t1, a, t2, &jr)?;
        let jl = join_left(&w.mirrored_shifted[j], a, &w.mirrored[i])
            .map_err(|e| fail("mirror-duality", e.to_string()))?;
        ensure(
            jl.cost == jr.cost && jl.value == jr.value.mirror(),
            "mirror-duality",
            || "join_left on mirrored inputs is not the mirror of join_right".into(),
        )?;
    } else if n1 < n2 {
        let jl = join_left(t1, a, t2)
            .map_err(|e| fail("join-right-strengthened-bound", e.to_string()))?;
        check_join_left(t1, a, t2, &jl)?;
    }
    Ok(())
}

fn check_join_right(
    t1: &Tree,
    a: i64,
    t2: &Tree,
    out: &Charged<AlmostRight<i64>>,
) -> Result<(), Failure> {
    const P: &str = "join-right-strengthened-bound";
    let (n1, n2) = (t1.black_height(), t2.black_height());
    let v = &out.value;
    ensure(v.black_height() == n1, P, || {
        format!("black height {} != {n1}", v.black_height())
    })?;
    ensure(v.left_color() == t1.color(), P, || {
        "left color not carried over".into()
    })?;
    ensure(!v.is_violation() || t1.color() == Color::Red, P, || {
        "violation from a black tree".into()
    })?;
    if let AlmostRight::Valid { tree, .. } = v {
        tree.validate().map_err(|e| fail(P, e.to_string()))?;
    }
    ensure(
        v.in_order() == oracle::list_join(&t1.in_order(), a, &t2.in_order()),
        P,
        || "in-order traversal is not t1 ++ [a] ++ t2".into(),
    )?;
    let bound = bounds::join_right_cost(t1.color(), n1, n2);
    ensure(
        out.cost.work == out.cost.span && out.cost.work <= bound,
        P,
        || format!("cost {} above {bound}", out.cost),
    )
}

fn check_join_left(
    t1: &Tree,
    a: i64,
    t2: &Tree,
    out: &Charged<AlmostLeft<i64>>,
) -> Result<(), Failure> {
    const P: &str = "join-right-strengthened-bound";
    let (n1, n2) = (t1.black_height(), t2.black_height());
    let v = &out.value;
    ensure(v.black_height() == n2, P, || {
        format!("black height {} != {n2}", v.black_height())
    })?;
    ensure(!v.is_violation() || t2.color() == Color::Red, P, || {
        "violation from a black tree".into()
    })?;
    if let AlmostLeft::Valid { tree, .. } = v {
        tree.validate().map_err(|e| fail(P, e.to_string()))?;
    }
    ensure(
        v.in_order() == oracle::list_join(&t1.in_order(), a, &t2.in_order()),
        P,
        || "in-order traversal is not t1 ++ [a] ++ t2".into(),
    )?;
    let bound = bounds::join_right_cost(t2.color(), n2, n1);
    ensure(
        out.cost.work == out.cost.span && out.cost.work <= bound,
        P,
        || format!("cost {} above {bound}", out.cost),
    )
}

fn probe_keys(size: u64, level: Level, i: usize) -> Vec<i64> {
    // keys in the scaled tree are 0, 2, 4, ...; odd probes are absent
    let top = 2 * size as i64;
    if level == Level::Exhaustive || size <= 16 {
        (-1..=top).collect()
    } else {
        let mut rng = oracle::rng(i as u64);
        (0..16).map(|_| rng.gen_range(-1..=top)).collect()
    }
}

fn sorted_set_properties(pop: &[Tree], level: Level) -> Result<Vec<Outcome>, Failure> {
    let scaled: Vec<Seq<i64>> = pop
        .iter()
        .map(|t| Seq::from_tree(t.map_keys(&mut |k| 2 * k)).expect("relabeled valid tree"))
        .collect();
    let tripled: Vec<Seq<i64>> = pop
        .iter()
        .map(|t| Seq::from_tree(t.map_keys(&mut |k| 3 * k)).expect("relabeled valid tree"))
        .collect();

    let max_cost = |costs: &[Cost]| {
        costs.iter().fold(Cost::ZERO, |m, c| {
            Cost::new(m.work.max(c.work), m.span.max(c.span))
        })
    };

    let per_tree: Vec<Result<(u64, Cost, Cost), Failure>> = (0..pop.len())
        .into_par_iter()
        .map(|i| {
            let s = &scaled[i];
            let keys = s.in_order();
            let probes = probe_keys(s.len(), level, i);
            let mut split_max = Cost::ZERO;
            let mut insert_max = Cost::ZERO;
            for &p in &probes {
                let err = |f: Failure| f.with("s", s.tree()).with_key("key", p);
                let out = sequence::split(s, &p).map_err(|e| err(fail("split", e.to_string())))?;
                let (l, m, r) = &out.value;
                let (el, em, er) = oracle::list_split(&keys, &p);
                ensure(
                    l.in_order() == el && *m == em && r.in_order() == er,
                    "split",
                    || "split disagrees with list partition".into(),
                )
                .map_err(err)?;
                ensure(
                    l.tree().validate().is_ok() && r.tree().validate().is_ok(),
                    "split",
                    || "split produced an invalid tree".into(),
                )
                .map_err(err)?;
                split_max = max_cost(&[split_max, out.cost]);

                let ins = sequence::insert(s, p).map_err(|e| err(fail("insert", e.to_string())))?;
                let mut expected = keys.clone();
                expected.push(p);
                ensure(
                    ins.value.tree().validate().is_ok()
                        && ins.value.in_order() == oracle::list_set(&expected),
                    "insert",
                    || "insert disagrees with sorted-set insert".into(),
                )
                .map_err(err)?;
                insert_max = max_cost(&[insert_max, ins.cost]);
            }
            let base =
                sequence::union(&Seq::empty(), s).map_err(|e| fail("union", e.to_string()))?;
            ensure(base.value == *s, "union", || "union(empty, s) != s".into())
                .map_err(|f| f.with("s", s.tree()))?;
            Ok((probes.len() as u64, split_max, insert_max))
        })
        .collect();
    let mut probes = 0;
    let (mut split_max, mut insert_max) = (Cost::ZERO, Cost::ZERO);
    for r in per_tree {
        let (n, s, i) = r?;
        probes += n;
        split_max = max_cost(&[split_max, s]);
        insert_max = max_cost(&[insert_max, i]);
    }

    let m = match level {
        Level::Exhaustive => pop.len().min(UNION_POPULATION),
        Level::Random => pop.len(),
    };
    let partners = |i: usize| -> Vec<usize> {
        match level {
            Level::Exhaustive => (0..m).collect(),
            Level::Random => vec![(i + 1) % m],
        }
    };
    let per_union: Vec<Result<(u64, Cost), Failure>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut worst = Cost::ZERO;
            let mut count = 0;
            for j in partners(i) {
                let (x, y) = (&scaled[i], &tripled[j]);
                let err = |f: Failure| f.with("s1", x.tree()).with("s2", y.tree());
                let u = sequence::union(x, y).map_err(|e| err(fail("union", e.to_string())))?;
                let back = sequence::union(y, x).map_err(|e| err(fail("union", e.to_string())))?;
                let expected = oracle::list_union(&x.in_order(), &y.in_order());
                ensure(
                    u.value.tree().validate().is_ok() && u.value.in_order() == expected,
                    "union",
                    || "union disagrees with sorted-list union".into(),
                )
                .map_err(err)?;
                ensure(back.value.in_order() == expected, "union", || {
                    "union is not commutative on values".into()
                })
                .map_err(err)?;
                worst = max_cost(&[worst, u.cost, back.cost]);
                count += 2;
            }
            Ok((count, worst))
        })
        .collect();
    let mut unions = 0;
    let mut union_max = Cost::ZERO;
    for r in per_union {
        let (n, c) = r?;
        unions += n;
        union_max = max_cost(&[union_max, c]);
    }

    let note = |c: Cost| Some(format!("max measured {c}"));
    Ok(vec![
        Outcome {
            property: "split",
            cases: probes,
            note: note(split_max),
        },
        Outcome {
            property: "insert",
            cases: probes,
            note: note(insert_max),
        },
        Outcome {
            property: "union",
            cases: unions + pop.len() as u64,
            note: note(union_max),
        },
    ])
}
