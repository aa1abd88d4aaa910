//! Cost-bound benchmark reports.
//!
//! Each trial draws two random trees with at most `2^max_bh - 1` keys, so
//! their black heights never exceed `max_bh`, and records one `join` row and
//! one `sum` row. Trials run on worker threads; rows come out in trial order.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds;
use crate::cost::Cost;
use crate::error::Result;
use crate::join::join;
use crate::oracle::random_tree;
use crate::sequence::{sum, Seq};

pub const CSV_HEADER: &str = "op,n1,n2,size1,size2,work,span,bound_bh,bound_size,within_bound";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub op: &'static str,
    pub n1: u32,
    pub n2: u32,
    pub size1: u64,
    pub size2: u64,
    pub cost: Cost,
    pub bound_bh: u64,
    pub bound_size: u64,
    pub within_bound: bool,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.op,
            self.n1,
            self.n2,
            self.size1,
            self.size2,
            self.cost.csv(),
            self.bound_bh,
            self.bound_size,
            self.within_bound
        )
    }

    pub fn join(n1: u32, n2: u32, size1: u64, size2: u64, cost: Cost) -> Self {
        let bound_bh = bounds::join_cost(n1, n2);
        let bound_size = bounds::join_cost_by_size(size1, size2);
        BenchRow {
            op: "join",
            n1,
            n2,
            size1,
            size2,
            cost,
            bound_bh,
            bound_size,
            within_bound: cost.work == cost.span
                && cost.work <= bound_bh
                && cost.work <= bound_size,
        }
    }

    /// `bound_bh` is the root-color form: `2n` for black roots, `1 + 2n` for red.
    pub fn sum(tree_color: crate::tree::Color, n: u32, size: u64, cost: Cost) -> Self {
        let bound_bh = bounds::sum_span(tree_color, n);
        let bound_size = bounds::sum_span_by_size(size);
        BenchRow {
            op: "sum",
            n1: n,
            n2: 0,
            size1: size,
            size2: 0,
            cost,
            bound_bh,
            bound_size,
            within_bound: cost.work == size && cost.span <= bound_bh && cost.span <= bound_size,
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(seed: u64, trial: u64, max_bh: u32) -> Result<[BenchRow; 2]> {
    let mut rng = trial_rng(seed, trial);
    let max_size = (1u64 << max_bh.min(40)) - 1;
    let size1 = rng.gen_range(0..=max_size);
    let size2 = rng.gen_range(0..=max_size);
    let t1 = random_tree(size1, rng.gen());
    let t2 = random_tree(size2, rng.gen());
    // keys of t2 move past the middle key
    let offset = size1 as i64 + 1;
    let t2 = t2.map_keys(&mut |k| k + offset);
    let joined = join(&t1, size1 as i64, &t2)?;
    let join_row = BenchRow::join(
        t1.black_height(),
        t2.black_height(),
        size1,
        size2,
        joined.cost,
    );
    let summed = sum(&Seq::from_tree(t1.clone())?)?;
    let sum_row = BenchRow::sum(t1.color(), t1.black_height(), size1, summed.cost);
    Ok([join_row, sum_row])
}

pub fn run(trials: u64, max_bh: u32, seed: u64) -> Result<Vec<BenchRow>> {
    let per_trial: Vec<[BenchRow; 2]> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(seed, i, max_bh))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[BenchRow], trials: u64, max_bh: u32, seed: u64) -> String {
    let mut out = String::new();
    writeln!(out, "# seed={seed}").unwrap();
    writeln!(out, "# trials={trials} max_bh={max_bh}").unwrap();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for row in rows {
        writeln!(out, "{}", row.csv()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_within_bounds_and_deterministic() {
        let rows = run(50, 8, 3).unwrap();
        assert_eq!(rows.len(), 100);
        for row in &rows {
            assert!(row.within_bound, "{}", row.csv());
            match row.op {
                "join" => assert_eq!(row.cost.work, row.cost.span),
                "sum" => assert_eq!(row.cost.work, row.size1),
                _ => unreachable!(),
            }
            assert!(row.n1 <= 8 && row.n2 <= 8);
        }
        assert_eq!(
            to_csv(&rows, 50, 8, 3),
            to_csv(&run(50, 8, 3).unwrap(), 50, 8, 3)
        );
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&run(1, 2, 0).unwrap(), 1, 2, 0);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "# seed=0");
        assert_eq!(lines[2], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("join,"));
        assert!(lines[4].starts_with("sum,"));
        assert_eq!(lines[3].split(',').count(), 10);
    }
}
