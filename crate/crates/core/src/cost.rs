//! Work/span cost algebra.
//!
//! A [`Cost`] is a pair of naturals: `work` counts every abstract step, `span`
//! counts only the steps on the critical path. Sequential composition adds
//! both components; parallel composition adds work and takes the larger span.
//! Parallelism is simulated: `par` is a pure fold, nothing runs on threads.

use std::fmt;

use thiserror::Error;

/// Raised when a cost component would exceed `u64::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cost arithmetic overflowed")]
pub struct CostOverflow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Cost {
    pub work: u64,
    pub span: u64,
}

impl Cost {
    pub const ZERO: Cost = Cost { work: 0, span: 0 };

    pub const fn new(work: u64, span: u64) -> Self {
        Cost { work, span }
    }

    pub const fn zero() -> Self {
        Self::ZERO
    }

    /// `c` units of cost, charged equally to work and span.
    pub const fn step(c: u64) -> Self {
        Cost { work: c, span: c }
    }

    /// Run `self`, then `next`.
    pub fn seq(self, next: Cost) -> Result<Cost, CostOverflow> {
        Ok(Cost {
            work: self.work.checked_add(next.work).ok_or(CostOverflow)?,
            span: self.span.checked_add(next.span).ok_or(CostOverflow)?,
        })
    }

    /// Run `self` and `other` side by side.
    pub fn par(self, other: Cost) -> Result<Cost, CostOverflow> {
        Ok(Cost {
            work: self.work.checked_add(other.work).ok_or(CostOverflow)?,
            span: self.span.max(other.span),
        })
    }

    /// The two CSV columns `work,span`.
    pub fn csv(&self) -> String {
        format!("{},{}", self.work, self.span)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "work={},span={}", self.work, self.span)
    }
}

/// A value together with the cost spent producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charged<V> {
    pub value: V,
    pub cost: Cost,
}

impl<V> Charged<V> {
    pub fn new(value: V, cost: Cost) -> Self {
        Charged { value, cost }
    }

    /// A value that cost nothing.
    pub fn free(value: V) -> Self {
        Charged {
            value,
            cost: Cost::ZERO,
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Charged<W> {
        Charged {
            value: f(self.value),
            cost: self.cost,
        }
    }

    /// Charges `before` ahead of this computation.
    pub fn after(self, before: Cost) -> Result<Self, CostOverflow> {
        Ok(Charged {
            value: self.value,
            cost: before.seq(self.cost)?,
        })
    }

    pub fn into_parts(self) -> (V, Cost) {
        (self.value, self.cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(w: u64, s: u64) -> Cost {
        Cost::new(w, s)
    }

    #[test]
    fn zero_is_identity_for_both_compositions() {
        assert_eq!(Cost::zero(), c(0, 0));
        assert_eq!(Cost::zero().seq(c(3, 2)).unwrap(), c(3, 2));
        assert_eq!(Cost::zero().par(c(3, 2)).unwrap(), c(3, 2));
    }

    #[test]
    fn step_charges_work_and_span() {
        assert_eq!(Cost::step(1), c(1, 1));
        assert_eq!(Cost::step(0), c(0, 0));
        assert_eq!(Cost::step(1).seq(Cost::step(1)).unwrap(), c(2, 2));
    }

    #[test]
    fn seq_examples() {
        assert_eq!(c(1, 1).seq(c(2, 2)).unwrap(), c(3, 3));
        assert_eq!(c(5, 2).seq(c(0, 0)).unwrap(), c(5, 2));
        assert_eq!(c(3, 1).seq(c(4, 2)).unwrap(), c(7, 3));
    }

    #[test]
    fn par_examples() {
        assert_eq!(c(1, 1).par(c(1, 1)).unwrap(), c(2, 1));
        assert_eq!(c(0, 0).par(c(5, 3)).unwrap(), c(5, 3));
        assert_eq!(c(4, 2).par(c(6, 5)).unwrap(), c(10, 5));
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(c(u64::MAX, 0).seq(c(1, 0)), Err(CostOverflow));
        assert_eq!(c(0, u64::MAX).seq(c(0, 1)), Err(CostOverflow));
        assert_eq!(c(u64::MAX, 1).par(c(1, 1)), Err(CostOverflow));
        // span uses max under par, so it cannot overflow there
        assert_eq!(c(1, u64::MAX).par(c(1, u64::MAX)).unwrap(), c(2, u64::MAX));
    }

    #[test]
    fn csv_and_display() {
        assert_eq!(c(7, 3).csv(), "7,3");
        assert_eq!(c(0, 0).to_string(), "work=0,span=0");
    }

    #[test]
    fn monoid_laws_exhaustive_small() {
        let all: Vec<Cost> = (0..=5)
            .flat_map(|w| (0..=5).map(move |s| c(w, s)))
            .collect();
        for &a in &all {
            assert_eq!(a.seq(Cost::ZERO).unwrap(), a);
            assert_eq!(Cost::ZERO.seq(a).unwrap(), a);
            assert_eq!(a.par(Cost::ZERO).unwrap(), a);
            for &b in &all {
                assert_eq!(a.par(b).unwrap(), b.par(a).unwrap());
                assert_eq!(a.par(b).unwrap().work, a.seq(b).unwrap().work);
                for &d in &all {
                    assert_eq!(
                        a.seq(b).unwrap().seq(d).unwrap(),
                        a.seq(b.seq(d).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.par(b).unwrap().par(d).unwrap(),
                        a.par(b.par(d).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    enum Expr {
        Step(u64),
        Seq(Box<Expr>, Box<Expr>),
        Par(Box<Expr>, Box<Expr>),
    }

    fn gen_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        if depth == 0 || rng.gen_ratio(1, 4) {
            return Expr::Step(rng.gen_range(0..=10));
        }
        let l = Box::new(gen_expr(rng, depth - 1));
        let r = Box::new(gen_expr(rng, depth - 1));
        if rng.gen() {
            Expr::Seq(l, r)
        } else {
            Expr::Par(l, r)
        }
    }

    fn eval(e: &Expr) -> Cost {
        match e {
            Expr::Step(k) => Cost::step(*k),
            Expr::Seq(a, b) => eval(a).seq(eval(b)).unwrap(),
            Expr::Par(a, b) => eval(a).par(eval(b)).unwrap(),
        }
    }

    // every operator treated as seq
    fn eval_sequential(e: &Expr) -> Cost {
        match e {
            Expr::Step(k) => Cost::step(*k),
            Expr::Seq(a, b) | Expr::Par(a, b) => {
                eval_sequential(a).seq(eval_sequential(b)).unwrap()
            }
        }
    }

    #[test]
    fn random_composition_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC057);
        for _ in 0..10_000 {
            let e = gen_expr(&mut rng, 8);
            let cost = eval(&e);
            assert!(cost.span <= cost.work, "{cost:?}");
            assert_eq!(cost.work, eval_sequential(&e).work);
        }
    }
}
