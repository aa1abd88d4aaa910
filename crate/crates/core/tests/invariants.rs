use std::collections::HashSet;

use proptest::prelude::*;
use rbjoin::oracle::{self, random_joined_tree, random_tree};
use rbjoin::props::fresh_nodes;
use rbjoin::sequence::{self, Seq};
use rbjoin::sexpr::{parse, to_sexpr};
use rbjoin::{bounds, join, join_left, join_right, Cost, RedBlackTree};

type Tree = RedBlackTree<i64>;

fn tree(max: u64) -> impl Strategy<Value = Tree> {
    (0..=max, any::<u64>(), any::<bool>()).prop_map(|(size, seed, by_insert)| {
        if by_insert {
            random_tree(size, seed)
        } else {
            random_joined_tree(size, seed)
        }
    })
}

fn shifted(t: &Tree, by: i64) -> Tree {
    t.map_keys(&mut |k| k + by)
}

fn addrs(t: &Tree, out: &mut HashSet<usize>) {
    if let Some(n) = t.node() {
        out.insert(t.node_addr().unwrap());
        addrs(n.left(), out);
        addrs(n.right(), out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_roundtrip(t in tree(300)) {
        let text = to_sexpr(&t);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(to_sexpr(&back), text);
    }

    #[test]
    fn mirror_reverses_and_is_involutive(t in tree(300)) {
        let m = t.mirror();
        m.validate().unwrap();
        let mut keys = t.in_order();
        keys.reverse();
        prop_assert_eq!(m.in_order(), keys);
        prop_assert_eq!(m.mirror(), t);
    }

    #[test]
    fn join_is_valid_ordered_and_bounded(t1 in tree(2000), t2 in tree(2000)) {
        let a = t1.size() as i64;
        let t2 = shifted(&t2, a + 1);
        let out = join(&t1, a, &t2).unwrap();
        out.value.validate().unwrap();
        prop_assert_eq!(
            out.value.in_order(),
            oracle::list_join(&t1.in_order(), a, &t2.in_order())
        );
        let (n1, n2) = (t1.black_height(), t2.black_height());
        let bh = out.value.black_height();
        prop_assert!(bh == n1.max(n2) || bh == n1.max(n2) + 1);
        prop_assert_eq!(out.cost.work, out.cost.span);
        prop_assert!(out.cost.work <= bounds::join_cost(n1, n2));
        prop_assert!(out.cost.work <= bounds::join_cost_by_size(t1.size(), t2.size()));

        let mut inputs = HashSet::new();
        addrs(&t1, &mut inputs);
        addrs(&t2, &mut inputs);
        prop_assert!(fresh_nodes(&out.value, &inputs) <= 2 * u64::from(n1.abs_diff(n2)) + 3);
    }

    #[test]
    fn one_sided_joins_are_mirror_images(t1 in tree(2000), t2 in tree(200)) {
        prop_assume!(t1.black_height() > t2.black_height());
        let a = t1.size() as i64;
        let t2 = shifted(&t2, a + 1);
        let right = join_right(&t1, a, &t2).unwrap();
        let left = join_left(&t2.mirror(), a, &t1.mirror()).unwrap();
        prop_assert_eq!(left.cost, right.cost);
        prop_assert_eq!(right.value.mirror(), left.value);
        prop_assert!(
            right.cost.work <= bounds::join_right_cost(t1.color(), t1.black_height(), t2.black_height())
        );
    }

    #[test]
    fn sum_matches_list_and_bounds(t in tree(5000)) {
        let s = Seq::from_tree(t.clone()).unwrap();
        let out = sequence::sum(&s).unwrap();
        prop_assert_eq!(Some(out.value), oracle::list_sum(&t.in_order()));
        prop_assert_eq!(out.cost.work, t.size());
        prop_assert!(out.cost.span <= bounds::sum_span(t.color(), t.black_height()));
        prop_assert!(out.cost.span <= bounds::sum_span_by_size(t.size()));
    }

    #[test]
    fn sorted_set_operations_match_lists(t1 in tree(400), t2 in tree(400), probe in -2i64..900) {
        let s1 = Seq::from_tree(t1.map_keys(&mut |k| 2 * k)).unwrap();
        let s2 = Seq::from_tree(t2.map_keys(&mut |k| 3 * k)).unwrap();
        let (k1, k2) = (s1.in_order(), s2.in_order());

        let (l, m, r) = sequence::split(&s1, &probe).unwrap().value;
        prop_assert_eq!((l.in_order(), m, r.in_order()), oracle::list_split(&k1, &probe));

        let ins = sequence::insert(&s1, probe).unwrap().value;
        ins.tree().validate().unwrap();
        let mut expected = k1.clone();
        expected.push(probe);
        prop_assert_eq!(ins.in_order(), oracle::list_set(&expected));

        let u = sequence::union(&s1, &s2).unwrap();
        u.value.tree().validate().unwrap();
        prop_assert_eq!(u.value.in_order(), oracle::list_union(&k1, &k2));
        prop_assert!(u.cost.span <= u.cost.work);
    }

    #[test]
    fn map_and_reverse_match_lists(t in tree(1000)) {
        let s = Seq::from_tree(t.clone()).unwrap();
        let mapped = sequence::map(&s, |k| k - 7).unwrap();
        prop_assert_eq!(mapped.value.in_order(), oracle::list_map(&t.in_order(), |k| k - 7));
        let rev = sequence::reverse(&s).unwrap();
        rev.value.tree().validate().unwrap();
        prop_assert_eq!(rev.value.in_order(), oracle::list_reverse(&t.in_order()));
        prop_assert!(rev.cost.span <= rev.cost.work);
    }
}

#[test]
fn equal_height_join_shares_both_inputs() {
    let t1 = random_tree(100, 1);
    let t2 = shifted(&random_tree(100, 2), 200);
    assert_eq!(t1.black_height(), t2.black_height());
    let out = join(&t1, 150, &t2).unwrap();
    assert_eq!(out.cost, Cost::ZERO);
    let root = out.value.node().unwrap();
    assert!(root.left().ptr_eq(&t1));
    assert!(root.right().ptr_eq(&t2));
}

#[test]
fn join_leaves_inputs_untouched() {
    let t1 = random_tree(500, 3);
    let t2 = shifted(&random_tree(20, 4), 600);
    let before = (to_sexpr(&t1), to_sexpr(&t2));
    let _ = join(&t1, 550, &t2).unwrap();
    assert_eq!(before, (to_sexpr(&t1), to_sexpr(&t2)));
}
