use proptest::prelude::*;

use globalk::bisets::{balanced_product, canonical_terms, Biset, BisetClass};
use globalk::globfun::{GlobalFunctor, GroupWindow};
use globalk::gsets::{table_of_marks, GSet, GSetClass};
use globalk::instances::linalg::Field;
use globalk::instances::FinSets;
use globalk::parsummable::{Injection, Label, Pi0Monoid};
use globalk::{Group, GroupRef};

const GROUPS: [&str; 6] = ["C2", "C3", "V4", "S3", "C4", "D4"];

fn group() -> impl Strategy<Value = GroupRef> {
    prop::sample::select(&GROUPS[..]).prop_map(|n| Group::named(n).unwrap())
}

fn injection(len: usize) -> impl Strategy<Value = Injection> {
    Just((0..3 * len as Label).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |v| Injection::from_vec(v[..len].to_vec()).unwrap())
}

/// A G-set as a sum of transitive pieces, one count per subgroup class.
fn gset_of(g: &GroupRef, counts: &[usize]) -> GSet {
    let classes = g.subgroup_classes();
    let mut x = GSet::empty(g);
    for (h, &c) in classes.reps().zip(counts) {
        for _ in 0..c {
            x = x.disjoint_union(&GSet::cosets(g, h)).unwrap();
        }
    }
    x
}

fn group_and_counts() -> impl Strategy<Value = (GroupRef, Vec<usize>, Vec<usize>)> {
    group().prop_flat_map(|g| {
        let n = g.subgroup_classes().len();
        (
            Just(g),
            prop::collection::vec(0..3usize, n),
            prop::collection::vec(0..3usize, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn injection_composition_is_associative(a in injection(4), b in injection(5), c in injection(3)) {
        let left = a.after(&b).after(&c);
        let right = a.after(&b.after(&c));
        for l in 0..20 {
            prop_assert_eq!(left.apply(l), right.apply(l));
            prop_assert_eq!(left.apply(l), a.apply(b.apply(c.apply(l))));
        }
    }

    #[test]
    fn injections_are_injective(a in injection(6)) {
        let images: std::collections::BTreeSet<Label> = (0..40).map(|l| a.apply(l)).collect();
        prop_assert_eq!(images.len(), 40);
    }

    #[test]
    fn subgroup_orders_divide_group_order(g in group()) {
        let classes = g.subgroup_classes();
        let total: usize = classes.reps().map(|h| g.order() / g.normalizer(h).order()).sum();
        prop_assert_eq!(total, g.all_subgroups().len());
        for h in g.all_subgroups() {
            prop_assert_eq!(g.order() % h.order(), 0);
        }
    }

    #[test]
    fn decomposition_is_additive((g, a, b) in group_and_counts()) {
        let (x, y) = (gset_of(&g, &a), gset_of(&g, &b));
        let sum = x.disjoint_union(&y).unwrap().decompose();
        let expected = GSetClass { group: g.clone(), mult: a.iter().zip(&b).map(|(p, q)| p + q).collect() };
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn marks_are_determined_by_the_table((g, a, _) in group_and_counts()) {
        let x = gset_of(&g, &a);
        let tom = table_of_marks(&g);
        for (j, h) in g.subgroup_classes().reps().enumerate() {
            let expected: i64 = a.iter().enumerate().map(|(k, &c)| c as i64 * tom[[k, j]]).sum();
            prop_assert_eq!(x.marks(h) as i64, expected);
        }
    }

    #[test]
    fn restriction_preserves_size((g, a, _) in group_and_counts()) {
        let x = gset_of(&g, &a);
        for h in g.all_subgroups() {
            prop_assert_eq!(x.restrict_to(&h).size(), x.size());
        }
    }
}

fn pair() -> impl Strategy<Value = (GroupRef, GroupRef, usize, usize)> {
    (group(), prop::sample::select(&["e", "C2", "C3", "S3"][..])).prop_flat_map(|(k, g)| {
        let g = Group::named(g).unwrap();
        let n = canonical_terms(&k, &g).len();
        (Just(k), Just(g), 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn biset_classes_add((k, g, i, j) in pair()) {
        let terms = canonical_terms(&k, &g);
        let a = Biset::from_term(&k, &g, &terms[i]).unwrap();
        let b = Biset::from_term(&k, &g, &terms[j]).unwrap();
        let sum = a.disjoint_union(&b).unwrap().classify().unwrap();
        let expected = BisetClass::single(&k, &g, terms[i].clone()).add(&BisetClass::single(&k, &g, terms[j].clone()));
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn balanced_product_size((k, g, i, _) in pair()) {
        // the identity biset is a unit for the balanced product
        let s = Biset::from_term(&k, &g, &canonical_terms(&k, &g)[i]).unwrap();
        let p = balanced_product(&Biset::identity(&k), &s).unwrap();
        prop_assert_eq!(p.size(), s.size());
        prop_assert!(p.is_right_free());
        prop_assert_eq!(p.classify().unwrap(), s.classify().unwrap());
    }

    #[test]
    fn free_functor_operations_are_additive(
        x in prop::collection::vec(-4i64..5, 3),
        y in prop::collection::vec(-4i64..5, 3),
        t in 0usize..16,
    ) {
        let w = GroupWindow::parse("e,C2").unwrap();
        let a = GlobalFunctor::free(&Group::named("C2").unwrap(), &w).unwrap();
        let (c2, e) = (w.group(1).clone(), w.group(0).clone());
        for (src, tgt, k, g) in [(1, 0, &e, &c2), (1, 1, &c2, &c2)] {
            let terms = w.terms(src, tgt);
            let class = BisetClass::single(k, g, terms[t % terms.len()].clone());
            let n = a.ranks()[src];
            let (x, y) = (&x[..n], &y[..n]);
            let xy: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let fx = a.apply_class(src, tgt, &class, x).unwrap();
            let fy = a.apply_class(src, tgt, &class, y).unwrap();
            let fxy = a.apply_class(src, tgt, &class, &xy).unwrap();
            let sum: Vec<i64> = fx.iter().zip(&fy).map(|(p, q)| p + q).collect();
            prop_assert_eq!(fxy, sum);
        }
    }

    #[test]
    fn pi0_classification_is_additive(a in 0usize..3, b in 0usize..3) {
        let c2 = Group::named("C2").unwrap();
        let p = Pi0Monoid::compute(&FinSets, &c2, 6, 2).unwrap();
        let mut x = p.atom_rep(0).clone();
        let mut expected = vec![1, 0];
        for (atom, count) in [(0, a), (1, b)] {
            for _ in 0..count {
                x = p.disjoint_sum(&x, p.atom_rep(atom)).unwrap();
                expected[atom] += 1;
            }
        }
        prop_assert_eq!(p.classify(&x).unwrap(), expected);
    }

    #[test]
    fn rref_is_idempotent(rows in prop::collection::vec(prop::collection::vec(0u8..3, 4), 1..4)) {
        let f = Field::new(3).unwrap();
        let (r, pivots) = f.rref(rows.clone());
        let (again, pivots2) = f.rref(r.clone());
        prop_assert_eq!(&again, &r);
        prop_assert_eq!(pivots, pivots2);
        prop_assert_eq!(f.rank(&rows), r.len());
        for v in f.nullspace(&rows, 4) {
            prop_assert!(f.mat_vec(&rows, &v).iter().all(|&c| c == 0));
        }
    }
}
