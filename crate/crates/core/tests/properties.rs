use std::sync::Arc;

use proptest::prelude::*;

use equivarium::category::Preorder;
use equivarium::elmendorf_cat::c_cat;
use equivarium::elmendorf_pos::{
    c_pos, check_fixed_milnor, check_retraction, check_stability, milnor, posetal_quotient,
};
use equivarium::group::FiniteGroup;
use equivarium::homology::homology;
use equivarium::orbit::OrbitCategory;
use equivarium::presheaf::{GPreorder, OrbitPresheaf};
use equivarium::simplicial::nerve;

fn closure(n: usize, bits: &[bool], dag: bool) -> Preorder {
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = i == j || (bits[i * n + j] && (!dag || i < j));
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    Preorder::from_fn(n, |i, j| leq[i][j]).unwrap()
}

fn relation(dag: bool) -> impl Strategy<Value = Preorder> {
    (1usize..=4).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n).prop_map(move |b| closure(n, &b, dag))
    })
}

/// Two copies of `p` swapped by C2, plus a fixed copy joined below both.
fn doubled(p: &Preorder) -> GPreorder {
    let n = p.len();
    let leq = |i: usize, j: usize| {
        let (ci, cj) = (i / n, j / n);
        if ci == 2 {
            // the fixed copy sits below the matching element of either swapped copy
            cj == 2 && p.leq(i % n, j % n) || cj != 2 && p.leq(i % n, j % n)
        } else {
            ci == cj && p.leq(i % n, j % n)
        }
    };
    let order = Preorder::from_fn(3 * n, leq).unwrap();
    let swap = (0..3 * n).map(|i| if i / n == 2 { i } else { (i + n) % (2 * n) }).collect();
    let group = Arc::new(FiniteGroup::from_key("C2").unwrap());
    GPreorder::new(group, order, vec![(0..3 * n).collect(), swap]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn posetal_quotient_is_certified(p in relation(false)) {
        let gp = doubled(&p);
        let q = posetal_quotient(&gp);
        prop_assert!(q.check().is_ok());
        prop_assert!(q.quotient.is_poset());
    }

    #[test]
    fn milnor_commutes_with_fixed_points(p in relation(false), depth in 0usize..=2) {
        let gp = doubled(&p);
        let m = milnor(&gp, depth).unwrap();
        for h in gp.group().subgroups() {
            prop_assert!(check_fixed_milnor(&m, &h).is_ok());
        }
        prop_assert!(check_stability(&gp, depth).is_ok());
        prop_assert!(check_retraction(&m).is_ok());
        prop_assert!(m.poset.is_poset());
    }

    #[test]
    fn c_pos_closed_form(p in relation(true), key in prop::sample::select(vec!["C2", "C3", "S3"]), depth in 0usize..=2) {
        let orbit = Arc::new(OrbitCategory::new(Arc::new(FiniteGroup::from_key(key).unwrap())).unwrap());
        let x = OrbitPresheaf::constant(orbit, "random", p.to_category());
        prop_assert!(c_cat(&x).unwrap().is_thin());
        let c = c_pos(&x, depth).unwrap();
        prop_assert!(c.closed_form.is_poset());
    }

    #[test]
    fn cones_are_acyclic(p in relation(false)) {
        let n = p.len();
        let coned = Preorder::from_fn(n + 1, |i, j| j == n || (i < n && j < n && p.leq(i, j))).unwrap();
        let s = nerve(&coned.to_category(), 3).unwrap();
        let h = homology(&s, 2).unwrap();
        prop_assert_eq!(h.reduced_betti(), vec![0, 0, 0]);
        prop_assert!(h.groups.iter().all(|g| g.torsion.is_empty()));
    }
}
