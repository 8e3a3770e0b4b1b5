use std::collections::HashSet;

use mangulations::{enumerate_dissections, enumerate_dyck, phi, poly_for_dissection, psi, Dissection, Guard, MVector};
use proptest::prelude::*;

fn sizes() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4).prop_flat_map(|m| (Just(m), 1..=(8 / m)))
}

fn dissection() -> impl Strategy<Value = Dissection> {
    (sizes(), any::<prop::sample::Index>()).prop_map(|((m, n), i)| {
        let all = enumerate_dissections(m, n, &Guard::standard()).unwrap();
        all[i.index(all.len())].clone()
    })
}

fn dyck_vector() -> impl Strategy<Value = MVector> {
    (sizes(), any::<prop::sample::Index>()).prop_map(|((m, n), i)| {
        let all = enumerate_dyck(m, n, &Guard::standard()).unwrap();
        all[i.index(all.len())].clone()
    })
}

proptest! {
    #[test]
    fn phi_then_psi_is_identity(q in dissection()) {
        prop_assert_eq!(psi(&phi(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn psi_then_phi_is_identity(v in dyck_vector()) {
        prop_assert_eq!(phi(&psi(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn polynomial_degree_is_rank(q in dissection()) {
        let p = poly_for_dissection(&q);
        prop_assert_eq!(p.factors().len(), q.rank());
        prop_assert_eq!(p.leading_monomial().degree() as usize, q.rank());
        prop_assert_eq!(p.leading_monomial().into_vector(), phi(&q).unwrap());
    }

    #[test]
    fn flips_preserve_size_and_change_rank_by_one(q in dissection()) {
        for &d in q.diagonals() {
            for r in q.flips(d).unwrap() {
                prop_assert_eq!(r.diagonals().len(), q.diagonals().len());
                prop_assert!(r.rank().abs_diff(q.rank()) <= 1);
                prop_assert!(!r.contains(d));
            }
        }
    }

    #[test]
    fn expanded_leading_term_matches(q in dissection()) {
        let p = poly_for_dissection(&q);
        let e = p.expand::<mangulations::Integer>();
        let (lm, c) = e.leading_term().unwrap();
        prop_assert_eq!(lm, &p.leading_monomial());
        prop_assert_eq!(c.clone(), mangulations::Integer::from(1));
    }
}

#[test]
fn dyck_vectors_are_distinct_and_counted() {
    for (m, n) in [(1, 6), (2, 4), (3, 3)] {
        let vs = enumerate_dyck(m, n, &Guard::standard()).unwrap();
        let set: HashSet<_> = vs.iter().cloned().collect();
        assert_eq!(set.len(), vs.len());
        assert_eq!(mangulations::Integer::from(vs.len()), mangulations::fuss_catalan(m, n));
        assert!(vs.iter().all(MVector::is_dyck));
    }
}
