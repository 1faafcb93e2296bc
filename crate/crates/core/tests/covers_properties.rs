use gkfermat::covers::{galois_closure, gilman_tau_matrix, invariant_s_values, CrossCheck};
use gkfermat::ntheory::{gcd, pow_mod};
use gkfermat::zk::{ResidueVector, SubgroupOfZkm};
use gkfermat::Budget;
use proptest::prelude::*;

#[test]
fn gilman_matrices_have_order_p() {
    for p in [2u64, 3, 5, 7] {
        for r in [3u64, 4, 5] {
            let act = gilman_tau_matrix(p, r).unwrap();
            assert_eq!(act.dimension as u64, (p - 1) * (r - 2));
            for k in [2u64, 3, 4] {
                let m = act.reduce(k).unwrap();
                assert!(m.pow(p).unwrap().is_identity());
                if gcd(k, p) == 1 {
                    let det = m.determinant().unwrap();
                    assert_eq!(gcd(det, k), 1, "det not a unit for ({p},{r}) mod {k}");
                }
            }
        }
    }
}

#[test]
fn s_values_satisfy_constraint_on_grid() {
    for k in [2u64, 3] {
        for p in [3u64, 5] {
            if gcd(k, p) != 1 {
                continue;
            }
            for r in [3u64, 4, 5] {
                let dim = (p - 1) * (r - 2);
                if k.pow(dim as u32) > 1 << 12 {
                    continue;
                }
                let sv = invariant_s_values(k, p, r, &Budget::default()).unwrap();
                assert!(sv.constraint_ok);
                for &s in &sv.s_values {
                    assert_eq!(pow_mod(k, s as u64, p), 1, "k={k} p={p} r={r} s={s}");
                }
                assert!(sv.s_values.contains(&0) && sv.s_values.contains(&(dim as usize)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_lies_in_every_translate(case in 0usize..4, raw in prop::collection::vec(prop::collection::vec(0i64..12, 6), 1..4)) {
        let (k, p, r) = [(2u64, 3u64, 4u64), (3, 2, 5), (4, 3, 3), (2, 7, 3)][case];
        let act = gilman_tau_matrix(p, r).unwrap();
        let m = act.dimension;
        let gens: Vec<ResidueVector> = raw.iter().map(|v| ResidueVector::new(&v[..m], k).unwrap()).collect();
        let l = SubgroupOfZkm::from_generators(&gens, m, k).unwrap();
        let rep = galois_closure(&l, &act, k, &Budget::default()).unwrap();
        prop_assert_eq!(rep.cross_check, CrossCheck::Agreed);
        prop_assert!(rep.invariant && rep.inside_every_translate);
        prop_assert!(l.contains_subgroup(&rep.kernel).unwrap());
        prop_assert_eq!(rep.deck_order.clone(), rep.kernel.index() * p);
        if let Some(s) = rep.s {
            prop_assert!(s <= m);
            prop_assert_eq!(rep.constraint_ok, Some(pow_mod(k % p, s as u64, p) == 1));
        }
    }
}
