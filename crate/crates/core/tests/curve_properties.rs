use gkfermat::curve::{
    diagonal_action, elements_with_fixed_points, DiagonalClass, FermatCurveModel, FixedPointConclusion, ModelSpec,
};
use gkfermat::Budget;
use proptest::prelude::*;

/// Distinct λ values outside {0, 1}, or `None` when the draw collides.
fn model(q: u64, raw: &[u64]) -> Option<FermatCurveModel> {
    let lambdas: Vec<i64> = raw.iter().map(|&x| (x % (q - 2) + 2) as i64).collect();
    let mut sorted = lambdas.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != lambdas.len() {
        return None;
    }
    FermatCurveModel::from_spec(&ModelSpec { g: 2, q, lambdas }).ok()
}

/// Points on the slice `x_1 = 0` by brute force over all affine tuples with `x_2 = 1`.
fn slice_points_brute(m: &FermatCurveModel) -> usize {
    let q = m.q();
    let f = m.field();
    let mut count = 0;
    let mut tuple = vec![0u64; 4];
    loop {
        let coords: Vec<_> = [0u64, 1].iter().chain(&tuple).map(|&v| f.elem(v as i64)).collect();
        let p = gkfermat::curve::ProjPoint::from_elements(&coords).unwrap();
        if m.contains_point(&p).unwrap() {
            count += 1;
        }
        let mut i = 0;
        while i < 4 {
            tuple[i] += 1;
            if tuple[i] < q {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == 4 {
            return count;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_preserves_points(qi in 0usize..4, raw in prop::collection::vec(any::<u64>(), 3)) {
        let q = [11u64, 13, 17, 19][qi];
        let Some(m) = model(q, &raw) else { return Ok(()); };
        let pts = m.enumerate_points(&Budget::default()).unwrap();
        for p in &pts {
            prop_assert!(p.zero_count() <= 1);
            for c in DiagonalClass::all(6) {
                let image = diagonal_action(c, p).unwrap();
                prop_assert!(m.contains_point(&image).unwrap());
                prop_assert!(pts.binary_search(&image).is_ok());
            }
        }
    }

    #[test]
    fn only_generators_fix_points(qi in 0usize..4, raw in prop::collection::vec(any::<u64>(), 3)) {
        let q = [11u64, 13, 17, 19][qi];
        let Some(m) = model(q, &raw) else { return Ok(()); };
        let r = elements_with_fixed_points(&m, &Budget::default()).unwrap();
        prop_assert_ne!(r.conclusion, FixedPointConclusion::Violated);
        // a_1 fixes exactly the x_1 = 0 slice
        let slice = m.enumerate_points(&Budget::default()).unwrap().iter().filter(|p| p.coords()[0] == 0).count();
        let a1 = r.fixed_classes.iter().find(|f| f.class.label() == "a_1").map_or(0, |f| f.fixed_points);
        prop_assert_eq!(a1, slice);
    }
}

#[test]
fn slice_counts_agree_with_affine_brute_force() {
    for (q, lambdas) in [(7u64, vec![2i64, 3, 4]), (11, vec![2, 3, 5]), (13, vec![3, 4, 6]), (13, vec![2, 5, 7])] {
        let m = FermatCurveModel::from_spec(&ModelSpec { g: 2, q, lambdas }).unwrap();
        let fast = m.enumerate_points(&Budget::default()).unwrap().iter().filter(|p| p.coords()[0] == 0).count();
        assert_eq!(fast, slice_points_brute(&m), "q = {q}");
    }
}
