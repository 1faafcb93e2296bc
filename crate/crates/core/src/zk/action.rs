use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{intersect, ResidueMatrix, SubgroupOfZkm};
use crate::error::{Error, Result};
use crate::Budget;

/// Least `n >= 1` with `M^n = I` over Z/k.
pub fn matrix_order(m: &ResidueMatrix, bound: u64) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
    }
    if !m.is_invertible()? {
        return Err(Error::NotInvertible(m.modulus()));
    }
    let mut power = m.clone();
    for n in 1..=bound {
        if power.is_identity() {
            return Ok(n);
        }
        power = power.mul(m)?;
    }
    Err(Error::OrderBoundExceeded(bound))
}

pub fn is_invariant(m: &ResidueMatrix, s: &SubgroupOfZkm) -> Result<bool> {
    Ok(s.image(m)? == *s)
}

/// Smallest M-invariant subgroup containing `v`: the span of its orbit.
pub fn invariant_closure(m: &ResidueMatrix, v: &[u64]) -> SubgroupOfZkm {
    let (dim, k) = (m.ncols(), m.modulus());
    let mut gens = vec![v.to_vec()];
    let mut span = SubgroupOfZkm::from_rows(gens.clone(), dim, k);
    let mut w = m.apply_raw(v);
    while !span.contains_raw(&w) {
        gens.push(w.clone());
        span = SubgroupOfZkm::from_rows(gens.clone(), dim, k);
        w = m.apply_raw(&w);
    }
    span
}

fn check_square_action(m: &ResidueMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("action matrix must be square".into()));
    }
    if !m.is_invertible()? {
        return Err(Error::NotInvertible(m.modulus()));
    }
    Ok(())
}

/// Every subgroup `S` of Z_k^m with `M·S = S`, canonically sorted.
///
/// Every invariant subgroup is a sum of cyclic invariant closures, so the
/// lattice is generated from the trivial subgroup by repeatedly adding one
/// closure. Exceeding either the ambient budget or the subgroup-count budget
/// is an error.
pub fn enumerate_invariant_subgroups(m: &ResidueMatrix, budget: &Budget) -> Result<Vec<SubgroupOfZkm>> {
    check_square_action(m)?;
    let (dim, k) = (m.ncols(), m.modulus());
    let ambient = BigUint::from(k).pow(dim as u32);
    if ambient > BigUint::from(budget.max_ambient) {
        return Err(Error::too_large(&ambient, budget.max_ambient));
    }
    let size = k.pow(dim as u32);

    let cyclic: BTreeSet<SubgroupOfZkm> = (1..size)
        .into_par_iter()
        .map(|idx| invariant_closure(m, &digits(idx, k, dim)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let cyclic: Vec<SubgroupOfZkm> = cyclic.into_iter().collect();

    let mut found: BTreeSet<SubgroupOfZkm> = BTreeSet::from([SubgroupOfZkm::trivial(dim, k)]);
    let mut frontier: Vec<SubgroupOfZkm> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                if s.contains_subgroup(c)? {
                    continue;
                }
                let t = s.sum(c)?;
                if found.insert(t.clone()) {
                    if found.len() > budget.max_subgroups {
                        return Err(Error::too_large(
                            format!("> {} subgroups", budget.max_subgroups),
                            budget.max_subgroups,
                        ));
                    }
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    Ok(found.into_iter().collect())
}

/// Mixed-radix digits of `idx` in base `k`, most significant first.
pub(crate) fn digits(mut idx: u64, k: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
    out
}

/// `K = ⋂_{i<p} M^i·L`, the largest M-invariant subgroup contained in `L`,
/// where `p` must be the order of `M`.
pub fn largest_invariant_subgroup_in(l: &SubgroupOfZkm, m: &ResidueMatrix, p: u64) -> Result<SubgroupOfZkm> {
    check_square_action(m)?;
    let order = matrix_order(m, p.max(1))
        .map_err(|e| match e {
            Error::OrderBoundExceeded(_) => Error::BadAction(format!("matrix order exceeds {p}")),
            other => other,
        })?;
    if order != p {
        return Err(Error::BadAction(format!("matrix has order {order}, expected {p}")));
    }
    let mut k = l.clone();
    let mut translate = l.clone();
    for _ in 1..p {
        translate = translate.image(m)?;
        k = intersect(&k, &translate)?;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>], k: u64) -> ResidueMatrix {
        ResidueMatrix::new(rows, k).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(matrix_order(&ResidueMatrix::identity(3, 5), 100).unwrap(), 1);
        assert_eq!(matrix_order(&mat(&[vec![0, -1], vec![1, -1]], 2), 100).unwrap(), 3);
        assert_eq!(matrix_order(&mat(&[vec![-1, 0], vec![0, -1]], 5), 100).unwrap(), 2);
    }

    #[test]
    fn singular_and_unbounded() {
        assert_eq!(matrix_order(&mat(&[vec![1, 1], vec![1, 1]], 3), 100), Err(Error::NotInvertible(3)));
        // [[1,1],[0,1]] has order 7 over Z_7
        assert_eq!(
            matrix_order(&mat(&[vec![1, 1], vec![0, 1]], 7), 5),
            Err(Error::OrderBoundExceeded(5))
        );
    }

    #[test]
    fn identity_on_z2_squared_has_five_invariant_subgroups() {
        let subs = enumerate_invariant_subgroups(&ResidueMatrix::identity(2, 2), &Budget::default()).unwrap();
        assert_eq!(subs.len(), 5);
        assert!(subs.first().unwrap().is_trivial());
        assert!(subs.last().unwrap().is_full());
    }

    #[test]
    fn order_three_rotation_has_only_trivial_and_full() {
        let m = mat(&[vec![0, 1], vec![1, 1]], 2);
        let subs = enumerate_invariant_subgroups(&m, &Budget::default()).unwrap();
        assert_eq!(subs.len(), 2);
        assert!(subs[0].is_trivial() && subs[1].is_full());
    }

    #[test]
    fn negation_preserves_everything() {
        let m = mat(&[vec![-1, 0], vec![0, -1]], 3);
        let subs = enumerate_invariant_subgroups(&m, &Budget::default()).unwrap();
        let all = enumerate_invariant_subgroups(&ResidueMatrix::identity(2, 3), &Budget::default()).unwrap();
        // Z_3^2: trivial, four lines, full
        assert_eq!(subs.len(), 6);
        assert_eq!(subs, all);
    }

    #[test]
    fn budget_is_enforced() {
        let budget = Budget { max_ambient: 8, ..Budget::default() };
        let err = enumerate_invariant_subgroups(&ResidueMatrix::identity(4, 2), &budget).unwrap_err();
        assert!(err.is_budget());
        let budget = Budget { max_subgroups: 10, ..Budget::default() };
        let err = enumerate_invariant_subgroups(&ResidueMatrix::identity(4, 2), &budget).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn largest_invariant_examples() {
        let m = mat(&[vec![0, 1], vec![1, 1]], 2);
        let full = SubgroupOfZkm::full(2, 2);
        assert_eq!(largest_invariant_subgroup_in(&full, &m, 3).unwrap(), full);
        let line = SubgroupOfZkm::coordinate(2, 2, &[0]);
        assert!(largest_invariant_subgroup_in(&line, &m, 3).unwrap().is_trivial());

        let neg = mat(&[vec![-1, 0], vec![0, -1]], 3);
        let l = SubgroupOfZkm::coordinate(2, 3, &[1]);
        assert_eq!(largest_invariant_subgroup_in(&l, &neg, 2).unwrap(), l);
    }

    #[test]
    fn wrong_order_is_bad_action() {
        let m = mat(&[vec![0, 1], vec![1, 1]], 2);
        let line = SubgroupOfZkm::coordinate(2, 2, &[0]);
        assert!(matches!(largest_invariant_subgroup_in(&line, &m, 2), Err(Error::BadAction(_))));
        assert!(matches!(largest_invariant_subgroup_in(&line, &m, 6), Err(Error::BadAction(_))));
    }
}
