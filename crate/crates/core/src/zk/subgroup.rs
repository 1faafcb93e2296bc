use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::howell::{howell_rows, pivots, reduce};
use super::{check_modulus, ResidueMatrix, ResidueVector};
use crate::error::{Error, Result};

/// A subgroup of Z_k^m held by its Howell basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupOfZkm {
    ambient_rank: usize,
    modulus: u64,
    basis: ResidueMatrix,
    order: BigUint,
}

/// Abelian group structure of a subgroup and of its quotient, as invariant
/// factor lists (each factor at least 2, divisibility chain ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupStructure {
    pub subgroup: Vec<u64>,
    pub quotient: Vec<u64>,
}

/// Howell canonical form of the row space of `gens`.
pub fn canonical_form(gens: &ResidueMatrix) -> Result<SubgroupOfZkm> {
    check_modulus(gens.modulus())?;
    Ok(SubgroupOfZkm::from_rows(gens.rows().to_vec(), gens.ncols(), gens.modulus()))
}

/// Set-theoretic intersection of two subgroups of the same Z_k^m.
///
/// Stacks `[A | A; B | 0]`; in Howell form the rows with zero left half span
/// exactly `A ∩ B` in their right half.
pub fn intersect(a: &SubgroupOfZkm, b: &SubgroupOfZkm) -> Result<SubgroupOfZkm> {
    a.check_compatible(b)?;
    let (m, k) = (a.ambient_rank, a.modulus);
    let mut stacked = Vec::with_capacity(a.basis.nrows() + b.basis.nrows());
    for r in a.basis.rows() {
        stacked.push(r.iter().chain(r.iter()).copied().collect::<Vec<u64>>());
    }
    for r in b.basis.rows() {
        stacked.push(r.iter().copied().chain(std::iter::repeat_n(0, m)).collect());
    }
    let h = howell_rows(stacked, 2 * m, k);
    let rows = h
        .into_iter()
        .filter(|r| r[..m].iter().all(|&x| x == 0))
        .map(|r| r[m..].to_vec())
        .collect();
    Ok(SubgroupOfZkm::from_rows(rows, m, k))
}

/// `{v in Z_k^n : θ v = 0}` for an `r x n` matrix `θ`.
///
/// Howell form of `[θ^T | I_n]`: rows with zero left block give the kernel.
pub fn kernel(theta: &ResidueMatrix) -> SubgroupOfZkm {
    let (r, n, k) = (theta.nrows(), theta.ncols(), theta.modulus());
    let rows = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = theta.rows().iter().map(|t| t[i]).collect();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let h = howell_rows(rows, r + n, k);
    let rows = h
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect();
    SubgroupOfZkm::from_rows(rows, n, k)
}

/// All elements of the span of `gens`, by breadth-first closure. Independent of
/// the Howell machinery; used to cross-check orders. Fails once more than
/// `budget` elements have been produced.
pub fn exhaustive_span(gens: &ResidueMatrix, budget: u64) -> Result<HashSet<Vec<u64>>> {
    let k = gens.modulus();
    let zero = vec![0u64; gens.ncols()];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for g in gens.rows() {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % k).collect();
            if seen.insert(w.clone()) {
                if seen.len() as u64 > budget {
                    return Err(Error::too_large(format!("> {budget}"), budget));
                }
                frontier.push(w);
            }
        }
    }
    Ok(seen)
}

impl SubgroupOfZkm {
    pub(crate) fn from_rows(rows: Vec<Vec<u64>>, m: usize, k: u64) -> Self {
        let h = howell_rows(rows, m, k);
        let order = pivots(&h).iter().map(|&(_, d)| BigUint::from(k / d)).product();
        Self { ambient_rank: m, modulus: k, basis: ResidueMatrix::from_residue_rows(h, m, k), order }
    }

    pub fn from_generators(gens: &[ResidueVector], m: usize, k: u64) -> Result<Self> {
        check_modulus(k)?;
        if gens.iter().any(|g| g.len() != m || g.modulus() != k) {
            return Err(Error::DimensionMismatch(format!("generators must lie in Z_{k}^{m}")));
        }
        Ok(Self::from_rows(gens.iter().map(|g| g.entries().to_vec()).collect(), m, k))
    }

    pub fn trivial(m: usize, k: u64) -> Self {
        Self::from_rows(Vec::new(), m, k)
    }

    pub fn full(m: usize, k: u64) -> Self {
        Self::from_rows(ResidueMatrix::identity(m, k).rows().to_vec(), m, k)
    }

    /// `span{e_i : i in indices}` (0-based indices).
    pub fn coordinate(m: usize, k: u64, indices: &[usize]) -> Self {
        let rows = indices.iter().map(|&i| ResidueVector::unit(m, i, k).entries().to_vec()).collect();
        Self::from_rows(rows, m, k)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn basis(&self) -> &ResidueMatrix {
        &self.basis
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.nrows() == 0
    }

    pub fn is_full(&self) -> bool {
        self.order == BigUint::from(self.modulus).pow(self.ambient_rank as u32)
    }

    /// Index of the subgroup in Z_k^m.
    pub fn index(&self) -> BigUint {
        BigUint::from(self.modulus).pow(self.ambient_rank as u32) / &self.order
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ambient_rank != other.ambient_rank || self.modulus != other.modulus {
            return Err(Error::DimensionMismatch(format!(
                "Z_{}^{} vs Z_{}^{}",
                self.modulus, self.ambient_rank, other.modulus, other.ambient_rank
            )));
        }
        Ok(())
    }

    fn check_vector(&self, v: &ResidueVector) -> Result<()> {
        if v.len() != self.ambient_rank || v.modulus() != self.modulus {
            return Err(Error::DimensionMismatch("vector outside the ambient group".into()));
        }
        Ok(())
    }

    /// Canonical representative of the coset `v + S`.
    pub fn coset_representative(&self, v: &ResidueVector) -> Result<ResidueVector> {
        self.check_vector(v)?;
        let mut w = v.entries().to_vec();
        reduce(self.basis.rows(), &mut w, self.modulus);
        Ok(ResidueVector::from_residues(w, self.modulus))
    }

    pub fn contains(&self, v: &ResidueVector) -> Result<bool> {
        Ok(self.coset_representative(v)?.is_zero())
    }

    pub(crate) fn contains_raw(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        reduce(self.basis.rows(), &mut w, self.modulus);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_subgroup(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.basis.rows().iter().all(|r| self.contains_raw(r)))
    }

    /// The subgroup `S + T`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let rows = self.basis.rows().iter().chain(other.basis.rows()).cloned().collect();
        Ok(Self::from_rows(rows, self.ambient_rank, self.modulus))
    }

    /// The image `M·S = {M v : v in S}` under a square matrix acting on column vectors.
    pub fn image(&self, m: &ResidueMatrix) -> Result<Self> {
        if !m.is_square() || m.ncols() != self.ambient_rank || m.modulus() != self.modulus {
            return Err(Error::DimensionMismatch("action matrix does not match ambient group".into()));
        }
        let rows = self.basis.rows().iter().map(|r| m.apply_raw(r)).collect();
        Ok(Self::from_rows(rows, self.ambient_rank, self.modulus))
    }

    /// Invariant factors of the subgroup and of the quotient Z_k^m / S.
    ///
    /// With `Λ = rowspan_Z(basis) + kZ^m` and Smith diagonal `d_i` of `Λ`,
    /// `S ≅ ⊕ Z_{k/d_i}` and `Z_k^m / S ≅ ⊕ Z_{d_i}`.
    pub fn structure(&self) -> SubgroupStructure {
        let (m, k) = (self.ambient_rank, self.modulus);
        let mut lattice: Vec<Vec<BigInt>> = self
            .basis
            .rows()
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..m {
            lattice.push((0..m).map(|j| if i == j { BigInt::from(k) } else { BigInt::from(0) }).collect());
        }
        let diag: Vec<u64> = crate::smith::smith_diagonal(&lattice)
            .iter()
            .map(|d| d.to_u64().expect("invariant factor divides k"))
            .collect();
        let mut subgroup: Vec<u64> = diag.iter().map(|d| k / d).filter(|&f| f > 1).collect();
        subgroup.sort_unstable();
        let quotient: Vec<u64> = diag.iter().copied().filter(|&d| d > 1).collect();
        SubgroupStructure { subgroup, quotient }
    }

    /// `Some(s)` when the subgroup is isomorphic to Z_k^s.
    pub fn free_rank(&self) -> Option<usize> {
        let st = self.structure();
        st.subgroup.iter().all(|&f| f == self.modulus).then_some(st.subgroup.len())
    }

    /// All elements, in lexicographic order, provided `|S| <= budget`.
    pub fn elements(&self, budget: u64) -> Result<Vec<ResidueVector>> {
        if self.order > BigUint::from(budget) {
            return Err(Error::too_large(&self.order, budget));
        }
        let k = self.modulus;
        let piv = pivots(self.basis.rows());
        let mut out = vec![vec![0u64; self.ambient_rank]];
        // every element is uniquely sum c_i row_i with 0 <= c_i < k/d_i
        for (row, &(_, d)) in self.basis.rows().iter().zip(&piv) {
            let mut next = Vec::with_capacity(out.len() * (k / d) as usize);
            for v in &out {
                let mut w = v.clone();
                for _ in 0..k / d {
                    next.push(w.clone());
                    for (x, y) in w.iter_mut().zip(row) {
                        *x = (*x + y) % k;
                    }
                }
            }
            out = next;
        }
        out.sort();
        Ok(out.into_iter().map(|v| ResidueVector::from_residues(v, k)).collect())
    }

    /// Order as a machine integer, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

}

impl PartialOrd for SubgroupOfZkm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sort: ambient, then order, then basis rows lexicographically.
impl Ord for SubgroupOfZkm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.modulus, self.ambient_rank, &self.order, self.basis.rows())
            .cmp(&(other.modulus, other.ambient_rank, &other.order, other.basis.rows()))
    }
}

impl Serialize for SubgroupOfZkm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            modulus: u64,
            ambient_rank: usize,
            basis_rows: &'a [Vec<u64>],
            #[serde(serialize_with = "crate::bigjson::biguint")]
            order: &'a BigUint,
        }
        Repr {
            modulus: self.modulus,
            ambient_rank: self.ambient_rank,
            basis_rows: self.basis.rows(),
            order: &self.order,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(rows: &[Vec<i64>], k: u64) -> SubgroupOfZkm {
        canonical_form(&ResidueMatrix::new(rows, k).unwrap()).unwrap()
    }

    #[test]
    fn standard_basis_of_z2_squared_is_full() {
        let s = sg(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(s.order(), &BigUint::from(4u32));
        assert!(s.is_full());
    }

    #[test]
    fn evens_in_z4_squared() {
        // brute force: the span of (2,0),(0,2) in Z_4^2 is {0,2}^2
        let s = sg(&[vec![2, 0], vec![0, 2]], 4);
        let span = exhaustive_span(s.basis(), 1 << 10).unwrap();
        assert_eq!(span.len(), 4);
        assert_eq!(s.order(), &BigUint::from(4u32));
    }

    #[test]
    fn diagonal_line_in_z6_squared() {
        let s = sg(&[vec![1, 1]], 6);
        let multiples: HashSet<Vec<u64>> = (0..6u64).map(|c| vec![c, c]).collect();
        assert_eq!(s.order(), &BigUint::from(multiples.len()));
        for v in &multiples {
            assert!(s.contains_raw(v));
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let s = sg(&[vec![2, 1, 3], vec![4, 0, 2]], 6);
        assert_eq!(canonical_form(s.basis()).unwrap(), s);
    }

    #[test]
    fn intersection_examples() {
        let full = SubgroupOfZkm::full(2, 3);
        let line = sg(&[vec![1, 2]], 3);
        assert_eq!(intersect(&full, &line).unwrap(), line);

        let a = SubgroupOfZkm::coordinate(3, 2, &[0, 1]);
        let b = SubgroupOfZkm::coordinate(3, 2, &[1, 2]);
        let i = intersect(&a, &b).unwrap();
        assert_eq!(i, SubgroupOfZkm::coordinate(3, 2, &[1]));
        assert_eq!(i.order(), &BigUint::from(2u32));

        let k1 = SubgroupOfZkm::coordinate(4, 3, &[1, 2, 3]);
        let k2 = SubgroupOfZkm::coordinate(4, 3, &[0, 2, 3]);
        assert_eq!(intersect(&k1, &k2).unwrap().order(), &BigUint::from(9u32));
    }

    #[test]
    fn mismatched_ambients_rejected() {
        let a = SubgroupOfZkm::full(2, 3);
        let b = SubgroupOfZkm::full(3, 3);
        assert!(matches!(intersect(&a, &b), Err(Error::DimensionMismatch(_))));
        let c = SubgroupOfZkm::full(2, 5);
        assert!(matches!(intersect(&a, &c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn invalid_modulus() {
        assert_eq!(ResidueMatrix::new(&[vec![1]], 1).unwrap_err(), Error::InvalidModulus(1));
    }

    #[test]
    fn kernels() {
        let theta = ResidueMatrix::new(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], 2).unwrap();
        let ker = kernel(&theta);
        assert_eq!(ker.order(), &BigUint::from(4u32));
        for v in ker.elements(100).unwrap() {
            assert!(theta.apply(&v).unwrap().is_zero());
        }
        // x + 2y = 0 over Z_4: brute force gives 4 solutions
        let t = ResidueMatrix::new(&[vec![1, 2]], 4).unwrap();
        let count = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|(x, y)| (x + 2 * y) % 4 == 0).count();
        assert_eq!(kernel(&t).order(), &BigUint::from(count));
    }

    #[test]
    fn structure_of_composite_subgroups() {
        // span (2,1) in Z_4^2 is cyclic of order 4
        let s = sg(&[vec![2, 1]], 4);
        assert_eq!(s.structure().subgroup, vec![4]);
        assert_eq!(s.free_rank(), Some(1));
        // span (2,0),(0,2) in Z_4^2 is Z_2^2: not free over Z_4
        let t = sg(&[vec![2, 0], vec![0, 2]], 4);
        assert_eq!(t.structure().subgroup, vec![2, 2]);
        assert_eq!(t.structure().quotient, vec![2, 2]);
        assert_eq!(t.free_rank(), None);
        assert_eq!(SubgroupOfZkm::trivial(3, 4).free_rank(), Some(0));
    }

    #[test]
    fn elements_match_span() {
        let s = sg(&[vec![2, 1, 0], vec![0, 3, 3]], 6);
        let elems = s.elements(1000).unwrap();
        let span = exhaustive_span(s.basis(), 1000).unwrap();
        assert_eq!(elems.len(), span.len());
        assert!(elems.iter().all(|v| span.contains(v.entries())));
    }
}
