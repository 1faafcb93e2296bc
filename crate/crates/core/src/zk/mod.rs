//! Exact linear algebra over the residue ring Z/k, `k >= 2` arbitrary.
//!
//! Subgroups of Z_k^m are carried in Howell normal form, which is unique per
//! subgroup even when `k` is composite, so subgroup equality is plain
//! structural equality of the canonical bases.

mod action;
mod howell;
mod subgroup;

pub use action::{
    enumerate_invariant_subgroups, invariant_closure, is_invariant, largest_invariant_subgroup_in,
    matrix_order,
};
pub use subgroup::{canonical_form, exhaustive_span, intersect, kernel, SubgroupOfZkm, SubgroupStructure};

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{gcd, mul_mod, residue};

pub(crate) fn check_modulus(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    Ok(())
}

/// An element of Z_k^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueVector {
    entries: Vec<u64>,
    modulus: u64,
}

impl ResidueVector {
    /// Builds a vector from arbitrary integers, reducing them into `[0, k)`.
    pub fn new(entries: &[i64], modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        if entries.is_empty() {
            return Err(Error::DimensionMismatch("vector must have positive length".into()));
        }
        Ok(Self { entries: entries.iter().map(|&x| residue(x, modulus)).collect(), modulus })
    }

    pub(crate) fn from_residues(entries: Vec<u64>, modulus: u64) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus));
        Self { entries, modulus }
    }

    pub fn zero(len: usize, modulus: u64) -> Self {
        Self { entries: vec![0; len], modulus }
    }

    pub fn unit(len: usize, index: usize, modulus: u64) -> Self {
        let mut entries = vec![0; len];
        entries[index] = 1 % modulus;
        Self { entries, modulus }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let k = self.modulus;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + b) % k).collect();
        Self { entries, modulus: k }
    }

    pub fn scale(&self, c: u64) -> Self {
        let k = self.modulus;
        Self { entries: self.entries.iter().map(|&a| mul_mod(a, c % k, k)).collect(), modulus: k }
    }

    /// Additive order of the vector in Z_k^m.
    pub fn additive_order(&self) -> u64 {
        let k = self.modulus;
        self.entries.iter().fold(1, |acc, &a| {
            let o = k / gcd(a, k);
            acc / gcd(acc, o) * o
        })
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A rectangular matrix over Z/k. Zero rows are allowed (the empty generating set).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMatrix {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl ResidueMatrix {
    pub fn new(rows: &[Vec<i64>], modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let cols = rows.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(Error::DimensionMismatch("matrix needs at least one row and column".into()));
        }
        Self::with_cols(rows, cols, modulus)
    }

    /// Like [`ResidueMatrix::new`] but with an explicit column count, so that an
    /// empty list of rows is representable.
    pub fn with_cols(rows: &[Vec<i64>], cols: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        if cols == 0 {
            return Err(Error::DimensionMismatch("matrix needs at least one column".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "ragged matrix: row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        let rows = rows.iter().map(|r| r.iter().map(|&x| residue(x, modulus)).collect()).collect();
        Ok(Self { modulus, cols, rows })
    }

    pub fn from_vectors(vectors: &[ResidueVector]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no vectors given".into()))?;
        let (k, cols) = (first.modulus, first.len());
        if vectors.iter().any(|v| v.modulus != k || v.len() != cols) {
            return Err(Error::DimensionMismatch("vectors disagree in length or modulus".into()));
        }
        Ok(Self { modulus: k, cols, rows: vectors.iter().map(|v| v.entries.clone()).collect() })
    }

    pub(crate) fn from_residue_rows(rows: Vec<Vec<u64>>, cols: usize, modulus: u64) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols && r.iter().all(|&x| x < modulus)));
        Self { modulus, cols, rows }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j) % modulus).collect())
            .collect();
        Self { modulus, cols: n, rows }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> ResidueVector {
        ResidueVector::from_residues(self.rows[i].clone(), self.modulus)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect();
        Self { modulus: self.modulus, cols: self.rows.len(), rows }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus || self.cols != other.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{} (moduli {}, {})",
                self.rows.len(),
                self.cols,
                other.rows.len(),
                other.cols,
                self.modulus,
                other.modulus
            )));
        }
        let k = self.modulus as u128;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| {
                        let s: u128 = r
                            .iter()
                            .zip(&other.rows)
                            .map(|(&a, o)| a as u128 * o[j] as u128 % k)
                            .sum();
                        (s % k) as u64
                    })
                    .collect()
            })
            .collect();
        Ok(Self { modulus: self.modulus, cols: other.cols, rows })
    }

    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.cols, self.modulus);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Matrix-vector product `M v` (the matrix acts on column vectors).
    pub fn apply(&self, v: &ResidueVector) -> Result<ResidueVector> {
        if v.modulus != self.modulus || v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector does not match matrix".into()));
        }
        Ok(ResidueVector::from_residues(self.apply_raw(&v.entries), self.modulus))
    }

    pub(crate) fn apply_raw(&self, v: &[u64]) -> Vec<u64> {
        let k = self.modulus as u128;
        self.rows
            .iter()
            .map(|r| (r.iter().zip(v).map(|(&a, &b)| a as u128 * b as u128 % k).sum::<u128>() % k) as u64)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == u64::from(i == j) % self.modulus))
    }

    /// Determinant reduced into `[0, k)`.
    pub fn determinant(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let ints: Vec<Vec<BigInt>> =
            self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = crate::smith::determinant(&ints) % BigInt::from(self.modulus);
        let d = if d < BigInt::from(0) { d + BigInt::from(self.modulus) } else { d };
        Ok(u64::try_from(&d).expect("reduced determinant fits in u64"))
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(gcd(self.determinant()?, self.modulus) == 1)
    }
}

impl Serialize for ResidueMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let parts: Vec<String> = r.iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", parts.join(" "))?;
        }
        Ok(())
    }
}
