use serde::Serialize;

use super::{FermatCurveModel, ProjPoint};
use crate::error::{Error, Result};
use crate::zk::{kernel, ResidueMatrix, ResidueVector, SubgroupOfZkm};
use crate::Budget;

/// A diagonal sign change `[x_1 : ... : x_n] ↦ [±x_1 : ... : ±x_n]`, modulo
/// the global sign. Stored as the mask of negated coordinates with coordinate
/// 1 kept positive; the group law is XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalClass {
    mask: u64,
    n: usize,
}

impl DiagonalClass {
    fn normalized(mask: u64, n: usize) -> Self {
        let full = (1u64 << n) - 1;
        let mask = mask & full;
        Self { mask: if mask & 1 == 1 { mask ^ full } else { mask }, n }
    }

    pub fn identity(n: usize) -> Self {
        Self { mask: 0, n }
    }

    /// `a_j`, negating coordinate `j` (1-based).
    pub fn generator(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j), "generator index out of range");
        Self::normalized(1 << (j - 1), n)
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("signs must be ±1".into()));
        }
        let mask = signs.iter().enumerate().filter(|(_, &s)| s == -1).map(|(i, _)| 1u64 << i).sum();
        Ok(Self::normalized(mask, signs.len()))
    }

    pub fn coordinates(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.n).map(|i| if self.mask >> i & 1 == 1 { -1 } else { 1 }).collect()
    }

    pub fn product(self, other: Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::normalized(self.mask ^ other.mask, self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.mask == 0
    }

    /// Coordinates in Z_2^{n-1}: the signs of coordinates 2..n after normalization.
    pub fn to_z2(&self) -> Vec<u64> {
        (1..self.n).map(|i| self.mask >> i & 1).collect()
    }

    pub fn from_z2(v: &[u64], n: usize) -> Self {
        let mask = v.iter().enumerate().filter(|(_, &b)| b % 2 == 1).map(|(i, _)| 1u64 << (i + 1)).sum();
        Self::normalized(mask, n)
    }

    pub fn all(n: usize) -> impl Iterator<Item = Self> {
        (0..1u64 << (n - 1)).map(move |m| Self::normalized(m << 1, n))
    }

    /// Index `j` when the class is a single generator `a_j`.
    pub fn generator_index(&self) -> Option<usize> {
        (1..=self.n).find(|&j| Self::generator(self.n, j) == *self)
    }

    /// Shortest product of generators, e.g. `a_1a_3`; `id` for the identity.
    pub fn label(&self) -> String {
        if self.is_identity() {
            return "id".into();
        }
        let set: Vec<usize> = (0..self.n).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1).collect();
        let complement: Vec<usize> = (1..=self.n).filter(|j| !set.contains(j)).collect();
        let chosen = match set.len().cmp(&complement.len()) {
            std::cmp::Ordering::Less => set,
            std::cmp::Ordering::Greater => complement,
            std::cmp::Ordering::Equal => set.min(complement),
        };
        chosen.iter().map(|j| format!("a_{j}")).collect()
    }
}

impl Serialize for DiagonalClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            label: String,
            signs: Vec<i8>,
        }
        Repr { label: self.label(), signs: self.signs() }.serialize(s)
    }
}

/// Apply a sign class to a point and renormalize.
pub fn diagonal_action(c: DiagonalClass, p: &ProjPoint) -> Result<ProjPoint> {
    if c.n != p.coords().len() {
        return Err(Error::DimensionMismatch(format!(
            "class on {} coordinates applied to a point with {}",
            c.n,
            p.coords().len()
        )));
    }
    let x: Vec<_> = p
        .elements()
        .into_iter()
        .zip(c.signs())
        .map(|(v, s)| if s < 0 { -v } else { v })
        .collect();
    ProjPoint::from_elements(&x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassFixedSet {
    pub class: DiagonalClass,
    pub fixed_points: usize,
    /// For a generator `a_j`: whether its fixed set is exactly `{x_j = 0}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_coordinate_slice: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedPointConclusion {
    /// Only generators fix points, and every generator fixes some rational point.
    OnlyGenerators,
    /// No violation, but some generator has no rational fixed point over this field.
    InsufficientRationalPoints,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub g: u64,
    pub q: u64,
    pub point_count: usize,
    pub classes_checked: usize,
    pub fixed_classes: Vec<ClassFixedSet>,
    pub only_generators: bool,
    pub slices_match: bool,
    pub generators_without_points: Vec<String>,
    pub conclusion: FixedPointConclusion,
}

/// Every nontrivial sign class with a fixed point among the rational points.
pub fn elements_with_fixed_points(model: &FermatCurveModel, budget: &Budget) -> Result<FixedPointReport> {
    let points = model.enumerate_points(budget)?;
    let n = model.dimension();
    let mut fixed_classes = Vec::new();
    let mut classes_checked = 0;
    for c in DiagonalClass::all(n).filter(|c| !c.is_identity()) {
        classes_checked += 1;
        let mut fixed = Vec::new();
        for p in &points {
            if diagonal_action(c, p)? == *p {
                fixed.push(p);
            }
        }
        let slice = c.generator_index().map(|j| {
            let on_slice = points.iter().filter(|p| p.coords()[j - 1] == 0).count();
            on_slice == fixed.len() && fixed.iter().all(|p| p.coords()[j - 1] == 0)
        });
        if !fixed.is_empty() || slice.is_some() {
            fixed_classes.push(ClassFixedSet { class: c, fixed_points: fixed.len(), matches_coordinate_slice: slice });
        }
    }
    let only_generators = fixed_classes
        .iter()
        .all(|f| f.fixed_points == 0 || f.class.generator_index().is_some());
    let slices_match = fixed_classes.iter().all(|f| f.matches_coordinate_slice != Some(false));
    let mut generators_without_points: Vec<(usize, String)> = fixed_classes
        .iter()
        .filter(|f| f.fixed_points == 0)
        .filter_map(|f| f.class.generator_index().map(|j| (j, f.class.label())))
        .collect();
    generators_without_points.sort();
    let conclusion = if !only_generators || !slices_match {
        FixedPointConclusion::Violated
    } else if !generators_without_points.is_empty() {
        FixedPointConclusion::InsufficientRationalPoints
    } else {
        FixedPointConclusion::OnlyGenerators
    };
    fixed_classes.retain(|f| f.fixed_points > 0);
    fixed_classes.sort_by_key(|f| (f.class.generator_index().unwrap_or(usize::MAX), f.class));
    Ok(FixedPointReport {
        g: model.g(),
        q: model.q(),
        point_count: points.len(),
        classes_checked,
        fixed_classes,
        only_generators,
        slices_match,
        generators_without_points: generators_without_points.into_iter().map(|(_, l)| l).collect(),
        conclusion,
    })
}

/// Field-independent part: the index-two subgroups of Z_2^{2g+1} avoiding
/// every generator `a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexTwoScan {
    pub g: u64,
    pub h_generators: Vec<String>,
    pub h: SubgroupOfZkm,
    pub h_contains_generator: bool,
    pub hyperplanes_scanned: u64,
    pub free_hyperplanes: u64,
    pub free_hyperplane_is_h: bool,
    pub quotient_index: u64,
}

impl IndexTwoScan {
    pub fn unique(&self) -> bool {
        !self.h_contains_generator && self.free_hyperplanes == 1 && self.free_hyperplane_is_h && self.quotient_index == 2
    }
}

pub fn index_two_scan(g: u64) -> Result<IndexTwoScan> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let n = 2 * g as usize + 2;
    let dim = n - 1;
    if dim > 24 {
        return Err(Error::too_large(format!("2^{dim} hyperplanes"), "2^24"));
    }
    let generators: Vec<DiagonalClass> = (1..=n).map(|j| DiagonalClass::generator(n, j)).collect();
    let gen_vectors: Vec<Vec<u64>> = generators.iter().map(DiagonalClass::to_z2).collect();
    let a1 = generators[0];
    let h_classes: Vec<DiagonalClass> = generators[1..].iter().map(|&a| a1.product(a)).collect();
    let h_vectors: Vec<ResidueVector> = h_classes
        .iter()
        .map(|c| ResidueVector::from_residues(c.to_z2(), 2))
        .collect();
    let h = SubgroupOfZkm::from_generators(&h_vectors, dim, 2)?;
    let contains_generator = |s: &SubgroupOfZkm| gen_vectors.iter().any(|v| s.contains_raw(v));

    let mut free_hyperplanes = 0;
    let mut free_hyperplane_is_h = false;
    let total = (1u64 << dim) - 1;
    for f in 1..=total {
        let row: Vec<i64> = (0..dim).map(|i| (f >> i & 1) as i64).collect();
        let hyperplane = kernel(&ResidueMatrix::new(&[row], 2)?);
        if !contains_generator(&hyperplane) {
            free_hyperplanes += 1;
            free_hyperplane_is_h |= hyperplane == h;
        }
    }
    let quotient_index = (num_bigint::BigUint::from(2u32).pow(dim as u32) / h.order())
        .try_into()
        .unwrap_or(0);
    Ok(IndexTwoScan {
        g,
        h_generators: h_classes.iter().map(DiagonalClass::label).collect(),
        h_contains_generator: contains_generator(&h),
        h,
        hyperplanes_scanned: total,
        free_hyperplanes,
        free_hyperplane_is_h,
        quotient_index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeSubgroupReport {
    pub q: u64,
    pub scan: IndexTwoScan,
    pub points_checked: usize,
    pub elements_checked: usize,
    pub acts_freely: bool,
    pub conclusion: &'static str,
}

/// `H = <a_1a_2, ..., a_1a_{2g+2}>`: verifies it is the only index-two
/// subgroup avoiding every `a_j`, and that no nontrivial element of it fixes an
/// enumerated point.
pub fn unique_free_index_two(model: &FermatCurveModel, budget: &Budget) -> Result<FreeSubgroupReport> {
    let scan = index_two_scan(model.g())?;
    let points = model.enumerate_points(budget)?;
    let n = model.dimension();
    let elements: Vec<DiagonalClass> = scan
        .h
        .elements(budget.max_ambient)?
        .iter()
        .map(|v| DiagonalClass::from_z2(v.entries(), n))
        .filter(|c| !c.is_identity())
        .collect();
    let mut acts_freely = true;
    'outer: for p in &points {
        for &c in &elements {
            if diagonal_action(c, p)? == *p {
                acts_freely = false;
                break 'outer;
            }
        }
    }
    let conclusion = if scan.unique() && acts_freely {
        "H is the unique index-two subgroup acting freely"
    } else {
        "property fails"
    };
    Ok(FreeSubgroupReport {
        q: model.q(),
        points_checked: points.len(),
        elements_checked: elements.len(),
        acts_freely,
        scan,
        conclusion,
    })
}
