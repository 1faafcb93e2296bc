//! Finitely presented groups by generators and relator words, and their
//! abelian quotients.
//!
//! Words are signed generator indices (`3` is `x_3`, `-3` is `x_3^{-1}`,
//! 1-based). Only abelian quotients are ever needed, so the abelianization is
//! the Smith normal form of the exponent-sum matrix; there is no word problem
//! or coset enumeration here.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::gcd;
use crate::smith::smith_diagonal;

pub type Word = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub label: String,
    pub generator_count: usize,
    pub relators: Vec<Word>,
    /// Set for genus-zero signatures with exactly three cone points.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub triangular: bool,
}

impl GroupPresentation {
    pub fn new(label: impl Into<String>, generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        let p = Self { label: label.into(), generator_count, relators, triangular: false };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.generator_count as i64;
        for (i, w) in self.relators.iter().enumerate() {
            if let Some(&bad) = w.iter().find(|&&x| x == 0 || x.abs() > n) {
                return Err(Error::InvalidPresentation(format!(
                    "relator {} uses index {bad}, outside ±[1, {n}]",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|w| {
                let mut row = vec![BigInt::zero(); self.generator_count];
                for &x in w {
                    let slot = &mut row[x.unsigned_abs() as usize - 1];
                    *slot += if x > 0 { 1 } else { -1 };
                }
                row
            })
            .collect()
    }
}

/// Free rank plus torsion divisor chain `d_1 | d_2 | ...`, each `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::bigjson::biguint_vec")]
    pub torsion_factors: Vec<BigUint>,
}

impl AbelianInvariants {
    /// Group order, or `None` if infinite.
    pub fn order(&self) -> Option<BigUint> {
        (self.free_rank == 0).then(|| self.torsion_factors.iter().product())
    }

    /// True when the group is exactly Z_k^n.
    pub fn is_elementary(&self, k: u64, n: usize) -> bool {
        self.free_rank == 0
            && self.torsion_factors.len() == n
            && self.torsion_factors.iter().all(|d| *d == BigUint::from(k))
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion_factors.len() {
            let d = &self.torsion_factors[i];
            let run = self.torsion_factors[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z_{d}") } else { format!("Z_{d}^{run}") });
            i += run;
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" x ")
        }
    }
}

fn commutator(a: i64, b: i64) -> [i64; 4] {
    [a, b, -a, -b]
}

/// `π_g = <α_1..α_g, β_1..β_g : ∏ [α_j, β_j]>`, with `α_j = x_j`, `β_j = x_{g+j}`.
pub fn surface_presentation(g: u64) -> Result<GroupPresentation> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let g = g as i64;
    let relator: Word = (1..=g).flat_map(|j| commutator(j, g + j)).collect();
    GroupPresentation::new(format!("pi_{g}"), 2 * g as usize, vec![relator])
}

/// Orbifold group of signature `(genus; m_1, ..., m_r)`:
/// generators `α_1..α_γ, β_1..β_γ, δ_1..δ_r`, relators `δ_i^{m_i}` and
/// `∏[α_j, β_j] ∏ δ_i`.
///
/// Triangular signatures are built and flagged; with `exclude_triangular`
/// they are rejected instead.
pub fn orbifold_presentation(genus: u64, cone_orders: &[u64], exclude_triangular: bool) -> Result<GroupPresentation> {
    if let Some(&m) = cone_orders.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidPresentation(format!("cone order {m} < 2")));
    }
    let chi: BigRational = BigRational::from_integer(BigInt::from(2 * genus as i64 - 2))
        + cone_orders
            .iter()
            .map(|&m| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m)))
            .fold(BigRational::zero(), |a, b| a + b);
    if !chi.is_positive() {
        return Err(Error::NotHyperbolic(format!("2g-2+Σ(1-1/m_i) = {chi}")));
    }
    let triangular = genus == 0 && cone_orders.len() == 3;
    if triangular && exclude_triangular {
        return Err(Error::Triangular);
    }

    let gamma = genus as i64;
    let r = cone_orders.len() as i64;
    let mut relators: Vec<Word> = cone_orders
        .iter()
        .enumerate()
        .map(|(i, &m)| vec![2 * gamma + 1 + i as i64; m as usize])
        .collect();
    let long: Word = (1..=gamma)
        .flat_map(|j| commutator(j, gamma + j))
        .chain((1..=r).map(|i| 2 * gamma + i))
        .collect();
    relators.push(long);

    let orders: Vec<String> = cone_orders.iter().map(u64::to_string).collect();
    let mut p = GroupPresentation::new(
        format!("({genus};{})", orders.join(",")),
        (2 * gamma + r) as usize,
        relators,
    )?;
    p.triangular = triangular;
    Ok(p)
}

/// Abelianization via Smith normal form of the exponent-sum matrix.
pub fn abelian_invariants(p: &GroupPresentation) -> Result<AbelianInvariants> {
    p.validate()?;
    let diag = if p.generator_count == 0 { Vec::new() } else { smith_diagonal(&p.exponent_matrix()) };
    let torsion_factors = diag
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.magnitude().clone())
        .collect();
    Ok(AbelianInvariants { free_rank: p.generator_count - diag.len(), torsion_factors })
}

/// Invariants of `Γ/Γ_k = Γ^{ab} ⊗ Z/k`.
pub fn homology_mod_k(p: &GroupPresentation, k: u64) -> Result<AbelianInvariants> {
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    let ab = abelian_invariants(p)?;
    let kb = BigUint::from(k);
    let mut torsion_factors: Vec<BigUint> = ab
        .torsion_factors
        .iter()
        .map(|d| BigUint::from(gcd((d % &kb).to_u64().unwrap_or(0), k)))
        .map(|d| if d.is_zero() { kb.clone() } else { d })
        .filter(|d| !d.is_one())
        .collect();
    torsion_factors.extend(std::iter::repeat_n(kb, ab.free_rank));
    Ok(AbelianInvariants { free_rank: 0, torsion_factors })
}

/// `[Γ : Γ_k] = k^{2g}` for a genus-g surface group.
pub fn gamma_k_index(g: u64, k: u64) -> Result<BigUint> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    Ok(BigUint::from(k).pow(2 * g as u32))
}

/// Numeric content of `K' = Γ^2` for the genus-zero orbifold group with
/// `2g+2` cone points of order two: `|K/K'|` against `[K:Γ][Γ:Γ^2] = 2·2^{2g}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub g: u64,
    pub presentation: String,
    pub abelianization: String,
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub abelianization_order: BigUint,
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub index_product: BigUint,
    pub pass: bool,
}

pub fn hyperelliptic_chain_check(g: u64) -> Result<ChainCertificate> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let k = orbifold_presentation(0, &vec![2; 2 * g as usize + 2], false)?;
    let ab = abelian_invariants(&k)?;
    let abelianization_order = ab
        .order()
        .ok_or_else(|| Error::InvalidPresentation("abelianization is infinite".into()))?;
    let index_product = BigUint::from(2u32) * BigUint::from(2u32).pow(2 * g as u32);
    Ok(ChainCertificate {
        g,
        presentation: k.label,
        abelianization: ab.describe(),
        pass: abelianization_order == index_product,
        abelianization_order,
        index_product,
    })
}
