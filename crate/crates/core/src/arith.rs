//! Closed-form arithmetic for (g,k)-Fermat pairs and the certificates built on it.
//!
//! The genus of the k-homology cover of a genus-g surface is `1 + k^{2g}(g-1)`.
//! One published inversion argument for `k = 2` writes the exponent as `g`
//! rather than `2g`; this module uses `2g` throughout.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::is_prime;

fn check_gk(g: u64, k: u64) -> Result<()> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    Ok(())
}

/// `γ = 1 + k^{2g}(g-1)`.
pub fn cover_genus(g: u64, k: u64) -> Result<BigUint> {
    check_gk(g, k)?;
    Ok(BigUint::one() + BigUint::from(k).pow(2 * g as u32) * (g - 1))
}

/// The unique `g >= 2` with `cover_genus(g, k) = γ`, if any.
///
/// `g ↦ k^{2g}(g-1)` is strictly increasing, so a linear scan that stops once
/// the value passes `γ` decides the question.
pub fn base_genus_from_cover(k: u64, genus: &BigUint) -> Result<Option<u64>> {
    if k < 2 {
        return Err(Error::InvalidModulus(k));
    }
    let mut g = 2;
    loop {
        let candidate = cover_genus(g, k)?;
        if &candidate == genus {
            return Ok(Some(g));
        }
        if &candidate > genus {
            return Ok(None);
        }
        g += 1;
    }
}

/// `84(γ - 1)`.
pub fn hurwitz_bound(genus: &BigUint) -> Result<BigUint> {
    if genus < &BigUint::from(2u32) {
        return Err(Error::GenusTooSmall(genus.to_u64().unwrap_or(0)));
    }
    Ok((genus - 1u32) * 84u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutOrder {
    pub base_aut: u64,
    pub g: u64,
    pub k: u64,
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub cover_genus: BigUint,
    /// `|Aut(X)| · k^{2g}`
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub order: BigUint,
    /// `|Aut(X)| · (γ-1)/(g-1)`
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub order_via_genus: BigUint,
    pub agree: bool,
}

/// Order of the normalizer of `H` in `Aut(S)`, in both closed forms.
pub fn aut_order(base_aut: u64, g: u64, k: u64) -> Result<AutOrder> {
    if base_aut == 0 {
        return Err(Error::InvalidInput("|Aut(X)| must be at least 1".into()));
    }
    let gamma = cover_genus(g, k)?;
    let order = BigUint::from(base_aut) * BigUint::from(k).pow(2 * g as u32);
    let numerator = BigUint::from(base_aut) * (&gamma - 1u32);
    let denominator = BigUint::from(g - 1);
    let order_via_genus = &numerator / &denominator;
    let agree = (&numerator % &denominator).is_zero() && order_via_genus == order;
    Ok(AutOrder { base_aut, g, k, cover_genus: gamma, order, order_via_genus, agree })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SylowConclusion {
    Unique,
    NotCertified,
}

/// Evidence that a Sylow count `n_p > 1` is impossible: every integer
/// `n ≡ 1 (mod p)` in `(1, 84(g-1)]` is listed in `candidate_counts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SylowCertificate {
    pub g: u64,
    pub p: u64,
    pub r: u32,
    #[serde(serialize_with = "crate::bigjson::biguint")]
    pub k: BigUint,
    pub bound: u64,
    pub hypothesis_ok: bool,
    pub candidate_counts: Vec<u64>,
    pub conclusion: SylowConclusion,
}

/// Uniqueness certificate for the Fermat group when `k = p^r`.
///
/// A second Sylow p-subgroup would give `n_p = 1 + sp` dividing
/// `|Aut(X)|·L <= 84(g-1)`. `L` is unknown, so every `n ≡ 1 mod p` up to the
/// bound is scanned rather than just the divisors of a particular order.
pub fn sylow_uniqueness_certificate(g: u64, p: u64, r: u32) -> Result<SylowCertificate> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r < 1 {
        return Err(Error::InvalidInput("exponent r must be at least 1".into()));
    }
    let bound = 84 * (g - 1);
    let hypothesis_ok = p > bound;
    let candidate_counts: Vec<u64> = (1..).map(|s| 1 + s * p).take_while(|&n| n <= bound).collect();
    let conclusion = if hypothesis_ok && candidate_counts.is_empty() {
        SylowConclusion::Unique
    } else {
        SylowConclusion::NotCertified
    };
    Ok(SylowCertificate { g, p, r, k: BigUint::from(p).pow(r), bound, hypothesis_ok, candidate_counts, conclusion })
}

/// One possible isomorphism type of `H` when `S` is hyperelliptic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupShape {
    /// Shape of the quotient `H/<ι>` as a group of Möbius transformations.
    pub quotient: &'static str,
    pub shape: &'static str,
    /// Largest possible minimal number of generators for this shape.
    pub max_rank: u32,
    pub isomorphic_to_h: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperellipticExclusion {
    pub g: u64,
    pub k: u64,
    pub h: String,
    pub h_rank: u64,
    pub shapes: Vec<GroupShape>,
    pub conclusion: &'static str,
}

/// Exclusion of a hyperelliptic `S`.
///
/// If `S` were hyperelliptic, `H/<ι>` would be a finite abelian group of
/// Möbius transformations: trivial, Klein, or cyclic. The resulting shapes of
/// `H` all need at most 3 generators, while Z_k^{2g} needs `2g >= 4`.
pub fn hyperelliptic_exclusion(g: u64, k: u64) -> Result<HyperellipticExclusion> {
    check_gk(g, k)?;
    let h_rank = 2 * g;
    let shape = |quotient, shape, max_rank: u32| GroupShape {
        quotient,
        shape,
        max_rank,
        isomorphic_to_h: u64::from(max_rank) >= h_rank,
    };
    let shapes = vec![
        shape("trivial", "Z_2", 1),
        shape("Z_2^2", "Z_2^2", 2),
        shape("Z_2^2", "Z_2^3", 3),
        shape("Z_n", "Z_n", 1),
        shape("Z_n", "Z_2n", 1),
        shape("Z_n", "Z_2^2", 2),
        shape("Z_n", "Z_2 x Z_n", 2),
    ];
    let excluded = shapes.iter().all(|s| !s.isomorphic_to_h);
    Ok(HyperellipticExclusion {
        g,
        k,
        h: format!("Z_{k}^{h_rank}"),
        h_rank,
        shapes,
        conclusion: if excluded { "non-hyperelliptic" } else { "not-certified" },
    })
}

/// Dimension `3·genus - 3 + r` of the Teichmüller space of a signature with `r` cone points.
pub fn teich_dimension(genus: u64, cone_count: u64) -> Result<u64> {
    let d = 3 * genus as i128 - 3 + cone_count as i128;
    if d <= 0 {
        return Err(Error::NotApplicable(format!(
            "3·{genus} - 3 + {cone_count} = {d} is not positive"
        )));
    }
    Ok(d as u64)
}
