//! Intermediate abelian covers of a genus-`g` surface and their Galois
//! closures under a prime-order automorphism.
//!
//! Subgroups of `H = Z_k^{2g}` stand for the intermediate covers; an
//! automorphism of order `p` acts on `H` through the block matrix built by
//! [`gilman_tau_matrix`].

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::bigjson;
use crate::error::{Error, Result};
use crate::ntheory::{gcd, is_prime, pow_mod};
use crate::zk::{
    canonical_form, enumerate_invariant_subgroups, intersect, is_invariant, kernel, largest_invariant_subgroup_in, ResidueMatrix,
    SubgroupOfZkm,
};
use crate::Budget;

/// A Galois cover between the homology cover and the base, given by its
/// kernel `L` in `Z_k^{2g}` with `H/L ≅ Z_k^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub g: u64,
    pub k: u64,
    pub kernel: SubgroupOfZkm,
    pub deck_rank: usize,
}

/// Kernel of a surjection `θ: Z_k^{2g} → Z_k^n` given as an `n x 2g` matrix.
pub fn kernel_of_surjection(theta: &ResidueMatrix) -> Result<CoverSpec> {
    let (n, cols, k) = (theta.nrows(), theta.ncols(), theta.modulus());
    if cols == 0 || cols % 2 == 1 {
        return Err(Error::DimensionMismatch(format!("θ must have 2g columns, got {cols}")));
    }
    if !canonical_form(&theta.transpose())?.is_full() {
        return Err(Error::NotSurjective);
    }
    let l = kernel(theta);
    debug_assert_eq!(l.order() * BigUint::from(k).pow(n as u32), BigUint::from(k).pow(cols as u32));
    Ok(CoverSpec { g: cols as u64 / 2, k, kernel: l, deck_rank: n })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberProductCertificate {
    pub g: u64,
    pub k: u64,
    pub subsets_checked: usize,
    pub intersections_ok: bool,
    pub elements_checked: usize,
    pub diagonal_injective: bool,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// With `K_j = {v : v_j = 0}` in `H = Z_k^{2g}`: every intersection of `l`
/// of them is `Z_k^{2g-l}`, and `H → ∏ H/K_j` is injective.
pub fn fiber_product_check(g: u64, k: u64, budget: &Budget) -> Result<FiberProductCertificate> {
    if g < 1 {
        return Err(Error::GenusTooSmall(g));
    }
    let m = 2 * g as usize;
    let size = BigUint::from(k).pow(m as u32);
    if size > BigUint::from(budget.max_ambient) {
        return Err(Error::too_large(&size, budget.max_ambient));
    }
    let hyperplanes: Vec<SubgroupOfZkm> = (0..m)
        .map(|j| SubgroupOfZkm::coordinate(m, k, &(0..m).filter(|&i| i != j).collect::<Vec<_>>()))
        .collect();

    let mut failures = Vec::new();
    for mask in 0u64..1 << m {
        let chosen: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        let mut acc = SubgroupOfZkm::full(m, k);
        for &j in &chosen {
            acc = intersect(&acc, &hyperplanes[j])?;
        }
        if acc.free_rank() != Some(m - chosen.len()) {
            failures.push(format!("intersection over {chosen:?} has structure {:?}", acc.structure().subgroup));
        }
    }
    let intersections_ok = failures.is_empty();

    let elements = SubgroupOfZkm::full(m, k).elements(budget.max_ambient)?;
    let mut images = std::collections::BTreeSet::new();
    for v in &elements {
        let image: Vec<Vec<u64>> = hyperplanes
            .iter()
            .map(|h| h.coset_representative(v).map(|r| r.entries().to_vec()))
            .collect::<Result<_>>()?;
        images.insert(image);
    }
    let diagonal_injective = images.len() == elements.len();
    if !diagonal_injective {
        failures.push("diagonal map is not injective".into());
    }
    Ok(FiberProductCertificate {
        g,
        k,
        subsets_checked: 1 << m,
        intersections_ok,
        elements_checked: elements.len(),
        diagonal_injective,
        pass: failures.is_empty(),
        failures,
    })
}

/// Action of an order-`p` automorphism on the homology of a cover branched
/// over `r` points with all cone orders `p`, in an adapted basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GilmanAction {
    pub p: u64,
    pub r: u64,
    pub dimension: usize,
    pub matrix: Vec<Vec<i64>>,
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
        .collect()
}

/// Block-diagonal matrix with `r - 2` blocks of size `p - 1`; in each block
/// `e_i ↦ e_{i+1}` for `i < p - 1` and `e_{p-1} ↦ -(e_1 + ... + e_{p-1})`.
/// Columns are images of basis vectors.
pub fn gilman_tau_matrix(p: u64, r: u64) -> Result<GilmanAction> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 cone points, got {r}")));
    }
    let b = (p - 1) as usize;
    let n = b * (r - 2) as usize;
    if n > 4096 {
        return Err(Error::too_large(format!("dimension {n}"), 4096));
    }
    let mut m = vec![vec![0i64; n]; n];
    for block in 0..(r - 2) as usize {
        let o = block * b;
        for c in 0..b - 1 {
            m[o + c + 1][o + c] = 1;
        }
        for row in m.iter_mut().skip(o).take(b) {
            row[o + b - 1] = -1;
        }
    }
    let mut power = m.clone();
    for _ in 1..p {
        power = int_mul(&power, &m);
    }
    let identity = power.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
    if !identity {
        return Err(Error::CrossCheckFailed(format!("M^{p} is not the identity")));
    }
    Ok(GilmanAction { p, r, dimension: n, matrix: m })
}

impl GilmanAction {
    pub fn reduce(&self, k: u64) -> Result<ResidueMatrix> {
        ResidueMatrix::with_cols(&self.matrix, self.dimension, k)
    }

    /// Genus of the surface whose homology this matrix acts on.
    pub fn genus(&self) -> Option<u64> {
        self.dimension.is_multiple_of(2).then_some(self.dimension as u64 / 2)
    }
}

fn check_coprime(k: u64, p: u64) -> Result<()> {
    if gcd(k, p) != 1 {
        return Err(Error::HypothesisViolated(format!("gcd({k}, {p}) != 1")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SValues {
    pub k: u64,
    pub p: u64,
    pub r: u64,
    pub dimension: usize,
    pub invariant_subgroups: usize,
    pub s_values: Vec<usize>,
    pub constraint_ok: bool,
}

/// Ranks `s` of the invariant subgroups isomorphic to `Z_k^s`.
pub fn invariant_s_values(k: u64, p: u64, r: u64, budget: &Budget) -> Result<SValues> {
    check_coprime(k, p)?;
    let act = gilman_tau_matrix(p, r)?;
    let m = act.reduce(k)?;
    let subgroups = enumerate_invariant_subgroups(&m, budget)?;
    let s_values: std::collections::BTreeSet<usize> = subgroups.iter().filter_map(SubgroupOfZkm::free_rank).collect();
    let constraint_ok = s_values.iter().all(|&s| pow_mod(k % p, s as u64, p) == 1 % p);
    Ok(SValues {
        k,
        p,
        r,
        dimension: act.dimension,
        invariant_subgroups: subgroups.len(),
        s_values: s_values.into_iter().collect(),
        constraint_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossCheck {
    Agreed,
    SkippedOverBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub kernel: SubgroupOfZkm,
    pub s: Option<usize>,
    pub kernel_structure: Vec<u64>,
    #[serde(serialize_with = "bigjson::biguint")]
    pub deck_order: BigUint,
    pub descriptor: String,
    pub constraint_ok: Option<bool>,
    pub invariant: bool,
    pub inside_every_translate: bool,
    pub cross_check: CrossCheck,
}

fn describe_factors(factors: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let run = factors[i..].iter().take_while(|&&f| f == factors[i]).count();
        parts.push(if run == 1 { format!("Z_{}", factors[i]) } else { format!("Z_{}^{run}", factors[i]) });
        i += run;
    }
    parts.join(" x ")
}

/// Galois closure of the cover with kernel `L` under the action: its kernel
/// `K = ⋂_{i<p} M^i L` and deck group `(H/K) ⋊ Z_p`.
pub fn galois_closure(l: &SubgroupOfZkm, act: &GilmanAction, k: u64, budget: &Budget) -> Result<ClosureReport> {
    check_coprime(k, act.p)?;
    if l.modulus() != k || l.ambient_rank() != act.dimension {
        return Err(Error::DimensionMismatch(format!(
            "L lives in Z_{}^{}, action on Z_{k}^{}",
            l.modulus(),
            l.ambient_rank(),
            act.dimension
        )));
    }
    let m = act.reduce(k)?;
    let kernel = largest_invariant_subgroup_in(l, &m, act.p)?;

    let invariant = is_invariant(&m, &kernel)?;
    let mut inside_every_translate = true;
    let mut translate = l.clone();
    for _ in 0..act.p {
        inside_every_translate &= translate.contains_subgroup(&kernel)?;
        translate = translate.image(&m)?;
    }

    let cross_check = match enumerate_invariant_subgroups(&m, budget) {
        Ok(all) => {
            let best = all
                .into_iter()
                .filter(|s| l.contains_subgroup(s).unwrap_or(false))
                .max_by(|a, b| a.order().cmp(b.order()))
                .expect("the trivial subgroup is invariant");
            if best != kernel {
                return Err(Error::CrossCheckFailed(format!(
                    "closure kernel has order {} but an invariant subgroup of order {} lies in L",
                    kernel.order(),
                    best.order()
                )));
            }
            CrossCheck::Agreed
        }
        Err(e) if e.is_budget() => CrossCheck::SkippedOverBudget,
        Err(e) => return Err(e),
    };

    let s = kernel.free_rank();
    let structure = kernel.structure();
    let quotient = structure.quotient.clone();
    let deck_order = kernel.index() * BigUint::from(act.p);
    let descriptor = if quotient.is_empty() {
        format!("Z_{}", act.p)
    } else {
        format!("{} ⋊ Z_{}", describe_factors(&quotient), act.p)
    };
    Ok(ClosureReport {
        constraint_ok: s.map(|s| pow_mod(k % act.p, s as u64, act.p) == 1),
        s,
        kernel_structure: structure.subgroup,
        kernel,
        deck_order,
        descriptor,
        invariant,
        inside_every_translate,
        cross_check,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftExponent {
    pub k: u64,
    pub p: u64,
    pub exponent: u64,
    pub elements_checked: u64,
    pub verified: bool,
}

/// The power `e = k` sending any `η` whose image in `Z_k x Z_p` has full
/// `Z_p` part to an element of order exactly `p`, checked over every such `η`.
pub fn order_p_lift_exponent(k: u64, p: u64) -> Result<LiftExponent> {
    if k == 0 || p < 2 {
        return Err(Error::InvalidInput("need k >= 1 and p >= 2".into()));
    }
    check_coprime(k, p)?;
    if k.saturating_mul(p) > 1 << 24 {
        return Err(Error::too_large(format!("{k}·{p}"), 1u64 << 24));
    }
    let order = |a: u64, b: u64| -> u64 {
        let oa = k / gcd(a, k);
        let ob = p / gcd(b, p);
        oa.lcm(&ob)
    };
    let e = k;
    let mut checked = 0;
    let mut verified = true;
    for a in 0..k {
        for b in (1..p).filter(|&b| gcd(b, p) == 1) {
            checked += 1;
            verified &= order((a * e) % k, (b * e) % p) == p;
        }
    }
    Ok(LiftExponent { k, p, exponent: e, elements_checked: checked, verified })
}
