//! The generalized Fermat curve of type (2, 2g+1):
//!
//! ```text
//!   λ_{j-1} x_1^2 + x_2^2 + x_{j+2}^2 = 0,   j = 1..2g,   λ_0 := 1
//! ```
//!
//! in `P^{2g+1}`, specialized to prime fields. Its diagonal sign changes form
//! a group Z_2^{2g+1}; the free index-two subgroup of that group is the
//! (g,2)-Fermat group of the curve.

mod diagonal;
mod involution;

pub use diagonal::{
    diagonal_action, elements_with_fixed_points, index_two_scan, unique_free_index_two, ClassFixedSet,
    DiagonalClass, FixedPointConclusion, FixedPointReport, FreeSubgroupReport, IndexTwoScan,
};
pub use involution::{
    case_a_certificate, case_a_family, case_a_involution, case_a_radicands, case_b_involution, rational, CaseACertificate, CaseAReport,
    CaseBReport, MonomialMap, SignChoices, SkippedPrime,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{sqrt_mod, Fp, PrimeField};
use crate::Budget;

/// JSON description of a model: `{g, q, lambdas}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub g: u64,
    pub q: u64,
    pub lambdas: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatCurveModel {
    g: u64,
    field: PrimeField,
    lambdas: Vec<Fp>,
}

/// Validates `g`, the λ count, `λ_j ∉ {0, 1}` and pairwise distinctness.
pub fn build_model(g: u64, lambdas: &[Fp], field: PrimeField) -> Result<FermatCurveModel> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let need = 2 * g as usize - 1;
    if lambdas.len() != need {
        return Err(Error::BadLambda(format!("genus {g} needs {need} lambdas, got {}", lambdas.len())));
    }
    if lambdas.iter().any(|l| l.characteristic() != field.characteristic()) {
        return Err(Error::BadLambda("lambdas live in a different field".into()));
    }
    for (i, l) in lambdas.iter().enumerate() {
        if l.is_zero() || l.is_one() {
            return Err(Error::BadLambda(format!("λ_{} = {l} is degenerate", i + 1)));
        }
        if let Some(j) = lambdas[..i].iter().position(|m| m == l) {
            return Err(Error::BadLambda(format!("λ_{} = λ_{} = {l}", j + 1, i + 1)));
        }
    }
    Ok(FermatCurveModel { g, field, lambdas: lambdas.to_vec() })
}

impl FermatCurveModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        let field = PrimeField::new(spec.q)?;
        let lambdas: Vec<Fp> = spec.lambdas.iter().map(|&l| field.elem(l)).collect();
        build_model(spec.g, &lambdas, field)
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec { g: self.g, q: self.q(), lambdas: self.lambdas.iter().map(|l| l.value() as i64).collect() }
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn lambdas(&self) -> &[Fp] {
        &self.lambdas
    }

    /// `λ_j` with the convention `λ_0 = 1`.
    pub fn lambda(&self, j: usize) -> Fp {
        if j == 0 {
            self.field.one()
        } else {
            self.lambdas[j - 1]
        }
    }

    /// Number of homogeneous coordinates, `2g + 2`.
    pub fn dimension(&self) -> usize {
        2 * self.g as usize + 2
    }

    /// Diagonal coefficients of the `2g` quadrics; row `j` (0-based) is
    /// `λ_j x_1^2 + x_2^2 + x_{j+3}^2`.
    pub fn equations(&self) -> Vec<Vec<Fp>> {
        let n = self.dimension();
        (0..n - 2)
            .map(|j| {
                let mut row = vec![self.field.zero(); n];
                row[0] = self.lambda(j);
                row[1] = self.field.one();
                row[j + 2] = self.field.one();
                row
            })
            .collect()
    }

    pub fn contains_point(&self, p: &ProjPoint) -> Result<bool> {
        if p.coords.len() != self.dimension() || p.q != self.q() {
            return Err(Error::DimensionMismatch(format!(
                "point in P^{} over F_{} vs model in P^{} over F_{}",
                p.coords.len() - 1,
                p.q,
                self.dimension() - 1,
                self.q()
            )));
        }
        Ok(self.contains_coords(&p.elements()))
    }

    pub(crate) fn contains_coords(&self, x: &[Fp]) -> bool {
        let (x0, x1) = (x[0].square(), x[1].square());
        (2..x.len()).all(|m| (self.lambda(m - 2) * x0 + x1 + x[m].square()).is_zero())
    }

    /// `-(λ_{m-2} x_1^2 + x_2^2)`: the value `x_m^2` is forced to take.
    fn forced_square(&self, m: usize, x0: Fp, x1: Fp) -> Fp {
        -(self.lambda(m - 2) * x0.square() + x1.square())
    }

    /// Every F_q-rational point, sorted.
    ///
    /// A point is fixed by its first two coordinates up to scaling, either
    /// `(1, t)` or `(0, 1)`, after which each remaining coordinate is one of the
    /// two square roots of a forced value.
    pub fn enumerate_points(&self, budget: &Budget) -> Result<Vec<ProjPoint>> {
        if self.q() > budget.max_field {
            return Err(Error::too_large(format!("q = {}", self.q()), budget.max_field));
        }
        let f = self.field;
        let heads = std::iter::once((f.zero(), f.one())).chain(f.elements().map(|t| (f.one(), t)));
        let mut points = Vec::new();
        for (x0, x1) in heads {
            let mut choices: Vec<Vec<Fp>> = vec![vec![x0, x1]];
            for m in 2..self.dimension() {
                let Some(r) = sqrt_mod(self.forced_square(m, x0, x1)) else {
                    choices.clear();
                    break;
                };
                let roots = if r.is_zero() { vec![r] } else { vec![r, -r] };
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        roots.iter().map(move |&root| {
                            let mut next = c.clone();
                            next.push(root);
                            next
                        })
                    })
                    .collect();
            }
            for c in choices {
                let p = ProjPoint::from_elements(&c)?;
                if p.zero_count() > 1 {
                    return Err(Error::SingularPoint(format!("{p} has more than one zero coordinate")));
                }
                points.push(p);
            }
        }
        points.sort();
        Ok(points)
    }

    /// A random curve point from the affine chart `x_1 = 1`, or `None` if
    /// `attempts` draws all fail.
    pub fn random_point<R: Rng>(&self, rng: &mut R, attempts: usize) -> Option<ProjPoint> {
        let f = self.field;
        'draw: for _ in 0..attempts {
            let t = f.elem(rng.gen_range(0..self.q()) as i64);
            let mut coords = vec![f.one(), t];
            for m in 2..self.dimension() {
                let Some(r) = sqrt_mod(self.forced_square(m, f.one(), t)) else {
                    continue 'draw;
                };
                coords.push(if rng.gen::<bool>() { -r } else { r });
            }
            return ProjPoint::from_elements(&coords).ok();
        }
        None
    }
}

/// The same model with rational λ, for specialization at many primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve {
    pub g: u64,
    pub lambdas: Vec<BigRational>,
}

impl RationalCurve {
    pub fn new(g: u64, lambdas: Vec<BigRational>) -> Result<Self> {
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        if lambdas.len() != 2 * g as usize - 1 {
            return Err(Error::BadLambda(format!("genus {g} needs {} lambdas", 2 * g - 1)));
        }
        for (i, l) in lambdas.iter().enumerate() {
            if l.is_zero() || l.is_one() || lambdas[..i].contains(l) {
                return Err(Error::BadLambda(format!("λ_{} = {l} is degenerate or repeated", i + 1)));
            }
        }
        Ok(Self { g, lambdas })
    }

    pub fn from_integers(g: u64, lambdas: &[i64]) -> Result<Self> {
        Self::new(g, lambdas.iter().map(|&l| BigRational::from_integer(BigInt::from(l))).collect())
    }

    pub fn specialize(&self, q: u64) -> Result<FermatCurveModel> {
        let field = PrimeField::new(q)?;
        let lambdas = self
            .lambdas
            .iter()
            .map(|l| field.reduce_rational(l).ok_or_else(|| Error::BadLambda(format!("{q} divides a denominator of {l}"))))
            .collect::<Result<Vec<_>>>()?;
        build_model(self.g, &lambdas, field)
    }

    /// `λ_j` with `λ_0 = 1`.
    pub fn lambda(&self, j: usize) -> BigRational {
        if j == 0 {
            BigRational::one()
        } else {
            self.lambdas[j - 1].clone()
        }
    }
}

/// A point of projective space over F_q, scaled so that its first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<u64>,
    q: u64,
}

impl ProjPoint {
    pub fn from_elements(x: &[Fp]) -> Result<Self> {
        let first = x
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("all coordinates zero".into()))?;
        let q = first.characteristic();
        let scale = first.inv()?;
        Ok(Self { coords: x.iter().map(|&c| (c * scale).value()).collect(), q })
    }

    pub fn new(coords: &[i64], field: PrimeField) -> Result<Self> {
        Self::from_elements(&coords.iter().map(|&c| field.elem(c)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn characteristic(&self) -> u64 {
        self.q
    }

    pub fn elements(&self) -> Vec<Fp> {
        let f = PrimeField::new(self.q).expect("point built over a prime field");
        self.coords.iter().map(|&c| f.elem(c as i64)).collect()
    }

    pub fn zero_count(&self) -> usize {
        self.coords.iter().filter(|&&c| c == 0).count()
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}
