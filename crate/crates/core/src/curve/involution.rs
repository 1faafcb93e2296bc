use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{DiagonalClass, FermatCurveModel, ProjPoint, RationalCurve};
use crate::error::{Error, Result};
use crate::fields::{find_splitting_prime, sqrt_mod, Fp, RadicandRequest};
use crate::Budget;

/// A coordinate map `y_i = c_i x_{perm[i]}` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    pub perm: Vec<usize>,
    pub coeffs: Vec<Fp>,
}

impl MonomialMap {
    pub fn new(perm: Vec<usize>, coeffs: Vec<Fp>) -> Result<Self> {
        let n = perm.len();
        let distinct: BTreeSet<_> = perm.iter().copied().collect();
        if coeffs.len() != n || distinct.len() != n || perm.iter().any(|&p| p >= n) {
            return Err(Error::InvalidInput("not a permutation with matching coefficients".into()));
        }
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::InvalidInput("monomial coefficients must be nonzero".into()));
        }
        Ok(Self { perm, coeffs })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let coeffs = self.coeffs.iter().zip(&self.perm).map(|(&c, &p)| c * other.coeffs[p]).collect();
        MonomialMap { perm, coeffs }
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let x = p.elements();
        if x.len() != self.perm.len() {
            return Err(Error::DimensionMismatch(format!("map on {} coordinates, point has {}", self.perm.len(), x.len())));
        }
        let y: Vec<Fp> = self.perm.iter().zip(&self.coeffs).map(|(&j, &c)| c * x[j]).collect();
        ProjPoint::from_elements(&y)
    }

    fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The common scalar when the map is a multiple of the identity.
    pub fn scalar(&self) -> Option<Fp> {
        let c0 = self.coeffs[0];
        (self.is_diagonal() && self.coeffs.iter().all(|&c| c == c0)).then_some(c0)
    }

    pub fn is_projective_identity(&self) -> bool {
        self.scalar().is_some()
    }

    /// The sign class of a diagonal map whose coefficients are all `±c_1`.
    pub fn as_diagonal_class(&self) -> Option<DiagonalClass> {
        if !self.is_diagonal() {
            return None;
        }
        let c0 = self.coeffs[0];
        let signs = self
            .coeffs
            .iter()
            .map(|&c| if c == c0 { Some(1) } else if c == -c0 { Some(-1) } else { None })
            .collect::<Option<Vec<i8>>>()?;
        DiagonalClass::from_signs(&signs).ok()
    }
}

/// Named sign flips away from the default square roots, e.g. `a2,mu,p5`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SignChoices {
    flips: BTreeSet<String>,
}

impl SignChoices {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let flips = s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::to_lowercase).collect();
        Ok(Self { flips })
    }

    pub fn flip(mut self, name: &str) -> Self {
        self.flips.insert(name.to_lowercase());
        self
    }

    fn has(&self, name: &str) -> bool {
        self.flips.contains(name)
    }

    fn pick(&self, name: &str, root: Fp) -> Fp {
        if self.has(name) {
            -root
        } else {
            root
        }
    }

    fn check(&self, allowed: &[String]) -> Result<()> {
        match self.flips.iter().find(|f| !allowed.contains(f)) {
            Some(f) => Err(Error::InvalidInput(format!("unknown sign choice '{f}'; expected one of {}", allowed.join(",")))),
            None => Ok(()),
        }
    }
}

fn root(x: Fp, what: &str) -> Result<Fp> {
    sqrt_mod(x).ok_or_else(|| Error::FieldInsufficient(format!("{what} = {x} is not a square in F_{}", x.characteristic())))
}

/// Seeded sample of curve points: drawn from the full point list when the field
/// is small enough to enumerate, otherwise from the chart `x_1 = 1`.
fn sample_points(model: &FermatCurveModel, samples: usize, seed: u64) -> Result<Vec<ProjPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = Budget::default();
    if model.q() <= budget.max_field {
        let all = model.enumerate_points(&budget)?;
        return Ok(all.choose_multiple(&mut rng, samples).cloned().collect());
    }
    Ok((0..samples).filter_map(|_| model.random_point(&mut rng, 64 * model.q() as usize)).collect())
}

/// Checks `λ_{2j} λ_{2j+1} = λ_1` for `j = 1..g-1`.
fn case_a_admissible(model: &FermatCurveModel) -> Result<()> {
    let g = model.g() as usize;
    for j in 1..g {
        if model.lambda(2 * j) * model.lambda(2 * j + 1) != model.lambda(1) {
            return Err(Error::ConstraintInfeasible(format!(
                "case A pairing needs λ_{}·λ_{} = λ_1 over F_{}",
                2 * j,
                2 * j + 1,
                model.q()
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseAReport {
    pub g: u64,
    pub q: u64,
    pub signs: SignChoices,
    /// `A_1, ..., A_{2g+2}` with `A_1 = 1`.
    pub coefficients: Vec<Fp>,
    pub alpha: MonomialMap,
    pub mu: Fp,
    pub fixed_point: ProjPoint,
    pub quadratic_constraints: bool,
    pub product_constraints: bool,
    /// `p_{2j-1}^2 = -(λ_{2j-4} + A_2)` for every odd coordinate.
    pub closed_form_agrees: bool,
    pub on_curve: bool,
    pub alpha_fixed: bool,
    pub alpha_squared_scalar: Option<Fp>,
    pub samples_checked: usize,
    pub samples_preserved: bool,
    pub samples_involution: bool,
    pub pass: bool,
    pub conclusion: String,
}

/// Builds the swap `α = [x_2 : A_2x_1 : A_3x_4 : A_4x_3 : ...]` and its fixed
/// point `[1 : μ : p_3 : ... : p_{2g+2}]` over the model's field.
pub fn case_a_involution(model: &FermatCurveModel, signs: &SignChoices, samples: usize, seed: u64) -> Result<CaseAReport> {
    let g = model.g() as usize;
    let n = model.dimension();
    let mut allowed: Vec<String> = vec!["a2".into(), "mu".into()];
    allowed.extend((2..=g + 1).map(|j| format!("a{}", 2 * j - 1)));
    allowed.extend((2..=g + 1).map(|j| format!("p{}", 2 * j - 1)));
    signs.check(&allowed)?;
    case_a_admissible(model)?;
    let f = model.field();
    let lam = |j: usize| model.lambda(j);

    // a[i] holds A_{i+1}
    let mut a = vec![f.one(); n];
    a[1] = signs.pick("a2", root(lam(1), "λ_1")?);
    for j in 2..=g + 1 {
        let odd = signs.pick(&format!("a{}", 2 * j - 1), root(lam(2 * j - 4), &format!("λ_{}", 2 * j - 4))?);
        a[2 * j - 2] = odd;
        a[2 * j - 1] = a[1].checked_div(odd)?;
    }
    let quadratic_constraints = a[1].square() == lam(1)
        && (2..=g + 1).all(|j| a[2 * j - 2].square() == lam(2 * j - 4) && a[2 * j - 1].square() == lam(2 * j - 3));
    let product_constraints = (2..=g + 1).all(|j| a[2 * j - 2] * a[2 * j - 1] == a[1]);

    let mut perm = vec![1, 0];
    for j in 2..=g + 1 {
        perm.extend([2 * j - 1, 2 * j - 2]);
    }
    let alpha = MonomialMap::new(perm, a.clone())?;

    let mu = signs.pick("mu", root(a[1], "A_2")?);
    let one = f.one();
    let infeasible = |what: &str| Error::ConstraintInfeasible(format!("{what} vanishes over F_{}", model.q()));
    let denom = one - mu.square();
    if denom.is_zero() {
        return Err(infeasible("1 - μ^2"));
    }
    let mut p = vec![one, mu];
    let p3 = signs.pick("p3", root((lam(1) - one).checked_div(denom)?, "(λ_1 - 1)/(1 - μ^2)")?);
    p.extend([p3, mu * p3.checked_div(a[2])?]);
    for j in 3..=g + 1 {
        let ratio = one - a[2 * j - 1].checked_div(a[2 * j - 2])?;
        if ratio.is_zero() {
            return Err(infeasible(&format!("1 - A_{}/A_{}", 2 * j, 2 * j - 1)));
        }
        let radicand = (lam(2 * j - 3) - lam(2 * j - 4)).checked_div(ratio)?;
        let odd = signs.pick(&format!("p{}", 2 * j - 1), root(radicand, &format!("p_{}^2", 2 * j - 1))?);
        p.extend([odd, mu * odd.checked_div(a[2 * j - 2])?]);
    }
    let closed_form_agrees = (2..=g + 1).all(|j| p[2 * j - 2].square() == -(lam(2 * j - 4) + a[1]));
    let fixed_point = ProjPoint::from_elements(&p)?;
    let on_curve = model.contains_point(&fixed_point)?;
    let alpha_fixed = alpha.apply(&fixed_point)? == fixed_point;

    let alpha_squared_scalar = alpha.compose(&alpha).scalar();
    let sampled = sample_points(model, samples, seed)?;
    let mut samples_preserved = true;
    let mut samples_involution = true;
    for s in &sampled {
        let image = alpha.apply(s)?;
        samples_preserved &= model.contains_point(&image)?;
        samples_involution &= alpha.apply(&image)? == *s;
    }
    let pass = quadratic_constraints
        && product_constraints
        && closed_form_agrees
        && on_curve
        && alpha_fixed
        && alpha_squared_scalar.is_some()
        && samples_preserved
        && samples_involution
        && !sampled.is_empty();
    let conclusion = if pass {
        "alpha has a fixed point: contradiction with freeness".to_string()
    } else {
        "verification failed".to_string()
    };
    Ok(CaseAReport {
        g: model.g(),
        q: model.q(),
        signs: signs.clone(),
        coefficients: a,
        alpha,
        mu,
        fixed_point,
        quadratic_constraints,
        product_constraints,
        closed_form_agrees,
        on_curve,
        alpha_fixed,
        alpha_squared_scalar,
        samples_checked: sampled.len(),
        samples_preserved,
        samples_involution,
        pass,
        conclusion,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedPrime {
    pub q: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseACertificate {
    pub g: u64,
    pub lambdas: Vec<String>,
    pub primes: Vec<u64>,
    pub reports: Vec<CaseAReport>,
    pub skipped: Vec<SkippedPrime>,
    pub pass: bool,
}

fn rational_admissible(curve: &RationalCurve) -> Result<()> {
    for j in 1..curve.g as usize {
        if curve.lambda(2 * j) * curve.lambda(2 * j + 1) != curve.lambda(1) {
            return Err(Error::ConstraintInfeasible(format!("case A pairing needs λ_{}·λ_{} = λ_1", 2 * j, 2 * j + 1)));
        }
    }
    Ok(())
}

/// Radicands every case A construction needs regardless of sign branch:
/// `-1`, `λ_1` and `λ_{2j-4}`. Further roots are checked per prime.
pub fn case_a_radicands(curve: &RationalCurve) -> Result<RadicandRequest> {
    let mut r = vec![-BigRational::one(), curve.lambda(1)];
    r.extend((3..=curve.g as usize + 1).map(|j| curve.lambda(2 * j - 4)));
    RadicandRequest::new(r, "case A square roots")
}

/// Runs [`case_a_involution`] at the first `primes_needed` primes above
/// `lower` where the construction succeeds.
pub fn case_a_certificate(
    curve: &RationalCurve,
    request: &RadicandRequest,
    signs: &SignChoices,
    lower: u64,
    primes_needed: usize,
    search_bound: u64,
) -> Result<CaseACertificate> {
    rational_admissible(curve)?;
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut from = lower;
    while reports.len() < primes_needed {
        let q = find_splitting_prime(request, from, 1, search_bound)?[0];
        from = q;
        let outcome = curve.specialize(q).and_then(|m| case_a_involution(&m, signs, 10, q));
        match outcome {
            Ok(r) => reports.push(r),
            Err(e @ (Error::BadLambda(_) | Error::FieldInsufficient(_) | Error::ConstraintInfeasible(_))) => {
                skipped.push(SkippedPrime { q, reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CaseACertificate {
        g: curve.g,
        lambdas: curve.lambdas.iter().map(ToString::to_string).collect(),
        primes: reports.iter().map(|r| r.q).collect(),
        pass: reports.iter().all(|r| r.pass),
        reports,
        skipped,
    })
}

/// The admissible family `λ_1 = μ^4`, `λ_{2j-4} = c_j^2`, `λ_{2j-3} = μ^4/c_j^2`
/// together with every radicand any sign branch can ask for.
pub fn case_a_family(g: u64, mu: &BigRational, c: &[BigRational]) -> Result<(RationalCurve, RadicandRequest)> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if c.len() != g as usize - 1 {
        return Err(Error::InvalidInput(format!("genus {g} needs {} values of c", g - 1)));
    }
    if mu.is_zero() || c.iter().any(Zero::is_zero) {
        return Err(Error::BadLambda("μ and c must be nonzero".into()));
    }
    let mu2 = mu * mu;
    let mu4 = &mu2 * &mu2;
    let mut lambdas = vec![mu4.clone()];
    for cj in c {
        let c2 = cj * cj;
        lambdas.push(c2.clone());
        lambdas.push(&mu4 / &c2);
    }
    let curve = RationalCurve::new(g, lambdas)?;
    let one = BigRational::one();
    let mut radicands = vec![-one.clone(), -(&one + &mu2), -(&one - &mu2)];
    for cj in c {
        let c2 = cj * cj;
        radicands.push(-(&c2 + &mu2));
        radicands.push(-(&c2 - &mu2));
    }
    if radicands.iter().any(|r| r.is_zero()) {
        return Err(Error::ConstraintInfeasible("a fixed-point radicand vanishes identically".into()));
    }
    Ok((curve, RadicandRequest::new(radicands, "case A family")?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseBReport {
    pub g: u64,
    pub q: u64,
    pub i: Fp,
    pub coefficients: Vec<Fp>,
    pub alpha: MonomialMap,
    pub alpha_squared: DiagonalClass,
    pub equals_a2: bool,
    pub nontrivial: bool,
    pub patterns_checked: usize,
    pub all_patterns_nontrivial: bool,
    pub alpha_fourth_identity: bool,
    pub samples_checked: usize,
    pub samples_preserved: bool,
    pub pass: bool,
    pub conclusion: String,
}

fn case_b_map(n: usize, i: Fp, flips: impl Fn(usize) -> bool) -> Result<MonomialMap> {
    let coeffs = (0..n)
        .map(|idx| match idx {
            0 => i.pow(4),
            1 => if flips(1) { -i } else { i },
            _ if idx % 2 == 0 => i,
            _ => if flips(idx) { i } else { -i },
        })
        .collect();
    let mut perm = vec![0, 1];
    for j in 2..=n / 2 {
        perm.extend([2 * j - 1, 2 * j - 2]);
    }
    MonomialMap::new(perm, coeffs)
}

/// `α = [x_1 : A_2x_2 : A_3x_4 : A_4x_3 : ...]` with every `A_j^2 = -1`.
/// Flipping `a{2j}` negates `A_{2j}`.
pub fn case_b_involution(model: &FermatCurveModel, signs: &SignChoices, samples: usize, seed: u64) -> Result<CaseBReport> {
    let g = model.g() as usize;
    let n = model.dimension();
    let allowed: Vec<String> = (1..=g + 1).map(|j| format!("a{}", 2 * j)).collect();
    signs.check(&allowed)?;
    if model.lambda(1) != -model.field().one() {
        return Err(Error::BadLambda("case B needs λ_1 = -1".into()));
    }
    for j in 1..g {
        if model.lambda(2 * j + 1) != -model.lambda(2 * j) {
            return Err(Error::BadLambda(format!("case B needs λ_{} = -λ_{}", 2 * j + 1, 2 * j)));
        }
    }
    let i = model
        .field()
        .sqrt_minus_one()
        .ok_or_else(|| Error::FieldInsufficient(format!("-1 is not a square in F_{}", model.q())))?;

    let alpha = case_b_map(n, i, |idx| signs.has(&format!("a{}", idx + 1)))?;
    let sq = alpha.compose(&alpha);
    let alpha_squared = sq
        .as_diagonal_class()
        .ok_or_else(|| Error::CrossCheckFailed("α^2 is not a diagonal sign change".into()))?;
    let a2 = DiagonalClass::generator(n, 2);
    let equals_a2 = alpha_squared == a2;
    let nontrivial = !alpha_squared.is_identity();

    let mut patterns_checked = 0;
    let mut all_patterns_nontrivial = true;
    for mask in 0..1u64 << (g + 1) {
        let m = case_b_map(n, i, |idx| idx % 2 == 1 && mask >> (idx / 2) & 1 == 1)?;
        patterns_checked += 1;
        all_patterns_nontrivial &= !m.compose(&m).is_projective_identity();
    }
    let alpha_fourth_identity = sq.compose(&sq).is_projective_identity();

    let sampled = sample_points(model, samples, seed)?;
    let mut samples_preserved = true;
    for s in &sampled {
        samples_preserved &= model.contains_point(&alpha.apply(s)?)?;
    }
    let pass = equals_a2 && nontrivial && all_patterns_nontrivial && alpha_fourth_identity && samples_preserved && !sampled.is_empty();
    Ok(CaseBReport {
        g: model.g(),
        q: model.q(),
        i,
        coefficients: alpha.coeffs.clone(),
        alpha,
        alpha_squared,
        equals_a2,
        nontrivial,
        patterns_checked,
        all_patterns_nontrivial,
        alpha_fourth_identity,
        samples_checked: sampled.len(),
        samples_preserved,
        pass,
        conclusion: if pass { "no order-two lift exists in case B".into() } else { "verification failed".into() },
    })
}

/// Integer-valued convenience for rationals in tests and the CLI.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
