//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gkfermat::arith::{base_genus_from_cover, cover_genus, sylow_uniqueness_certificate, SylowConclusion};
use gkfermat::covers::{fiber_product_check, galois_closure, gilman_tau_matrix, invariant_s_values};
use gkfermat::curve::{
    case_a_certificate, case_a_family, case_b_involution, elements_with_fixed_points, index_two_scan, rational,
    unique_free_index_two, DiagonalClass, FermatCurveModel, FixedPointConclusion, ModelSpec, SignChoices,
};
use gkfermat::presentations::{gamma_k_index, homology_mod_k, hyperelliptic_chain_check, surface_presentation};
use gkfermat::zk::{enumerate_invariant_subgroups, ResidueMatrix, ResidueVector, SubgroupOfZkm};
use gkfermat::Budget;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn homology() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for g in 2..=6u64 {
        let pres = surface_presentation(g).map_err(|e| e.to_string())?;
        // exponent sums of the single relator vanish, so H_1 = Z^{2g} and H_1 ⊗ Z_k = Z_k^{2g}
        let mut sums = vec![0i64; 2 * g as usize];
        for &letter in &pres.relators[0] {
            sums[letter.unsigned_abs() as usize - 1] += letter.signum();
        }
        ensure(sums.iter().all(|&s| s == 0), || format!("g={g}: relator exponent sums {sums:?}"))?;
        for k in 2..=10u64 {
            let h = homology_mod_k(&pres, k).map_err(|e| e.to_string())?;
            let expected = vec![BigUint::from(k); 2 * g as usize];
            ensure(h.free_rank == 0 && h.torsion_factors == expected, || {
                format!("g={g} k={k}: got {}", h.describe())
            })?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(1), "homology grid")?;
    Ok(format!("{cases} cases equal Z_k^(2g) in {:?}", start.elapsed()))
}

fn chain() -> Outcome {
    for g in 2..=6u64 {
        let c = hyperelliptic_chain_check(g).map_err(|e| e.to_string())?;
        let expected = BigUint::from(2u32).pow(2 * g as u32 + 1);
        let product = BigUint::from(2u32) * gamma_k_index(g, 2).map_err(|e| e.to_string())?;
        ensure(c.pass && c.abelianization_order == expected && expected == product, || {
            format!("g={g}: |K/K'| = {} vs {expected}", c.abelianization_order)
        })?;
    }
    Ok("|K/K'| = 2^(2g+1) for g in 2..=6".into())
}

fn genus() -> Outcome {
    let mut cases = 0;
    for g in 2..=8u64 {
        for k in 2..=8u64 {
            let gamma = cover_genus(g, k).map_err(|e| e.to_string())?;
            let oracle = BigUint::from(1u32) + BigUint::from(k).pow(2 * g as u32) * BigUint::from(g - 1);
            ensure(gamma == oracle, || format!("cover_genus({g},{k}) = {gamma}"))?;
            let back = base_genus_from_cover(k, &gamma).map_err(|e| e.to_string())?;
            ensure(back == Some(g), || format!("round trip ({g},{k}) gave {back:?}"))?;
            cases += 1;
        }
    }
    let fixed = [(2, 2, 17u32), (2, 3, 82)];
    for (g, k, want) in fixed {
        let got = cover_genus(g, k).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(want), || format!("cover_genus({g},{k}) = {got}, expected {want}"))?;
    }
    Ok(format!("{cases} round trips; (2,2) -> 17, (2,3) -> 82"))
}

fn sylow() -> Outcome {
    let start = Instant::now();
    let scan = |p: u64| -> Vec<u64> { (2..=84u64).filter(|n| n % p == 1).collect() };
    for p in [89u64, 97, 101] {
        let c = sylow_uniqueness_certificate(2, p, 1).map_err(|e| e.to_string())?;
        ensure(c.conclusion == SylowConclusion::Unique && scan(p).is_empty() && c.candidate_counts.is_empty(), || {
            format!("p={p}: {:?}", c.conclusion)
        })?;
    }
    let c = sylow_uniqueness_certificate(2, 83, 1).map_err(|e| e.to_string())?;
    ensure(c.conclusion == SylowConclusion::NotCertified && c.candidate_counts == vec![84] && scan(83) == vec![84], || {
        format!("p=83: {:?} with witnesses {:?}", c.conclusion, c.candidate_counts)
    })?;
    within(start, Duration::from_secs(1), "Sylow certificates")?;
    Ok("p in {89,97,101} unique; p=83 not certified, witness 84".into())
}

fn curve_freeness() -> Outcome {
    let instances = [
        (13, [3, 4, 6]),
        (13, [2, 5, 7]),
        (13, [8, 9, 11]),
        (17, [3, 4, 6]),
        (17, [2, 5, 10]),
        (17, [7, 12, 15]),
    ];
    let budget = Budget::default();
    let generators: BTreeSet<DiagonalClass> = (1..=6).map(|j| DiagonalClass::generator(6, j)).collect();
    let scan = index_two_scan(2).map_err(|e| e.to_string())?;
    ensure(scan.unique() && scan.free_hyperplanes == 1 && scan.hyperplanes_scanned == 31, || {
        format!("index-two scan: {} free of {}", scan.free_hyperplanes, scan.hyperplanes_scanned)
    })?;
    let mut total_points = 0;
    for (q, lambdas) in instances {
        let start = Instant::now();
        let m = FermatCurveModel::from_spec(&ModelSpec { g: 2, q, lambdas: lambdas.to_vec() }).map_err(|e| e.to_string())?;
        let fixed = elements_with_fixed_points(&m, &budget).map_err(|e| e.to_string())?;
        ensure(fixed.conclusion != FixedPointConclusion::Violated, || format!("q={q} {lambdas:?}: violated"))?;
        ensure(fixed.fixed_classes.iter().all(|f| generators.contains(&f.class)), || {
            format!("q={q} {lambdas:?}: a non-generator fixes a point")
        })?;
        let free = unique_free_index_two(&m, &budget).map_err(|e| e.to_string())?;
        ensure(free.acts_freely && free.scan.unique(), || format!("q={q} {lambdas:?}: H does not act freely"))?;
        // independent check: a class fixes [x] iff its signs are constant on the support of x
        let points = m.enumerate_points(&budget).map_err(|e| e.to_string())?;
        for p in &points {
            for c in DiagonalClass::all(6).filter(|c| !c.is_identity()) {
                let s = c.signs();
                let support: Vec<i8> = p.coords().iter().zip(&s).filter(|(x, _)| **x != 0).map(|(_, s)| *s).collect();
                let fixes = support.windows(2).all(|w| w[0] == w[1]);
                ensure(!fixes || generators.contains(&c), || format!("q={q}: {} fixes {p}", c.label()))?;
            }
        }
        total_points += points.len();
        within(start, Duration::from_secs(30), &format!("instance q={q} {lambdas:?}"))?;
    }
    Ok(format!("6 instances, {total_points} points; only generators fix points; H free and unique"))
}

fn involutions() -> Outcome {
    let (curve, req) = case_a_family(2, &rational(2, 1), &[rational(3, 1)]).map_err(|e| e.to_string())?;
    let cert = case_a_certificate(&curve, &req, &SignChoices::none(), 10, 3, 1_000_000).map_err(|e| e.to_string())?;
    ensure(cert.pass && cert.reports.len() >= 3, || format!("case A: {cert:?}"))?;
    for r in &cert.reports {
        ensure(r.on_curve && r.alpha_fixed, || format!("case A at q={}: fixed point check failed", r.q))?;
    }
    let (curve3, req3) = case_a_family(3, &rational(2, 1), &[rational(3, 1), rational(5, 1)]).map_err(|e| e.to_string())?;
    let cert3 = case_a_certificate(&curve3, &req3, &SignChoices::none(), 10, 3, 1_000_000).map_err(|e| e.to_string())?;
    ensure(cert3.pass, || "case A genus 3 failed".into())?;

    let b_models = [(2, 13, vec![12, 2, 11]), (3, 17, vec![16, 2, 15, 3, 14])];
    for (g, q, lambdas) in b_models {
        let m = FermatCurveModel::from_spec(&ModelSpec { g, q, lambdas }).map_err(|e| e.to_string())?;
        let r = case_b_involution(&m, &SignChoices::none(), 10, 0).map_err(|e| e.to_string())?;
        let a2 = DiagonalClass::generator(2 * g as usize + 2, 2);
        ensure(r.pass && r.alpha_squared == a2 && !r.alpha_squared.is_identity(), || format!("case B g={g}: {r:?}"))?;
    }
    Ok(format!(
        "case A fixed points at primes {:?} (g=2) and {:?} (g=3); case B alpha^2 = a_2",
        cert.primes, cert3.primes
    ))
}

fn max_invariant_inside(invariant: &[SubgroupOfZkm], l: &SubgroupOfZkm) -> SubgroupOfZkm {
    invariant
        .iter()
        .filter(|s| l.contains_subgroup(s).unwrap())
        .max_by(|a, b| a.order().cmp(b.order()))
        .cloned()
        .unwrap()
}

fn random_subgroup(rng: &mut ChaCha8Rng, m: usize, k: u64) -> SubgroupOfZkm {
    let count = rng.gen_range(1..=3);
    let gens: Vec<ResidueVector> = (0..count)
        .map(|_| ResidueVector::new(&(0..m).map(|_| rng.gen_range(0..k) as i64).collect::<Vec<_>>(), k).unwrap())
        .collect();
    SubgroupOfZkm::from_generators(&gens, m, k).unwrap()
}

fn gilman_closure() -> Outcome {
    let start = Instant::now();
    for p in [3u64, 5, 7] {
        for r in [3u64, 4, 5] {
            let act = gilman_tau_matrix(p, r).map_err(|e| e.to_string())?;
            for k in [2u64, 3, 4, 7] {
                let m = act.reduce(k).map_err(|e| e.to_string())?;
                ensure(m.pow(p).map_err(|e| e.to_string())?.is_identity(), || format!("M^{p} != I for ({p},{r}) mod {k}"))?;
            }
        }
    }
    let sv = invariant_s_values(2, 3, 3, &Budget::default()).map_err(|e| e.to_string())?;
    ensure(sv.s_values == vec![0, 2] && sv.s_values.iter().all(|&s| (1u64 << s) % 3 == 1), || {
        format!("s values {:?}", sv.s_values)
    })?;

    let act = gilman_tau_matrix(3, 3).map_err(|e| e.to_string())?;
    let line = SubgroupOfZkm::from_generators(&[ResidueVector::new(&[1, 0], 2).unwrap()], 2, 2).unwrap();
    let ex = galois_closure(&line, &act, 2, &Budget::default()).map_err(|e| e.to_string())?;
    ensure(ex.deck_order == BigUint::from(12u32), || format!("example deck order {}", ex.deck_order))?;

    // the library's own cross-check is disabled; the comparison below is the oracle
    let no_cross = Budget { max_ambient: 1, ..Budget::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut ambients, mut closures) = (0, 0);
    for k in 2..=6u64 {
        for p in [2u64, 3, 5, 7] {
            if gkfermat::ntheory::gcd(k, p) != 1 {
                continue;
            }
            for r in [3u64, 4, 5] {
                let dim = ((p - 1) * (r - 2)) as u32;
                if k.pow(dim.min(13)) > 4096 {
                    continue;
                }
                let act = gilman_tau_matrix(p, r).map_err(|e| e.to_string())?;
                let m = act.reduce(k).map_err(|e| e.to_string())?;
                let invariant = enumerate_invariant_subgroups(&m, &Budget::default()).map_err(|e| e.to_string())?;
                let identity = ResidueMatrix::identity(dim as usize, k);
                let few = Budget { max_subgroups: 3000, ..Budget::default() };
                let ls: Vec<SubgroupOfZkm> = match enumerate_invariant_subgroups(&identity, &few) {
                    Ok(all) => all,
                    Err(e) if e.is_budget() => {
                        let mut ls: Vec<_> = (0..24).map(|_| random_subgroup(&mut rng, dim as usize, k)).collect();
                        ls.push(SubgroupOfZkm::trivial(dim as usize, k));
                        ls.push(SubgroupOfZkm::full(dim as usize, k));
                        ls
                    }
                    Err(e) => return Err(e.to_string()),
                };
                for l in &ls {
                    let rep = galois_closure(l, &act, k, &no_cross).map_err(|e| e.to_string())?;
                    let best = max_invariant_inside(&invariant, l);
                    ensure(rep.kernel == best, || format!("k={k} p={p} r={r}: closure differs from scan"))?;
                    closures += 1;
                }
                ambients += 1;
            }
        }
    }
    within(start, Duration::from_secs(60), "Gilman/closure block")?;
    Ok(format!("{ambients} ambients, {closures} closures match the scan; example deck order 12; s = {{0,2}}"))
}

fn fiber() -> Outcome {
    for (g, k) in [(2u64, 2u64), (2, 3), (3, 2)] {
        let c = fiber_product_check(g, k, &Budget::default()).map_err(|e| e.to_string())?;
        ensure(c.pass && c.intersections_ok && c.diagonal_injective, || format!("({g},{k}): {:?}", c.failures))?;
    }
    Ok("(2,2), (2,3), (3,2): intersections Z_k^(2g-l), diagonal injective".into())
}

fn main() {
    let suite = Instant::now();
    let criteria: [Criterion; 8] = [
        ("AC1 homology mod k of surface groups", homology),
        ("AC2 hyperelliptic index chain", chain),
        ("AC3 genus arithmetic", genus),
        ("AC4 Sylow certificates", sylow),
        ("AC5 curve freeness", curve_freeness),
        ("AC6 case A and case B involutions", involutions),
        ("AC7 Gilman matrices and Galois closures", gilman_closure),
        ("AC8 fiber product", fiber),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    let total = suite.elapsed();
    if total < Duration::from_secs(300) {
        println!("[PASS] AC9 runtime: acceptance computations finished in {total:.2?} (limit 300s)");
    } else {
        failed += 1;
        println!("[FAIL] AC9 runtime: acceptance computations took {total:.2?} (limit 300s)");
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
