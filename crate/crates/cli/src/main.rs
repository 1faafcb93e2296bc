use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkfermat::arith::{self, SylowConclusion};
use gkfermat::covers::{self, CrossCheck};
use gkfermat::curve::{self, FermatCurveModel, FixedPointConclusion, ModelSpec, RationalCurve, SignChoices};
use gkfermat::presentations::{self, GroupPresentation};
use gkfermat::zk::{ResidueMatrix, ResidueVector, SubgroupOfZkm};
use gkfermat::{Budget, Error};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

mod render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "gkfermat", version, about = "Exact certificates for (g,k)-Fermat pairs and their covers")]
struct Cli {
    /// Output format; tables are flattened from the JSON report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Largest ambient group (k^m) any enumeration may touch.
    #[arg(long, default_value_t = 1 << 20, global = true)]
    budget: u64,
    /// Largest number of subgroups an enumeration may produce.
    #[arg(long, default_value_t = 200_000, global = true)]
    max_subgroups: usize,
    /// Largest field size for full point enumeration.
    #[arg(long, default_value_t = 200, global = true)]
    field_budget: u64,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Genus 1 + k^(2g)(g-1) of the k-homology cover.
    Genus {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        k: u64,
    },
    /// Recover g from a cover genus, if it is one.
    BaseGenus {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        genus: BigUint,
    },
    /// 84(genus - 1).
    Hurwitz {
        #[arg(long)]
        genus: BigUint,
    },
    /// |Aut(S)| from |Aut(X)| and the Fermat group order.
    AutOrder {
        #[arg(long)]
        base_aut: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        k: u64,
    },
    /// Uniqueness of the Sylow subgroup for k = p^r.
    SylowCert {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Shapes H could take on a hyperelliptic surface, against Z_k^(2g).
    HyperellipticCert {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        k: u64,
    },
    /// Abelianization (or homology mod k) of a presentation file.
    Homology {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        k: Option<u64>,
    },
    /// |K/K'| against [K:Γ][Γ:Γ^2] for the hyperelliptic orbifold group.
    ChainCheck {
        #[arg(long)]
        g: u64,
    },
    /// Generalized Fermat curve computations.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Intermediate covers and Galois closures.
    #[command(subcommand)]
    Cover(CoverCommand),
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    g: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Comma-separated λ_1, ..., λ_{2g-1}.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// JSON file {"g", "q", "lambdas"}.
    #[arg(long, conflicts_with_all = ["g", "q", "lambdas"])]
    model: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CurveCommand {
    /// Enumerate rational points and check them against the equations.
    Verify(ModelArgs),
    /// Sign classes with rational fixed points.
    FixedPoints(ModelArgs),
    /// The index-two subgroup acting freely.
    FreeSubgroup(ModelArgs),
    /// Fixed point of the swap involution in case A.
    CaseA {
        #[arg(long)]
        g: Option<u64>,
        /// Family parameter μ (with --c).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<BigRational>,
        /// Family parameters c_3, ..., c_{g+1}, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<BigRational>,
        /// Rational λ list such as 16,9,16/9.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "mu")]
        lambdas: Option<String>,
        /// Check a single field instead of searching for primes.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 3)]
        primes: usize,
        #[arg(long, default_value_t = 10)]
        lower: u64,
        #[arg(long, default_value_t = 10_000_000)]
        search_bound: u64,
        /// Sign flips such as a2,mu,p3.
        #[arg(long, default_value = "")]
        flip: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Square of the candidate lift in case B.
    CaseB {
        #[command(flatten)]
        model: ModelArgs,
        /// Sign flips such as a4.
        #[arg(long, default_value = "")]
        flip: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CoverCommand {
    /// Kernel of θ: Z_k^(2g) → Z_k^n, rows separated by ';'.
    Kernel {
        #[arg(long)]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Intersections of coordinate kernels and the diagonal embedding.
    FiberCheck {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        k: u64,
    },
    /// Adapted-basis matrix of an order-p automorphism.
    Gilman {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        /// Also report the reduction mod k.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Galois closure of the cover with kernel generated by --l.
    Closure {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        /// Generators of L, rows separated by ';'; empty for the trivial subgroup.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        l: String,
    },
    /// Ranks s of invariant subgroups isomorphic to Z_k^s.
    SValues {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
    },
}

/// A report plus whether the certified property holds.
struct Report {
    value: Value,
    pass: bool,
}

impl Report {
    fn new(value: impl serde::Serialize, pass: bool) -> Result<Self, Error> {
        let value = serde_json::to_value(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(Self { value, pass })
    }
}

fn big(n: &BigUint) -> Value {
    Value::Number(n.to_string().parse().expect("decimal digits form a JSON number"))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("cannot parse '{t}' in {what}"))))
        .collect()
}

fn parse_rows(text: &str, what: &str) -> Result<Vec<Vec<i64>>, Error> {
    text.split(';').filter(|r| !r.trim().is_empty()).map(|r| parse_list(r, what)).collect()
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_model(args: &ModelArgs) -> Result<FermatCurveModel, Error> {
    let spec = match &args.model {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| Error::InvalidInput(format!("model file: {e}")))?,
        None => {
            let missing = |f: &str| Error::InvalidInput(format!("--{f} is required without --model"));
            let lambdas: Vec<i64> = parse_list(args.lambdas.as_deref().ok_or_else(|| missing("lambdas"))?, "lambdas")?;
            let g = args.g.unwrap_or((lambdas.len() as u64).div_ceil(2));
            ModelSpec { g, q: args.q.ok_or_else(|| missing("q"))?, lambdas }
        }
    };
    FermatCurveModel::from_spec(&spec)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let budget = Budget {
        max_ambient: cli.budget,
        max_subgroups: cli.max_subgroups,
        max_field: cli.field_budget,
        ..Budget::default()
    };
    match &cli.command {
        Command::Genus { g, k } => Report::new(big(&arith::cover_genus(*g, *k)?), true),
        Command::BaseGenus { k, genus } => {
            let g = arith::base_genus_from_cover(*k, genus)?;
            Report::new(g, g.is_some())
        }
        Command::Hurwitz { genus } => Report::new(big(&arith::hurwitz_bound(genus)?), true),
        Command::AutOrder { base_aut, g, k } => {
            let r = arith::aut_order(*base_aut, *g, *k)?;
            let pass = r.agree;
            Report::new(r, pass)
        }
        Command::SylowCert { g, p, r } => {
            let c = arith::sylow_uniqueness_certificate(*g, *p, *r)?;
            let pass = c.conclusion == SylowConclusion::Unique;
            Report::new(c, pass)
        }
        Command::HyperellipticCert { g, k } => {
            let c = arith::hyperelliptic_exclusion(*g, *k)?;
            let pass = c.shapes.iter().all(|s| !s.isomorphic_to_h);
            Report::new(c, pass)
        }
        Command::Homology { presentation, k } => {
            let p = GroupPresentation::from_json(&read(presentation)?)?;
            let inv = match k {
                Some(k) => presentations::homology_mod_k(&p, *k)?,
                None => presentations::abelian_invariants(&p)?,
            };
            let v = json!({
                "label": p.label,
                "k": k,
                "description": inv.describe(),
                "invariants": serde_json::to_value(&inv).map_err(|e| Error::InvalidInput(e.to_string()))?,
            });
            Report::new(v, true)
        }
        Command::ChainCheck { g } => {
            let c = presentations::hyperelliptic_chain_check(*g)?;
            let pass = c.pass;
            Report::new(c, pass)
        }
        Command::Curve(cmd) => run_curve(cmd, &budget, cli.seed),
        Command::Cover(cmd) => run_cover(cmd, &budget),
    }
}

fn run_curve(cmd: &CurveCommand, budget: &Budget, seed: u64) -> Result<Report, Error> {
    match cmd {
        CurveCommand::Verify(args) => {
            let m = load_model(args)?;
            let points = m.enumerate_points(budget)?;
            let mut on_curve = true;
            for p in &points {
                on_curve &= m.contains_point(p)?;
            }
            let max_zeros = points.iter().map(|p| p.zero_count()).max().unwrap_or(0);
            let v = json!({
                "model": m.spec(),
                "point_count": points.len(),
                "all_on_curve": on_curve,
                "max_zero_coordinates": max_zeros,
                "points": points,
            });
            Report::new(v, on_curve && max_zeros <= 1)
        }
        CurveCommand::FixedPoints(args) => {
            let r = curve::elements_with_fixed_points(&load_model(args)?, budget)?;
            let pass = r.conclusion == FixedPointConclusion::OnlyGenerators;
            Report::new(r, pass)
        }
        CurveCommand::FreeSubgroup(args) => {
            let r = curve::unique_free_index_two(&load_model(args)?, budget)?;
            let pass = r.acts_freely && r.scan.unique();
            Report::new(r, pass)
        }
        CurveCommand::CaseA { g, mu, c, lambdas, q, primes, lower, search_bound, flip, samples } => {
            let signs = SignChoices::parse(flip)?;
            let (rational, request) = match (mu, lambdas) {
                (Some(mu), None) => {
                    let g = g.unwrap_or(c.len() as u64 + 1);
                    curve::case_a_family(g, mu, c)?
                }
                (None, Some(text)) => {
                    let ls: Vec<BigRational> = parse_list(text, "lambdas")?;
                    let g = g.unwrap_or((ls.len() as u64).div_ceil(2));
                    let rc = RationalCurve::new(g, ls)?;
                    let req = curve::case_a_radicands(&rc)?;
                    (rc, req)
                }
                _ => return Err(Error::InvalidInput("give either --mu with --c, or --lambdas".into())),
            };
            match q {
                Some(q) => {
                    let r = curve::case_a_involution(&rational.specialize(*q)?, &signs, *samples, seed)?;
                    let pass = r.pass;
                    Report::new(r, pass)
                }
                None => {
                    let c = curve::case_a_certificate(&rational, &request, &signs, *lower, *primes, *search_bound)?;
                    let pass = c.pass;
                    Report::new(c, pass)
                }
            }
        }
        CurveCommand::CaseB { model, flip, samples } => {
            let r = curve::case_b_involution(&load_model(model)?, &SignChoices::parse(flip)?, *samples, seed)?;
            let pass = r.pass;
            Report::new(r, pass)
        }
    }
}

fn run_cover(cmd: &CoverCommand, budget: &Budget) -> Result<Report, Error> {
    match cmd {
        CoverCommand::Kernel { k, theta } => {
            let rows = parse_rows(theta, "theta")?;
            let width = rows.first().map_or(0, Vec::len);
            let spec = covers::kernel_of_surjection(&ResidueMatrix::with_cols(&rows, width, *k)?)?;
            Report::new(spec, true)
        }
        CoverCommand::FiberCheck { g, k } => {
            let c = covers::fiber_product_check(*g, *k, budget)?;
            let pass = c.pass;
            Report::new(c, pass)
        }
        CoverCommand::Gilman { p, r, k } => {
            let act = covers::gilman_tau_matrix(*p, *r)?;
            let reduced = k.map(|k| act.reduce(k)).transpose()?;
            let v = json!({
                "action": serde_json::to_value(&act).map_err(|e| Error::InvalidInput(e.to_string()))?,
                "genus": act.genus(),
                "reduced": reduced.map(|m| m.rows().to_vec()),
            });
            Report::new(v, true)
        }
        CoverCommand::Closure { k, p, r, l } => {
            let act = covers::gilman_tau_matrix(*p, *r)?;
            let gens = parse_rows(l, "l")?
                .iter()
                .map(|row| ResidueVector::new(row, *k))
                .collect::<Result<Vec<_>, _>>()?;
            let l = SubgroupOfZkm::from_generators(&gens, act.dimension, *k)?;
            let rep = covers::galois_closure(&l, &act, *k, budget)?;
            let pass = rep.constraint_ok == Some(true) && rep.invariant && rep.inside_every_translate;
            if rep.cross_check == CrossCheck::SkippedOverBudget {
                eprintln!("warning: cross-check skipped, enumeration exceeds the budget");
            }
            Report::new(rep, pass)
        }
        CoverCommand::SValues { k, p, r } => {
            let s = covers::invariant_s_values(*k, *p, *r, budget)?;
            let pass = s.constraint_ok;
            Report::new(s, pass)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_budget() => 3,
        Error::CrossCheckFailed(_) | Error::NoSplittingPrime(_) | Error::FieldInsufficient(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report.value).expect("JSON values serialize"),
                Format::Table => render::table(&report.value),
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
