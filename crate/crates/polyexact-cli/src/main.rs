use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyexact::dancing_links::{format_solution, parse_set_partition, solve_and_reduce, DlxMatrix, Milp, RowSelection, SearchResult};
use polyexact::error::{Error, Result};
use polyexact::handelman::{handelman_bound, handelman_decompose_escalating};
use polyexact::integrate::{integrate_polynomial_jobs, Method};
use polyexact::knapsack::{
    coset_polynomials, evaluate_topk, format_univariate, top_coefficients_jobs, KnapsackList, TopKQuasiPolynomial,
};
use polyexact::optimize::{continuous_bounds, discrete_bounds_box};
use polyexact::polyhedra::{parse_hrep, Polytope};
use polyexact::polynomial::{parse_polynomial, SparsePolynomial};
use polyexact::scalar::{fmt_rational, to_decimal};
use polyexact::Q;

const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

/// Exact rational integration, polynomial bounds, knapsack quasi-polynomials and
/// set-partition search.
#[derive(Parser)]
#[command(name = "polyexact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the parallel reductions; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed echoed in diagnostics; no result depends on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print diagnostics to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PolytopeArgs {
    /// H-representation file (`m d+1`, then rows `b -a_1 ... -a_d`).
    #[arg(long)]
    polytope: PathBuf,
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial file in the list format `[[c,[e_1,...,e_d]],...]`.
    #[arg(long)]
    poly: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Triangulate,
    Cone,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Triangulate => Method::Triangulation,
            MethodArg::Cone => Method::ConeDecomposition,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    First,
    Fewest,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a polynomial over a polytope.
    Integrate {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_enum, default_value = "triangulate")]
        method: MethodArg,
        /// Append a decimal column with this many digits.
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Volume of a polytope.
    Volume {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[arg(long, value_enum, default_value = "triangulate")]
        method: MethodArg,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Handelman decomposition of `f + s`, or the Handelman upper bound on `f`.
    Handelman {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[command(flatten)]
        poly: PolyArgs,
        /// Degree of the products of facet polynomials (default: degree of f).
        #[arg(long, short = 't')]
        degree: Option<u32>,
        /// Largest degree tried when the first one is infeasible.
        #[arg(long, default_value_t = 4)]
        escalate: u32,
        /// Print `min{λ : λ - f has a decomposition}` instead of a decomposition.
        #[arg(long)]
        bound: bool,
    },
    /// Lower and upper bounds on the maximum of f from the k-th power integral or sum.
    Bounds {
        #[command(flatten)]
        polytope: PolytopeArgs,
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short)]
        k: u32,
        /// Sum over the lattice points of a box instead of integrating.
        #[arg(long)]
        discrete: bool,
        #[arg(long, default_value_t = 10)]
        digits: u32,
    },
    /// Top k+1 coefficients of the denumerant quasi-polynomial as step polynomials.
    Topk {
        #[arg(long)]
        knapsack: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Evaluate a top-k quasi-polynomial at t.
    Evaluate {
        /// Output of `topk`.
        #[arg(long, conflicts_with = "knapsack")]
        topk: Option<PathBuf>,
        /// Knapsack file; the full quasi-polynomial (k = N) is computed.
        #[arg(long)]
        knapsack: Option<PathBuf>,
        /// Values of t, as numbers or ranges `a..b` (inclusive).
        #[arg(short, required = true, num_args = 1..)]
        t: Vec<String>,
    },
    /// The polynomial on each residue class of t modulo the period.
    CosetPolys {
        #[arg(long)]
        knapsack: PathBuf,
    },
    /// Solve a set-partition system, or fix the partition block of a MILP.
    Dlx {
        /// Set-partition file: `R V`, then one row of variable ids per line.
        #[arg(long, required_unless_present = "milp", conflicts_with = "milp")]
        file: Option<PathBuf>,
        /// MILP file; prints the reduced MILP after fixing its partition variables.
        #[arg(long)]
        milp: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "fewest")]
        policy: PolicyArg,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_polytope(args: &PolytopeArgs) -> Result<Polytope> {
    parse_hrep(&read(&args.polytope)?)
}

fn load_poly(args: &PolyArgs, dim: usize) -> Result<SparsePolynomial<Q>> {
    parse_polynomial(&read(&args.poly)?, Some(dim))
}

fn value_line(q: &Q, decimal: Option<usize>) -> String {
    match decimal {
        Some(d) => format!("{} {}\n", fmt_rational(q), to_decimal(q, d)),
        None => format!("{}\n", fmt_rational(q)),
    }
}

fn parse_t_values(items: &[String]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in items {
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad value of t: {s:?}")));
        match item.split_once("..") {
            Some((a, b)) => out.extend(num(a)?..=num(b)?),
            None => out.push(num(item)?),
        }
    }
    Ok(out)
}

/// The outcome of a command: its text and whether it reports infeasibility.
struct Outcome {
    text: String,
    infeasible: bool,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, infeasible: false }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let jobs = cli.jobs.max(1);
    if cli.verbose {
        eprintln!("seed {} jobs {jobs}", cli.seed);
    }
    let out = match &cli.command {
        Command::Integrate { polytope, poly, method, decimal } => {
            let p = load_polytope(polytope)?;
            let f = load_poly(poly, p.dim())?;
            let r = integrate_polynomial_jobs(&p, &f, (*method).into(), jobs)?;
            if cli.verbose {
                eprintln!("terms {}", r.term_count);
            }
            value_line(&r.value, *decimal)
        }
        Command::Volume { polytope, method, decimal } => {
            let p = load_polytope(polytope)?;
            let one = SparsePolynomial::constant(p.dim(), Q::from_integer(1.into()));
            value_line(&integrate_polynomial_jobs(&p, &one, (*method).into(), jobs)?.value, *decimal)
        }
        Command::Handelman { polytope, poly, degree, escalate, bound } => {
            let p = load_polytope(polytope)?;
            let f = load_poly(poly, p.dim())?;
            let t = degree.unwrap_or_else(|| f.degree().max(1));
            if *bound {
                match handelman_bound(&f, &p, t)? {
                    Some(v) => format!("bound {}\n", fmt_rational(&v)),
                    None => "bound inf\n".to_string(),
                }
            } else {
                let dec = handelman_decompose_escalating(&f, &p, t, t + escalate)?;
                let mut s = format!("degree {}\nshift {}\n", dec.degree, fmt_rational(&dec.shift));
                for (alpha, c) in &dec.terms {
                    let exps: Vec<String> = alpha.iter().map(u32::to_string).collect();
                    s.push_str(&format!("term [{}] {}\n", exps.join(","), fmt_rational(c)));
                }
                s
            }
        }
        Command::Bounds { polytope, poly, k, discrete, digits } => {
            let p = load_polytope(polytope)?;
            let f = load_poly(poly, p.dim())?;
            let (lower, upper, note) = if *discrete {
                let b = discrete_bounds_box(&f, &p, *k)?;
                let note = match b.certified_integer_max() {
                    Some(m) => format!("integer max {m}\n"),
                    None => String::new(),
                };
                (b.lower, b.upper, note)
            } else {
                let b = continuous_bounds(&f, &p, *k)?;
                let mut note = format!("k0 {}\n", b.k0);
                if u64::from(*k) < b.k0 {
                    note.push_str("warning: k < k0, the upper bound is not certified\n");
                }
                (b.lower, b.upper, note)
            };
            format!(
                "k {k}\nlower {} {}\nupper {} {}\n{note}",
                lower,
                lower.to_decimal(*digits),
                upper,
                upper.to_decimal(*digits)
            )
        }
        Command::Topk { knapsack, k } => {
            let kl = KnapsackList::parse(&read(knapsack)?)?;
            top_coefficients_jobs(&kl, *k, jobs)?.to_string()
        }
        Command::Evaluate { topk, knapsack, t } => {
            let q = match (topk, knapsack) {
                (Some(path), _) => TopKQuasiPolynomial::parse(&read(path)?)?,
                (None, Some(path)) => {
                    let kl = KnapsackList::parse(&read(path)?)?;
                    top_coefficients_jobs(&kl, kl.degree(), jobs)?
                }
                (None, None) => return Err(Error::Parse("evaluate needs --topk or --knapsack".into())),
            };
            parse_t_values(t)?
                .into_iter()
                .map(|t| format!("{t} {}\n", fmt_rational(&evaluate_topk(&q, t))))
                .collect()
        }
        Command::CosetPolys { knapsack } => {
            let kl = KnapsackList::parse(&read(knapsack)?)?;
            let cosets = coset_polynomials(&kl)?;
            let period = cosets.len();
            cosets
                .iter()
                .enumerate()
                .map(|(c, poly)| format!("t = {c} mod {period}: {}\n", format_univariate(poly, "t")))
                .collect()
        }
        Command::Dlx { file, milp, policy } => {
            let policy = match policy {
                PolicyArg::First => RowSelection::First,
                PolicyArg::Fewest => RowSelection::FewestNodes,
            };
            if let Some(path) = milp {
                let m = Milp::parse(&read(path)?)?;
                solve_and_reduce(&m, policy)?.to_string()
            } else {
                let path = file.as_ref().expect("clap requires --file or --milp");
                let (rows, _) = parse_set_partition(&read(path)?)?;
                let mut m = DlxMatrix::build(&rows).map_err(|e| Error::Parse(e.to_string()))?;
                let (res, stats) = m.search(policy);
                if cli.verbose {
                    eprintln!("nodes {} backtracks {}", stats.nodes, stats.backtracks);
                }
                return Ok(Outcome {
                    text: format!("{}\n", format_solution(&res)),
                    infeasible: res == SearchResult::Infeasible,
                });
            }
        }
    };
    Ok(out.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::FAILURE;
            }
            if out.infeasible {
                ExitCode::from(EXIT_DOMAIN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { EXIT_PARSE } else { EXIT_DOMAIN })
        }
    }
}
