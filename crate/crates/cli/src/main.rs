mod files;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use contactkit::bracket::{
    is_anticommutative, is_contact, is_lie, is_poisson, jacobi_check, yoyo_check, CheckBudget, IdentityReport,
};
use contactkit::spaces::{der, gder, kminus, kplus};
use contactkit::tensorext::{
    cartan_tensor_experiment, extension_feasibility_x2, mz_algebra, mz_counterexample, theorem2_experiment, CartanKind,
};
use contactkit::{Field, FiniteAlgebra};
use serde::Serialize;

use report::*;

/// Exact computations with contact and Poisson brackets on finite-dimensional
/// commutative algebras.
///
/// Exit status: 0 on success (for `experiment`, when the known outcome is
/// reproduced), 1 when an experiment does not reproduce it, 2 on invalid
/// input or a failed precondition.
#[derive(Debug, Parser)]
#[command(name = "contactkit", version)]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions (and optionally bases) of bracket and operator spaces.
    Spaces {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Include a basis in the report.
        #[arg(long)]
        basis: bool,
    },
    /// Check identities of a bracket.
    Check {
        /// Algebra file; optional when the bracket file names its algebra.
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        bracket: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "contact")]
        props: Vec<Prop>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run one of the built-in experiments.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCmd,
    },
    /// Can the bracket be extended over `A ⊗ K[x]/(x²)` together with φ?
    Extend {
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        bracket: PathBuf,
    },
    /// Write a built-in bracket as `algebra.json` and `bracket.json`.
    Export {
        #[arg(long, value_enum)]
        builtin: Builtin,
        /// Characteristic for the Cartan types; the field for `mz` (rationals if omitted).
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    W1,
    H2,
    K3,
    /// `[x, y] = xy` on `K[x,y]/(x², y²)`.
    Mz,
}

#[derive(Debug, Subcommand)]
enum ExperimentCmd {
    /// The Poisson bracket `[x,y] = xy` on `K[x,y]/(x²,y²)` that does not extend.
    Mz {
        /// Work over `F_p` instead of the rationals.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Product bracket of two Cartan-type brackets.
    Cartan {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Extension of two Cartan-type presentations to the tensor product.
    Theorem2 {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long)]
    left: CartanKind,
    #[arg(long)]
    right: CartanKind,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Random samples when the algebra is too large for an exhaustive check.
    #[arg(long, visible_alias = "budget", default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Exhaustive checks up to this dimension.
    #[arg(long, default_value_t = 64)]
    exhaustive_max_dim: usize,
}

impl BudgetArgs {
    fn budget(&self) -> CheckBudget {
        CheckBudget {
            samples: self.samples,
            seed: self.seed,
            exhaustive_max_dim: self.exhaustive_max_dim,
            ..CheckBudget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Kminus,
    Kplus,
    Der,
    Gder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Contact,
    Jacobi,
    Lie,
    Poisson,
    Anticomm,
    /// `[ab,c] = [a,c]b + [b,c]a - [1,c]ab` alone.
    Yoyo,
}

/// Outcome of a command: the rendered report and whether it reproduced the
/// expected result.
struct Outcome {
    text: String,
    json: String,
    ok: bool,
}

fn outcome<T: Serialize>(budget: &CheckBudget, body: T, text: String, ok: bool) -> Result<Outcome> {
    let report = Report {
        command: std::env::args().skip(1).collect(),
        config: Config::from(budget),
        body,
    };
    Ok(Outcome {
        text,
        json: serde_json::to_string_pretty(&report)?,
        ok,
    })
}

fn header(a: &FiniteAlgebra) -> String {
    format!("algebra: dim {} over {} (basis {})\n", a.dim(), a.field(), a.labels().join(", "))
}

fn cmd_spaces(algebra: &PathBuf, which: Which, with_basis: bool) -> Result<Outcome> {
    let a = files::load_algebra(algebra)?;
    let name = format!("{which:?}").to_lowercase();
    let mut text = header(&a);
    let (dim, basis) = match which {
        Which::Kminus | Which::Kplus => {
            let s = if which == Which::Kminus { kminus(&a)? } else { kplus(&a)? };
            let basis = with_basis.then(|| s.basis());
            if let Some(b) = &basis {
                for (n, br) in b.iter().enumerate() {
                    text += &format!("basis {n}:\n{}", bracket_table(br, "  "));
                }
            }
            (s.dim(), basis.map(|b| Basis::Brackets(b.iter().map(|br| br.entries()).collect())))
        }
        Which::Der | Which::Gder => {
            let s = if which == Which::Der { der(&a)? } else { gder(&a)? };
            let basis = with_basis.then(|| s.basis());
            if let Some(b) = &basis {
                for (n, op) in b.iter().enumerate() {
                    text += &format!("basis {n}:\n{}", operator_table(op, "  "));
                }
            }
            (s.dim(), basis.map(|b| Basis::Operators(b.iter().map(op_entries).collect())))
        }
    };
    text = format!("{text}dim {name} = {dim}\n");
    let body = SpacesBody {
        algebra: AlgebraSummary::of(&a),
        which: name,
        dim,
        basis,
    };
    outcome(&CheckBudget::default(), body, text, true)
}

fn cmd_check(algebra: Option<&PathBuf>, bracket: &PathBuf, props: &[Prop], budget: &CheckBudget) -> Result<Outcome> {
    let (a, br) = files::load_bracket(bracket, algebra.map(PathBuf::as_path))?;
    let mut seen = Vec::new();
    let results: Vec<IdentityReport> = props
        .iter()
        .filter(|p| {
            let new = !seen.contains(*p);
            seen.push(**p);
            new
        })
        .map(|p| {
            let mut r = match p {
                Prop::Contact => is_contact(&br, budget),
                Prop::Jacobi => jacobi_check(&br, budget),
                Prop::Lie => is_lie(&br, budget),
                Prop::Poisson => is_poisson(&br, budget),
                Prop::Anticomm => is_anticommutative(&br),
                Prop::Yoyo => yoyo_check(&br, budget),
            };
            r.property = format!("{p:?}").to_lowercase();
            r
        })
        .collect();
    let mut text = header(&a);
    for r in &results {
        text += &identity_line(r);
        text.push('\n');
    }
    let body = CheckBody {
        algebra: AlgebraSummary::of(&a),
        results,
    };
    outcome(budget, body, text, true)
}

fn cmd_mz(p: Option<u64>) -> Result<Outcome> {
    let field = match p {
        Some(p) => Field::prime(p)?,
        None => Field::Rationals,
    };
    let r = mz_counterexample(field)?;
    let a = &r.algebra;
    let expression: Vec<String> = r.expression.iter().map(|e| element(a, e)).collect();
    let ext = &r.extension;
    let mut text = format!("[x, y] = xy on K[x,y]/(x², y²) over {field}\n");
    text += &format!("poisson: {}\n", r.is_poisson);
    text += &format!("dim Der = {}\n", r.der_basis.len());
    for (d, e) in r.der_basis.iter().zip(&expression) {
        let images = operator_table(d, "").trim_end().replace('\n', ", ");
        text += &format!("  D: {images}  =>  fy + gx - [f,y] + [g,x] = {e}\n");
    }
    text += &format!("target [x, y] = {}\n", element(a, &r.target));
    text += &format!(
        "extension: {}\n",
        if ext.feasible { "feasible" } else { "infeasible" }
    );
    if let Some(c) = &ext.certificate {
        text += &format!(
            "certificate ({}): {}\n",
            if ext.certificate_verified { "verified" } else { "NOT verified" },
            scalars(c)
        );
    }
    text += &format!(
        "brute force: {} of {} candidates satisfy Jacobi\n",
        r.brute_force.jacobi_hits, r.brute_force.candidates
    );
    text += &format!("zero bracket extends: {}\n", r.zero_bracket_feasible);
    let ok = r.reproduced();
    text += &format!("reproduced: {ok}\n");
    let body = Experiment {
        experiment: "mz",
        report: MzBody {
            field,
            is_poisson: r.is_poisson.to_string(),
            dim_der: r.der_basis.len(),
            expression,
            target: element(a, &r.target),
            feasible: ext.feasible,
            certificate: ext.certificate.clone(),
            certificate_verified: ext.certificate_verified,
            poisson_encoding_agrees: ext.poisson_encoding_agrees,
            brute_force_candidates: r.brute_force.candidates,
            brute_force_hits: r.brute_force.jacobi_hits,
            zero_bracket_feasible: r.zero_bracket_feasible,
            reproduced: ok,
        },
        reproduced: Some(ok),
    };
    outcome(&CheckBudget::default(), body, text, ok)
}

fn cmd_cartan(pair: &PairArgs, budget: &CheckBudget) -> Result<Outcome> {
    let r = cartan_tensor_experiment(pair.p, pair.left, pair.right, budget)?;
    let reproduced = r.reproduced();
    let mut text = format!("{} ⊗ {} at p = {} (dim {})\n", r.left, r.right, r.p, r.dim);
    text += &format!("anticommutative: {}\n", r.anticommutative);
    text += &identity_line(&r.contact_identity);
    text.push('\n');
    text += &identity_line(&r.jacobi);
    text.push('\n');
    match (r.expected_jacobi, reproduced) {
        (Some(e), Some(ok)) => {
            text += &format!("expected Jacobi: {}; reproduced: {ok}\n", if e { "holds" } else { "fails" })
        }
        _ => text += "no known expectation for this pair\n",
    }
    let ok = reproduced.unwrap_or(true);
    let body = Experiment {
        experiment: "cartan",
        report: r,
        reproduced,
    };
    outcome(budget, body, text, ok)
}

fn cmd_theorem2(pair: &PairArgs, budget: &CheckBudget) -> Result<Outcome> {
    let r = theorem2_experiment(pair.p, pair.left, pair.right, budget)?;
    let mut text = format!("extension of {} and {} at p = {} (dim {})\n", r.left, r.right, r.p, r.dim);
    text += &format!("left {}\nright {}\n", identity_line(&r.schouten_left), identity_line(&r.schouten_right));
    text += &format!("restricts to inputs: {}\n", r.restricts_to_inputs);
    text += &format!(
        "cross terms: left {}, right {}\n",
        if r.cross_term_left { "Z_A ∧ F" } else { "none" },
        if r.cross_term_right { "Z_B ∧ D" } else { "none" }
    );
    text += &identity_line(&r.contact);
    text.push('\n');
    let ok = r.reproduced();
    let body = Experiment {
        experiment: "theorem2",
        report: r,
        reproduced: Some(ok),
    };
    outcome(budget, body, text, ok)
}

fn cmd_extend(algebra: Option<&PathBuf>, bracket: &PathBuf) -> Result<Outcome> {
    let (a, br) = files::load_bracket(bracket, algebra.map(PathBuf::as_path))?;
    let r = extension_feasibility_x2(&a, &br).context("the bracket cannot be analysed")?;
    let mut text = header(&a);
    text += &format!(
        "unknowns: {} (coordinates over Der(A)), equations: {}\n",
        r.der_basis.len(),
        r.system.rows()
    );
    if r.feasible {
        text += "feasible\n";
        if let Some(d) = &r.witness_d {
            text += &format!("witness D:\n{}", operator_table(d, "  "));
        }
        if let Some(v) = r.extension_jacobi {
            text += &format!("assembled extension, Jacobi: {v}\n");
        }
    } else {
        text += "infeasible\n";
        if let Some(c) = &r.certificate {
            text += &format!(
                "certificate ({}): {}\n",
                if r.certificate_verified { "verified" } else { "NOT verified" },
                scalars(c)
            );
        }
    }
    let body = ExtendBody {
        algebra: AlgebraSummary::of(&a),
        feasible: r.feasible,
        dim_der: r.der_basis.len(),
        equations: r.system.rows(),
        witness_d: r.witness_d.as_ref().map(op_entries),
        certificate: r.certificate.clone(),
        certificate_verified: r.certificate_verified,
        extension_jacobi: r.extension_jacobi.map(|v| v.to_string()),
    };
    outcome(&CheckBudget::default(), body, text, true)
}

fn cmd_export(builtin: Builtin, p: Option<u64>, out_dir: &PathBuf) -> Result<Outcome> {
    let (a, br) = match builtin {
        Builtin::Mz => {
            let field = p.map(Field::prime).transpose()?.unwrap_or(Field::Rationals);
            mz_algebra(field)?
        }
        _ => {
            let kind = match builtin {
                Builtin::W1 => CartanKind::W1,
                Builtin::H2 => CartanKind::H2,
                _ => CartanKind::K3,
            };
            let a = kind.algebra(p.unwrap_or(3))?;
            let br = kind.form(&a)?.bracket();
            (a, br)
        }
    };
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let alg_path = out_dir.join("algebra.json");
    let br_path = out_dir.join("bracket.json");
    let alg_file = files::AlgebraFile::explicit(&a);
    let br_file = files::BracketFile::from_bracket(&br, Some(files::AlgebraRef::Path("algebra.json".into())));
    std::fs::write(&alg_path, serde_json::to_string_pretty(&alg_file)? + "\n")?;
    std::fs::write(&br_path, serde_json::to_string_pretty(&br_file)? + "\n")?;
    let text = format!("{}wrote {} and {}\n", header(&a), alg_path.display(), br_path.display());
    let body = ExportBody {
        algebra: AlgebraSummary::of(&a),
        files: vec![alg_path.display().to_string(), br_path.display().to_string()],
    };
    outcome(&CheckBudget::default(), body, text, true)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CONTACTKIT_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("CONTACTKIT_THREADS={v:?} is not a count"))?;
        if n == 0 {
            bail!("CONTACTKIT_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    configure_threads()?;
    match &cli.command {
        Command::Spaces { algebra, which, basis } => cmd_spaces(algebra, *which, *basis),
        Command::Check {
            algebra,
            bracket,
            props,
            budget,
        } => cmd_check(algebra.as_ref(), bracket, props, &budget.budget()),
        Command::Experiment { which } => match which {
            ExperimentCmd::Mz { p } => cmd_mz(*p),
            ExperimentCmd::Cartan { pair, budget } => cmd_cartan(pair, &budget.budget()),
            ExperimentCmd::Theorem2 { pair, budget } => cmd_theorem2(pair, &budget.budget()),
        },
        Command::Extend { algebra, bracket } => cmd_extend(algebra.as_ref(), bracket),
        Command::Export { builtin, p, out_dir } => cmd_export(*builtin, *p, out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
