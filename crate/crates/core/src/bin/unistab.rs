use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use unistab::driver::{run_algorithm, RunConfig, RunError};
use unistab::fitting::{fitting_report, reduced_generators};
use unistab::generators::{gen_grassmann_instance, gen_working_example};
use unistab::io::{instance_to_json, parse_instance, quotient_record, tree_to_dot, tree_to_json, IndexRecord, InstanceFile};
use unistab::modification::{modify, Chart, ModKind};
use unistab::quotient::{check_uu, find_slice, invariant_ring, DEFAULT_BOUND, DEFAULT_BUDGET};
use unistab::{ConeInstance, CoreError};
use unistab_algebra::GbLimits;

#[derive(Parser)]
#[command(name = "unistab", version, about = "Fitting ideals, blow-up charts and quotients for graded unipotent actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on S-pairs per Groebner basis computation.
    #[arg(long, global = true, default_value_t = GbLimits::default().max_pairs)]
    max_pairs: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Subcommand)]
enum Command {
    /// Check the action axioms.
    Verify {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Presentation matrix and all Fitting ideals.
    Fitting {
        #[arg(long)]
        instance: PathBuf,
    },
    /// The index (d, e).
    Index {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Centre of a modification.
    Centre {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "type", value_enum)]
        kind: Kind,
    },
    /// Charts of one modification step.
    Modify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "type", value_enum)]
        kind: Kind,
    },
    /// Run the full algorithm and emit the chart tree.
    Run {
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Use the working example with these parameters instead of a file.
        #[arg(long, requires = "sigma")]
        rho: Option<u32>,
        #[arg(long, requires = "rho")]
        sigma: Option<u32>,
        #[arg(long, default_value_t = 1)]
        w: u32,
        #[arg(long, default_value_t = 64)]
        max_steps: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Slice and invariant ring of an instance satisfying the UU condition.
    Quotient {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        which: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// The six-variable working example.
    Working {
        #[arg(long)]
        rho: u32,
        #[arg(long)]
        sigma: u32,
        #[arg(long, default_value_t = 1)]
        w: u32,
    },
    /// A Grassmannian chart model with pinned columns.
    Grassmann {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        b: usize,
        /// Comma-separated 1-based pinned columns.
        #[arg(long, value_delimiter = ',')]
        pinned: Vec<usize>,
    },
}

enum Failure {
    Core(CoreError),
    Io(String),
    Verify(String),
    Budget(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => e.exit_code() as u8,
            Failure::Io(_) => 1,
            Failure::Verify(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn record(&self) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Core(CoreError::Precondition(m)) => ("precondition", m.clone()),
            Failure::Core(CoreError::SliceNotFound(m)) => ("slice-not-found", m.clone()),
            Failure::Core(CoreError::Internal(m)) => ("internal", m.clone()),
            Failure::Core(CoreError::InvalidInstance(m)) => ("input", m.clone()),
            Failure::Core(e) if e.exit_code() == 4 => ("resource-limit", e.to_string()),
            Failure::Core(e) => ("engine", e.to_string()),
            Failure::Io(m) => ("input", m.clone()),
            Failure::Verify(m) => ("verify", m.clone()),
            Failure::Budget(m) => ("resource-limit", m.clone()),
        };
        json!({ "error": kind, "message": message })
    }
}

fn load(path: &PathBuf, limits: GbLimits) -> Result<ConeInstance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&text, limits)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, format!("{}\n", text.trim_end())).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn kind_of(k: Kind) -> ModKind {
    match k {
        Kind::I => ModKind::I,
        Kind::II => ModKind::II,
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let limits = GbLimits { max_pairs: cli.max_pairs, ..GbLimits::default() };
    let out = &cli.out;
    match cli.command {
        Command::Verify { instance } => {
            let inst = load(&instance, limits)?;
            let report = inst.verify_action()?;
            emit(out, &report.to_string())?;
            if !report.passed() {
                let names: Vec<&str> = report.failures().map(|c| c.axiom).collect();
                return Err(Failure::Verify(format!("failed axioms: {}", names.join(", "))));
            }
        }
        Command::Fitting { instance } => {
            let inst = load(&instance, limits)?;
            let rep = fitting_report(&inst)?;
            let table = inst.table();
            let mut fits = Vec::new();
            for f in &rep.fitting {
                fits.push(reduced_generators(&inst, f)?.iter().map(|g| g.to_string()).collect::<Vec<_>>());
            }
            let matrix: Vec<Vec<String>> =
                (0..rep.matrix.rows()).map(|i| rep.matrix.row(i).iter().map(|p| p.to_string()).collect()).collect();
            let v = json!({
                "rows": rep.rows.iter().map(|&j| table.name(j)).collect::<Vec<_>>(),
                "matrix": matrix,
                "fitting": fits,
                "index": IndexRecord::from(rep.index),
            });
            emit(out, &pretty(&v))?;
        }
        Command::Index { instance } => {
            let inst = load(&instance, limits)?;
            let rep = fitting_report(&inst)?;
            emit(out, &serde_json::to_string(&IndexRecord::from(rep.index)).expect("serialisable"))?;
        }
        Command::Centre { instance, kind } => {
            let inst = load(&instance, limits)?;
            let centre = match kind_of(kind) {
                ModKind::I => unistab::modification::centre_mod_i(&inst)?,
                ModKind::II => unistab::modification::centre_mod_ii(&inst)?,
            };
            for w in &centre.warnings {
                eprintln!("warning: {w}");
            }
            let v = json!({
                "kind": centre.kind.to_string(),
                "generators": centre.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "min_degree": centre.min_degree,
                "warnings": centre.warnings,
            });
            emit(out, &pretty(&v))?;
        }
        Command::Modify { instance, kind } => {
            let inst = load(&instance, limits)?;
            let root = Chart::root(inst);
            let (centre, charts) = modify(&root, kind_of(kind))?;
            for w in &centre.warnings {
                eprintln!("warning: {w}");
            }
            let charts: Vec<_> = charts
                .iter()
                .map(|c| {
                    json!({
                        "label": c.label,
                        "identity": c.identity,
                        "denominator": c.denominator.as_ref().map(|f| f.to_string()),
                        "embedding": c.embedding.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "instance": InstanceFile::from_instance(&c.instance),
                    })
                })
                .collect();
            emit(out, &pretty(&json!({ "charts": charts })))?;
        }
        Command::Run { instance, rho, sigma, w, max_steps, seed, budget, bound, format } => {
            let inst = match (rho, sigma, instance) {
                (Some(rho), Some(sigma), _) => gen_working_example(rho, sigma, w)?,
                (_, _, Some(path)) => load(&path, limits)?,
                _ => return Err(Failure::Io("either --instance or --rho/--sigma is required".into())),
            };
            let report = inst.verify_action()?;
            if !report.passed() {
                return Err(Failure::Verify(report.to_string()));
            }
            let cfg = RunConfig { max_steps, limits, seed, budget, bound };
            let (tree, budget_hit) = match run_algorithm(&inst, &cfg) {
                Ok(t) => (t, false),
                Err(RunError::Budget(t)) => (*t, true),
                Err(RunError::Engine(e)) => return Err(e.into()),
            };
            let text = match format {
                Format::Json => tree_to_json(&tree),
                Format::Dot => tree_to_dot(&tree),
            };
            emit(out, &text)?;
            if budget_hit {
                return Err(Failure::Budget(format!("step budget of {max_steps} exhausted; partial tree written")));
            }
        }
        Command::Quotient { instance, seed, budget, bound } => {
            let inst = load(&instance, limits)?;
            if !check_uu(&inst)? {
                return Err(CoreError::Precondition("the UU condition fails".into()).into());
            }
            let slice = find_slice(&inst, seed, budget)?;
            let q = invariant_ring(&inst, &slice, bound)?;
            let rec = quotient_record(&q, |p| p.to_string());
            emit(out, &serde_json::to_string_pretty(&rec).expect("serialisable"))?;
        }
        Command::Gen { which } => {
            let inst = match which {
                GenKind::Working { rho, sigma, w } => gen_working_example(rho, sigma, w)?,
                GenKind::Grassmann { r, b, pinned } => gen_grassmann_instance(r, b, &pinned)?,
            };
            emit(out, &instance_to_json(&inst))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", serde_json::to_string(&f.record()).expect("serialisable"));
            ExitCode::from(f.code())
        }
    }
}
