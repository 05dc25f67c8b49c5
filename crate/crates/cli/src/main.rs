use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vtqg::circuit::{count_gates, route_ring_closure, CouplingMap, GateName};
use vtqg::harness::{
    emit_results, read_results, render_summary, report_summary, results_to_string, run_experiment,
    ExperimentConfig, Mode, OutputFormat,
};
use vtqg::qpd::{
    decompose_vrzz, gamma, group_for_sampling, FragmentManifest, FragmentMode, FragmentOptions,
    QpdTerm, TermFamily, DEFAULT_MAX_CUTS,
};
use vtqg::tfim::{build_trotter_circuit, TfimParams, Variant};
use vtqg::{Error, Result};

#[derive(Parser)]
#[command(
    name = "vtqg",
    version,
    about = "Virtual two-qubit gate experiments on a transverse-field Ising ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured variants and write one record per repetition.
    Experiment(ExperimentArgs),
    /// Print the decomposition table of a virtual RZZ.
    Decompose(DecomposeArgs),
    /// Print the SWAP cost of routing the ring-closing gate on a path.
    Route(RouteArgs),
    /// Summarize a results file per (variant, qubit count).
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampling,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON configuration; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Variants to run (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    variant: Vec<Variant>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Record wall-clock time per variant (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Angle θ of the virtual gate exp(+iθ/2 Z⊗Z).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.787)]
    theta: f64,
    /// Print the six grouped instruments instead of the ten terms.
    #[arg(long)]
    grouped: bool,
    /// Also write to --manifest the fragments of the default-parameter Ising
    /// ring on this many qubits.
    #[arg(long, requires = "manifest")]
    qubits: Option<usize>,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct RouteArgs {
    /// Ring sizes (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    qubits: Vec<usize>,
    /// Coupling map JSON (`{"n": .., "edges": [[a, b], ..]}`); a path by default.
    #[arg(long)]
    coupling: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Results file written by `experiment` (CSV or JSON).
    input: PathBuf,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(p) => {
            ExperimentConfig::from_json(&read_file(p)?).map_err(|e| e.context(p.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if !args.variant.is_empty() {
        config.variants = args.variant;
    }
    if let Some(n) = args.qubits {
        config.params.n_qubits = n;
    }
    if let Some(m) = args.mode {
        config.mode = match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampling => Mode::Sampling,
        };
    }
    if let Some(s) = args.shots {
        config.shots = s;
    }
    if let Some(r) = args.reps {
        config.repetitions = r;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.record_timing |= args.timing;
    config.validate()?;

    let records = run_experiment(&config)?;
    let format = args.format.into();
    match &args.out {
        Some(path) => {
            emit_results(&records, format, path)?;
            eprint!("{}", render_summary(&report_summary(&records)));
        }
        None => print!("{}", results_to_string(&records, format)?),
    }
    Ok(())
}

fn family_label(t: &QpdTerm) -> (String, String, String) {
    let sign = |s: vtqg::sim::Sign| if s.value() > 0.0 { "+1" } else { "-1" }.to_string();
    match t.family {
        TermFamily::II => ("II".into(), "".into(), "".into()),
        TermFamily::ZZ => ("ZZ".into(), "".into(), "".into()),
        TermFamily::ProjRot { alpha_a, alpha_b } => {
            ("PROJ_ROT".into(), sign(alpha_a), sign(alpha_b))
        }
        TermFamily::RotProj { alpha_a, alpha_b } => {
            ("ROT_PROJ".into(), sign(alpha_a), sign(alpha_b))
        }
    }
}

fn decompose(args: DecomposeArgs) -> Result<()> {
    let terms = decompose_vrzz(args.theta)?;
    if args.grouped {
        println!(
            "{:<3} {:<9} {:>8} {:>12}",
            "#", "kind", "rotation", "weight"
        );
        for (i, g) in group_for_sampling(&terms)?.iter().enumerate() {
            let kind = serde_json::to_value(g.kind).map(|v| v.as_str().unwrap_or("").to_string());
            let rot = g
                .rotation
                .map_or(String::new(), |s| format!("{:+}", s.value()));
            println!(
                "{:<3} {:<9} {:>8} {:>12.9}",
                i,
                kind.unwrap_or_default(),
                rot,
                g.weight
            );
        }
    } else {
        println!(
            "{:<3} {:<9} {:>3} {:>3} {:>13} {:>12}",
            "#", "family", "a_a", "a_b", "coefficient", "weight"
        );
        for (i, t) in terms.iter().enumerate() {
            let (fam, a, b) = family_label(t);
            println!(
                "{:<3} {:<9} {:>3} {:>3} {:>13.9} {:>12.9}",
                i,
                fam,
                a,
                b,
                t.coefficient,
                t.executable_weight()
            );
        }
    }
    println!("gamma {:.9}", gamma(args.theta));

    if let (Some(n), Some(path)) = (args.qubits, &args.manifest) {
        let params = TfimParams {
            n_qubits: n,
            n_steps: args.steps,
            ..Default::default()
        };
        let mode = if args.grouped {
            FragmentMode::Grouped
        } else {
            FragmentMode::Enumerated
        };
        let built = build_trotter_circuit(&params, Variant::Vtqg, DEFAULT_MAX_CUTS)?;
        let fragments = built.fragments(FragmentOptions {
            mode,
            ..Default::default()
        })?;
        let cut = built.cut.as_ref().expect("virtual variant has a cut");
        let manifest = FragmentManifest::new(cut, mode, &fragments);
        fs::write(path, manifest.to_json()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        println!("wrote {} fragments to {}", fragments.len(), path.display());
    }
    Ok(())
}

fn route(args: RouteArgs) -> Result<()> {
    let coupling = match &args.coupling {
        Some(p) => {
            Some(CouplingMap::from_json(&read_file(p)?).map_err(|e| e.context(p.display()))?)
        }
        None => None,
    };
    println!("n_qubits,swaps,cnot_equivalents,layout");
    for &n in &args.qubits {
        let map = coupling.clone().unwrap_or_else(|| CouplingMap::path(n));
        let (c, layout) = route_ring_closure(n, &map, 0.0)?;
        let counts = count_gates(&c);
        let layout: Vec<String> = layout.as_slice().iter().map(|p| p.to_string()).collect();
        println!(
            "{n},{},{},{}",
            counts.get(GateName::Swap),
            counts.swap_cnot_equivalents,
            layout.join(" ")
        );
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let rows = report_summary(&read_results(&args.input)?);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        print!("{}", render_summary(&rows));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Experiment(a) => experiment(a),
        Command::Decompose(a) => decompose(a),
        Command::Route(a) => route(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
