mod document;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use document::{
    bipartite_from_payload, ChannelPayload, CorrelationsPayload, Payload, ReportPayload,
    StatePayload,
};
use tempcompat::ensembles::{bloch_cloud, BlochStage};
use tempcompat::operators::Side;
use tempcompat::sot::{correlations_from_process, pdm_from_correlations};
use tempcompat::temporal::{certify, temporal_channel};
use tempcompat::Tolerances;

/// Temporal compatibility of bipartite quantum states.
///
/// Reads JSON documents (`state`, `channel`, `ensemble`, `correlations`,
/// `process`) and decides whether a state arises as a state over time of a
/// CPTP channel in either direction.
#[derive(Parser, Debug)]
#[command(name = "tempcompat", version, about, long_about, term_width = 80)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Absolute eigenvalue tolerance for compatibility verdicts
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for sampled output (bloch)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Machine-readable output
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Human-readable output
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// certify a state (or ensemble) in both directions; exit 0 compatible, 2 incompatible, 1 bad input
    Certify(CertifyArgs),

    /// write the temporal channel of a state as a channel document
    Channel(ChannelArgs),

    /// build the pseudo-density matrix of a Pauli correlation table
    Pdm(IoArgs),

    /// tabulate two-time Pauli correlations of a qubit process
    Expect(ExpectArgs),

    /// export Bloch vectors of sampled qubit states through the dephasing or temporal channel
    Bloch(BlochArgs),
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// State or ensemble document
    #[arg(required_unless_present = "dir", conflicts_with = "dir")]
    input: Option<PathBuf>,

    /// Certify every `*.json` file in a directory
    #[arg(long)]
    dir: Option<PathBuf>,

    /// Also write the report document here (single input only)
    #[arg(long, conflicts_with = "dir")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IoArgs {
    input: PathBuf,

    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Conditioning factor; `B` gives the channel from B to A
    #[arg(long, value_enum, default_value = "A")]
    side: SideArg,
}

#[derive(Args, Debug)]
struct ExpectArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Number of qubits on each side
    #[arg(long)]
    m: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StageArg {
    Input,
    Dephased,
    Output,
}

impl From<StageArg> for BlochStage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::Input => BlochStage::Input,
            StageArg::Dephased => BlochStage::Dephased,
            StageArg::Output => BlochStage::Output,
        }
    }
}

#[derive(Args, Debug)]
struct BlochArgs {
    #[command(flatten)]
    io: IoArgs,

    #[arg(long, value_enum, default_value = "output")]
    stage: StageArg,

    /// Number of sampled pure states; the six axis states come first
    #[arg(long, default_value_t = 500)]
    samples: usize,
}

fn tolerances(g: &GlobalArgs) -> Result<Tolerances> {
    if !(g.tol.is_finite() && g.tol > 0.0) {
        bail!("--tol must be a positive number, got {}", g.tol);
    }
    Ok(Tolerances::with_verdict(g.tol))
}

fn read_payload(path: &Path) -> Result<Payload> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Payload::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn certify_file(path: &Path, tol: &Tolerances) -> Result<ReportPayload> {
    let payload = read_payload(path)?;
    let tau =
        bipartite_from_payload(&payload, tol).with_context(|| format!("in {}", path.display()))?;
    let cert = certify(&tau, tol).with_context(|| format!("in {}", path.display()))?;
    Ok(ReportPayload::from_certificate(
        &cert,
        tol,
        Some(path.display().to_string()),
    ))
}

fn report_text(r: &ReportPayload) -> String {
    let mut s = String::new();
    if let Some(source) = &r.source {
        let _ = writeln!(s, "{source}");
    }
    for side in &r.reports {
        let _ = writeln!(
            s,
            "  {}: {}{} (test min {:.6e}, choi min {:.6e}, reconstruction {:.1e}{})",
            side.direction,
            if side.compatible {
                "compatible"
            } else {
                "incompatible"
            },
            if side.boundary { ", near boundary" } else { "" },
            side.test_min_eigenvalue,
            side.choi_min_eigenvalue,
            side.reconstruction_residual,
            if side.faithful_marginal {
                ""
            } else {
                ", singular marginal"
            },
        );
    }
    let _ = writeln!(
        s,
        "  ppt: {} (min eigenvalue {:.6e})",
        r.ppt, r.ppt_min_eigenvalue
    );
    s
}

fn run_certify(args: &CertifyArgs, g: &GlobalArgs) -> Result<u8> {
    let tol = tolerances(g)?;
    let Some(dir) = &args.dir else {
        let input = args.input.as_deref().expect("clap requires input or --dir");
        let report = certify_file(input, &tol)?;
        let doc = Payload::Report(report.clone()).to_json();
        if let Some(out) = &args.out {
            emit(&doc, Some(out))?;
        }
        if g.json {
            print!("{doc}");
        } else {
            print!("{}", report_text(&report));
        }
        return Ok(report.exit_code());
    };

    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();

    let results: Vec<Result<ReportPayload>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| scope.spawn(|| certify_file(f, &tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });

    let mut code = 0u8;
    let mut reports = Vec::new();
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(report) => {
                if code != 1 {
                    code = code.max(report.exit_code());
                }
                if !g.json {
                    print!("{}", report_text(&report));
                }
                reports.push(serde_json::to_value(&report)?);
            }
            Err(e) => {
                code = 1;
                eprintln!("error: {}: {e:#}", file.display());
            }
        }
    }
    if g.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    }
    Ok(code)
}

fn run_channel(args: &ChannelArgs, g: &GlobalArgs) -> Result<u8> {
    let tol = tolerances(g)?;
    let payload = read_payload(&args.io.input)?;
    let tau = bipartite_from_payload(&payload, &tol)?;
    let e = temporal_channel(&tau, args.side.into(), &tol)?;
    let diagnostics = e.is_cptp(&tol)?;
    let doc = Payload::Channel(ChannelPayload::from_channel(&e, Some(diagnostics))).to_json();
    emit(&doc, args.io.out.as_deref())?;
    Ok(0)
}

fn run_pdm(args: &IoArgs, g: &GlobalArgs) -> Result<u8> {
    let tol = tolerances(g)?;
    let Payload::Correlations(table) = read_payload(&args.input)? else {
        bail!("expected a correlations document");
    };
    let pdm = pdm_from_correlations(&table.to_table(&tol)?)?;
    emit(
        &Payload::State(StatePayload::from_operator(&pdm)).to_json(),
        args.out.as_deref(),
    )?;
    Ok(0)
}

fn run_expect(args: &ExpectArgs, g: &GlobalArgs) -> Result<u8> {
    let tol = tolerances(g)?;
    let Payload::Process(process) = read_payload(&args.io.input)? else {
        bail!("expected a process document");
    };
    let table = correlations_from_process(&process.to_process(&tol)?, args.m, &tol)?;
    let doc = Payload::Correlations(CorrelationsPayload::from_table(&table)).to_json();
    emit(&doc, args.io.out.as_deref())?;
    Ok(0)
}

fn run_bloch(args: &BlochArgs, g: &GlobalArgs) -> Result<u8> {
    let tol = tolerances(g)?;
    let payload = read_payload(&args.io.input)?;
    let tau = bipartite_from_payload(&payload, &tol)?;
    let points = bloch_cloud(&tau, args.stage.into(), args.samples, g.seed, &tol)?;
    let text = if g.json {
        let mut s = serde_json::to_string(&points)?;
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for [x, y, z] in &points {
            let _ = writeln!(s, "{x},{y},{z}");
        }
        s
    };
    emit(&text, args.io.out.as_deref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Certify(args) => run_certify(args, g),
        Command::Channel(args) => run_channel(args, g),
        Command::Pdm(args) => run_pdm(args, g),
        Command::Expect(args) => run_expect(args, g),
        Command::Bloch(args) => run_bloch(args, g),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
