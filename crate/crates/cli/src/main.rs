use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use knotrank::alexander::{conway_potential, wirtinger_alexander};
use knotrank::algebra::CoefficientField;
use knotrank::arf::arf;
use knotrank::diagram::{parse_records, write_records, Diagram};
use knotrank::hfkalg::{delta_euler_hat, hat_ranks, theorem_to_check, UVChainComplex};
use knotrank::jones::jones;
use knotrank::khovanov::{deformed_module_with, extortion_order, khovanov_ranks_with, KhOptions};
use knotrank::scanner::{parse_report, report, scan_text, summarize, ReportFormat, ScanOptions};
use knotrank::symunion::{generate, TwistSpec};

#[derive(Parser)]
#[command(name = "knotrank", version, about = "Knot invariants and Khovanov rank surveys")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jones polynomial, determinant and V(i) per knot.
    Jones { file: PathBuf },
    /// Conway-normalized Alexander polynomial, signed determinant and a2.
    Alexander { file: PathBuf },
    /// Arf invariant by every route.
    Arf { file: PathBuf },
    /// Khovanov homology ranks.
    Kh(KhArgs),
    /// Hat ranks of a UV chain complex, or the torsion-order-one arithmetic check.
    HfkAlg(HfkArgs),
    /// Symmetric-union generation.
    Symunion {
        #[command(subcommand)]
        command: SymunionCommand,
    },
    /// Batch survey of every invariant and conjecture flag.
    Scan(ScanArgs),
    /// Re-read a report and print its summary.
    Summary {
        file: PathBuf,
        #[arg(long, default_value = "jsonl")]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct KhArgs {
    file: PathBuf,
    #[arg(long, default_value = "q")]
    field: CoefficientField,
    #[arg(long)]
    unreduced: bool,
    /// Module structure of the t = 1 deformation (reduced, odd characteristic).
    #[arg(long)]
    deformed: bool,
    /// Per-knot time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct HfkArgs {
    complex: Option<PathBuf>,
    /// det, Arf and number of unit boxes.
    #[arg(long, num_args = 3, value_names = ["DET", "ARF", "L"], allow_negative_numbers = true)]
    check_to: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum SymunionCommand {
    /// Emit seeded symmetric unions of random diagrams as `name<TAB>pd_code`.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        crossings: usize,
        #[arg(long, default_value = "1")]
        twists: TwistSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "f2,f3,f211,q")]
    fields: Vec<CoefficientField>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "jsonl")]
    format: ReportFormat,
    /// Per-knot time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    max_generators: Option<usize>,
    /// Skip the deformed module.
    #[arg(long)]
    no_deformed: bool,
    /// Record per-knot wall-clock time.
    #[arg(long)]
    timings: bool,
}

fn read_diagrams(path: &Path) -> Result<Vec<Diagram>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_records(&text)?)
}

fn name(d: &Diagram) -> &str {
    d.name().unwrap_or("")
}

fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => emit(text),
    }
}

fn cmd_jones(file: &Path) -> Result<()> {
    let mut out = String::new();
    for d in read_diagrams(file)? {
        let v = jones(&d);
        let (re, im) = v.at_minus_one();
        let det = ((re as f64).hypot(im as f64)).round() as u64;
        writeln!(out, "{}\t{}\t{det}\t{}", name(&d), v.poly, v.at_i())?;
    }
    emit(&out)
}

fn cmd_alexander(file: &Path) -> Result<()> {
    let mut out = String::new();
    for d in read_diagrams(file)? {
        match wirtinger_alexander(&d) {
            Ok(a) => {
                let a2 = conway_potential(&a).map(|c| c.a2().to_string()).unwrap_or_else(|e| format!("error: {e}"));
                writeln!(out, "{}\t{a}\t{}\t{a2}", name(&d), a.signed_det())?;
            }
            Err(e) => writeln!(out, "{}\terror: {e}", name(&d))?,
        }
    }
    emit(&out)
}

fn cmd_arf(file: &Path) -> Result<()> {
    let mut out = String::new();
    for d in read_diagrams(file)? {
        match arf(&d) {
            Ok(a) => writeln!(out, "{}\t{}\t{}\t{}", name(&d), a.value, a.route_vector(), a.consistent)?,
            Err(e) => writeln!(out, "{}\terror: {e}", name(&d))?,
        }
    }
    emit(&out)
}

fn cmd_kh(args: &KhArgs) -> Result<()> {
    let mut out = String::new();
    if args.deformed && args.unreduced {
        bail!("--deformed is only available for reduced homology");
    }
    for d in read_diagrams(&args.file)? {
        let opts = KhOptions {
            deadline: args.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s)),
            ..KhOptions::default()
        };
        let table = match khovanov_ranks_with(&d, args.field, !args.unreduced, &opts) {
            Ok(t) => t,
            Err(e) => {
                writeln!(out, "{}\terror: {e}", name(&d))?;
                continue;
            }
        };
        let total = table.total();
        let mut line = format!("{}\t{total}\t{}\t{}\t{}", name(&d), total % 4, total % 8, table.to_json());
        if args.deformed {
            match deformed_module_with(&d, args.field, true, &opts) {
                Ok(m) => {
                    let orders = serde_json::to_string(&m.torsion_orders())?;
                    line.push_str(&format!("\t{}\t{orders}\t{}", m.free_rank, extortion_order(&m)));
                }
                Err(e) => line.push_str(&format!("\terror: {e}")),
            }
        }
        writeln!(out, "{line}")?;
    }
    emit(&out)
}

fn cmd_hfk(args: &HfkArgs) -> Result<()> {
    let mut out = String::new();
    if let Some(v) = &args.check_to {
        let (det, arf, l) = (v[0], v[1], v[2]);
        if !(arf == 0 || arf == 1) || l < 0 {
            bail!("--check-to expects DET, ARF in {{0,1}} and L >= 0");
        }
        let verdict = theorem_to_check(det, arf as u8, &vec![None; l as usize]);
        writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
        writeln!(out, "{}", if verdict.consistent { "consistent" } else { "inconsistent" })?;
        return emit(&out);
    }
    let Some(path) = &args.complex else {
        bail!("give a complex file or --check-to DET ARF L");
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = UVChainComplex::parse(&text)?;
    let t = hat_ranks(&c)?;
    writeln!(out, "# gr_w\tgr_z\trank")?;
    for (&(w, z), &r) in &t.ranks {
        writeln!(out, "{w}\t{z}\t{r}")?;
    }
    writeln!(out, "# delta\trank")?;
    for (d, r) in t.by_delta()? {
        writeln!(out, "{d}\t{r}")?;
    }
    writeln!(out, "total\t{}", t.total())?;
    writeln!(out, "delta_euler\t{}", delta_euler_hat(&t)?)?;
    emit(&out)
}

fn cmd_scan(args: &ScanArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let mut opts = ScanOptions {
        fields: args.fields.clone(),
        jobs: args.jobs,
        timeout: args.timeout.map(Duration::from_secs_f64),
        deformed: !args.no_deformed,
        timings: args.timings,
        ..ScanOptions::default()
    };
    if let Some(m) = args.max_generators {
        opts.max_generators = m;
    }
    let rs = scan_text(&text, &opts)?;
    write_out(args.out.as_deref(), &report(&rs, args.format))?;
    let s = summarize(&rs);
    eprintln!("{} knots, {} aborted", s.knots, s.aborted);
    Ok(if s.aborted > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Jones { file } => cmd_jones(file)?,
        Command::Alexander { file } => cmd_alexander(file)?,
        Command::Arf { file } => cmd_arf(file)?,
        Command::Kh(a) => cmd_kh(a)?,
        Command::HfkAlg(a) => cmd_hfk(a)?,
        Command::Symunion { command: SymunionCommand::Gen { seed, count, crossings, twists, out } } => {
            if *crossings < 3 {
                bail!("--crossings must be at least 3");
            }
            let ds = generate(*seed, *count, *crossings, twists);
            write_out(out.as_deref(), &write_records(&ds))?;
        }
        Command::Scan(a) => return cmd_scan(a),
        Command::Summary { file, format } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let rs = parse_report(&text, *format)?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&summarize(&rs))?))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
