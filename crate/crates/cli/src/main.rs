use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dnacam::bits::parse_bits;
use dnacam::detector::{render_csv, render_table};
use dnacam::reference::{reference_breakdown, reference_rows, render_breakdown, render_rows};
use dnacam::seqio::render_catalog;
use dnacam::{
    builtin_catalog, find_disease, parse_catalog, parse_text, run_driven, scan, ArrayGeometry, BlockMap, DetectorMode,
    DiseaseEntry, DnaSequence, InputFormat, MemoryMode, Pattern, ScanReport, ScanRequest,
};

/// Simulator of an analog-CAM tandem-repeat detection accelerator.
#[derive(Parser, Debug)]
#[command(name = "dnacam", version)]
struct Cli {
    /// Print the reference-figure comparison and exit.
    #[arg(long)]
    paper_numbers: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan a sequence for the longest tandem run of a pattern.
    Scan(ScanArgs),
    /// Print the detector's cycle-by-cycle trace.
    Trace(TraceArgs),
    /// Compare computed latency and energy against the reference figures.
    PaperNumbers {
        /// Emit the rows as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the disease catalog in the catalog file format.
    Catalog {
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Raw,
    Fasta,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Functional,
    Cycle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceFormat {
    Csv,
    Table,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    /// aCAM rows (M).
    #[arg(long, default_value_t = 512)]
    rows: usize,
    /// Data columns per row (W).
    #[arg(long, default_value_t = 128)]
    width: usize,
    /// Number of blocks (B).
    #[arg(long, default_value_t = 8)]
    block_count: usize,
    /// Pattern length the array is built for; defaults to the pattern's length.
    #[arg(long)]
    pattern_len: Option<usize>,
    /// Clock period T in ns.
    #[arg(long, default_value_t = 1.0)]
    clock_ns: f64,
    /// Memristor write time T_w in ns; defaults to the clock period.
    #[arg(long)]
    write_ns: Option<f64>,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Sequence file, `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Pattern to search for.
    #[arg(long, conflicts_with = "disease", required_unless_present = "disease")]
    pattern: Option<String>,
    /// Disease name from the catalog; supplies the pattern and ranges.
    #[arg(long)]
    disease: Option<String>,
    /// Catalog file replacing the built-in table.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Active blocks, 1-based and comma separated.
    #[arg(long, value_delimiter = ',')]
    blocks: Option<Vec<usize>>,
    /// Gene layout file (`GENE=1,2` per line) used with --disease.
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Functional)]
    mode: ModeArg,
    /// Write the memory trace (and detector trace in cycle mode) here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Give every block its own memory and process blocks concurrently.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Detector input stream, e.g. 101110000.
    #[arg(long, conflicts_with_all = ["input", "pattern", "disease"])]
    bits: Option<String>,
    /// Done signal per clock; defaults to zeros with a final 1.
    #[arg(long, requires = "bits")]
    d: Option<String>,
    /// Sequence file to derive the stream from.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    disease: Option<String>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long = "output-format", value_enum, default_value_t = TraceFormat::Csv)]
    output_format: TraceFormat,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err.chain().any(|e| {
                e.downcast_ref::<dnacam::Error>()
                    .is_some_and(dnacam::Error::is_internal)
            });
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if cli.paper_numbers {
        return paper_numbers(false);
    }
    match cli.command {
        Some(Command::Scan(args)) => cmd_scan(args),
        Some(Command::Trace(args)) => cmd_trace(args),
        Some(Command::PaperNumbers { json }) => paper_numbers(json),
        Some(Command::Catalog { catalog }) => {
            print!("{}", render_catalog(&load_catalog(catalog.as_deref())?));
            Ok(ExitCode::SUCCESS)
        }
        None => bail!("no command given; try --help"),
    }
}

fn load_catalog(path: Option<&Path>) -> anyhow::Result<Vec<DiseaseEntry>> {
    match path {
        None => Ok(builtin_catalog()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_catalog(&text).with_context(|| format!("in catalog {}", p.display()))
        }
    }
}

fn read_sequence(path: &Path, format: Option<FormatArg>) -> anyhow::Result<DnaSequence> {
    let mut raw = Vec::new();
    if path == Path::new("-") {
        io::stdin().read_to_end(&mut raw).context("reading stdin")?;
    } else {
        raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let format = match format {
        Some(FormatArg::Raw) => InputFormat::Raw,
        Some(FormatArg::Fasta) => InputFormat::Fasta,
        None => {
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            if matches!(ext, "fa" | "fasta" | "fna") {
                InputFormat::Fasta
            } else {
                InputFormat::Raw
            }
        }
    };
    parse_text(&raw, format).with_context(|| format!("in {}", path.display()))
}

/// Resolves `--pattern` or `--disease` into a pattern and optional entry.
fn resolve_target(
    pattern: Option<&str>,
    disease: Option<&str>,
    catalog: Option<&Path>,
) -> anyhow::Result<(Pattern, Option<DiseaseEntry>)> {
    match (pattern, disease) {
        (Some(p), None) => {
            let pattern: Pattern = p.parse().with_context(|| format!("in pattern {p:?}"))?;
            Ok((pattern, None))
        }
        (None, Some(name)) => {
            let catalog = load_catalog(catalog)?;
            let entry = find_disease(&catalog, name)?.clone();
            Ok((entry.pattern.clone(), Some(entry)))
        }
        _ => bail!("give exactly one of --pattern and --disease"),
    }
}

fn build_geometry(args: &GeometryArgs, pattern: &Pattern) -> anyhow::Result<ArrayGeometry> {
    let p = args.pattern_len.unwrap_or(pattern.len());
    Ok(ArrayGeometry::new(args.rows, args.width, p, args.block_count)?)
}

fn cmd_scan(args: ScanArgs) -> anyhow::Result<ExitCode> {
    let src = &args.source;
    let (pattern, disease) = resolve_target(src.pattern.as_deref(), src.disease.as_deref(), src.catalog.as_deref())?;
    let text = read_sequence(&src.input, src.format)?;
    let geometry = build_geometry(&args.geometry, &pattern)?;

    let mut request = ScanRequest::new(text, pattern).with_geometry(geometry);
    request.clock_ns = args.geometry.clock_ns;
    request.write_ns = args.geometry.write_ns.unwrap_or(args.geometry.clock_ns);
    request.detector = match args.mode {
        ModeArg::Functional => DetectorMode::Functional,
        ModeArg::Cycle => DetectorMode::CycleAccurate,
    };
    if args.parallel {
        request.memory = MemoryMode::PerBlock;
    }
    request.keep_traces = args.trace.is_some();

    if let Some(blocks) = &args.blocks {
        let set = blocks
            .iter()
            .map(|&b| b.checked_sub(1).ok_or_else(|| anyhow!("block numbers start at 1")))
            .collect::<anyhow::Result<BTreeSet<usize>>>()?;
        request.active_blocks = Some(set);
    } else if let Some(layout) = &args.layout {
        let entry = disease
            .as_ref()
            .ok_or_else(|| anyhow!("--layout needs --disease to pick a gene"))?;
        let text = fs::read_to_string(layout).with_context(|| format!("reading {}", layout.display()))?;
        let map = BlockMap::parse(&text, geometry.blocks).with_context(|| format!("in layout {}", layout.display()))?;
        request.active_blocks = Some(map.blocks_for(entry)?.clone());
    }
    if let Some(entry) = disease {
        request = request.with_disease(entry);
    }

    let result = scan(&request)?;
    let report = ScanReport::new(&request, &result).to_json();

    if let Some(path) = &args.trace {
        let mut out = result.memory_trace.join("\n");
        out.push('\n');
        if !result.detector_trace.is_empty() {
            out.push_str(&render_csv(&result.detector_trace));
        }
        fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    }
    match &args.report {
        Some(path) => {
            fs::write(path, &report).with_context(|| format!("writing {}", path.display()))?;
            let class = result.classification.map(|c| format!(" ({c})")).unwrap_or_default();
            println!("global max {}{class}", result.global_max);
        }
        None => print!("{report}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(args: TraceArgs) -> anyhow::Result<ExitCode> {
    let trace = if let Some(bits) = &args.bits {
        let x = parse_bits(bits).ok_or_else(|| anyhow!("--bits must contain only 0 and 1"))?;
        if x.is_empty() {
            bail!("--bits is empty");
        }
        let d = match &args.d {
            Some(d) => parse_bits(d).ok_or_else(|| anyhow!("--d must contain only 0 and 1"))?,
            None => (0..x.len()).map(|i| i + 1 == x.len()).collect(),
        };
        if d.len() != x.len() {
            bail!("--bits has {} clocks but --d has {}", x.len(), d.len());
        }
        let inputs: Vec<(bool, bool)> = x.into_iter().zip(d).collect();
        run_driven(&inputs)?.trace
    } else {
        let input = args
            .input
            .as_deref()
            .ok_or_else(|| anyhow!("give --bits or --input with --pattern/--disease"))?;
        let (pattern, _) = resolve_target(
            args.pattern.as_deref(),
            args.disease.as_deref(),
            args.catalog.as_deref(),
        )?;
        let text = read_sequence(input, args.format)?;
        let geometry = build_geometry(&args.geometry, &pattern)?;
        let mut request = ScanRequest::new(text, pattern)
            .with_geometry(geometry)
            .with_detector(DetectorMode::CycleAccurate);
        request.keep_traces = true;
        scan(&request)?.detector_trace
    };
    let rendered = match args.output_format {
        TraceFormat::Csv => render_csv(&trace),
        TraceFormat::Table => render_table(&trace),
    };
    match &args.output {
        Some(path) => fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn paper_numbers(json: bool) -> anyhow::Result<ExitCode> {
    let rows = reference_rows();
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        print!("{}", render_rows(&rows));
        println!();
        print!("{}", render_breakdown(&reference_breakdown()));
    }
    Ok(if rows.iter().all(|r| r.passes()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
