use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latticedex::analysis::{
    diversity_and_product_distance, min_distance, side_info_gain, GainReport, DEFAULT_MAX_SCAN_K,
};
use latticedex::codec::{IndexCode, SideInfo, CODE_FORMAT};
use latticedex::experiment::{preset, preset_descriptions, ExperimentSpec, SnrGrid, PRESET_NAMES};
use latticedex::sim::{diversity_slope, run_sim, si_gain_from_curves, tail_window, Channel, SimConfig, SimResult};
use latticedex::Error;

// stdout may be a closed pipe (`| head`); drop the output rather than panic
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "latticedex",
    version,
    about = "Lattice index codes over rings of algebraic integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code; write its JSON file and a point list CSV
    Design(DesignArgs),
    /// Side-information gains, bounds and fading metrics
    Analyze(AnalyzeArgs),
    /// Monte Carlo SER curves
    Simulate(SimulateArgs),
    /// List the named designs
    Presets,
}

#[derive(Args)]
struct DesignArgs {
    /// Preset name or experiment JSON file
    input: String,
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Override the enumeration cap on N(I)
    #[arg(long)]
    max_points: Option<u64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Preset name, experiment JSON or saved code file
    input: String,
    /// Side-information set such as `1,2` (repeatable); default: every nonempty set
    #[arg(long = "set")]
    sets: Vec<SideInfo>,
    /// Largest K for the full subset scan
    #[arg(long, default_value_t = DEFAULT_MAX_SCAN_K)]
    max_k: usize,
    /// Skip diversity and product distance
    #[arg(long)]
    no_fading: bool,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Preset name, experiment JSON or saved code file
    input: String,
    #[arg(long)]
    channel: Option<Channel>,
    /// `start:stop:step` or a comma-separated list, in dB
    #[arg(long)]
    snr: Option<String>,
    /// Side-information set (repeatable); `{}` is the empty set
    #[arg(long = "set")]
    sets: Vec<SideInfo>,
    /// Maximum trials per SNR point
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    fade_per_complex: bool,
    /// Stop a curve once its SER drops below this value
    #[arg(long)]
    ser_floor: Option<f64>,
    /// Report side-information gaps at this SER
    #[arg(long)]
    gap_at: Option<f64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Violation(_) => 2,
            Failure::Lib(e) => match e {
                Error::InvalidDesign(_)
                | Error::TooLarge { .. }
                | Error::RamifiedUnsupported { .. }
                | Error::FieldMismatch
                | Error::Unsupported(_) => 3,
                _ => 1,
            },
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

enum Source {
    Spec(ExperimentSpec),
    Code(IndexCode, String),
}

impl Source {
    fn load(input: &str) -> std::result::Result<Self, Failure> {
        if PRESET_NAMES.contains(&input) {
            return Ok(Source::Spec(preset(input)?));
        }
        let path = Path::new(input);
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!(
                "{input:?} is neither a preset ({}) nor a readable file: {e}",
                PRESET_NAMES.join(", ")
            ))
        })?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::CorruptFile(format!("{input}: {e}"))))?;
        if value.get("format").and_then(|f| f.as_str()) == Some(CODE_FORMAT) {
            let name = path
                .file_stem()
                .map_or("code".into(), |s| s.to_string_lossy().into_owned());
            let name = name.trim_end_matches(".code").to_string();
            Ok(Source::Code(IndexCode::from_json(&text)?, name))
        } else {
            Ok(Source::Spec(ExperimentSpec::from_json(&text)?))
        }
    }

    fn name(&self) -> &str {
        match self {
            Source::Spec(s) => &s.name,
            Source::Code(_, n) => n,
        }
    }

    fn code(&self) -> std::result::Result<IndexCode, Failure> {
        match self {
            Source::Spec(s) => Ok(s.build()?),
            Source::Code(c, _) => Ok(c.clone()),
        }
    }
}

fn design(args: DesignArgs) -> CliResult {
    let mut spec = match Source::load(&args.input)? {
        Source::Spec(s) => s,
        Source::Code(..) => return Err(Failure::Usage("design takes a preset or experiment file".into())),
    };
    if args.max_points.is_some() {
        spec.max_points = args.max_points;
    }
    let code = spec.build()?;
    let field = code.field();
    std::fs::create_dir_all(&args.out).map_err(Error::from)?;
    let code_path = args.out.join(format!("{}.code.json", spec.name));
    code.save(&code_path)?;

    let points_path = args.out.join(format!("{}.points.csv", spec.name));
    let mut w = csv::Writer::from_path(&points_path).map_err(Error::from)?;
    let n = field.degree();
    let mut header = vec![
        "index".to_string(),
        "labels".into(),
        "coords".into(),
        "element".into(),
        "energy".into(),
    ];
    header.extend((1..=n).map(|i| format!("x{i}")));
    w.write_record(&header).map_err(Error::from)?;
    let den = field.energy_denominator();
    for (i, p) in code.points().iter().enumerate() {
        let join = |v: Vec<String>| v.join(" ");
        let mut row = vec![
            i.to_string(),
            join(p.labels.iter().map(u64::to_string).collect()),
            join(p.coords.coords().iter().map(i64::to_string).collect()),
            field.format(&p.coords),
            if den == 1 {
                p.energy_numerator.to_string()
            } else {
                format!("{}/{den}", p.energy_numerator)
            },
        ];
        row.extend(code.normalized_point(i).iter().map(|v| format!("{v:.12}")));
        w.write_record(&row).map_err(Error::from)?;
    }
    w.flush().map_err(Error::from)?;

    out!("field    {}", field.family());
    for (k, p) in code.primes().iter().enumerate() {
        out!("p{}       {}  norm {}", k + 1, field.format_ideal(p), p.norm());
    }
    out!("points   {}", code.len());
    out!("gamma    {:.12}", code.gamma());
    out!("wrote    {}", code_path.display());
    out!("wrote    {}", points_path.display());
    Ok(())
}

struct Row {
    report: Option<GainReport>,
    side_info: SideInfo,
    diversity: Option<usize>,
    product: Option<f64>,
    floor: Option<f64>,
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or("-".into(), |x| format!("{x:.prec$}"))
}

fn analyze(args: AnalyzeArgs) -> CliResult {
    let source = Source::load(&args.input)?;
    let code = source.code()?;
    let field = code.field();
    let k = code.num_messages();
    let full_scan = args.sets.is_empty();
    let sets: Vec<SideInfo> = if full_scan {
        if let Source::Spec(spec) = &source {
            spec.analysis_sets(k)
        } else {
            SideInfo::nonempty_subsets(k).collect()
        }
    } else {
        args.sets.clone()
    };
    if full_scan && k > args.max_k {
        return Err(Failure::Usage(format!("{k} messages exceed --max-k {}", args.max_k)));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Failure::Usage("analysis sets must be nonempty".into()));
    }
    let d0 = min_distance(&code, SideInfo::EMPTY)?;
    let mut rows = Vec::new();
    for s in std::iter::once(SideInfo::EMPTY).chain(sets.iter().copied()) {
        let report = if s.is_empty() {
            None
        } else {
            Some(side_info_gain(&code, s)?)
        };
        let fading = if args.no_fading {
            None
        } else {
            match diversity_and_product_distance(&code, s) {
                Ok(f) => Some(f),
                Err(Error::UndefinedDistance) => None,
                Err(e) => return Err(e.into()),
            }
        };
        rows.push(Row {
            report,
            side_info: s,
            diversity: fading.as_ref().map(|f| f.diversity),
            product: fading.as_ref().map(|f| f.product_distance),
            floor: fading.as_ref().and_then(|f| f.theoretical_floor),
        });
    }

    let n = field.degree();
    let mut violations = Vec::new();
    for r in &rows {
        if let Some(g) = &r.report {
            if !g.within_bounds(1e-9) {
                violations.push(format!(
                    "S={}: gain {:.4} outside [{}, {}]",
                    r.side_info,
                    g.gamma_db,
                    fmt_opt(g.lower_bound_db, 4),
                    fmt_opt(g.upper_bound_db, 4)
                ));
            }
        }
        if field.is_totally_real() {
            if r.diversity.is_some_and(|d| d != n) {
                violations.push(format!(
                    "S={}: diversity {} < n = {n}",
                    r.side_info,
                    r.diversity.unwrap()
                ));
            }
            if let (Some(p), Some(f)) = (r.product, r.floor) {
                if p < f * (1.0 - 1e-9) {
                    violations.push(format!("S={}: product distance {p:.4} below {f}", r.side_info));
                }
            }
        }
    }
    let overall = rows
        .iter()
        .filter_map(|r| r.report.as_ref())
        .min_by(|a, b| a.gamma_db.total_cmp(&b.gamma_db));

    if args.json {
        let reports: Vec<&GainReport> = rows.iter().filter_map(|r| r.report.as_ref()).collect();
        let fading: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "side_info": r.side_info,
                    "diversity": r.diversity,
                    "product_distance": r.product,
                    "product_floor": r.floor,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "field": field.family().to_string(),
            "points": code.len(),
            "d0_sq": d0.value(),
            "gains": reports,
            "fading": fading,
            "overall_gain_db": if full_scan { overall.map(|g| g.gamma_db) } else { None },
            "violations": violations,
        });
        out!("{}", serde_json::to_string_pretty(&doc).map_err(Error::from)?);
    } else {
        out!("{} | {} points | d0^2 = {}", field.family(), code.len(), d0.value());
        out!(
            "{:<10} {:>7} {:>10} {:>6} {:>9} {:>9} {:>7} {:>8} {:>3} {:>10}",
            "S",
            "R_S",
            "dS^2",
            "src",
            "gain",
            "lattice",
            "lower",
            "upper",
            "D",
            "dp_min"
        );
        for r in &rows {
            let g = r.report.as_ref();
            out!(
                "{:<10} {:>7} {:>10} {:>6} {:>9} {:>9} {:>7} {:>8} {:>3} {:>10}",
                r.side_info.to_string(),
                fmt_opt(g.map(|g| g.rate), 3),
                fmt_opt(g.map(|g| g.ds_sq).or(Some(d0.value())), 2),
                g.map_or("-", |g| match g.ds_source {
                    latticedex::analysis::DistanceSource::Subcode => "pairs",
                    latticedex::analysis::DistanceSource::IdealLattice => "ideal",
                }),
                fmt_opt(g.map(|g| g.gamma_db), 4),
                fmt_opt(g.map(|g| g.lattice_gamma_db), 4),
                fmt_opt(g.and_then(|g| g.lower_bound_db), 3),
                fmt_opt(g.and_then(|g| g.upper_bound_db), 4),
                r.diversity.map_or("-".into(), |d| d.to_string()),
                fmt_opt(r.product, 4),
            );
        }
        if let (true, Some(g)) = (full_scan, overall) {
            out!("overall gain {:.4} dB/bit/dim at S = {}", g.gamma_db, g.side_info);
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations.join("\n")))
    }
}

fn parse_snr(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "bad --snr {text:?}; use start:stop:step or a comma-separated list"
        ))
    };
    let nums = |sep: char| -> std::result::Result<Vec<f64>, Failure> {
        text.split(sep)
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    };
    if text.contains(':') {
        let v = nums(':')?;
        let [start, stop, step] = v[..] else { return Err(bad()) };
        SnrGrid::Range { start, stop, step }.values().map_err(|_| bad())
    } else {
        nums(',')
    }
}

fn thread_cap() -> std::result::Result<Option<usize>, Failure> {
    match std::env::var("LATTICEDEX_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!(
                "LATTICEDEX_THREADS must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn simulate(args: SimulateArgs) -> CliResult {
    if args.trials == Some(0) {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let source = Source::load(&args.input)?;
    let code = source.code()?;
    let k = code.num_messages();
    let (mut cfg, spec_gap, spec_out) = match &source {
        Source::Spec(spec) if spec.simulation.is_some() => {
            let sim = spec.simulation.as_ref().unwrap();
            (spec.sim_config(k)?, sim.gap_at, spec.output_dir.clone())
        }
        _ => {
            let sets = std::iter::once(SideInfo::EMPTY)
                .chain((0..k).map(|i| SideInfo::from_bits(1 << i)))
                .collect();
            let grid = (0..=40).map(f64::from).collect();
            (SimConfig::new(Channel::Awgn, grid, sets, 0), None, None)
        }
    };
    if let Some(c) = args.channel {
        cfg.channel = c;
    }
    if let Some(s) = &args.snr {
        cfg.snr_db = parse_snr(s)?;
    }
    if !args.sets.is_empty() {
        cfg.side_info = args.sets.clone();
    }
    if let Some(t) = args.trials {
        cfg.stop.max_trials = t;
    }
    if let Some(e) = args.min_errors {
        cfg.stop.min_errors = e;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if args.fade_per_complex {
        cfg.fade_per_complex = true;
    }
    if args.ser_floor.is_some() {
        cfg.ser_floor = args.ser_floor;
    }
    if let Some(cap) = thread_cap()? {
        cfg.workers = if cfg.workers == 0 { cap } else { cfg.workers.min(cap) };
    }
    cfg.validate(&code).map_err(|e| Failure::Usage(e.to_string()))?;

    let result = run_sim(&code, &cfg)?;
    let out = args.out.or(spec_out).unwrap_or_else(|| PathBuf::from("out"));
    let files = result.write_csvs(&out, source.name())?;
    print_curves(&result);
    for f in &files {
        out!("wrote {}", f.display());
    }
    if let Some(target) = args.gap_at.or(spec_gap) {
        report_gaps(&result, target);
    }
    if cfg.channel == Channel::Rayleigh {
        for s in result.side_info_sets() {
            let curve: Vec<_> = result.curve(s).into_iter().cloned().collect();
            let slope = tail_window(&curve, 1e-2)
                .ok_or_else(|| Error::InsufficientData("SER never below 1e-2".into()))
                .and_then(|w| diversity_slope(&curve, w));
            match slope {
                Ok(v) => out!("diversity slope S={s}: {v:.2}"),
                Err(e) => eprintln!("warning: no diversity slope for S={s}: {e}"),
            }
        }
    }
    Ok(())
}

fn print_curves(result: &SimResult) {
    out!(
        "{} seed {} code {} config {}",
        result.channel.name(),
        result.seed,
        result.code_digest,
        result.config_digest
    );
    out!(
        "{:<10} {:>8} {:>10} {:>12} {:>12}",
        "S",
        "snr_db",
        "errors",
        "trials",
        "ser"
    );
    for p in &result.points {
        out!(
            "{:<10} {:>8.2} {:>10} {:>12} {:>12.4e}",
            p.side_info.to_string(),
            p.snr_db,
            p.errors,
            p.trials,
            p.ser
        );
    }
}

fn report_gaps(result: &SimResult, target: f64) {
    let sets = result.side_info_sets();
    if !sets.contains(&SideInfo::EMPTY) {
        eprintln!("warning: gaps need the empty-set curve");
        return;
    }
    let base = result.curve_pairs(SideInfo::EMPTY);
    for s in sets.into_iter().filter(|s| !s.is_empty()) {
        match si_gain_from_curves(&base, &result.curve_pairs(s), target) {
            Ok(g) => out!("gap at SER {target:e} S={s}: {g:.2} dB"),
            Err(e) => eprintln!("warning: S={s}: {e}"),
        }
    }
}

fn presets() -> CliResult {
    for (name, text) in preset_descriptions() {
        out!("{name:<12} {text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Design(a) => design(a),
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Presets => presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Violation(m) => eprintln!("bound violation:\n{m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
