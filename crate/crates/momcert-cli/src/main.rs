//! Command-line front end: certifications, point evaluations, case
//! listings, and filling-slope enumeration.
//!
//! Progress and summaries go to standard error; machine-readable output
//! (certificates, CSV, JSON) goes to the requested path or standard output,
//! written atomically (temp file plus rename) when a path is given.

use clap::{Args, Parser, Subcommand, ValueEnum};
use momcert::bounds::{self, SpectrumPoint};
use momcert::cases::{
    contains_certifiable_mom, enumerate_collections, is_sub_multiset, the_18_cases,
    verify_maximality,
};
use momcert::certify::{
    certify_section4, certify_selected, certify_slice, standard_domain, slice_domain, CaseReport,
    CertificateBundle, Mode, Strategy,
};
use momcert::fillings::{enumerate_slopes, slope_cutoff, slopes_to_csv, CuspLattice, Cutoff};
use momcert::hp::Hp;
use momcert::jet::Jet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "momcert",
    version,
    about = "Certified volume lower bounds for one-cusped hyperbolic 3-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Grid,
    Adaptive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Plain,
    Precise,
    Jet,
}

#[derive(Args)]
struct StrategyArgs {
    /// Subdivision mode.
    #[arg(long, value_enum, default_value = "adaptive")]
    mode: ModeArg,
    /// Grid: log2 subintervals per axis; adaptive: per-axis split cap.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
    depth: Option<u32>,
    /// Certification threshold.
    #[arg(long, default_value_t = bounds::VOLUME_THRESHOLD)]
    threshold: f64,
    /// Worker threads (default: MOMCERT_WORKERS or all cores).
    #[arg(long, env = "MOMCERT_WORKERS")]
    workers: Option<usize>,
    /// Maximum number of box evaluations.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the certificate bundle here (otherwise standard output).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record measured wall times in the report (makes it
    /// schedule-dependent; off by default so certificates are reproducible).
    #[arg(long)]
    timing: bool,
}

impl StrategyArgs {
    fn build(&self) -> Result<Strategy, String> {
        if self.threshold <= 0.0 {
            return Err("threshold must be positive".into());
        }
        let mut s = Strategy::default();
        s.mode = match self.mode {
            ModeArg::Grid => Mode::Grid,
            ModeArg::Adaptive => Mode::Adaptive,
        };
        s.depth = self.depth.unwrap_or(match s.mode {
            Mode::Grid => 8,
            Mode::Adaptive => 9,
        });
        if let Some(w) = self.workers {
            if w == 0 {
                return Err("workers must be at least 1".into());
            }
            s.workers = w;
        }
        if let Some(b) = self.budget {
            s.budget = b;
        }
        s.threshold = self.threshold;
        Ok(s)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Certify max(f1, f2) > threshold for the eighteen cases.
    Verify {
        /// Certify every case.
        #[arg(long, conflicts_with = "case")]
        all: bool,
        /// Certify a single case by id (1..=18).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=18))]
        case: Option<u32>,
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Certify f1 > threshold on the boundary slice e4 = 1.5152.
    VerifySlice {
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Run the five high-precision regional validations.
    VerifySection4 {
        /// Write the reports here (otherwise standard output).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Record measured wall times in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate the bound functions at a spectrum point.
    Eval {
        #[arg(long)]
        e2: f64,
        #[arg(long)]
        e3: f64,
        #[arg(long)]
        e4: f64,
        /// Case id whose triple corrections apply (default: no triples).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=18))]
        case: Option<u32>,
        /// Arithmetic to evaluate under.
        #[arg(long, value_enum, default_value = "plain")]
        kind: KindArg,
    },
    /// List or check the eighteen maximal case collections.
    Cases {
        #[command(subcommand)]
        action: CasesAction,
    },
    /// Enumerate filling slopes below the volume cutoff, as CSV.
    Slopes {
        /// Cusped-manifold volume used to derive the cutoff length.
        #[arg(long)]
        volume: f64,
        /// Volume threshold of the enumeration.
        #[arg(long, default_value_t = bounds::VOLUME_THRESHOLD)]
        threshold: f64,
        /// Cusp lattice as `mx,my,lx,ly` (default: the m129 cusp,
        /// meridian sqrt(2) and longitude 2 sqrt(2) at right angles).
        #[arg(long)]
        lattice: Option<String>,
        /// Write CSV here (otherwise standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CasesAction {
    /// Print the case list as JSON.
    List {
        /// Write the list here (otherwise standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify maximality of all eighteen and exhaustiveness of the list.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify {
            all,
            case,
            strategy,
        } => {
            let strat = strategy.build()?;
            let selected = match (all, case) {
                (true, _) => the_18_cases(),
                (false, Some(id)) => the_18_cases()
                    .into_iter()
                    .filter(|c| c.id == id)
                    .collect(),
                (false, None) => {
                    return Err("pass --all or --case N".into());
                }
            };
            let domain = standard_domain();
            eprintln!(
                "certifying {} case(s), mode {:?}, depth {}, threshold {}, {} worker(s)",
                selected.len(),
                strat.mode,
                strat.depth,
                strat.threshold,
                strat.workers
            );
            let start = std::time::Instant::now();
            let bundle = certify_selected(&selected, &domain, &strat);
            for report in &bundle.cases {
                print_case_summary(report);
            }
            eprintln!("total wall time {:?}", start.elapsed());
            emit(
                &bundle.to_json(strategy.timing),
                strategy.report.as_deref(),
            )?;
            Ok(exit_for(bundle.all_certified()))
        }
        Command::VerifySlice { strategy } => {
            let strat = strategy.build()?;
            eprintln!(
                "certifying boundary slice, mode {:?}, depth {}, threshold {}",
                strat.mode, strat.depth, strat.threshold
            );
            let report = certify_slice(&slice_domain(), &strat);
            print_case_summary(&report);
            let bundle = CertificateBundle {
                threshold: strat.threshold,
                eps_model: Default::default(),
                strategy: strat.clone(),
                domain: slice_domain(),
                cases: vec![report],
            };
            emit(
                &bundle.to_json(strategy.timing),
                strategy.report.as_deref(),
            )?;
            Ok(exit_for(bundle.all_certified()))
        }
        Command::VerifySection4 { report, timing } => {
            let reports = certify_section4();
            for r in &reports {
                print_case_summary(r);
            }
            let ok = reports.iter().all(|r| r.certified());
            let mut doc = reports.clone();
            if !timing {
                for r in &mut doc {
                    r.wall_time_ms = 0;
                }
            }
            let mut json = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
            json.push('\n');
            emit(&json, report.as_deref())?;
            Ok(exit_for(ok))
        }
        Command::Eval {
            e2,
            e3,
            e4,
            case,
            kind,
        } => {
            if !(e2.is_finite() && e3.is_finite() && e4.is_finite()) {
                return Err("spectrum values must be finite".into());
            }
            if !(1.0 <= e2 && e2 <= e3 && e3 <= e4) {
                eprintln!("note: point violates 1 <= e2 <= e3 <= e4");
            }
            let spec = match case {
                Some(id) => the_18_cases().into_iter().find(|c| c.id == id).unwrap(),
                None => momcert::cases::CaseSpec::custom(0, vec![]),
            };
            eval_point(&spec, e2, e3, e4, kind);
            Ok(ExitCode::SUCCESS)
        }
        Command::Cases { action } => match action {
            CasesAction::List { out } => {
                let mut json = serde_json::to_string_pretty(&the_18_cases())
                    .map_err(|e| e.to_string())?;
                json.push('\n');
                emit(&json, out.as_deref())?;
                Ok(ExitCode::SUCCESS)
            }
            CasesAction::Check => {
                let cases = the_18_cases();
                let mut ok = true;
                for case in &cases {
                    let maximal = verify_maximality(case);
                    eprintln!(
                        "case {:>2} {:?}: maximal = {}",
                        case.id,
                        case.triples
                            .iter()
                            .map(|t| t.indices())
                            .collect::<Vec<_>>(),
                        maximal
                    );
                    ok &= maximal;
                }
                let mut covered = true;
                for coll in enumerate_collections(3, 3) {
                    if !contains_certifiable_mom(&coll)
                        && !cases.iter().any(|c| is_sub_multiset(&coll, &c.triples))
                    {
                        eprintln!("uncovered Mom-free collection: {coll:?}");
                        covered = false;
                    }
                }
                eprintln!(
                    "maximality: {}; exhaustiveness: {}",
                    if ok { "pass" } else { "FAIL" },
                    if covered { "pass" } else { "FAIL" }
                );
                Ok(exit_for(ok && covered))
            }
        },
        Command::Slopes {
            volume,
            threshold,
            lattice,
            out,
        } => {
            let lattice = match lattice {
                Some(spec) => parse_lattice(&spec)?,
                None => CuspLattice::m129(),
            };
            let cutoff = match slope_cutoff(volume, threshold).map_err(|e| e.to_string())? {
                Cutoff::Length(len) => len,
                Cutoff::AllSlopesAdmissible => {
                    return Err(format!(
                        "volume {volume} does not exceed threshold {threshold}: every slope admissible"
                    ));
                }
            };
            eprintln!("slope length cutoff {cutoff:.4}");
            let slopes = enumerate_slopes(&lattice, cutoff).map_err(|e| e.to_string())?;
            eprintln!("{} slopes", slopes.len());
            emit(&slopes_to_csv(&slopes), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_case_summary(report: &CaseReport) {
    eprintln!(
        "case {:>3}: {:?} ({} boxes, depth {}, min bound {})",
        report.case_id,
        report.status,
        report.boxes_processed,
        report.max_depth_reached,
        report
            .min_lower_bound
            .map(|v| format!("{v:.9}"))
            .unwrap_or_else(|| "n/a".into()),
    );
}

fn eval_point(spec: &momcert::cases::CaseSpec, e2: f64, e3: f64, e4: f64, kind: KindArg) {
    match kind {
        KindArg::Plain => {
            let pt = SpectrumPoint::<f64>::from_f64s(e2, e3, e4);
            println!("f1 = {:.6}", bounds::f1(spec, &pt));
            if bounds::f2_gate_holds(&pt) {
                println!("f2 = {:.6}", bounds::f2(spec, &pt));
            } else {
                println!("f2 = n/a (gate e4 <= 1.5152 and e2 + 1 >= e4^2 fails)");
            }
        }
        KindArg::Precise => {
            let pt = SpectrumPoint::<Hp>::from_f64s(e2, e3, e4);
            println!("f1 = {:.6}", bounds::f1(spec, &pt).to_f64());
            if bounds::f2_gate_holds(&pt) {
                println!("f2 = {:.6}", bounds::f2(spec, &pt).to_f64());
            } else {
                println!("f2 = n/a (gate e4 <= 1.5152 and e2 + 1 >= e4^2 fails)");
            }
        }
        KindArg::Jet => {
            let pt = SpectrumPoint::new(
                Jet::constant(e2),
                Jet::constant(e3),
                Jet::constant(e4),
            );
            let f1 = bounds::f1(spec, &pt);
            let (lo, hi) = f1.range();
            println!("f1 in [{lo:.12}, {hi:.12}]");
            if bounds::f2_gate_holds(&pt) {
                let (lo, hi) = bounds::f2(spec, &pt).range();
                println!("f2 in [{lo:.12}, {hi:.12}]");
            } else {
                println!("f2 = n/a (gate e4 <= 1.5152 and e2 + 1 >= e4^2 fails)");
            }
        }
    }
}

fn parse_lattice(spec: &str) -> Result<CuspLattice, String> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad lattice spec: {e}"))?;
    if parts.len() != 4 {
        return Err("lattice spec must be mx,my,lx,ly".into());
    }
    CuspLattice::new([parts[0], parts[1]], [parts[2], parts[3]]).map_err(|e| e.to_string())
}

/// Write to the path atomically (temp file in the same directory, then
/// rename), or to standard output when no path is given.
fn emit(content: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let file_name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "report".into());
            let tmp_name = format!(".{}.tmp-{}", file_name, std::process::id());
            let tmp = match path.parent().filter(|d| !d.as_os_str().is_empty()) {
                Some(dir) => dir.join(tmp_name),
                None => PathBuf::from(tmp_name),
            };
            let mut f = std::fs::File::create(&tmp)
                .map_err(|e| format!("create {}: {e}", tmp.display()))?;
            f.write_all(content.as_bytes())
                .map_err(|e| format!("write {}: {e}", tmp.display()))?;
            f.sync_all().ok();
            std::fs::rename(&tmp, path)
                .map_err(|e| format!("rename to {}: {e}", path.display()))
        }
    }
}
