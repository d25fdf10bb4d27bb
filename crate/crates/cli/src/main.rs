use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polycoef::exactalg::{Integer, Rational, Ring, RingTag};
use polycoef::invariants::{CrossFlavor, DegreeVariant, HeightMode};
use polycoef_cli::commands;
use polycoef_cli::report::{digest, Outcome, RunReport};
use polycoef_cli::spec::{self, FunctorSpec, Loaded, SpecFile};
use polycoef_cli::suite::{run_suite, Suite, SuiteConfig};
use polycoef_cli::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "polycoef",
    version,
    about = "Polynomial degree and height invariants of functors"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Ring of coefficients, overriding the spec.
    #[arg(long, global = true)]
    ring: Option<RingTag>,
    /// Seed for random functors and suites, overriding the spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Height of the functor in a spec.
    Height {
        spec: PathBuf,
        #[arg(long, default_value = "i")]
        mode: HeightMode,
        #[arg(long, default_value = "cr")]
        flavor: CrossFlavor,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Degrees of the functor in a spec.
    Degree {
        spec: PathBuf,
        /// A variant (wdeg, deg, ideg, sdeg) or `all`; repeatable.
        #[arg(long = "variant", default_value = "all")]
        variants: Vec<String>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// A single cross-effect: of a cube functor, or at a shifted partition.
    CrossEffect {
        spec: PathBuf,
        /// Parts of the partition, e.g. `0,2,1`.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        #[arg(long, default_value = "cr")]
        flavor: CrossFlavor,
    },
    /// All graded cross-effects up to the window.
    CrossEffectFunctor {
        spec: PathBuf,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Restrict to a full subcategory, induce back and check the unit.
    Induce {
        spec: PathBuf,
        /// Objects spanning the full subcategory.
        #[arg(long, value_delimiter = ',', required = true)]
        objects: Vec<usize>,
    },
    /// Compare T(s(n)) with the induced graded cross-effects.
    Decompose {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Taylor tower on pointed sets at one object.
    Taylor {
        spec: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        top: usize,
    },
    /// Structural checks on the category of a spec.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Run property suites.
    Verify(VerifyArgs),
    /// Write the functor of a spec as explicit matrices.
    Export {
        spec: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Search for a braiding of the stabiliser.
    Braidable { spec: PathBuf },
    /// Find an automorphism conjugating one idempotent to another.
    Conjugator {
        spec: PathBuf,
        /// Size of the object.
        #[arg(long)]
        object: usize,
        #[arg(long, value_delimiter = ',')]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
    },
    /// Axioms of the inclusion structure.
    Cati { spec: PathBuf },
    /// Condition (*) for a partition square.
    Star {
        spec: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suites to run; all when omitted.
    #[arg(long = "suite")]
    suites: Vec<Suite>,
    /// Random samples per suite.
    #[arg(long)]
    samples: Option<usize>,
    /// Largest size examined.
    #[arg(long)]
    max_n: Option<usize>,
    /// List the suites and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok((report, text)) => {
            let timed = RunReport {
                timing_ms: cli.timing.then(|| started.elapsed().as_millis()),
                ..report
            };
            emit(cli.format, &timed, &text);
            if timed.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(format: Format, report: &RunReport, text: &[String]) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("serialisable")
            );
        }
        Format::Text => {
            for line in text {
                println!("{line}");
            }
            if let Some(ms) = report.timing_ms {
                println!("time: {ms} ms");
            }
            println!("result: {}", if report.passed { "PASS" } else { "FAIL" });
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(io)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(io)
    }
}

fn spec_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Height { spec, .. }
        | Command::Degree { spec, .. }
        | Command::CrossEffect { spec, .. }
        | Command::CrossEffectFunctor { spec, .. }
        | Command::Induce { spec, .. }
        | Command::Decompose { spec, .. }
        | Command::Taylor { spec, .. }
        | Command::Export { spec, .. } => Some(spec),
        Command::Check { check } => Some(match check {
            Check::Braidable { spec }
            | Check::Conjugator { spec, .. }
            | Check::Cati { spec }
            | Check::Star { spec, .. } => spec,
        }),
        Command::Verify(_) => None,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Height { .. } => "height",
        Command::Degree { .. } => "degree",
        Command::CrossEffect { .. } => "cross-effect",
        Command::CrossEffectFunctor { .. } => "cross-effect-functor",
        Command::Induce { .. } => "induce",
        Command::Decompose { .. } => "decompose",
        Command::Taylor { .. } => "taylor",
        Command::Check { check } => match check {
            Check::Braidable { .. } => "check braidable",
            Check::Conjugator { .. } => "check conjugator",
            Check::Cati { .. } => "check cati",
            Check::Star { .. } => "check star",
        },
        Command::Verify(_) => "verify",
        Command::Export { .. } => "export",
    }
}

fn run(cli: &Cli) -> Result<(RunReport, Vec<String>), CliError> {
    let args = format!("{:?} ring={:?} seed={:?}", cli.command, cli.ring, cli.seed);
    let Some(path) = spec_path(&cli.command) else {
        let Command::Verify(v) = &cli.command else {
            unreachable!("only verify runs without a spec")
        };
        let seed = cli.seed.unwrap_or(0);
        let outcome = match cli.ring.unwrap_or(RingTag::Z) {
            RingTag::Z => verify::<Integer>(v, seed)?,
            RingTag::Q => verify::<Rational>(v, seed)?,
        };
        return Ok(finish(cli, &[], &args, Some(seed), outcome));
    };
    let bytes = read_input(path)?;
    let name = path.display().to_string();
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::input(&name, "bytes", format!("not UTF-8: {e}")))?;
    let mut file = spec::parse_spec(&name, text)?;
    if let Some(ring) = cli.ring {
        file.ring = ring;
    }
    let mut seed = None;
    if let Some(FunctorSpec::Random { seed: s, .. }) = &mut file.functor {
        if let Some(given) = cli.seed {
            *s = given;
        }
        seed = Some(*s);
    }
    let outcome = match file.ring {
        RingTag::Z => dispatch::<Integer>(cli, &name, file)?,
        RingTag::Q => dispatch::<Rational>(cli, &name, file)?,
    };
    Ok(finish(cli, &bytes, &args, seed, outcome))
}

fn finish(
    cli: &Cli,
    bytes: &[u8],
    args: &str,
    seed: Option<u64>,
    outcome: Outcome,
) -> (RunReport, Vec<String>) {
    let report = RunReport {
        command: command_name(&cli.command).to_string(),
        inputs_digest: digest(bytes, args),
        seed,
        passed: outcome.passed,
        results: outcome.results,
        timing_ms: None,
    };
    (report, outcome.text)
}

fn parse_variants(names: &[String]) -> Result<Vec<DegreeVariant>, CliError> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(DegreeVariant::ALL);
        } else {
            out.push(name.parse().map_err(CliError::Usage)?);
        }
    }
    Ok(out)
}

fn dispatch<R: Ring>(cli: &Cli, name: &str, file: SpecFile) -> Result<Outcome, CliError> {
    let category = file.category.clone();
    let l: Loaded<R> = spec::load(name, file)?;
    match &cli.command {
        Command::Height {
            mode,
            flavor,
            window,
            ..
        } => commands::run_height(&l, *mode, *flavor, *window),
        Command::Degree {
            variants, window, ..
        } => commands::run_degree(&l, &parse_variants(variants)?, *window),
        Command::CrossEffect {
            partition, flavor, ..
        } => commands::run_cross_effect(&l, partition.as_deref(), *flavor),
        Command::CrossEffectFunctor { window, .. } => {
            commands::run_cross_effect_functor(&l, *window)
        }
        Command::Induce { objects, .. } => commands::run_induce(&l, objects),
        Command::Decompose { n, .. } => commands::run_decompose(&l, *n),
        Command::Taylor { size, top, .. } => commands::run_taylor(&l, *size, *top),
        Command::Check { check } => match check {
            Check::Braidable { .. } => commands::run_braidable(&l),
            Check::Conjugator {
                object, from, to, ..
            } => commands::run_conjugator(&l, *object, from, to),
            Check::Cati { .. } => commands::run_cati(&l),
            Check::Star { k, l: lsize, .. } => commands::run_star(&l, *k, *lsize),
        },
        Command::Export { output, .. } => {
            let exported = spec::export(&category, l.functor()?);
            let body = serde_json::to_string_pretty(&exported).expect("serialisable");
            let mut text = Vec::new();
            match output {
                Some(out) => {
                    std::fs::write(out, format!("{body}\n")).map_err(|source| CliError::Io {
                        path: out.display().to_string(),
                        source,
                    })?;
                    text.push(format!("wrote {}", out.display()));
                }
                None => text.push(body),
            }
            let results = match output {
                Some(out) => json!({ "written": out.display().to_string() }),
                None => serde_json::to_value(&exported).expect("serialisable"),
            };
            Ok(Outcome::new(true, results, text))
        }
        Command::Verify(_) => unreachable!("verify has no spec"),
    }
}

fn verify<R: Ring>(v: &VerifyArgs, seed: u64) -> Result<Outcome, CliError> {
    if v.list {
        let text = Suite::ALL
            .iter()
            .map(|s| format!("{:<18} {}", s.name(), s.description()))
            .collect();
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        return Ok(Outcome::new(true, json!(names), text));
    }
    let suites: Vec<Suite> = if v.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        v.suites.clone()
    };
    let mut reports = Vec::new();
    let mut text = Vec::new();
    let mut passed = true;
    for suite in suites {
        let defaults = suite.defaults();
        let config = SuiteConfig {
            samples: v.samples.unwrap_or(defaults.samples),
            max_n: v.max_n.unwrap_or(defaults.max_n),
            seed,
        };
        let report = run_suite::<R>(suite, config)?;
        passed &= report.passed;
        text.push(format!(
            "{}: {} ({} cases, {} failed)",
            suite,
            if report.passed { "PASS" } else { "FAIL" },
            report.cases,
            report.failures.len()
        ));
        for f in &report.failures {
            text.push(format!("  case {} [{}]: {}", f.case, f.check, f.detail));
            if let Some(replay) = &f.replay {
                text.push(format!("    replay: {replay}"));
            }
        }
        reports.push(serde_json::to_value(&report).expect("serialisable"));
    }
    Ok(Outcome::new(passed, Value::Array(reports), text))
}
