use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pea::bench::{emit_instances, emit_report, run_benchmark, BenchOptions, CandidateSolver, NativeSolver, ReportFormat};
use pea::candidate::CandidateProgram;
use pea::dataset::load_dataset;
use pea::native::{pretty_answer, solve_native};
use pea::provider::{HttpProvider, Provider, ScriptedProvider};
use pea::synthesis::{synthesize, Fixture, SynthesisConfig, SynthesisOutcome};
use pea::task::{parse_instance, TaskKind};
use pea::templates::{strategy_prompt, task_template};
use pea_core::enumlab::{self, Token};

#[derive(Parser)]
#[command(name = "pea", version, about = "Enumerate-and-check solvers, benchmark harness and program synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every instance of a dataset and report accuracy and timing.
    Bench(BenchArgs),
    /// Solve one instance with the built-in solver.
    Solve(SolveArgs),
    /// Ask a model for a solver program and check it.
    Synth(SynthArgs),
    /// Print the synthesis prompt for a task.
    Prompt(PromptArgs),
    /// Emit enumerations and score responses against them.
    #[command(subcommand)]
    Enum(EnumCommand),
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    task: TaskKind,
    /// Dataset file or directory.
    #[arg(long)]
    data: PathBuf,
    /// `native`, or `candidate <FILE>` to run a program per instance.
    #[arg(long, num_args = 1..=2, value_names = ["MODE", "FILE"], default_values = ["native"])]
    mode: Vec<String>,
    /// Per-instance limit in seconds.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Md)]
    report: ReportFormat,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Instance ids to leave out, such as the synthesis fixture.
    #[arg(long)]
    exclude: Vec<String>,
    /// One-off synthesis time to amortize over the instances.
    #[arg(long, default_value_t = 0.0)]
    synthesis_seconds: f64,
    /// Also print one row per instance.
    #[arg(long)]
    instances: bool,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    task: TaskKind,
    /// Instance file; standard input when absent.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Plans one action per line instead of the single-line form.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    task: TaskKind,
    /// TOML endpoint configuration, or `stub:<file>` with canned responses.
    #[arg(long)]
    provider: String,
    /// Ask for a search-reduction strategy first.
    #[arg(long)]
    optimize: bool,
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// Seconds allowed for the fixture run.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
    /// Instance file to validate against instead of the built-in fixture.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Where to write the accepted program.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the JSON transcript.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct PromptArgs {
    #[arg(long, value_enum)]
    task: TaskKind,
    /// Print the strategy question instead.
    #[arg(long, conflicts_with = "with_strategy")]
    strategy: bool,
    /// Include this strategy text in the prompt.
    #[arg(long)]
    with_strategy: Option<String>,
}

#[derive(Args)]
struct TokenArgs {
    /// Number of tokens.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Letters per generated token.
    #[arg(long, default_value_t = 3)]
    len: usize,
    /// Comma-separated tokens to use instead of random ones.
    #[arg(long, value_delimiter = ',')]
    tokens: Vec<String>,
    /// Write the enumeration here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Score this response file against the enumeration instead.
    #[arg(long)]
    score: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EnumCommand {
    /// All orderings of m tokens.
    Perm(TokenArgs),
    /// All n-tuples over m tokens.
    Product {
        #[command(flatten)]
        tokens: TokenArgs,
        #[arg(long)]
        n: usize,
    },
    /// Score a response against a previously written enumeration file.
    Score {
        #[arg(long)]
        expected: PathBuf,
        #[arg(long)]
        response: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn seconds(v: f64, what: &str) -> Result<Duration> {
    Duration::try_from_secs_f64(v)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| anyhow!("{what} must be a positive number of seconds"))
}

/// A candidate from a file: a script in a known language, or any other
/// executable run directly.
fn load_candidate(path: &Path) -> Result<CandidateProgram> {
    match fs::read(path) {
        Ok(bytes) => match String::from_utf8(bytes) {
            Ok(text) => Ok(CandidateProgram::from_source(&text, Some(path))?),
            Err(_) => {
                let abs = path.canonicalize()?;
                Ok(CandidateProgram::from_command(vec![abs.display().to_string()], "")?)
            }
        },
        Err(e) => Err(e).with_context(|| format!("reading {}", path.display())),
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    if args.task == TaskKind::Enum {
        bail!("the enumeration task is run with `pea enum`");
    }
    let exclude: BTreeSet<String> = args.exclude.into_iter().collect();
    let dataset = load_dataset(args.task, &args.data, &exclude)?;
    let options = BenchOptions {
        timeout: seconds(args.timeout, "--timeout")?,
        workers: args.workers,
    };
    let report = match args.mode.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["native"] => run_benchmark(args.task, &dataset, &NativeSolver, &options)?,
        ["candidate", file] => {
            let solver = CandidateSolver(load_candidate(Path::new(file))?);
            run_benchmark(args.task, &dataset, &solver, &options)?
        }
        other => bail!("--mode takes `native` or `candidate <FILE>`, got `{}`", other.join(" ")),
    }
    .with_synthesis_seconds(args.synthesis_seconds);
    print!("{}", emit_report(&report, args.report));
    if args.instances {
        println!();
        print!("{}", emit_instances(&report, args.report));
    }
    if let Some(path) = args.json {
        fs::write(&path, serde_json::to_string_pretty(&report)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let text = match &args.instance {
        Some(p) => read_file(p)?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let instance = parse_instance(args.task, "input", &text).map_err(|e| anyhow!(e))?;
    match solve_native(&instance) {
        Ok(answer) => {
            if args.pretty {
                let block = pretty_answer(&instance, &answer);
                println!("{}", block.trim_end());
            } else {
                println!("{answer}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("pea: {e}");
            Ok(ExitCode::from(2))
        }
    }
}

fn synth(args: SynthArgs) -> Result<ExitCode> {
    let mut provider: Box<dyn Provider> = match args.provider.strip_prefix("stub:") {
        Some(script) => Box::new(ScriptedProvider::from_file(Path::new(script))?),
        None => Box::new(HttpProvider::from_file(Path::new(&args.provider))?),
    };
    let config = SynthesisConfig::new(args.m, args.optimize, seconds(args.timeout, "--timeout")?)?;
    let fixture = match &args.fixture {
        Some(p) => {
            let instance = parse_instance(args.task, "fixture", &read_file(p)?).map_err(|e| anyhow!(e))?;
            Fixture::from_instance(instance).map_err(|e| anyhow!("fixture: {e}"))?
        }
        None => Fixture::builtin(args.task).map_err(|e| anyhow!(e))?,
    };
    let result = synthesize(args.task, provider.as_mut(), &config, &fixture)?;
    let t = &result.transcript;
    if let Some(path) = &args.transcript {
        fs::write(path, serde_json::to_string_pretty(t)?).with_context(|| format!("writing {}", path.display()))?;
    }
    eprintln!(
        "pea: {} attempt(s), {} code and {} strategy queries, {:.2} s",
        t.attempts.len(),
        t.code_queries,
        t.strategy_queries,
        result.seconds
    );
    match result.outcome {
        SynthesisOutcome::Program(p) => {
            write_or_print(args.out.as_deref(), p.source_text())?;
            Ok(ExitCode::SUCCESS)
        }
        SynthesisOutcome::Empty => {
            eprintln!("pea: no candidate passed the checks; returning the empty program");
            Ok(ExitCode::from(3))
        }
    }
}

fn prompt(args: PromptArgs) -> Result<ExitCode> {
    let text = if args.strategy {
        strategy_prompt(args.task)?
    } else {
        let t = task_template(args.task)?;
        match &args.with_strategy {
            Some(s) => t.augmented(s).render(),
            None => t.render(),
        }
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn enum_tokens(args: &TokenArgs) -> Result<Vec<Token>> {
    if !args.tokens.is_empty() {
        if args.tokens.len() != args.m {
            bail!("--tokens lists {} tokens but --m is {}", args.tokens.len(), args.m);
        }
        return args.tokens.iter().map(|t| Ok(Token::new(t.trim())?)).collect();
    }
    if args.len == 0 {
        bail!("--len must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok(enumlab::random_tokens(&mut rng, args.m, args.len))
}

fn emit_or_score<I>(args: &TokenArgs, tuples: I) -> Result<ExitCode>
where
    I: Iterator<Item = Vec<Token>>,
{
    match &args.score {
        Some(response) => {
            let report = enumlab::score_coverage(tuples, &read_file(response)?);
            print_coverage(&report);
        }
        None => write_or_print(args.out.as_deref(), &enumlab::render_enumeration(tuples))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn print_coverage(r: &enumlab::CoverageReport) {
    println!(
        "{}",
        serde_json::json!({
            "expected_count": r.expected_count,
            "matched_count": r.matched_count,
            "fraction": r.fraction,
            "unmatched_lines": r.unmatched_lines,
        })
    );
}

fn enumerate(cmd: EnumCommand) -> Result<ExitCode> {
    match cmd {
        EnumCommand::Perm(args) => {
            let tokens = enum_tokens(&args)?;
            emit_or_score(&args, enumlab::permutations(&tokens)?)
        }
        EnumCommand::Product { tokens: args, n } => {
            let tokens = enum_tokens(&args)?;
            emit_or_score(&args, enumlab::cartesian_power(&tokens, n)?)
        }
        EnumCommand::Score { expected, response } => {
            let expected = read_file(&expected)?
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| l.split(',').map(|t| Token::new(t.trim())).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            print_coverage(&enumlab::score_coverage(expected, &read_file(&response)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => bench(a),
        Command::Solve(a) => solve(a),
        Command::Synth(a) => synth(a),
        Command::Prompt(a) => prompt(a),
        Command::Enum(c) => enumerate(c),
    };
    result.unwrap_or_else(|e| {
        eprintln!("pea: {e:#}");
        ExitCode::FAILURE
    })
}
