//! `cmt` — command-line surface for the action-language toolkit.
//!
//! Exit codes: 0 success / SAT / all checks pass; 1 UNSAT or a violation
//! was found; 2 usage or parse error; 3 internal error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cmt::analysis::{
    catalog_domain, discrepancy_report, priority, reachability, rows_to_csv, run_experiment,
};
use cmt::aspgen::{differential_check, emit_program};
use cmt::dsl::{parse_domain, parse_observations, parse_query, print_domain, Diagnostic};
use cmt::engine::{
    holds_query, plan_from_state, ActionPolicy, Firing, Orientation, QueryMode, SemanticsConfig,
    Trajectory,
};
use cmt::model::{validate_domain, ActionTheory, DomainDescription, FluentLiteral};
use cmt::theories::{builtin_theory, check_transition, state_of_label, EmotionLabel, Source, TheorySpec};

#[derive(Parser)]
#[command(name = "cmt", version, about = "Compile, simulate and verify mental-state action theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for grid commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    AsWritten,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FiringArg {
    Holding,
    Onset,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Definition,
    Listing,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone, Copy)]
struct ConfigArgs {
    /// Which side of a forbidding rule is read as the condition.
    #[arg(long, value_enum, default_value = "as-written")]
    orientation: OrientationArg,
    /// When a forbidden fluent counts as caused in the successor state.
    #[arg(long, value_enum, default_value = "holding")]
    firing: FiringArg,
}

impl ConfigArgs {
    fn config(self) -> SemanticsConfig {
        SemanticsConfig {
            orientation: match self.orientation {
                OrientationArg::AsWritten => Orientation::AsWritten,
                OrientationArg::Reversed => Orientation::Reversed,
            },
            firing: match self.firing {
                FiringArg::Holding => Firing::Holding,
                FiringArg::Onset => Firing::Onset,
            },
        }
    }
}

#[derive(Args)]
struct TheoryArgs {
    /// `her`, `uer`, or a path to a domain file of forbidding laws.
    #[arg(long)]
    theory: String,
    /// Which built-in rule set to use for `her`/`uer`.
    #[arg(long, value_enum, default_value = "listing")]
    source: SourceArg,
}

#[derive(Subcommand)]
enum Command {
    /// Parse domain/observation/query files and print their canonical form.
    Parse {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        obs: Option<PathBuf>,
        #[arg(long)]
        query: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Validate a domain description and report problems.
    Check {
        #[arg(long)]
        domain: PathBuf,
    },
    /// Find a plan between two catalog configurations under a theory.
    Plan {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        init: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Judge a stored trajectory (JSON) against a theory, step by step.
    Verify {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Trajectory file as produced by `plan --format json`.
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Answer a query over a domain with observations.
    Query {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        obs: Option<PathBuf>,
        #[arg(long)]
        query: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// `skeptical`: true in every trajectory model; `credulous`: in some.
        #[arg(long, default_value = "skeptical")]
        mode: String,
    },
    /// Compute the 16x16 reachability matrix for a theory.
    Reach {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Priority table over the theory's witness-plan set.
    Priority {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Emit the logic program for a domain (and optional query/theory).
    EmitAsp {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        obs: Option<PathBuf>,
        #[arg(long)]
        query: Option<PathBuf>,
        /// Attach a built-in constraint set (`her` or `uer`).
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, value_enum, default_value = "listing")]
        source: SourceArg,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Run a differential check with this solver command (`{file}`
        /// placeholder for the program path).
        #[arg(long)]
        solver: Option<String>,
    },
    /// Run the 512-cell planning grid and print CSV plus a JSON summary.
    Experiment {
        #[arg(long, value_enum, default_value = "listing")]
        source: SourceArg,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        /// Directory for grid.csv and summary.json (stdout if omitted).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate all semantics configurations against the published data.
    Discrepancy {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    match cli.command {
        Command::Parse { domain, obs, query, format } => cmd_parse(domain, obs, query, format),
        Command::Check { domain } => cmd_check(domain),
        Command::Plan { theory, config, init, goal, horizon, format } => {
            cmd_plan(theory, config.config(), &init, &goal, horizon, format)
        }
        Command::Verify { theory, config, trajectory, format } => {
            cmd_verify(theory, config.config(), trajectory, format)
        }
        Command::Query { domain, obs, query, config, mode } => {
            cmd_query(domain, obs, query, config.config(), &mode)
        }
        Command::Reach { theory, config, horizon, format } => {
            cmd_reach(theory, config.config(), horizon, format)
        }
        Command::Priority { theory, config, horizon, format } => {
            cmd_priority(theory, config.config(), horizon, format)
        }
        Command::EmitAsp { domain, obs, query, theory, source, horizon, output, solver } => {
            cmd_emit(domain, obs, query, theory, source, horizon, output, solver)
        }
        Command::Experiment { source, config, horizon, out_dir } => {
            cmd_experiment(source.into(), config.config(), horizon, out_dir)
        }
        Command::Discrepancy { format } => cmd_discrepancy(format),
    }
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Source {
        match s {
            SourceArg::Definition => Source::Definition,
            SourceArg::Listing => Source::Listing,
        }
    }
}

fn usage_error(msg: &str) -> Result<ExitCode, String> {
    eprintln!("error: {msg}");
    Ok(ExitCode::from(2))
}

fn report_diagnostics(diags: &[Diagnostic]) -> Result<ExitCode, String> {
    for d in diags {
        eprintln!("error: {d}");
    }
    Ok(ExitCode::from(2))
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_domain(path: &PathBuf) -> Result<Result<DomainDescription, Vec<Diagnostic>>, String> {
    let text = read(path)?;
    Ok(parse_domain(&text, &path.display().to_string()))
}

/// `her`/`uer` pick the built-in rule set; anything else is read as a
/// domain file whose forbidding laws become the constraint set.
fn load_theory(args: &TheoryArgs) -> Result<Result<TheorySpec, Vec<Diagnostic>>, String> {
    match args.theory.as_str() {
        "her" | "uer" => Ok(Ok(builtin_theory(&args.theory, args.source.into()).unwrap())),
        path => {
            let path = PathBuf::from(path);
            match load_domain(&path)? {
                Ok(domain) => {
                    Ok(Ok(cmt::theories::spec_from_laws(args.source.into(), &domain.laws)))
                }
                Err(diags) => Ok(Err(diags)),
            }
        }
    }
}

fn parse_label(s: &str) -> Result<EmotionLabel, String> {
    s.parse::<EmotionLabel>().map_err(|_| format!("unknown emotion label `{s}`"))
}

fn config_line(config: SemanticsConfig) -> String {
    format!("config: {config}")
}

fn cmd_parse(
    domain: PathBuf,
    obs: Option<PathBuf>,
    query: Option<PathBuf>,
    format: FormatArg,
) -> Result<ExitCode, String> {
    let d = match load_domain(&domain)? {
        Ok(d) => d,
        Err(diags) => return report_diagnostics(&diags),
    };
    let observations = match &obs {
        Some(path) => match parse_observations(&read(path)?, &path.display().to_string()) {
            Ok(o) => Some(o),
            Err(diags) => return report_diagnostics(&diags),
        },
        None => None,
    };
    let q = match &query {
        Some(path) => match parse_query(&read(path)?, &path.display().to_string()) {
            Ok(q) => Some(q),
            Err(diags) => return report_diagnostics(&diags),
        },
        None => None,
    };
    match format {
        FormatArg::Json => {
            let value = serde_json::json!({
                "domain": d,
                "observations": observations,
                "query": q,
            });
            println!("{}", serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?);
        }
        _ => {
            print!("{}", print_domain(&d));
            if let Some(o) = &observations {
                print!("{}", cmt::dsl::print_observations(o));
            }
            if let Some(q) = &q {
                print!("{}", cmt::dsl::print_query(q));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(domain: PathBuf) -> Result<ExitCode, String> {
    match load_domain(&domain)? {
        Ok(d) => {
            let report = validate_domain(&d);
            for w in &report.warnings {
                println!("warning: {w}");
            }
            println!(
                "ok: {} classes, {} fluents, {} actions, {} laws",
                d.classes.len(),
                d.env_fluents.len(),
                d.actions.len(),
                d.laws.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(diags) => report_diagnostics(&diags),
    }
}

fn cmd_plan(
    theory: TheoryArgs,
    config: SemanticsConfig,
    init: &str,
    goal: &str,
    horizon: usize,
    format: FormatArg,
) -> Result<ExitCode, String> {
    let spec = match load_theory(&theory)? {
        Ok(s) => s,
        Err(diags) => return report_diagnostics(&diags),
    };
    let (init, goal) = match (parse_label(init), parse_label(goal)) {
        (Ok(i), Ok(g)) => (i, g),
        (Err(e), _) | (_, Err(e)) => return usage_error(&e),
    };
    let d = catalog_domain(Some(&spec));
    let goal_lits: Vec<FluentLiteral> =
        state_of_label(goal).mental.iter().map(|(c, v)| FluentLiteral::mental(c, v)).collect();
    let plan = (0..=horizon).find_map(|h| {
        plan_from_state(&d, &state_of_label(init), &goal_lits, h, config, ActionPolicy::SingletonOrEmpty)
    });
    match plan {
        Some(tr) => {
            match format {
                FormatArg::Json => {
                    println!("{}", serde_json::to_string_pretty(&tr).map_err(|e| e.to_string())?)
                }
                _ => {
                    println!("{}", config_line(config));
                    println!("SAT: {init} -> {goal} in {} steps", tr.horizon());
                    for (i, step) in tr.actions.iter().enumerate() {
                        let names = if step.is_empty() { "(none)".to_string() } else { step.join(", ") };
                        println!("  step {}: {names}", i + 1);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("{}", config_line(config));
            println!("UNSAT: {init} -> {goal} within {horizon} steps");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify(
    theory: TheoryArgs,
    config: SemanticsConfig,
    trajectory: PathBuf,
    format: FormatArg,
) -> Result<ExitCode, String> {
    let spec = match load_theory(&theory)? {
        Ok(s) => s,
        Err(diags) => return report_diagnostics(&diags),
    };
    let tr: Trajectory = match serde_json::from_str(&read(&trajectory)?) {
        Ok(tr) => tr,
        Err(e) => {
            eprintln!("error: {}: {e}", trajectory.display());
            return Ok(ExitCode::from(2));
        }
    };
    let mut judgments = Vec::new();
    let mut all_pass = true;
    for (i, w) in tr.states.windows(2).enumerate() {
        let j = check_transition(&spec, config, &w[0], &w[1]);
        all_pass &= j.pass;
        judgments.push((i, j));
    }
    match format {
        FormatArg::Json => {
            let value = serde_json::json!({
                "theory": theory.theory,
                "config": config.to_string(),
                "transitions": judgments
                    .iter()
                    .map(|(i, j)| serde_json::json!({
                        "step": i + 1,
                        "pass": j.pass,
                        "fired": j.fired,
                    }))
                    .collect::<Vec<_>>(),
                "pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?);
        }
        _ => {
            println!("theory: {}", theory.theory);
            println!("{}", config_line(config));
            for (i, j) in &judgments {
                if j.pass {
                    println!("  step {}: pass", i + 1);
                } else {
                    let ids: Vec<String> =
                        j.fired.iter().map(|f| format!("{} ({})", f.rule_id, f.forbidden)).collect();
                    println!("  step {}: violate — rules {}", i + 1, ids.join(", "));
                }
            }
            println!("{}", if all_pass { "pass" } else { "violate" });
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_query(
    domain: PathBuf,
    obs: Option<PathBuf>,
    query: PathBuf,
    config: SemanticsConfig,
    mode: &str,
) -> Result<ExitCode, String> {
    let d = match load_domain(&domain)? {
        Ok(d) => d,
        Err(diags) => return report_diagnostics(&diags),
    };
    let observations = match &obs {
        Some(path) => match parse_observations(&read(path)?, &path.display().to_string()) {
            Ok(o) => o,
            Err(diags) => return report_diagnostics(&diags),
        },
        None => Vec::new(),
    };
    let q = match parse_query(&read(&query)?, &query.display().to_string()) {
        Ok(q) => q,
        Err(diags) => return report_diagnostics(&diags),
    };
    let mode = match mode {
        "skeptical" => QueryMode::Skeptical,
        "credulous" => QueryMode::Credulous,
        other => return usage_error(&format!("unknown mode `{other}` (skeptical|credulous)")),
    };
    let theory = ActionTheory { domain: d, observations };
    let verdict = holds_query(&theory, &q, mode, config, ActionPolicy::SingletonOrEmpty);
    println!("{}", config_line(config));
    if verdict.no_models {
        println!("inconsistent: no trajectory model satisfies the observations");
        return Ok(ExitCode::from(1));
    }
    println!("{}", if verdict.truth { "true" } else { "false" });
    Ok(if verdict.truth { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_reach(
    theory: TheoryArgs,
    config: SemanticsConfig,
    horizon: usize,
    format: FormatArg,
) -> Result<ExitCode, String> {
    let spec = match load_theory(&theory)? {
        Ok(s) => s,
        Err(diags) => return report_diagnostics(&diags),
    };
    let matrix = reachability(&spec, config, horizon);
    match format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(&matrix).map_err(|e| e.to_string())?)
        }
        FormatArg::Csv => {
            println!("init,goal,reachable,self_pair,steps");
            for row in &matrix.cells {
                for cell in row {
                    println!(
                        "{},{},{},{},{}",
                        cell.init,
                        cell.goal,
                        cell.reachable,
                        cell.self_pair,
                        cell.witness.as_ref().map(|w| w.horizon().to_string()).unwrap_or_default()
                    );
                }
            }
        }
        FormatArg::Text => {
            println!("theory: {} ({})", theory.theory, matrix.source);
            println!("{}", config_line(config));
            print!("{:>14}", "");
            for goal in cmt::theories::CATALOG_LABELS {
                print!(" {:.2}", goal.to_string());
            }
            println!();
            for (i, init) in cmt::theories::CATALOG_LABELS.iter().enumerate() {
                print!("{:>14}", init.to_string());
                for cell in &matrix.cells[i] {
                    print!("  {} ", if cell.self_pair {
                        if cell.reachable { "o" } else { "x" }
                    } else if cell.reachable {
                        "+"
                    } else {
                        "."
                    });
                }
                println!();
            }
            println!("legend: + reachable, . unreachable, o/x self-pair");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_priority(
    theory: TheoryArgs,
    config: SemanticsConfig,
    horizon: usize,
    format: FormatArg,
) -> Result<ExitCode, String> {
    let spec = match load_theory(&theory)? {
        Ok(s) => s,
        Err(diags) => return report_diagnostics(&diags),
    };
    let d = catalog_domain(Some(&spec));
    let mut witnesses = Vec::new();
    for init in cmt::theories::CATALOG_LABELS {
        for goal in cmt::theories::CATALOG_LABELS {
            let goal_lits: Vec<FluentLiteral> = state_of_label(goal)
                .mental
                .iter()
                .map(|(c, v)| FluentLiteral::mental(c, v))
                .collect();
            if let Some(tr) = plan_from_state(
                &d,
                &state_of_label(init),
                &goal_lits,
                horizon,
                config,
                ActionPolicy::SingletonOrEmpty,
            ) {
                witnesses.push(tr);
            }
        }
    }
    let table = match priority(&witnesses, horizon) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    match format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(&table).map_err(|e| e.to_string())?)
        }
        _ => {
            println!("theory: {}", theory.theory);
            println!("{}", config_line(config));
            println!("trajectories: {}", table.denominator);
            print!("{:>6}", "class");
            for i in 1..=horizon {
                print!(" {:>6}", format!("i={i}"));
            }
            println!();
            for (class, weights) in &table.weights {
                print!("{class:>6}");
                for w in weights {
                    print!(" {w:>6.3}");
                }
                println!();
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_emit(
    domain: PathBuf,
    obs: Option<PathBuf>,
    query: Option<PathBuf>,
    theory: Option<String>,
    source: SourceArg,
    horizon: usize,
    output: Option<PathBuf>,
    solver: Option<String>,
) -> Result<ExitCode, String> {
    let d = match load_domain(&domain)? {
        Ok(d) => d,
        Err(diags) => return report_diagnostics(&diags),
    };
    let observations = match &obs {
        Some(path) => match parse_observations(&read(path)?, &path.display().to_string()) {
            Ok(o) => o,
            Err(diags) => return report_diagnostics(&diags),
        },
        None => Vec::new(),
    };
    let q = match &query {
        Some(path) => match parse_query(&read(path)?, &path.display().to_string()) {
            Ok(q) => Some(q),
            Err(diags) => return report_diagnostics(&diags),
        },
        None => None,
    };
    let spec = match theory.as_deref() {
        Some(name @ ("her" | "uer")) => Some(builtin_theory(name, source.into()).unwrap()),
        Some(other) => return usage_error(&format!("--theory must be her or uer here, not `{other}`")),
        None => None,
    };
    let theory_obj = ActionTheory { domain: d, observations };
    let program = emit_program(&theory_obj, q.as_ref(), horizon, spec.as_ref());
    match &output {
        Some(path) => std::fs::write(path, program.text()).map_err(|e| e.to_string())?,
        None => print!("{}", program.text()),
    }
    if let Some(cmd) = solver {
        let report = differential_check(Some(&cmd), 0xD1FF, SemanticsConfig::default());
        if report.skipped {
            eprintln!("differential: SKIPPED (solver `{cmd}` not available)");
        } else {
            let bad = report.disagreements();
            eprintln!("differential: {} cases, {} disagreements", report.cases.len(), bad);
            if bad > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(
    source: Source,
    config: SemanticsConfig,
    horizon: usize,
    out_dir: Option<PathBuf>,
) -> Result<ExitCode, String> {
    let report = run_experiment(source, config, horizon);
    let csv = rows_to_csv(&report.rows);
    let summary = serde_json::to_string_pretty(&report.summary).map_err(|e| e.to_string())?;
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            std::fs::write(dir.join("grid.csv"), &csv).map_err(|e| e.to_string())?;
            std::fs::write(dir.join("summary.json"), &summary).map_err(|e| e.to_string())?;
            println!("wrote {} rows to {}", report.rows.len(), dir.display());
        }
        None => {
            print!("{csv}");
            println!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_discrepancy(format: FormatArg) -> Result<ExitCode, String> {
    let report = discrepancy_report();
    match format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?)
        }
        _ => {
            println!("reference trajectory verdict match by configuration:");
            for e in &report.evaluations {
                println!(
                    "  {:>10} / {:>10} / {:>7}: HER {} UER {} {}",
                    e.source,
                    e.orientation,
                    e.firing,
                    e.her.iter().map(|b| if *b { 'p' } else { 'v' }).collect::<String>(),
                    e.uer.iter().map(|b| if *b { 'p' } else { 'v' }).collect::<String>(),
                    if e.matches_reference { "<- matches" } else { "" }
                );
            }
            println!("matching configurations: {:?}", report.matching_configs);
            println!(
                "Anger->Liking (HER): holding {} / onset {}",
                sat_str(report.anger_liking_holding_sat),
                sat_str(report.anger_liking_onset_sat)
            );
            println!(
                "Fear->Regret (HER): holding {} / onset {}",
                sat_str(report.fear_regret_holding_sat),
                sat_str(report.fear_regret_onset_sat)
            );
            println!(
                "documented conflicts {}",
                if report.conflicts_detected() { "detected" } else { "NOT detected" }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sat_str(sat: bool) -> &'static str {
    if sat {
        "SAT"
    } else {
        "UNSAT"
    }
}
