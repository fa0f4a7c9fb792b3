//! Answer-set-program emission. An action theory (plus optional query and
//! theory constraint set) is rendered as ground ASP text over the predicate
//! vocabulary `holds/2`, `occurs/1`, `ab/1`, `allow/1`, `neg/1`,
//! `mental_fluent/2`, `achieved`, with the horizon exported as
//! `#const t_max = N`. Emission is deterministic: identical input yields
//! byte-identical output.
//!
//! An optional differential harness cross-checks the native engine's
//! consistency verdicts against answer-set existence using an external
//! solver process; when no solver is available it reports SKIPPED.

use std::fmt::Write as _;
use std::process::Command;

use serde::{Deserialize, Serialize};

use crate::engine::{consistent, ActionPolicy, SemanticsConfig};
use crate::model::{
    ActionKind, ActionTheory, CausalLaw, FluentLiteral, MentalFluent, Observation, Polarity,
    Query,
};
use crate::theories::{Schema, SchemaCond, TheorySpec};

/// Ordered program text. Section order is fixed; empty sections are kept so
/// the layout is stable across inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmittedProgram {
    pub sections: Vec<(String, Vec<String>)>,
    pub horizon: usize,
}

impl EmittedProgram {
    pub fn section(&self, name: &str) -> &[String] {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, lines)| lines.as_slice())
            .unwrap_or(&[])
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (name, lines) in &self.sections {
            if lines.is_empty() {
                continue;
            }
            let _ = writeln!(out, "% {name}");
            for line in lines {
                out.push_str(line);
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

pub const SECTION_ORDER: [&str; 10] = [
    "declarations",
    "time",
    "frame axioms",
    "dynamic laws",
    "static laws",
    "inhibition/trigger/allowance",
    "mental-extension rules",
    "theory constraints",
    "observations",
    "goal machinery",
];

fn atom(l: &FluentLiteral) -> String {
    match l {
        FluentLiteral::Env { name, polarity: Polarity::Pos } => name.clone(),
        FluentLiteral::Env { name, polarity: Polarity::Neg } => format!("neg({name})"),
        FluentLiteral::Mental(m) => mental_atom(m),
    }
}

fn mental_atom(m: &MentalFluent) -> String {
    format!("mental_fluent({}, {})", m.class, m.value)
}

fn holds_conj(lits: &[FluentLiteral], t: &str) -> String {
    lits.iter().map(|l| format!("holds({},{t})", atom(l))).collect::<Vec<_>>().join(", ")
}

/// One integrity constraint per forbidden atom: forbidden side at `T+1`,
/// condition side at `T`. The schema-level variable guards (`V1 != low`)
/// are kept symbolic so the rendered text matches the source constraint
/// sets one-for-one.
fn schema_constraints(schema: &Schema, out: &mut Vec<String>) {
    let mut body = Vec::new();
    let mut guard_no = 0usize;
    for cond in &schema.conditions {
        match cond {
            SchemaCond::Eq(m) => body.push(format!("holds({},T)", mental_atom(m))),
            SchemaCond::Neq { class, value } => {
                guard_no += 1;
                let var = format!("V{guard_no}");
                body.push(format!("holds(mental_fluent({class}, {var}),T)"));
                body.push(format!("{var} != {value}"));
            }
        }
    }
    let body = body.join(", ");
    for f in &schema.forbidden {
        out.push(format!(":- holds({},T+1), {body}, time(T).", mental_atom(f)));
    }
}

/// Renders a domain description (with optional query and theory constraint
/// set) into the ground program. `horizon` becomes `t_max`; a supplied
/// query's own horizon is ignored in favour of the argument so callers
/// control the time axis in one place.
pub fn emit_program(
    theory: &ActionTheory,
    query: Option<&Query>,
    horizon: usize,
    spec: Option<&TheorySpec>,
) -> EmittedProgram {
    let d = &theory.domain;
    let mut sections: Vec<(String, Vec<String>)> =
        SECTION_ORDER.iter().map(|n| (n.to_string(), Vec::new())).collect();
    let sec = |name: &str| -> usize { SECTION_ORDER.iter().position(|n| *n == name).unwrap() };
    let (s_decl, s_time, s_frame, s_dyn, s_static, s_act, s_mental, s_theory, s_obs, s_goal) = (
        sec("declarations"),
        sec("time"),
        sec("frame axioms"),
        sec("dynamic laws"),
        sec("static laws"),
        sec("inhibition/trigger/allowance"),
        sec("mental-extension rules"),
        sec("theory constraints"),
        sec("observations"),
        sec("goal machinery"),
    );

    // All positive atoms in play: environment fluents and one mental atom
    // per class/value pair.
    let mut atoms: Vec<String> = Vec::new();
    for f in &d.env_fluents {
        atoms.push(f.clone());
    }
    for c in &d.classes {
        for v in &c.values {
            atoms.push(mental_atom(&MentalFluent::new(&c.name, v)));
        }
    }

    for a in &atoms {
        sections[s_decl].1.push(format!("fluent({a})."));
    }
    for a in &d.actions {
        sections[s_decl].1.push(format!("action({}).", a.name));
    }

    sections[s_time].1.push(format!("#const t_max = {horizon}."));
    sections[s_time].1.push("time(0..t_max-1).".to_string());

    // Literals set by default laws are non-inertial: they re-assert
    // themselves instead of carrying the previous value forward.
    let defaulted: Vec<&FluentLiteral> = d
        .laws
        .iter()
        .filter_map(|law| match law {
            CausalLaw::Default { literal } => Some(literal),
            _ => None,
        })
        .collect();
    let has_default = |a: &str| defaulted.iter().any(|l| atom(l) == a);

    for a in &atoms {
        sections[s_frame].1.push(format!(":- holds({a},T), holds(neg({a}),T), time(T)."));
    }
    for a in &atoms {
        if has_default(a) {
            sections[s_frame]
                .1
                .push(format!("holds({a},T) :- not holds(neg({a}),T), time(T)."));
        } else {
            sections[s_frame]
                .1
                .push(format!("holds({a},T+1) :- holds({a},T), not holds(neg({a}),T+1), time(T)."));
        }
        let neg = format!("neg({a})");
        if has_default(&neg) {
            sections[s_frame].1.push(format!("holds({neg},T) :- not holds({a},T), time(T)."));
        } else {
            sections[s_frame]
                .1
                .push(format!("holds({neg},T+1) :- holds({neg},T), not holds({a},T+1), time(T)."));
        }
        sections[s_frame].1.push(format!("holds({a},0) :- not holds(neg({a}),0)."));
        sections[s_frame].1.push(format!("holds(neg({a}),0) :- not holds({a},0)."));
    }

    for law in &d.laws {
        match law {
            CausalLaw::Causes { action, effects, conditions } => {
                for e in effects {
                    let mut body = format!("holds(occurs({action}),T)");
                    if !conditions.is_empty() {
                        body = format!("{body}, {}", holds_conj(conditions, "T"));
                    }
                    sections[s_dyn].1.push(format!("holds({},T+1) :- {body}, time(T).", atom(e)));
                }
            }
            CausalLaw::InfluencesDyn { action, effects, conditions } => {
                for e in effects {
                    let mut body = format!("holds(occurs({action}),T)");
                    if !conditions.is_empty() {
                        body = format!("{body}, {}", holds_conj(conditions, "T"));
                    }
                    sections[s_dyn]
                        .1
                        .push(format!("holds({},T+1) :- {body}, time(T).", mental_atom(e)));
                }
            }
            CausalLaw::Static { effects, conditions } => {
                for e in effects {
                    sections[s_static].1.push(format!(
                        "holds({},T) :- {}, time(T).",
                        atom(e),
                        holds_conj(conditions, "T")
                    ));
                }
            }
            CausalLaw::InfluencesStatic { conditions, effects } => {
                for e in effects {
                    sections[s_static].1.push(format!(
                        "holds({},T) :- {}, time(T).",
                        mental_atom(e),
                        holds_conj(conditions, "T")
                    ));
                }
            }
            CausalLaw::Inhibits { conditions, action } => {
                sections[s_act].1.push(format!(
                    "holds(ab(occurs({action})),T) :- {}, time(T).",
                    holds_conj(conditions, "T")
                ));
            }
            CausalLaw::Triggers { conditions, action } => {
                sections[s_act].1.push(format!(
                    "holds(occurs({action}),T) :- not holds(ab(occurs({action})),T), {}, time(T).",
                    holds_conj(conditions, "T")
                ));
            }
            CausalLaw::Allows { conditions, action } => {
                sections[s_act].1.push(format!(
                    "holds(allow(occurs({action})),T) :- not holds(ab(occurs({action})),T), {}, time(T).",
                    holds_conj(conditions, "T")
                ));
            }
            CausalLaw::Facilitates { conditions, action } => {
                let conds: Vec<FluentLiteral> =
                    conditions.iter().cloned().map(FluentLiteral::Mental).collect();
                sections[s_act].1.push(format!(
                    "holds(occurs({action}),T) :- not holds(ab(occurs({action})),T), {}, time(T).",
                    holds_conj(&conds, "T")
                ));
            }
            CausalLaw::Contravenes { conditions, action } => {
                let conds: Vec<FluentLiteral> =
                    conditions.iter().cloned().map(FluentLiteral::Mental).collect();
                sections[s_act].1.push(format!(
                    "holds(ab(occurs({action})),T) :- {}, time(T).",
                    holds_conj(&conds, "T")
                ));
            }
            CausalLaw::NoConcurrency { actions } => {
                let alts = actions
                    .iter()
                    .map(|a| format!("holds(occurs({a}),T)"))
                    .collect::<Vec<_>>()
                    .join("; ");
                sections[s_act].1.push(format!(":- time(T), 2 {{ {alts} }}."));
            }
            CausalLaw::ForbidsToCause { left, right, .. } => {
                let body = left
                    .iter()
                    .map(|m| format!("holds({},T)", mental_atom(m)))
                    .collect::<Vec<_>>()
                    .join(", ");
                for r in right {
                    sections[s_theory].1.push(format!(
                        ":- holds({},T+1), {body}, time(T).",
                        mental_atom(r)
                    ));
                }
            }
            CausalLaw::Default { .. } => {} // handled in the frame section
        }
    }

    // Environment actions need no allowance rule to fire.
    for a in &d.actions {
        if a.kind == ActionKind::Env {
            sections[s_act].1.push(format!("holds(allow(occurs({})),T) :- time(T).", a.name));
        }
    }

    // Exactly one value per mental class at each step: a value's negation
    // holds whenever a sibling value holds.
    for c in &d.classes {
        for v in &c.values {
            for v2 in &c.values {
                if v != v2 {
                    let this = mental_atom(&MentalFluent::new(&c.name, v));
                    let other = mental_atom(&MentalFluent::new(&c.name, v2));
                    sections[s_mental]
                        .1
                        .push(format!("holds(neg({this}),T) :- holds({other},T), time(T)."));
                }
            }
        }
    }

    if let Some(spec) = spec {
        for schema in &spec.schemas {
            schema_constraints(schema, &mut sections[s_theory].1);
        }
    }

    for obs in &theory.observations {
        match obs {
            Observation::FluentAt { literal, t } => {
                if *t == 0 {
                    sections[s_obs].1.push(format!("holds({},0).", atom(literal)));
                } else {
                    sections[s_obs].1.push(format!(":- not holds({},{t}).", atom(literal)));
                }
            }
            Observation::OccursAt { action, t } => {
                sections[s_obs].1.push(format!("holds(occurs({action}),{t})."));
            }
        }
    }

    if let Some(q) = query {
        for (actions, t) in &q.schedule {
            for a in actions {
                sections[s_goal].1.push(format!("holds(occurs({a}),{t})."));
            }
        }
        let goal_body = q
            .goal
            .iter()
            .map(|l| format!("holds({},t_max)", atom(l)))
            .collect::<Vec<_>>()
            .join(", ");
        sections[s_goal].1.push(format!("achieved :- {goal_body}."));
        sections[s_goal].1.push(":- not achieved.".to_string());
    }

    EmittedProgram { sections, horizon }
}

/// Whitespace normalization for golden comparisons: collapses runs of
/// blanks, strips indentation and trailing space, and drops blank lines, so
/// typographic line wrapping does not affect equality.
pub fn normalize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(line);
        if current.ends_with('.') {
            out.push(collapse_spaces(&current));
            current.clear();
        }
    }
    if !current.is_empty() {
        out.push(collapse_spaces(&current));
    }
    out
}

fn collapse_spaces(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev_space = false;
    for c in s.chars() {
        if c == ' ' {
            if !prev_space {
                out.push(' ');
            }
            prev_space = true;
        } else {
            out.push(c);
            prev_space = false;
        }
    }
    out.replace(", ", ",").replace(" ,", ",")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialCase {
    pub case: String,
    pub native: String,
    pub solver: String,
    pub verdict: String,
    /// Full program text, retained only when the two sides disagree.
    pub program: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialReport {
    pub skipped: bool,
    pub solver: Option<String>,
    pub cases: Vec<DifferentialCase>,
}

impl DifferentialReport {
    pub fn disagreements(&self) -> usize {
        self.cases.iter().filter(|c| c.verdict == "DISAGREE").count()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("failed to spawn solver: {0}")]
    SolverSpawnError(String),
    #[error("solver output unparseable: {0}")]
    SolverOutputUnparseable(String),
}

/// Runs `command` with `{file}` substituted by the program path and maps
/// the exit/output to SAT/UNSAT. Exit codes follow the clasp convention
/// (10/30 = satisfiable, 20 = unsatisfiable); the textual verdict in
/// stdout is accepted as a fallback.
pub fn run_solver(command: &str, program: &str) -> Result<bool, SolverError> {
    let dir = tempfile::tempdir().map_err(|e| SolverError::SolverSpawnError(e.to_string()))?;
    let path = dir.path().join("program.lp");
    std::fs::write(&path, program).map_err(|e| SolverError::SolverSpawnError(e.to_string()))?;
    let cmdline = command.replace("{file}", &path.to_string_lossy());
    let output = Command::new("sh")
        .arg("-c")
        .arg(&cmdline)
        .output()
        .map_err(|e| SolverError::SolverSpawnError(e.to_string()))?;
    match output.status.code() {
        Some(10) | Some(30) => return Ok(true),
        Some(20) => return Ok(false),
        _ => {}
    }
    let stdout = String::from_utf8_lossy(&output.stdout);
    if stdout.contains("UNSATISFIABLE") {
        Ok(false)
    } else if stdout.contains("SATISFIABLE") {
        Ok(true)
    } else {
        Err(SolverError::SolverOutputUnparseable(format!(
            "no SAT/UNSAT verdict in output of `{cmdline}`"
        )))
    }
}

fn solver_available(command: &str) -> bool {
    let first = command.split_whitespace().next().unwrap_or("");
    if first.is_empty() {
        return false;
    }
    Command::new("sh")
        .arg("-c")
        .arg(format!("command -v {first}"))
        .output()
        .map(|o| o.status.success())
        .is_ok_and(|ok| ok)
}

/// Generates a battery of small theories (fixed hand cases plus seeded
/// random domains) and compares native consistency against answer-set
/// existence of the emitted program. Without a usable solver the report is
/// marked skipped and carries no cases.
pub fn differential_check(
    solver_command: Option<&str>,
    seed: u64,
    config: SemanticsConfig,
) -> DifferentialReport {
    let Some(command) = solver_command.filter(|c| solver_available(c)) else {
        return DifferentialReport { skipped: true, solver: solver_command.map(str::to_string), cases: Vec::new() };
    };
    let mut cases = Vec::new();
    for (name, theory, horizon) in differential_battery(seed) {
        let program = emit_program(&theory, None, horizon, None).text();
        let native = consistent(&theory, horizon, config, ActionPolicy::AnySubset);
        let solver = match run_solver(command, &program) {
            Ok(sat) => {
                if sat {
                    "SAT".to_string()
                } else {
                    "UNSAT".to_string()
                }
            }
            Err(e) => format!("ERROR: {e}"),
        };
        let native_s = if native { "SAT" } else { "UNSAT" };
        let verdict = if solver == native_s { "AGREE" } else { "DISAGREE" };
        cases.push(DifferentialCase {
            case: name,
            native: native_s.to_string(),
            solver,
            verdict: verdict.to_string(),
            program: (verdict == "DISAGREE").then_some(program),
        });
    }
    DifferentialReport { skipped: false, solver: Some(command.to_string()), cases }
}

/// Two fixed cases plus 50 seeded 2-class/3-action domains, horizon <= 4.
/// Public so tests can assert the battery's shape without a solver.
pub fn differential_battery(seed: u64) -> Vec<(String, ActionTheory, usize)> {
    use crate::model::{ActionSymbol, PsychClass};
    use rand::{Rng, SeedableRng};

    let mut out = Vec::new();
    out.push(("empty theory".to_string(), ActionTheory::default(), 1));

    let mut contradictory = ActionTheory::default();
    contradictory.domain.env_fluents.push("raining".to_string());
    contradictory.observations.push(Observation::FluentAt {
        literal: FluentLiteral::env("raining"),
        t: 0,
    });
    contradictory.observations.push(Observation::FluentAt {
        literal: FluentLiteral::neg_env("raining"),
        t: 0,
    });
    out.push(("contradictory observations".to_string(), contradictory, 1));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let mut d = crate::model::DomainDescription::default();
        for (ci, name) in ["p", "q"].iter().enumerate() {
            let values = vec!["low".to_string(), "high".to_string()];
            d.classes.push(PsychClass { name: name.to_string(), values, ordered: true });
            let _ = ci;
        }
        d.env_fluents.push("sig".to_string());
        for name in ["act_a", "act_b", "act_c"] {
            d.actions.push(ActionSymbol { name: name.to_string(), kind: ActionKind::Env });
        }
        let classes = ["p", "q"];
        let values = ["low", "high"];
        let actions = ["act_a", "act_b", "act_c"];
        let n_laws = rng.gen_range(1..=4);
        for _ in 0..n_laws {
            let action = actions[rng.gen_range(0..actions.len())].to_string();
            let class = classes[rng.gen_range(0..classes.len())];
            let value = values[rng.gen_range(0..values.len())];
            let effect = MentalFluent::new(class, value);
            if rng.gen_bool(0.5) {
                d.laws.push(CausalLaw::InfluencesDyn {
                    action,
                    effects: vec![effect],
                    conditions: vec![FluentLiteral::env("sig")],
                });
            } else {
                d.laws.push(CausalLaw::Causes {
                    action,
                    effects: vec![FluentLiteral::neg_env("sig")],
                    conditions: vec![FluentLiteral::mental(class, value)],
                });
            }
        }
        let mut theory = ActionTheory { domain: d, observations: Vec::new() };
        theory.observations.push(Observation::FluentAt {
            literal: FluentLiteral::env("sig"),
            t: 0,
        });
        let horizon = rng.gen_range(1..=4);
        out.push((format!("generated #{i:02}"), theory, horizon));
    }
    out
}
