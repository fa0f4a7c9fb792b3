//! Experiment harness over the emotion catalog: reachability matrices
//! between the 16 labeled configurations, per-class priority tables, the
//! 512-run planning grid with CSV/JSON outputs, and a report tabulating
//! which semantics configuration matches which published datum.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::{
    plan_from_state, ActionPolicy, Firing, Orientation, SemanticsConfig, Trajectory,
};
use crate::model::{
    ActionKind, ActionSymbol, CausalLaw, DomainDescription, FluentLiteral, State,
};
use crate::theories::{
    as_domain_laws, builtin_theory, check_transition, emotion_classes, state_of_label,
    EmotionLabel, Source, TheoryName, TheorySpec, CATALOG_LABELS,
};

/// The planning domain for grid experiments: the four emotion classes plus
/// one `set_<class>_<value>` action per class value, each influencing that
/// single fluent. Theory constraints are appended as forbidding laws.
pub fn catalog_domain(spec: Option<&TheorySpec>) -> DomainDescription {
    let mut d = DomainDescription::default();
    d.classes = emotion_classes();
    for c in &d.classes.clone() {
        for v in &c.values {
            let name = format!("set_{}_{}", c.name, v);
            d.actions.push(ActionSymbol { name: name.clone(), kind: ActionKind::Human });
            d.laws.push(CausalLaw::InfluencesDyn {
                action: name,
                effects: vec![crate::model::MentalFluent::new(&c.name, v)],
                conditions: Vec::new(),
            });
        }
    }
    if let Some(spec) = spec {
        d.laws.extend(as_domain_laws(spec));
    }
    d.assign_forbid_ids();
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachCell {
    pub init: EmotionLabel,
    pub goal: EmotionLabel,
    pub reachable: bool,
    pub self_pair: bool,
    /// Shortest witness plan (smallest step count within the horizon).
    pub witness: Option<Trajectory>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachabilityMatrix {
    pub theory: String,
    pub source: Source,
    pub config: SemanticsConfig,
    pub horizon: usize,
    /// Row-major 16×16: `cells[init][goal]` in catalog order.
    pub cells: Vec<Vec<ReachCell>>,
}

impl ReachabilityMatrix {
    pub fn cell(&self, init: EmotionLabel, goal: EmotionLabel) -> &ReachCell {
        let i = CATALOG_LABELS.iter().position(|l| *l == init).unwrap();
        let g = CATALOG_LABELS.iter().position(|l| *l == goal).unwrap();
        &self.cells[i][g]
    }

    /// How many distinct initial configurations reach `goal`, self-pair
    /// excluded (the published counts exclude the diagonal).
    pub fn sources_reaching(&self, goal: EmotionLabel) -> usize {
        CATALOG_LABELS
            .iter()
            .filter(|init| **init != goal && self.cell(**init, goal).reachable)
            .count()
    }
}

/// A plan of at most `horizon` steps from `s0` to a state satisfying
/// `goal`; tries step counts in ascending order so the witness is shortest.
fn plan_within(
    d: &DomainDescription,
    s0: &State,
    goal: &[FluentLiteral],
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
) -> Option<Trajectory> {
    (0..=horizon).find_map(|h| plan_from_state(d, s0, goal, h, config, policy))
}

fn goal_literals(label: EmotionLabel) -> Vec<FluentLiteral> {
    state_of_label(label)
        .mental
        .iter()
        .map(|(c, v)| FluentLiteral::mental(c, v))
        .collect()
}

pub fn reachability(spec: &TheorySpec, config: SemanticsConfig, horizon: usize) -> ReachabilityMatrix {
    let d = catalog_domain(Some(spec));
    let rows = |init: &EmotionLabel| -> Vec<ReachCell> {
        let s0 = state_of_label(*init);
        CATALOG_LABELS
            .iter()
            .map(|goal| {
                let witness = plan_within(
                    &d,
                    &s0,
                    &goal_literals(*goal),
                    horizon,
                    config,
                    ActionPolicy::SingletonOrEmpty,
                );
                ReachCell {
                    init: *init,
                    goal: *goal,
                    reachable: witness.is_some(),
                    self_pair: init == goal,
                    witness,
                }
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let cells: Vec<Vec<ReachCell>> = CATALOG_LABELS.par_iter().map(rows).collect();
    #[cfg(not(feature = "parallel"))]
    let cells: Vec<Vec<ReachCell>> = CATALOG_LABELS.iter().map(rows).collect();
    ReachabilityMatrix {
        theory: spec.name.to_string(),
        source: spec.source,
        config,
        horizon,
        cells,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityTable {
    pub horizon: usize,
    /// Number of trajectories the weights are normalized by.
    pub denominator: usize,
    /// Per class, `weights[i-1]` is the fraction of trajectories whose
    /// class value changed between s_{i-1} and s_i.
    pub weights: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("priority table requires at least one trajectory")]
    EmptyTrajectorySet,
    #[error("trajectory has horizon {found}, expected {expected}")]
    HorizonMismatch { expected: usize, found: usize },
}

pub fn priority(trajectories: &[Trajectory], horizon: usize) -> Result<PriorityTable, AnalysisError> {
    if trajectories.is_empty() {
        return Err(AnalysisError::EmptyTrajectorySet);
    }
    for tr in trajectories {
        if tr.horizon() != horizon {
            return Err(AnalysisError::HorizonMismatch { expected: horizon, found: tr.horizon() });
        }
    }
    let classes: Vec<String> = trajectories[0].states[0].mental.keys().cloned().collect();
    let mut weights: BTreeMap<String, Vec<f64>> =
        classes.iter().map(|c| (c.clone(), vec![0.0; horizon])).collect();
    for tr in trajectories {
        for i in 1..=horizon {
            for c in &classes {
                if tr.states[i - 1].mental.get(c) != tr.states[i].mental.get(c) {
                    weights.get_mut(c).unwrap()[i - 1] += 1.0;
                }
            }
        }
    }
    let n = trajectories.len() as f64;
    for w in weights.values_mut() {
        for x in w.iter_mut() {
            *x /= n;
        }
    }
    Ok(PriorityTable { horizon, denominator: trajectories.len(), weights })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub init_label: String,
    pub goal_label: String,
    pub theory: String,
    pub orientation: String,
    pub firing: String,
    pub horizon: usize,
    pub status: String,
    pub plan: String,
    pub wall_ms: u64,
}

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySummary {
    pub theory: String,
    pub sat_total: usize,
    pub unsat_total: usize,
    pub sat_self_pairs: usize,
    pub sat_excluding_self: usize,
    /// Goals reachable from every other initial configuration.
    pub goals_reachable_from_all: Vec<String>,
    /// Goals reachable from no other initial configuration.
    pub goals_unreachable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub schema_version: u32,
    pub source: String,
    pub orientation: String,
    pub firing: String,
    pub horizon: usize,
    pub total_runs: usize,
    pub theories: Vec<TheorySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub summary: ExperimentSummary,
}

fn render_plan(tr: &Trajectory) -> String {
    if tr.actions.is_empty() {
        return "(empty)".to_string();
    }
    tr.actions
        .iter()
        .map(|step| if step.is_empty() { "-".to_string() } else { step.join("+") })
        .collect::<Vec<_>>()
        .join(";")
}

/// The full grid: 16 initial × 16 goal configurations × both theories at
/// the given source and configuration — 512 runs. Row order is
/// (theory, init index, goal index), stable across runs.
pub fn run_experiment(source: Source, config: SemanticsConfig, horizon: usize) -> ExperimentReport {
    let mut rows = Vec::with_capacity(512);
    let mut theories = Vec::new();
    for name in ["her", "uer"] {
        let spec = builtin_theory(name, source).expect("builtin theory");
        let started = Instant::now();
        let matrix = reachability(&spec, config, horizon);
        let _ = started;
        let mut sat_total = 0;
        let mut sat_self = 0;
        for init in CATALOG_LABELS {
            for goal in CATALOG_LABELS {
                let t0 = Instant::now();
                let cell = matrix.cell(init, goal);
                let status = if cell.reachable { "SAT" } else { "UNSAT" };
                if cell.reachable {
                    sat_total += 1;
                    if cell.self_pair {
                        sat_self += 1;
                    }
                }
                rows.push(ExperimentRow {
                    init_label: init.to_string(),
                    goal_label: goal.to_string(),
                    theory: name.to_string(),
                    orientation: config.orientation.to_string(),
                    firing: config.firing.to_string(),
                    horizon,
                    status: status.to_string(),
                    plan: cell
                        .witness
                        .as_ref()
                        .map(render_plan)
                        .unwrap_or_else(|| "-".to_string()),
                    wall_ms: t0.elapsed().as_millis() as u64,
                });
            }
        }
        let goals_reachable_from_all: Vec<String> = CATALOG_LABELS
            .iter()
            .filter(|g| matrix.sources_reaching(**g) == 15)
            .map(|g| g.to_string())
            .collect();
        let goals_unreachable: Vec<String> = CATALOG_LABELS
            .iter()
            .filter(|g| matrix.sources_reaching(**g) == 0)
            .map(|g| g.to_string())
            .collect();
        theories.push(TheorySummary {
            theory: name.to_string(),
            sat_total,
            unsat_total: 256 - sat_total,
            sat_self_pairs: sat_self,
            sat_excluding_self: sat_total - sat_self,
            goals_reachable_from_all,
            goals_unreachable,
        });
    }
    let summary = ExperimentSummary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        source: source.to_string(),
        orientation: config.orientation.to_string(),
        firing: config.firing.to_string(),
        horizon,
        total_runs: rows.len(),
        theories,
    };
    ExperimentReport { rows, summary }
}

pub const CSV_HEADER: &str =
    "init_label,goal_label,theory,orientation,firing,horizon,status,plan,wall_ms";

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.init_label,
            r.goal_label,
            r.theory,
            r.orientation,
            r.firing,
            r.horizon,
            r.status,
            r.plan,
            r.wall_ms
        ));
    }
    out
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ExperimentRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("unexpected CSV header: {other:?}")),
    }
    let mut rows = Vec::new();
    for (no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 9 {
            return Err(format!("line {}: expected 9 fields, found {}", no + 2, parts.len()));
        }
        rows.push(ExperimentRow {
            init_label: parts[0].to_string(),
            goal_label: parts[1].to_string(),
            theory: parts[2].to_string(),
            orientation: parts[3].to_string(),
            firing: parts[4].to_string(),
            horizon: parts[5].parse().map_err(|e| format!("line {}: {e}", no + 2))?,
            status: parts[6].to_string(),
            plan: parts[7].to_string(),
            wall_ms: parts[8].parse().map_err(|e| format!("line {}: {e}", no + 2))?,
        });
    }
    Ok(rows)
}

/// The published six-step trajectory: Anger, Guilt, Pride, Hope, Pride,
/// Hope, Joy.
pub fn reference_trajectory() -> Vec<State> {
    use EmotionLabel::*;
    [Anger, Guilt, Pride, Hope, Pride, Hope, Joy].iter().map(|l| state_of_label(*l)).collect()
}

/// Published verdicts for the six transitions: HER violates only the
/// first; UER violates all six.
pub const REFERENCE_HER: [bool; 6] = [false, true, true, true, true, true];
pub const REFERENCE_UER: [bool; 6] = [false; 6];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEvaluation {
    pub source: String,
    pub orientation: String,
    pub firing: String,
    pub her: Vec<bool>,
    pub uer: Vec<bool>,
    pub matches_reference: bool,
    /// Rule ids fired per transition, HER then UER, for id-level
    /// comparison against the published citations.
    pub her_fired: Vec<Vec<u32>>,
    pub uer_fired: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub evaluations: Vec<ConfigEvaluation>,
    /// (source, orientation, firing) triples whose twelve pass/violate
    /// booleans equal the published ones.
    pub matching_configs: Vec<(String, String, String)>,
    /// Anger→Liking (HER) satisfiability: conflicts across firing modes.
    pub anger_liking_holding_sat: bool,
    pub anger_liking_onset_sat: bool,
    /// Fear→Regret (HER) satisfiability: conflicts across firing modes.
    pub fear_regret_holding_sat: bool,
    pub fear_regret_onset_sat: bool,
}

impl DiscrepancyReport {
    /// Both published satisfiability conflicts are visible: Anger→Liking
    /// needs onset to be SAT, Fear→Regret needs holding to be UNSAT.
    pub fn conflicts_detected(&self) -> bool {
        (!self.anger_liking_holding_sat && self.anger_liking_onset_sat)
            && (self.fear_regret_onset_sat && !self.fear_regret_holding_sat)
    }
}

const ALL_CONFIGS: [SemanticsConfig; 4] = [
    SemanticsConfig { orientation: Orientation::AsWritten, firing: Firing::Holding },
    SemanticsConfig { orientation: Orientation::AsWritten, firing: Firing::Onset },
    SemanticsConfig { orientation: Orientation::Reversed, firing: Firing::Holding },
    SemanticsConfig { orientation: Orientation::Reversed, firing: Firing::Onset },
];

pub fn discrepancy_report() -> DiscrepancyReport {
    let states = reference_trajectory();
    let mut evaluations = Vec::new();
    let mut matching = Vec::new();
    for source in [Source::Definition, Source::Listing] {
        let her = builtin_theory("her", source).expect("builtin");
        let uer = builtin_theory("uer", source).expect("builtin");
        for config in ALL_CONFIGS {
            let judge = |spec: &TheorySpec| -> (Vec<bool>, Vec<Vec<u32>>) {
                let mut passes = Vec::new();
                let mut fired = Vec::new();
                for w in states.windows(2) {
                    let j = check_transition(spec, config, &w[0], &w[1]);
                    passes.push(j.pass);
                    fired.push(j.fired.iter().map(|f| f.rule_id).collect());
                }
                (passes, fired)
            };
            let (her_pass, her_fired) = judge(&her);
            let (uer_pass, uer_fired) = judge(&uer);
            let matches_reference = her_pass == REFERENCE_HER && uer_pass == REFERENCE_UER;
            if matches_reference {
                matching.push((
                    source.to_string(),
                    config.orientation.to_string(),
                    config.firing.to_string(),
                ));
            }
            evaluations.push(ConfigEvaluation {
                source: source.to_string(),
                orientation: config.orientation.to_string(),
                firing: config.firing.to_string(),
                her: her_pass,
                uer: uer_pass,
                matches_reference,
                her_fired,
                uer_fired,
            });
        }
    }

    let her_listing = builtin_theory("her", Source::Listing).expect("builtin");
    let sat = |init: EmotionLabel, goal: EmotionLabel, firing: Firing| -> bool {
        let config = SemanticsConfig { orientation: Orientation::AsWritten, firing };
        let d = catalog_domain(Some(&her_listing));
        plan_within(
            &d,
            &state_of_label(init),
            &goal_literals(goal),
            6,
            config,
            ActionPolicy::SingletonOrEmpty,
        )
        .is_some()
    };
    DiscrepancyReport {
        evaluations,
        matching_configs: matching,
        anger_liking_holding_sat: sat(EmotionLabel::Anger, EmotionLabel::Liking, Firing::Holding),
        anger_liking_onset_sat: sat(EmotionLabel::Anger, EmotionLabel::Liking, Firing::Onset),
        fear_regret_holding_sat: sat(EmotionLabel::Fear, EmotionLabel::Regret, Firing::Holding),
        fear_regret_onset_sat: sat(EmotionLabel::Fear, EmotionLabel::Regret, Firing::Onset),
    }
}

/// Exhaustive transition-level check that a theory's constraint set
/// preserves the given per-state predicate: no passing transition leaves
/// the set of states satisfying it. Returns the first counterexample.
pub fn preserves_predicate(
    spec: &TheorySpec,
    config: SemanticsConfig,
    predicate: impl Fn(&State) -> bool,
) -> Option<(State, State)> {
    let classes = emotion_classes();
    let states: Vec<State> = crate::model::enumerate_state_space(&classes)
        .map(|mental| State { env: Default::default(), mental })
        .collect();
    for s in states.iter().filter(|s| predicate(s)) {
        for s_next in &states {
            if !predicate(s_next) && check_transition(spec, config, s, s_next).pass {
                return Some((s.clone(), s_next.clone()));
            }
        }
    }
    None
}

pub fn theory_display(name: TheoryName) -> &'static str {
    match name {
        TheoryName::Her => "her",
        TheoryName::Uer => "uer",
        TheoryName::Custom => "custom",
    }
}
