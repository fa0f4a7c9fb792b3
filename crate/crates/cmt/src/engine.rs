//! Operational semantics: activation sets, successor computation, bounded
//! trajectory enumeration, trajectory models, consistency, planning and
//! query evaluation.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{
    is_state, ActionSymbol, ActionTheory, CausalLaw, DomainDescription, FluentLiteral, Ident,
    MentalFluent, Observation, Polarity, Query, State,
};

/// Which side of a forbids-to-cause rule is read as the time-t condition.
/// `AsWritten` keeps the stored orientation (left at t, right forbidden at
/// t+1); `Reversed` swaps the sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    AsWritten,
    Reversed,
}

/// Whether a forbidden fluent violates the constraint whenever it holds at
/// t+1 (`Holding`) or only when it newly holds (`Onset`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Firing {
    Holding,
    Onset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemanticsConfig {
    pub orientation: Orientation,
    pub firing: Firing,
}

impl Default for SemanticsConfig {
    /// The reference configuration: constraints read as written, firing
    /// whenever the forbidden fluent holds in the successor state.
    fn default() -> Self {
        Self { orientation: Orientation::AsWritten, firing: Firing::Holding }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::AsWritten => write!(f, "as-written"),
            Orientation::Reversed => write!(f, "reversed"),
        }
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "as-written" => Ok(Orientation::AsWritten),
            "reversed" => Ok(Orientation::Reversed),
            other => Err(format!("unknown orientation `{other}` (expected `as-written` or `reversed`)")),
        }
    }
}

impl fmt::Display for Firing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Firing::Holding => write!(f, "holding"),
            Firing::Onset => write!(f, "onset"),
        }
    }
}

impl FromStr for Firing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "holding" => Ok(Firing::Holding),
            "onset" => Ok(Firing::Onset),
            other => Err(format!("unknown firing mode `{other}` (expected `holding` or `onset`)")),
        }
    }
}

impl fmt::Display for SemanticsConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "orientation={}, firing={}", self.orientation, self.firing)
    }
}

/// How candidate action sets are generated per step. Every plan in the
/// reference experiments uses at most one action per time point; the full
/// subset semantics stays available behind `AnySubset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionPolicy {
    SingletonOrEmpty,
    AnySubset,
}

/// The per-state activation sets of the domain-description definition,
/// plus the forbidden-fluent pairs for the configured orientation. The
/// firing test against s_{t+1} is applied by `step`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationProfile {
    pub triggered: BTreeSet<Ident>,
    pub trigger_blocked: BTreeSet<Ident>,
    pub allowed: BTreeSet<Ident>,
    pub allow_blocked: BTreeSet<Ident>,
    pub inhibited: BTreeSet<Ident>,
    pub facilitated: BTreeSet<Ident>,
    pub facilitate_blocked: BTreeSet<Ident>,
    pub contravened: BTreeSet<Ident>,
    /// (rule id, forbidden fluent) for every forbids-to-cause rule whose
    /// condition side holds in s.
    pub forbidden_next: Vec<(u32, MentalFluent)>,
}

/// Computes the activation sets of Def.-style items 1–5 and 10 for one
/// state. Facilitating and contravening rules block each other at the
/// body level: a facilitating rule is active iff its body holds and no
/// inhibiting or contravening rule of the action has a satisfied body
/// (symmetrically for contravening rules), which breaks the mutual-
/// passivity circularity of the textual definition.
pub fn activation_profile(d: &DomainDescription, s: &State, orientation: Orientation) -> ActivationProfile {
    let mut profile = ActivationProfile::default();

    let inhibited_body = |action: &str| {
        d.laws.iter().any(|law| {
            matches!(law, CausalLaw::Inhibits { conditions, action: a }
                if a == action && s.satisfies_all(conditions))
        })
    };
    let fac_body = |action: &str| {
        d.laws.iter().any(|law| {
            matches!(law, CausalLaw::Facilitates { conditions, action: a }
                if a == action && conditions.iter().all(|m| s.has_mental(m)))
        })
    };
    let contra_body = |action: &str| {
        d.laws.iter().any(|law| {
            matches!(law, CausalLaw::Contravenes { conditions, action: a }
                if a == action && conditions.iter().all(|m| s.has_mental(m)))
        })
    };

    // Per-action rule inventories, so the "has at least one rule, all
    // passive" sets can be computed.
    let mut has_trigger: BTreeMap<&str, bool> = BTreeMap::new();
    let mut has_allow: BTreeMap<&str, bool> = BTreeMap::new();
    let mut has_fac: BTreeMap<&str, bool> = BTreeMap::new();

    for law in &d.laws {
        match law {
            CausalLaw::Inhibits { conditions, action } => {
                if s.satisfies_all(conditions) {
                    profile.inhibited.insert(action.clone());
                }
            }
            CausalLaw::Triggers { conditions, action } => {
                has_trigger.insert(action, true);
                if s.satisfies_all(conditions) && !inhibited_body(action) {
                    profile.triggered.insert(action.clone());
                }
            }
            CausalLaw::Allows { conditions, action } => {
                has_allow.insert(action, true);
                if s.satisfies_all(conditions) && !inhibited_body(action) {
                    profile.allowed.insert(action.clone());
                }
            }
            CausalLaw::Facilitates { conditions, action } => {
                has_fac.insert(action, true);
                if conditions.iter().all(|m| s.has_mental(m))
                    && !inhibited_body(action)
                    && !contra_body(action)
                {
                    profile.facilitated.insert(action.clone());
                }
            }
            CausalLaw::Contravenes { conditions, action } => {
                if conditions.iter().all(|m| s.has_mental(m))
                    && !inhibited_body(action)
                    && !fac_body(action)
                {
                    profile.contravened.insert(action.clone());
                }
            }
            CausalLaw::ForbidsToCause { left, right, id } => {
                let (conditions, forbidden) = match orientation {
                    Orientation::AsWritten => (left, right),
                    Orientation::Reversed => (right, left),
                };
                if conditions.iter().all(|m| s.has_mental(m)) {
                    for f in forbidden {
                        profile.forbidden_next.push((*id, f.clone()));
                    }
                }
            }
            _ => {}
        }
    }

    for (action, _) in has_trigger {
        if !profile.triggered.contains(action) {
            profile.trigger_blocked.insert(action.to_string());
        }
    }
    for (action, _) in has_allow {
        if !profile.allowed.contains(action) {
            profile.allow_blocked.insert(action.to_string());
        }
    }
    for (action, _) in has_fac {
        if !profile.facilitated.contains(action) {
            profile.facilitate_blocked.insert(action.to_string());
        }
    }
    profile
}

/// Why a fluent holds its value in a successor state.
pub type Provenance = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Trajectory condition k (2–9) failed; `detail` names the actions.
    ConditionViolated { condition: u8, detail: String },
    ContradictoryEffects { detail: String },
    ForbiddenFluent { rule_id: u32, fluent: MentalFluent },
    StaticClosureDiverged,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ConditionViolated { condition, detail } => {
                write!(f, "trajectory condition {condition} violated: {detail}")
            }
            Violation::ContradictoryEffects { detail } => write!(f, "contradictory effects: {detail}"),
            Violation::ForbiddenFluent { rule_id, fluent } => {
                write!(f, "forbidden fluent {fluent} (rule {rule_id})")
            }
            Violation::StaticClosureDiverged => write!(f, "static closure did not reach a fixpoint"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub state: State,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid transition: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct StepError {
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Strength {
    Weak,
    Strong,
}

struct Assignment {
    env: BTreeMap<Ident, (bool, Strength, String)>,
    mental: BTreeMap<Ident, (Ident, Strength, String)>,
}

/// Computes the successor of `s` under action set `actions`, or every
/// violated validity condition. Successor construction: dynamic effects of
/// applicable laws, then default values for untouched default fluents,
/// inertia for the rest, then static closure to fixpoint (closure effects
/// override inertia/default values but clash with dynamic effects), and
/// finally the forbidden-fluent check under `config`.
pub fn step(
    d: &DomainDescription,
    s: &State,
    actions: &BTreeSet<Ident>,
    config: SemanticsConfig,
) -> Result<StepResult, StepError> {
    let mut violations = Vec::new();
    let profile = activation_profile(d, s, config.orientation);

    check_action_conditions(d, actions, &profile, &mut violations);

    // Dynamic effects (strong values).
    let mut assign = Assignment { env: BTreeMap::new(), mental: BTreeMap::new() };
    for (i, law) in d.laws.iter().enumerate() {
        match law {
            CausalLaw::Causes { action, effects, conditions } if actions.contains(action) => {
                if s.satisfies_all(conditions) {
                    for e in effects {
                        apply_literal(&mut assign, e, Strength::Strong, format!("dynamic:{i}"), &mut violations);
                    }
                }
            }
            CausalLaw::InfluencesDyn { action, effects, conditions } if actions.contains(action) => {
                if s.satisfies_all(conditions) {
                    for m in effects {
                        apply_mental(&mut assign, m, Strength::Strong, format!("dynamic:{i}"), &mut violations);
                    }
                }
            }
            _ => {}
        }
    }

    // Defaults for untouched non-inertial fluents, inertia for the rest.
    for (i, law) in d.laws.iter().enumerate() {
        if let CausalLaw::Default { literal } = law {
            match literal {
                FluentLiteral::Env { name, polarity } => {
                    assign.env.entry(name.clone()).or_insert((
                        *polarity == Polarity::Pos,
                        Strength::Weak,
                        format!("default:{i}"),
                    ));
                }
                FluentLiteral::Mental(m) => {
                    assign.mental.entry(m.class.clone()).or_insert((
                        m.value.clone(),
                        Strength::Weak,
                        format!("default:{i}"),
                    ));
                }
            }
        }
    }
    for (name, value) in &s.env {
        assign.env.entry(name.clone()).or_insert((*value, Strength::Weak, "inertia".to_string()));
    }
    for (class, value) in &s.mental {
        assign.mental.entry(class.clone()).or_insert((value.clone(), Strength::Weak, "inertia".to_string()));
    }

    static_closure(d, &mut assign, &mut violations);

    let state = State {
        env: assign.env.iter().map(|(k, (v, _, _))| (k.clone(), *v)).collect(),
        mental: assign.mental.iter().map(|(k, (v, _, _))| (k.clone(), v.clone())).collect(),
    };

    // Condition 10: forbidden fluents in the successor.
    for (rule_id, fluent) in &profile.forbidden_next {
        let fires = match config.firing {
            Firing::Holding => state.has_mental(fluent),
            Firing::Onset => state.has_mental(fluent) && !s.has_mental(fluent),
        };
        if fires {
            violations.push(Violation::ForbiddenFluent { rule_id: *rule_id, fluent: fluent.clone() });
        }
    }

    if !violations.is_empty() {
        return Err(StepError { violations });
    }

    let mut provenance: Provenance = Vec::new();
    for (k, (_, _, why)) in &assign.env {
        provenance.push((k.clone(), why.clone()));
    }
    for (k, (v, _, why)) in &assign.mental {
        provenance.push((format!("f({k},{v})"), why.clone()));
    }
    Ok(StepResult { state, provenance })
}

fn check_action_conditions(
    d: &DomainDescription,
    actions: &BTreeSet<Ident>,
    profile: &ActivationProfile,
    violations: &mut Vec<Violation>,
) {
    let missing: Vec<&Ident> = profile.triggered.iter().filter(|a| !actions.contains(*a)).collect();
    if !missing.is_empty() {
        violations.push(Violation::ConditionViolated {
            condition: 2,
            detail: format!("triggered actions not executed: {missing:?}"),
        });
    }
    let missing: Vec<&Ident> = profile.facilitated.iter().filter(|a| !actions.contains(*a)).collect();
    if !missing.is_empty() {
        violations.push(Violation::ConditionViolated {
            condition: 3,
            detail: format!("facilitated actions not executed: {missing:?}"),
        });
    }
    for (k, blocked) in [
        (4u8, &profile.trigger_blocked),
        (5, &profile.allow_blocked),
        (6, &profile.inhibited),
        (7, &profile.facilitate_blocked),
        (8, &profile.contravened),
    ] {
        let clash: Vec<&Ident> = actions.iter().filter(|a| blocked.contains(*a)).collect();
        if !clash.is_empty() {
            violations.push(Violation::ConditionViolated {
                condition: k,
                detail: format!("blocked actions executed: {clash:?}"),
            });
        }
    }
    for law in &d.laws {
        if let CausalLaw::NoConcurrency { actions: group } = law {
            let overlap: Vec<&Ident> = group.iter().filter(|a| actions.contains(*a)).collect();
            if overlap.len() > 1 {
                violations.push(Violation::ConditionViolated {
                    condition: 9,
                    detail: format!("noconcurrency group overlap: {overlap:?}"),
                });
            }
        }
    }
}

fn apply_literal(
    assign: &mut Assignment,
    literal: &FluentLiteral,
    strength: Strength,
    why: String,
    violations: &mut Vec<Violation>,
) {
    match literal {
        FluentLiteral::Env { name, polarity } => {
            let value = *polarity == Polarity::Pos;
            match assign.env.get(name) {
                Some((existing, st, _)) if *existing != value && *st >= strength => {
                    violations.push(Violation::ContradictoryEffects {
                        detail: format!("env fluent `{name}` set to both true and false"),
                    });
                }
                _ => {
                    assign.env.insert(name.clone(), (value, strength, why));
                }
            }
        }
        FluentLiteral::Mental(m) => apply_mental(assign, m, strength, why, violations),
    }
}

fn apply_mental(
    assign: &mut Assignment,
    m: &MentalFluent,
    strength: Strength,
    why: String,
    violations: &mut Vec<Violation>,
) {
    match assign.mental.get(&m.class) {
        Some((existing, st, _)) if *existing != m.value && *st >= strength => {
            violations.push(Violation::ContradictoryEffects {
                detail: format!("class `{}` assigned both `{existing}` and `{}`", m.class, m.value),
            });
        }
        _ => {
            assign.mental.insert(m.class.clone(), (m.value.clone(), strength, why));
        }
    }
}

fn assignment_satisfies(assign: &Assignment, literal: &FluentLiteral) -> bool {
    match literal {
        FluentLiteral::Env { name, polarity } => assign
            .env
            .get(name)
            .map(|(v, _, _)| *v == (*polarity == Polarity::Pos))
            .unwrap_or(false),
        FluentLiteral::Mental(m) => {
            assign.mental.get(&m.class).map(|(v, _, _)| v == &m.value).unwrap_or(false)
        }
    }
}

fn static_closure(d: &DomainDescription, assign: &mut Assignment, violations: &mut Vec<Violation>) {
    let bound = (d.laws.len() + 1) * (assign.env.len() + assign.mental.len() + 1);
    for _ in 0..bound {
        let mut changed = false;
        for (i, law) in d.laws.iter().enumerate() {
            let (conditions_hold, effects): (bool, Vec<FluentLiteral>) = match law {
                CausalLaw::Static { effects, conditions } => {
                    (conditions.iter().all(|c| assignment_satisfies(assign, c)), effects.clone())
                }
                CausalLaw::InfluencesStatic { conditions, effects } => (
                    conditions.iter().all(|c| assignment_satisfies(assign, c)),
                    effects.iter().cloned().map(FluentLiteral::Mental).collect(),
                ),
                _ => continue,
            };
            if !conditions_hold {
                continue;
            }
            for e in &effects {
                if assignment_satisfies(assign, e) {
                    continue;
                }
                let before = violations.len();
                apply_literal(assign, e, Strength::Strong, format!("static:{i}"), violations);
                if violations.len() == before {
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
        if !violations.is_empty() {
            return;
        }
    }
    violations.push(Violation::StaticClosureDiverged);
}

pub const TRAJECTORY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub schema_version: u32,
    pub states: Vec<State>,
    pub actions: Vec<Vec<Ident>>,
    pub provenance: Vec<Provenance>,
}

impl Trajectory {
    pub fn initial(s0: State) -> Self {
        Trajectory {
            schema_version: TRAJECTORY_SCHEMA_VERSION,
            states: vec![s0],
            actions: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    pub fn last_state(&self) -> &State {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

/// Candidate action sets in deterministic order: the empty set first, then
/// singletons (or subsets, by ascending bitmask) in declaration order.
fn candidate_action_sets(actions: &[ActionSymbol], policy: ActionPolicy) -> Vec<BTreeSet<Ident>> {
    match policy {
        ActionPolicy::SingletonOrEmpty => {
            let mut out = vec![BTreeSet::new()];
            for a in actions {
                out.push(BTreeSet::from([a.name.clone()]));
            }
            out
        }
        ActionPolicy::AnySubset => {
            let n = actions.len().min(16);
            (0..(1usize << n))
                .map(|mask| {
                    actions
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, a)| a.name.clone())
                        .collect()
                })
                .collect()
        }
    }
}

/// Depth-first enumeration of every valid `horizon`-step trajectory from
/// `s0`, in deterministic candidate order. The visitor may stop the
/// enumeration early by returning `ControlFlow::Break`.
pub fn for_each_trajectory(
    d: &DomainDescription,
    s0: &State,
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
    visit: &mut dyn FnMut(&Trajectory) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let candidates = candidate_action_sets(&d.actions, policy);
    let mut current = Trajectory::initial(s0.clone());
    dfs(d, horizon, config, &candidates, &mut current, &mut |t| visit(t), &NoPrune)
}

trait Prune {
    /// Required actions for the step producing s_{depth+1}; None = no
    /// requirement. Returning false from `admit_state` prunes the branch.
    fn required_actions(&self, _depth: usize) -> Option<&BTreeSet<Ident>> {
        None
    }
    fn admit_state(&self, _index: usize, _s: &State) -> bool {
        true
    }
}

struct NoPrune;
impl Prune for NoPrune {}

fn dfs(
    d: &DomainDescription,
    horizon: usize,
    config: SemanticsConfig,
    candidates: &[BTreeSet<Ident>],
    current: &mut Trajectory,
    visit: &mut dyn FnMut(&Trajectory) -> ControlFlow<()>,
    prune: &dyn Prune,
) -> ControlFlow<()> {
    if current.horizon() == horizon {
        return visit(current);
    }
    let depth = current.horizon();
    let s = current.last_state().clone();
    for cand in candidates {
        if let Some(required) = prune.required_actions(depth) {
            if !required.is_subset(cand) {
                continue;
            }
        }
        let Ok(result) = step(d, &s, cand, config) else { continue };
        if !prune.admit_state(depth + 1, &result.state) {
            continue;
        }
        current.states.push(result.state);
        current.actions.push(cand.iter().cloned().collect());
        current.provenance.push(result.provenance);
        let flow = dfs(d, horizon, config, candidates, current, visit, prune);
        current.states.pop();
        current.actions.pop();
        current.provenance.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// All valid trajectories of exactly `horizon` steps (use only on small
/// domains; prefer `for_each_trajectory` for searches).
pub fn trajectories(
    d: &DomainDescription,
    s0: &State,
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
) -> Vec<Trajectory> {
    let mut out = Vec::new();
    let _ = for_each_trajectory(d, s0, horizon, config, policy, &mut |t| {
        out.push(t.clone());
        ControlFlow::Continue(())
    });
    out
}

struct ObservationPrune {
    required: BTreeMap<usize, BTreeSet<Ident>>,
    literals: BTreeMap<usize, Vec<FluentLiteral>>,
}

impl Prune for ObservationPrune {
    fn required_actions(&self, depth: usize) -> Option<&BTreeSet<Ident>> {
        self.required.get(&depth)
    }

    fn admit_state(&self, index: usize, s: &State) -> bool {
        self.literals.get(&index).map(|lits| s.satisfies_all(lits)).unwrap_or(true)
    }
}

/// Enumerates every total initial state consistent with the time-0 fluent
/// observations and closed under static laws.
pub fn initial_completions(theory: &ActionTheory) -> Vec<State> {
    let d = &theory.domain;
    let mut pinned_env: BTreeMap<&str, bool> = BTreeMap::new();
    let mut pinned_mental: BTreeMap<&str, &str> = BTreeMap::new();
    for obs in &theory.observations {
        if let Observation::FluentAt { literal, t: 0 } = obs {
            match literal {
                FluentLiteral::Env { name, polarity } => {
                    pinned_env.insert(name, *polarity == Polarity::Pos);
                }
                FluentLiteral::Mental(m) => {
                    pinned_mental.insert(&m.class, &m.value);
                }
            }
        }
    }

    let mut completions = vec![State::default()];
    for f in &d.env_fluents {
        let choices: Vec<bool> = match pinned_env.get(f.as_str()) {
            Some(v) => vec![*v],
            None => vec![false, true],
        };
        completions = completions
            .into_iter()
            .flat_map(|base| {
                choices.iter().map(move |v| {
                    let mut s = base.clone();
                    s.env.insert(f.clone(), *v);
                    s
                })
            })
            .collect();
    }
    for c in &d.classes {
        let choices: Vec<&str> = match pinned_mental.get(c.name.as_str()) {
            Some(v) => vec![v],
            None => c.values.iter().map(String::as_str).collect(),
        };
        completions = completions
            .into_iter()
            .flat_map(|base| {
                choices.iter().map(move |v| {
                    let mut s = base.clone();
                    s.mental.insert(c.name.clone(), v.to_string());
                    s
                })
            })
            .collect();
    }
    completions.retain(|s| is_state(d, s).0);
    completions
}

fn observation_prune(theory: &ActionTheory, horizon: usize) -> Option<ObservationPrune> {
    let mut prune = ObservationPrune { required: BTreeMap::new(), literals: BTreeMap::new() };
    for obs in &theory.observations {
        match obs {
            Observation::FluentAt { literal, t } => {
                if *t > horizon {
                    return None; // unsatisfiable within the horizon
                }
                if *t > 0 {
                    prune.literals.entry(*t).or_default().push(literal.clone());
                }
            }
            Observation::OccursAt { action, t } => {
                // (a occurs_at t) constrains A_{t+1}, the step from s_t.
                if *t >= horizon {
                    return None;
                }
                prune.required.entry(*t).or_default().insert(action.clone());
            }
        }
    }
    Some(prune)
}

/// Enumerates trajectory models: valid trajectories from every admissible
/// initial completion that satisfy all observations.
pub fn for_each_trajectory_model(
    theory: &ActionTheory,
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
    visit: &mut dyn FnMut(&Trajectory) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some(prune) = observation_prune(theory, horizon) else {
        return ControlFlow::Continue(());
    };
    let candidates = candidate_action_sets(&theory.domain.actions, policy);
    for s0 in initial_completions(theory) {
        let mut current = Trajectory::initial(s0);
        dfs(&theory.domain, horizon, config, &candidates, &mut current, visit, &prune)?;
    }
    ControlFlow::Continue(())
}

pub fn trajectory_models(
    theory: &ActionTheory,
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
) -> Vec<Trajectory> {
    let mut out = Vec::new();
    let _ = for_each_trajectory_model(theory, horizon, config, policy, &mut |t| {
        out.push(t.clone());
        ControlFlow::Continue(())
    });
    out
}

/// True iff at least one trajectory model exists (short-circuits).
pub fn consistent(theory: &ActionTheory, horizon: usize, config: SemanticsConfig, policy: ActionPolicy) -> bool {
    for_each_trajectory_model(theory, horizon, config, policy, &mut |_| ControlFlow::Break(()))
        .is_break()
}

/// Breadth-first bounded planning: a valid trajectory of exactly `horizon`
/// steps from `s0` whose final state satisfies every goal literal, or None.
/// Visited (state, depth) pairs are memoized; candidate order makes the
/// returned plan deterministic.
pub fn plan_from_state(
    d: &DomainDescription,
    s0: &State,
    goal: &[FluentLiteral],
    horizon: usize,
    config: SemanticsConfig,
    policy: ActionPolicy,
) -> Option<Trajectory> {
    #[derive(Clone)]
    struct Node {
        state: State,
        depth: usize,
        parent: usize,
        actions: Vec<Ident>,
        provenance: Provenance,
    }

    let candidates = candidate_action_sets(&d.actions, policy);
    let mut arena = vec![Node {
        state: s0.clone(),
        depth: 0,
        parent: usize::MAX,
        actions: Vec::new(),
        provenance: Vec::new(),
    }];
    let mut visited: HashSet<(State, usize)> = HashSet::from([(s0.clone(), 0)]);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);

    while let Some(idx) = queue.pop_front() {
        let (depth, state) = (arena[idx].depth, arena[idx].state.clone());
        if depth == horizon {
            if state.satisfies_all(goal) {
                let mut rev = Vec::new();
                let mut at = idx;
                while at != usize::MAX {
                    rev.push(at);
                    at = arena[at].parent;
                }
                rev.reverse();
                let mut t = Trajectory::initial(arena[rev[0]].state.clone());
                for &i in &rev[1..] {
                    t.states.push(arena[i].state.clone());
                    t.actions.push(arena[i].actions.clone());
                    t.provenance.push(arena[i].provenance.clone());
                }
                return Some(t);
            }
            continue;
        }
        for cand in &candidates {
            let Ok(result) = step(d, &state, cand, config) else { continue };
            let key = (result.state.clone(), depth + 1);
            if !visited.insert(key) {
                continue;
            }
            arena.push(Node {
                state: result.state,
                depth: depth + 1,
                parent: idx,
                actions: cand.iter().cloned().collect(),
                provenance: result.provenance,
            });
            queue.push_back(arena.len() - 1);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryMode {
    Skeptical,
    Credulous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryVerdict {
    pub truth: bool,
    /// The theory admits no trajectory models at all; a skeptical verdict
    /// is then vacuously true and flagged here.
    pub no_models: bool,
    /// Witness trajectory: satisfying model for a true credulous verdict,
    /// counterexample for a false skeptical one.
    pub witness: Option<Trajectory>,
}

/// Evaluates a query over the trajectory models of `theory` extended with
/// the query's action schedule; the goal is tested in the final state.
pub fn holds_query(
    theory: &ActionTheory,
    query: &Query,
    mode: QueryMode,
    config: SemanticsConfig,
    policy: ActionPolicy,
) -> QueryVerdict {
    let mut extended = theory.clone();
    for (actions, t) in &query.schedule {
        for a in actions {
            extended.observations.push(Observation::OccursAt { action: a.clone(), t: *t });
        }
    }
    let mut any_model = false;
    let mut witness: Option<Trajectory> = None;
    let flow = for_each_trajectory_model(&extended, query.horizon, config, policy, &mut |t| {
        any_model = true;
        let satisfied = t.last_state().satisfies_all(&query.goal);
        match mode {
            QueryMode::Credulous if satisfied => {
                witness = Some(t.clone());
                ControlFlow::Break(())
            }
            QueryMode::Skeptical if !satisfied => {
                witness = Some(t.clone());
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    });
    let found = flow.is_break();
    match mode {
        QueryMode::Credulous => QueryVerdict { truth: found, no_models: !any_model, witness },
        QueryMode::Skeptical => QueryVerdict { truth: !found, no_models: !any_model, witness },
    }
}
