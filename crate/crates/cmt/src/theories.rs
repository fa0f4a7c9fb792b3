//! Emotion instantiation: the four appraisal classes, the 16-emotion
//! catalog, the HER/UER transition-constraint sets (definition and listing
//! sources), per-transition judgment, and the EI_HER / EI_UER invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{Firing, Orientation, SemanticsConfig};
use crate::model::{CausalLaw, MentalFluent, PsychClass, State};

pub const NE: &str = "ne";
pub const GO: &str = "go";
pub const AC: &str = "ac";
pub const CO: &str = "co";

/// The four appraisal classes in declaration order. ne/go/co carry the
/// low < undecided < high order; ac is unordered.
pub fn emotion_classes() -> Vec<PsychClass> {
    let scale = |name: &str| PsychClass {
        name: name.to_string(),
        values: vec!["low".into(), "undecided".into(), "high".into()],
        ordered: true,
    };
    vec![
        scale(NE),
        scale(GO),
        PsychClass {
            name: AC.to_string(),
            values: vec!["self".into(), "other".into(), "environment".into(), "undecided".into()],
            ordered: false,
        },
        scale(CO),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EmotionLabel {
    Anger,
    Dislike,
    Disgust,
    Sadness,
    Hope,
    Frustration,
    Fear,
    Distress,
    Joy,
    Liking,
    Pride,
    Surprise,
    Relief,
    Regret,
    Shame,
    Guilt,
}

pub const CATALOG_LABELS: [EmotionLabel; 16] = [
    EmotionLabel::Anger,
    EmotionLabel::Dislike,
    EmotionLabel::Disgust,
    EmotionLabel::Sadness,
    EmotionLabel::Hope,
    EmotionLabel::Frustration,
    EmotionLabel::Fear,
    EmotionLabel::Distress,
    EmotionLabel::Joy,
    EmotionLabel::Liking,
    EmotionLabel::Pride,
    EmotionLabel::Surprise,
    EmotionLabel::Relief,
    EmotionLabel::Regret,
    EmotionLabel::Shame,
    EmotionLabel::Guilt,
];

impl EmotionLabel {
    /// Appraisal tuple in (ne, go, ac, co) order, abbreviated values:
    /// h/l/u on the scales, s/o/e/u for accountability.
    fn tuple(self) -> (&'static str, &'static str, &'static str, &'static str) {
        use EmotionLabel::*;
        match self {
            Anger => ("high", "low", "other", "high"),
            Dislike => ("undecided", "low", "other", "low"),
            Disgust => ("low", "low", "environment", "high"),
            Sadness => ("high", "low", "environment", "low"),
            Hope => ("undecided", "high", "environment", "low"),
            Frustration => ("high", "low", "environment", "high"),
            Fear => ("undecided", "low", "environment", "low"),
            Distress => ("low", "low", "environment", "low"),
            Joy => ("high", "high", "environment", "undecided"),
            Liking => ("undecided", "high", "other", "undecided"),
            Pride => ("undecided", "high", "self", "undecided"),
            Surprise => ("undecided", "undecided", "environment", "undecided"),
            Relief => ("undecided", "high", "environment", "undecided"),
            Regret => ("undecided", "low", "self", "low"),
            Shame => ("low", "low", "self", "high"),
            Guilt => ("high", "high", "self", "high"),
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format!("{self:?}").to_lowercase())
    }
}

impl FromStr for EmotionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CATALOG_LABELS
            .iter()
            .copied()
            .find(|l| l.to_string() == s.to_lowercase())
            .ok_or_else(|| format!("unknown emotion label `{s}`"))
    }
}

/// Builds the mental part of a state from explicit appraisal values.
pub fn mental_state(ne: &str, go: &str, ac: &str, co: &str) -> State {
    let mut mental = BTreeMap::new();
    mental.insert(NE.to_string(), ne.to_string());
    mental.insert(GO.to_string(), go.to_string());
    mental.insert(AC.to_string(), ac.to_string());
    mental.insert(CO.to_string(), co.to_string());
    State { env: BTreeMap::new(), mental }
}

pub fn state_of_label(label: EmotionLabel) -> State {
    let (ne, go, ac, co) = label.tuple();
    mental_state(ne, go, ac, co)
}

pub fn label_state(state: &State) -> Option<EmotionLabel> {
    CATALOG_LABELS.iter().copied().find(|l| state_of_label(*l).mental == state.mental)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoryName {
    Her,
    Uer,
    /// A user-supplied rule set loaded from a domain file.
    Custom,
}

impl fmt::Display for TheoryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryName::Her => write!(f, "her"),
            TheoryName::Uer => write!(f, "uer"),
            TheoryName::Custom => write!(f, "custom"),
        }
    }
}

/// Which of the two textual artifacts a rule set was read from. The two
/// differ in content (the definition lists 16/23 rules; the integrity
/// constraints list 13/14 schemas) and, for overlapping rules, in which
/// side of the constraint sits at time t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    Definition,
    Listing,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Definition => write!(f, "definition"),
            Source::Listing => write!(f, "listing"),
        }
    }
}

/// One condition atom of a constraint schema: either a concrete mental
/// fluent or a value-inequality guard (`class takes any value != value`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemaCond {
    Eq(MentalFluent),
    Neq { class: String, value: String },
}

/// A constraint schema in canonical orientation: `conditions` read at time
/// t, `forbidden` at t+1, exactly as each source writes them. Guard
/// conditions are kept for faithful program emission; `expand` grounds them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub label: String,
    pub forbidden: Vec<MentalFluent>,
    pub conditions: Vec<SchemaCond>,
}

/// A ground transition constraint: under the as-written orientation,
/// `left` ⊆ s_t forbids any of `right` in s_{t+1}; reversed swaps the roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryRule {
    pub id: u32,
    pub schema: String,
    pub left: Vec<MentalFluent>,
    pub right: Vec<MentalFluent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub name: TheoryName,
    pub source: Source,
    pub schemas: Vec<Schema>,
    pub rules: Vec<TheoryRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}` (expected `her` or `uer`)")]
    UnknownTheory(String),
}

fn mf(class: &str, value: &str) -> MentalFluent {
    MentalFluent::new(class, value)
}

fn eq(class: &str, value: &str) -> SchemaCond {
    SchemaCond::Eq(mf(class, value))
}

fn neq(class: &str, value: &str) -> SchemaCond {
    SchemaCond::Neq { class: class.to_string(), value: value.to_string() }
}

fn schema(label: &str, forbidden: Vec<MentalFluent>, conditions: Vec<SchemaCond>) -> Schema {
    Schema { label: label.to_string(), forbidden, conditions }
}

/// Definition-source schemas: rule k reads "left forbids_to_cause right",
/// i.e. conditions = left at t, forbidden = right at t+1.
fn definition_schemas(pairs: &[(&[(&str, &str)], (&str, &str))]) -> Vec<Schema> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (left, right))| {
            schema(
                &(i + 1).to_string(),
                vec![mf(right.0, right.1)],
                left.iter().map(|(c, v)| eq(c, v)).collect(),
            )
        })
        .collect()
}

fn her_definition_schemas() -> Vec<Schema> {
    let h: &[(&[(&str, &str)], (&str, &str))] = &[
        (&[(NE, "high")], (GO, "low")),
        (&[(NE, "high")], (GO, "undecided")),
        (&[(NE, "high")], (GO, "high")),
        (&[(NE, "undecided")], (GO, "low")),
        (&[(NE, "undecided")], (GO, "undecided")),
        (&[(NE, "undecided")], (GO, "high")),
        (&[(GO, "high")], (GO, "low")),
        (&[(GO, "high")], (GO, "undecided")),
        (&[(GO, "undecided")], (GO, "low")),
        (&[(GO, "low")], (CO, "high")),
        (&[(NE, "high"), (GO, "low"), (AC, "other")], (CO, "high")),
        (&[(NE, "high"), (GO, "undecided"), (AC, "other")], (CO, "high")),
        (&[(NE, "high"), (GO, "low"), (AC, "self")], (CO, "high")),
        (&[(NE, "high"), (GO, "undecided"), (AC, "self")], (CO, "high")),
        (&[(NE, "high"), (GO, "low"), (AC, "undecided")], (CO, "high")),
        (&[(NE, "high"), (GO, "undecided"), (AC, "undecided")], (CO, "high")),
    ];
    definition_schemas(h)
}

fn uer_definition_schemas() -> Vec<Schema> {
    let u: &[(&[(&str, &str)], (&str, &str))] = &[
        (&[(NE, "low")], (NE, "undecided")),
        (&[(NE, "low")], (NE, "high")),
        (&[(NE, "undecided")], (NE, "low")),
        (&[(NE, "undecided")], (NE, "high")),
        (&[(GO, "low")], (NE, "low")),
        (&[(GO, "low")], (NE, "undecided")),
        (&[(GO, "undecided")], (NE, "low")),
        (&[(GO, "undecided")], (NE, "undecided")),
        (&[(GO, "high")], (NE, "low")),
        (&[(GO, "high")], (NE, "undecided")),
        (&[(GO, "high")], (NE, "high")),
        (&[(AC, "undecided")], (AC, "self")),
        (&[(AC, "undecided")], (AC, "other")),
        (&[(AC, "undecided")], (AC, "environment")),
        (&[(AC, "other")], (AC, "undecided")),
        (&[(AC, "other")], (AC, "self")),
        (&[(AC, "other")], (AC, "environment")),
        (&[(AC, "environment")], (CO, "low")),
        (&[(AC, "environment")], (CO, "undecided")),
        (&[(CO, "low")], (CO, "undecided")),
        (&[(CO, "low")], (CO, "high")),
        (&[(CO, "undecided")], (CO, "low")),
        (&[(CO, "undecided")], (CO, "high")),
    ];
    definition_schemas(u)
}

/// Listing-source schemas: constraint k reads ":- forbidden@T+1,
/// condition@T" — the condition atoms sit at time t as written.
fn her_listing_schemas() -> Vec<Schema> {
    vec![
        schema("1", vec![mf(NE, "high")], vec![eq(GO, "low")]),
        schema("2", vec![mf(NE, "high")], vec![eq(GO, "undecided")]),
        schema("3", vec![mf(NE, "undecided")], vec![eq(GO, "low")]),
        schema("4", vec![mf(NE, "undecided")], vec![eq(GO, "undecided")]),
        schema("5", vec![mf(GO, "low")], vec![neq(GO, "low")]),
        schema("6", vec![mf(GO, "undecided")], vec![neq(GO, "undecided")]),
        schema("7", vec![mf(CO, "high")], vec![eq(GO, "low")]),
        schema("8", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "low"), eq(AC, "other")]),
        schema("9", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "undecided"), eq(AC, "other")]),
        schema("10", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "low"), eq(AC, "self")]),
        schema("11", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "undecided"), eq(AC, "self")]),
        schema("12", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "low"), eq(AC, "undecided")]),
        schema("13", vec![mf(CO, "high")], vec![eq(NE, "high"), eq(GO, "undecided"), eq(AC, "undecided")]),
    ]
}

fn uer_listing_schemas() -> Vec<Schema> {
    vec![
        schema("1", vec![mf(NE, "low")], vec![neq(NE, "low")]),
        schema("2", vec![mf(NE, "undecided")], vec![neq(NE, "undecided")]),
        schema("3", vec![mf(GO, "low")], vec![eq(NE, "low")]),
        schema("4", vec![mf(GO, "low")], vec![eq(NE, "undecided")]),
        schema("5", vec![mf(GO, "undecided")], vec![eq(NE, "low")]),
        schema("6", vec![mf(GO, "undecided")], vec![eq(NE, "undecided")]),
        schema("7", vec![mf(GO, "high")], vec![eq(NE, "undecided")]),
        schema("8", vec![mf(GO, "high")], vec![eq(NE, "high")]),
        schema("9", vec![mf(AC, "undecided")], vec![neq(AC, "undecided")]),
        schema("10", vec![mf(AC, "other")], vec![neq(AC, "other")]),
        schema("11", vec![mf(AC, "environment")], vec![eq(CO, "low")]),
        schema("12", vec![mf(AC, "environment")], vec![eq(CO, "undecided")]),
        schema("13", vec![mf(CO, "low")], vec![neq(CO, "low")]),
        schema("14", vec![mf(CO, "undecided")], vec![neq(CO, "undecided")]),
    ]
}

/// Grounds a schema list against the emotion classes: every value-inequality
/// guard becomes one rule per remaining value of its class.
pub fn expand_schemas(classes: &[PsychClass], schemas: &[Schema]) -> Vec<TheoryRule> {
    let mut rules = Vec::new();
    let mut next_id = 1u32;
    for s in schemas {
        let mut grounded: Vec<Vec<MentalFluent>> = vec![Vec::new()];
        let mut multi = false;
        for cond in &s.conditions {
            match cond {
                SchemaCond::Eq(m) => {
                    for g in &mut grounded {
                        g.push(m.clone());
                    }
                }
                SchemaCond::Neq { class, value } => {
                    multi = true;
                    let values: Vec<&str> = classes
                        .iter()
                        .find(|c| &c.name == class)
                        .map(|c| c.values.iter().map(String::as_str).filter(|v| v != value).collect())
                        .unwrap_or_default();
                    grounded = grounded
                        .into_iter()
                        .flat_map(|g| {
                            values.iter().map(move |v| {
                                let mut g2 = g.clone();
                                g2.push(mf(class, v));
                                g2
                            })
                        })
                        .collect();
                }
            }
        }
        for (k, left) in grounded.into_iter().enumerate() {
            let suffix = if multi { ((b'a' + k as u8) as char).to_string() } else { String::new() };
            rules.push(TheoryRule {
                id: next_id,
                schema: format!("{}{}", s.label, suffix),
                left,
                right: s.forbidden.clone(),
            });
            next_id += 1;
        }
    }
    rules
}

/// Materializes a built-in rule set. `listing` source expands inequality
/// guards into explicit per-value rules; schemas are retained for emission.
pub fn builtin_theory(name: &str, source: Source) -> Result<TheorySpec, TheoryError> {
    let name = match name.to_lowercase().as_str() {
        "her" => TheoryName::Her,
        "uer" => TheoryName::Uer,
        other => return Err(TheoryError::UnknownTheory(other.to_string())),
    };
    let schemas = match (name, source) {
        (TheoryName::Her, Source::Definition) => her_definition_schemas(),
        (TheoryName::Uer, Source::Definition) => uer_definition_schemas(),
        (TheoryName::Her, Source::Listing) => her_listing_schemas(),
        (TheoryName::Uer, Source::Listing) => uer_listing_schemas(),
        (TheoryName::Custom, _) => unreachable!("custom specs come from spec_from_laws"),
    };
    let rules = expand_schemas(&emotion_classes(), &schemas);
    Ok(TheorySpec { name, source, schemas, rules })
}

/// Builds a spec from the forbidding laws of a parsed domain, so
/// user-written rule sets can be checked with the same machinery as the
/// built-ins. Every condition is a concrete atom (no inequality guards),
/// and rule ids follow the laws' own ids.
pub fn spec_from_laws(source: Source, laws: &[CausalLaw]) -> TheorySpec {
    let mut schemas = Vec::new();
    let mut rules = Vec::new();
    for law in laws {
        if let CausalLaw::ForbidsToCause { left, right, id } = law {
            let label = format!("rule {id}");
            schemas.push(Schema {
                label: label.clone(),
                forbidden: right.clone(),
                conditions: left.iter().cloned().map(SchemaCond::Eq).collect(),
            });
            rules.push(TheoryRule { id: *id, schema: label, left: left.clone(), right: right.clone() });
        }
    }
    TheorySpec { name: TheoryName::Custom, source, schemas, rules }
}

/// Theory rules as domain laws, for merging into an engine domain. The
/// stored (left, right) orientation is preserved; the engine applies the
/// configured orientation at evaluation time.
pub fn as_domain_laws(spec: &TheorySpec) -> Vec<CausalLaw> {
    spec.rules
        .iter()
        .map(|r| CausalLaw::ForbidsToCause { left: r.left.clone(), right: r.right.clone(), id: r.id })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiredRule {
    pub theory: TheoryName,
    pub rule_id: u32,
    pub schema: String,
    pub forbidden: MentalFluent,
    pub conditions: Vec<MentalFluent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJudgment {
    pub pass: bool,
    pub fired: Vec<FiredRule>,
    pub config: SemanticsConfig,
}

/// Tests whether a single forbidden atom fires between s and s′.
fn fires(firing: Firing, s: &State, s_next: &State, atom: &MentalFluent) -> bool {
    match firing {
        Firing::Holding => s_next.has_mental(atom),
        Firing::Onset => s_next.has_mental(atom) && !s.has_mental(atom),
    }
}

/// Judges one transition against every rule of the spec. A rule
/// (L forbids_to_cause R) fires under as-written orientation iff L ⊆ s and
/// some r ∈ R passes the firing test in s′; reversed swaps the sides.
pub fn check_transition(
    spec: &TheorySpec,
    config: SemanticsConfig,
    s: &State,
    s_next: &State,
) -> TransitionJudgment {
    let mut fired = Vec::new();
    for rule in &spec.rules {
        let (conditions, forbidden) = match config.orientation {
            Orientation::AsWritten => (&rule.left, &rule.right),
            Orientation::Reversed => (&rule.right, &rule.left),
        };
        if !conditions.iter().all(|m| s.has_mental(m)) {
            continue;
        }
        for atom in forbidden {
            if fires(config.firing, s, s_next, atom) {
                fired.push(FiredRule {
                    theory: spec.name,
                    rule_id: rule.id,
                    schema: rule.schema.clone(),
                    forbidden: atom.clone(),
                    conditions: conditions.clone(),
                });
            }
        }
    }
    TransitionJudgment { pass: fired.is_empty(), fired, config }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invariant {
    EiHer,
    EiUer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantVerdict {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

fn scale_value(state: &State, class: &str) -> Option<usize> {
    let order = ["low", "undecided", "high"];
    state.mental.get(class).and_then(|v| order.iter().position(|o| o == v))
}

/// Per-state invariant predicate, evaluated on all indexed states i ≥ 1:
/// EI_HER requires value(ne) ≤ value(go); EI_UER requires ne=high,
/// go ≤ ne, co=high, and ac ∈ {self, environment}.
pub fn eval_invariant(which: Invariant, states: &[State]) -> InvariantVerdict {
    for (i, s) in states.iter().enumerate().skip(1) {
        let ok = match which {
            Invariant::EiHer => match (scale_value(s, NE), scale_value(s, GO)) {
                (Some(ne), Some(go)) => ne <= go,
                _ => false,
            },
            Invariant::EiUer => {
                let ne = scale_value(s, NE);
                let go = scale_value(s, GO);
                let ac = s.mental.get(AC).map(String::as_str);
                let co = s.mental.get(CO).map(String::as_str);
                ne == Some(2)
                    && matches!((go, ne), (Some(g), Some(n)) if g <= n)
                    && co == Some("high")
                    && matches!(ac, Some("self") | Some("environment"))
            }
        };
        if !ok {
            return InvariantVerdict { holds: false, first_violation: Some(i) };
        }
    }
    InvariantVerdict { holds: true, first_violation: None }
}

/// EI_UER as a single-state predicate (used by the exhaustive preservation
/// property of Theorem 3).
pub fn ei_uer_state(s: &State) -> bool {
    eval_invariant(Invariant::EiUer, &[s.clone(), s.clone()]).holds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_injective_and_within_space() {
        let classes = emotion_classes();
        let mut seen = std::collections::BTreeSet::new();
        for label in CATALOG_LABELS {
            let s = state_of_label(label);
            assert!(seen.insert(s.mental.clone()), "duplicate configuration for {label}");
            assert_eq!(label_state(&s), Some(label));
            for (class, value) in &s.mental {
                let c = classes.iter().find(|c| &c.name == class).unwrap();
                assert!(c.value_index(value).is_some());
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn label_round_trip_and_unknown() {
        assert_eq!(label_state(&mental_state("high", "low", "other", "high")), Some(EmotionLabel::Anger));
        assert_eq!(label_state(&mental_state("high", "high", "environment", "undecided")), Some(EmotionLabel::Joy));
        assert_eq!(label_state(&mental_state("high", "high", "environment", "high")), None);
        assert_eq!("frustration".parse::<EmotionLabel>(), Ok(EmotionLabel::Frustration));
        assert!("envy".parse::<EmotionLabel>().is_err());
    }

    #[test]
    fn builtin_rule_counts() {
        assert_eq!(builtin_theory("her", Source::Definition).unwrap().rules.len(), 16);
        assert_eq!(builtin_theory("uer", Source::Definition).unwrap().rules.len(), 23);
        let her = builtin_theory("her", Source::Listing).unwrap();
        assert_eq!(her.schemas.len(), 13);
        assert_eq!(her.rules.len(), 15);
        let uer = builtin_theory("uer", Source::Listing).unwrap();
        assert_eq!(uer.schemas.len(), 14);
        assert_eq!(uer.rules.len(), 22);
        assert!(builtin_theory("qqq", Source::Listing).is_err());
    }

    #[test]
    fn guard_expansion_labels() {
        let her = builtin_theory("her", Source::Listing).unwrap();
        let expanded: Vec<&str> = her
            .rules
            .iter()
            .filter(|r| r.schema.starts_with('5') || r.schema.starts_with('6'))
            .map(|r| r.schema.as_str())
            .collect();
        assert_eq!(expanded, vec!["5a", "5b", "6a", "6b"]);
    }

    #[test]
    fn anger_to_guilt_judgments() {
        let anger = state_of_label(EmotionLabel::Anger);
        let guilt = state_of_label(EmotionLabel::Guilt);
        let config = SemanticsConfig { orientation: Orientation::AsWritten, firing: Firing::Holding };

        let her = builtin_theory("her", Source::Listing).unwrap();
        let j = check_transition(&her, config, &anger, &guilt);
        assert!(!j.pass);
        // the go-low-at-t / ne-high-at-t+1 constraint is schema 1
        assert!(j.fired.iter().any(|f| f.schema == "1"));

        let uer = builtin_theory("uer", Source::Listing).unwrap();
        assert!(!check_transition(&uer, config, &anger, &guilt).pass);
    }

    #[test]
    fn onset_self_loop_passes() {
        let config = SemanticsConfig { orientation: Orientation::AsWritten, firing: Firing::Onset };
        for name in ["her", "uer"] {
            for source in [Source::Definition, Source::Listing] {
                let spec = builtin_theory(name, source).unwrap();
                for label in CATALOG_LABELS {
                    let s = state_of_label(label);
                    assert!(check_transition(&spec, config, &s, &s).pass, "{name}/{source:?} self-loop at {label}");
                }
            }
        }
    }

    #[test]
    fn invariants_on_short_trajectories() {
        let single = vec![state_of_label(EmotionLabel::Anger)];
        assert!(eval_invariant(Invariant::EiHer, &single).holds);

        let entering_anger = vec![state_of_label(EmotionLabel::Joy), state_of_label(EmotionLabel::Anger)];
        let v = eval_invariant(Invariant::EiHer, &entering_anger);
        assert!(!v.holds);
        assert_eq!(v.first_violation, Some(1));

        assert!(ei_uer_state(&state_of_label(EmotionLabel::Guilt)));
        assert!(!ei_uer_state(&state_of_label(EmotionLabel::Anger))); // ac = other
        assert!(!ei_uer_state(&state_of_label(EmotionLabel::Joy))); // co = undecided
    }
}
