//! Core data model: alphabets, causal laws, states, observations, queries
//! and action theories, plus structural validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type Ident = String;

/// A psychological class with its value domain. `ordered` marks whether the
/// declared value list carries a total order (low < undecided < high style).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsychClass {
    pub name: Ident,
    pub values: Vec<Ident>,
    pub ordered: bool,
}

impl PsychClass {
    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// One class-valued mental atom f(class, value).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MentalFluent {
    pub class: Ident,
    pub value: Ident,
}

impl MentalFluent {
    pub fn new(class: &str, value: &str) -> Self {
        Self { class: class.to_string(), value: value.to_string() }
    }
}

impl fmt::Display for MentalFluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f({},{})", self.class, self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    Env,
    Human,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSymbol {
    pub name: Ident,
    pub kind: ActionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Pos,
    Neg,
}

/// A fluent literal: a (possibly negated) boolean environment fluent, or a
/// mental atom. Mental atoms carry no negation; class-valuedness replaces it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FluentLiteral {
    Env { name: Ident, polarity: Polarity },
    Mental(MentalFluent),
}

impl FluentLiteral {
    pub fn env(name: &str) -> Self {
        FluentLiteral::Env { name: name.to_string(), polarity: Polarity::Pos }
    }

    pub fn neg_env(name: &str) -> Self {
        FluentLiteral::Env { name: name.to_string(), polarity: Polarity::Neg }
    }

    pub fn mental(class: &str, value: &str) -> Self {
        FluentLiteral::Mental(MentalFluent::new(class, value))
    }
}

impl fmt::Display for FluentLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluentLiteral::Env { name, polarity: Polarity::Pos } => write!(f, "{name}"),
            FluentLiteral::Env { name, polarity: Polarity::Neg } => write!(f, "neg {name}"),
            FluentLiteral::Mental(m) => write!(f, "{m}"),
        }
    }
}

/// The twelve causal-law forms of the domain description language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalLaw {
    Causes { action: Ident, effects: Vec<FluentLiteral>, conditions: Vec<FluentLiteral> },
    Static { effects: Vec<FluentLiteral>, conditions: Vec<FluentLiteral> },
    Triggers { conditions: Vec<FluentLiteral>, action: Ident },
    Allows { conditions: Vec<FluentLiteral>, action: Ident },
    Inhibits { conditions: Vec<FluentLiteral>, action: Ident },
    NoConcurrency { actions: Vec<Ident> },
    Default { literal: FluentLiteral },
    InfluencesDyn { action: Ident, effects: Vec<MentalFluent>, conditions: Vec<FluentLiteral> },
    InfluencesStatic { conditions: Vec<FluentLiteral>, effects: Vec<MentalFluent> },
    Facilitates { conditions: Vec<MentalFluent>, action: Ident },
    Contravenes { conditions: Vec<MentalFluent>, action: Ident },
    /// Transition constraint: `left` at t forbids `right` at t+1 (under the
    /// as-written orientation). `id` is a stable identifier assigned in
    /// declaration order so verdicts can cite it.
    ForbidsToCause { left: Vec<MentalFluent>, right: Vec<MentalFluent>, id: u32 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDescription {
    pub classes: Vec<PsychClass>,
    pub env_fluents: Vec<Ident>,
    pub actions: Vec<ActionSymbol>,
    pub laws: Vec<CausalLaw>,
}

impl DomainDescription {
    pub fn class(&self, name: &str) -> Option<&PsychClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSymbol> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn has_env_fluent(&self, name: &str) -> bool {
        self.env_fluents.iter().any(|f| f == name)
    }

    /// Reassigns stable ids to all forbids-to-cause laws in declaration
    /// order, starting at 1.
    pub fn assign_forbid_ids(&mut self) {
        let mut next = 1u32;
        for law in &mut self.laws {
            if let CausalLaw::ForbidsToCause { id, .. } = law {
                *id = next;
                next += 1;
            }
        }
    }
}

/// A complete interpretation: every environment fluent mapped to a boolean,
/// every psychological class mapped to exactly one value.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct State {
    pub env: BTreeMap<Ident, bool>,
    pub mental: BTreeMap<Ident, Ident>,
}

impl State {
    pub fn satisfies(&self, literal: &FluentLiteral) -> bool {
        match literal {
            FluentLiteral::Env { name, polarity } => {
                let v = self.env.get(name).copied().unwrap_or(false);
                match polarity {
                    Polarity::Pos => v,
                    Polarity::Neg => !v,
                }
            }
            FluentLiteral::Mental(m) => self.mental.get(&m.class).map(|v| v == &m.value).unwrap_or(false),
        }
    }

    pub fn satisfies_all(&self, literals: &[FluentLiteral]) -> bool {
        literals.iter().all(|l| self.satisfies(l))
    }

    pub fn has_mental(&self, m: &MentalFluent) -> bool {
        self.mental.get(&m.class).map(|v| v == &m.value).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observation {
    FluentAt { literal: FluentLiteral, t: usize },
    OccursAt { action: Ident, t: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub goal: Vec<FluentLiteral>,
    pub schedule: Vec<(Vec<Ident>, usize)>,
    pub horizon: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTheory {
    pub domain: DomainDescription,
    pub observations: Vec<Observation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationErrorKind {
    UndeclaredSymbol,
    KindMismatch,
    EmptyRuleSide,
    DuplicateName,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationError {
    pub kind: ValidationErrorKind,
    pub message: String,
    /// Index into `laws` when the error concerns a specific law; the DSL
    /// layer maps this back to a source span.
    pub law_index: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

fn err(kind: ValidationErrorKind, message: String, law_index: Option<usize>) -> ValidationError {
    ValidationError { kind, message, law_index }
}

/// Structural well-formedness of a domain description: declared symbols,
/// unique names, rule typing (facilitates/contravenes on human actions,
/// all-mental forbids sides), non-empty rule sides.
pub fn validate_domain(d: &DomainDescription) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut names: BTreeSet<&str> = BTreeSet::new();

    for class in &d.classes {
        if !names.insert(&class.name) {
            report.errors.push(err(
                ValidationErrorKind::DuplicateName,
                format!("duplicate declaration of `{}`", class.name),
                None,
            ));
        }
        if class.values.is_empty() {
            report.errors.push(err(
                ValidationErrorKind::EmptyRuleSide,
                format!("class `{}` declares no values", class.name),
                None,
            ));
        }
        let mut seen = BTreeSet::new();
        for v in &class.values {
            if !seen.insert(v.as_str()) {
                report.errors.push(err(
                    ValidationErrorKind::DuplicateName,
                    format!("class `{}` declares value `{v}` twice", class.name),
                    None,
                ));
            }
        }
    }
    for f in &d.env_fluents {
        if !names.insert(f) {
            report.errors.push(err(
                ValidationErrorKind::DuplicateName,
                format!("duplicate declaration of `{f}`"),
                None,
            ));
        }
    }
    for a in &d.actions {
        if !names.insert(&a.name) {
            report.errors.push(err(
                ValidationErrorKind::DuplicateName,
                format!("duplicate declaration of `{}`", a.name),
                None,
            ));
        }
    }

    let mut forbid_ids = BTreeSet::new();
    for (i, law) in d.laws.iter().enumerate() {
        check_law(d, i, law, &mut report);
        if let CausalLaw::ForbidsToCause { id, .. } = law {
            if !forbid_ids.insert(*id) {
                report.warnings.push(format!("forbids_to_cause id {id} is not unique"));
            }
        }
    }
    report
}

fn check_literal(d: &DomainDescription, i: usize, lit: &FluentLiteral, report: &mut ValidationReport) {
    match lit {
        FluentLiteral::Env { name, .. } => {
            if !d.has_env_fluent(name) {
                report.errors.push(err(
                    ValidationErrorKind::UndeclaredSymbol,
                    format!("environment fluent `{name}` is not declared"),
                    Some(i),
                ));
            }
        }
        FluentLiteral::Mental(m) => check_mental(d, i, m, report),
    }
}

fn check_mental(d: &DomainDescription, i: usize, m: &MentalFluent, report: &mut ValidationReport) {
    match d.class(&m.class) {
        None => report.errors.push(err(
            ValidationErrorKind::UndeclaredSymbol,
            format!("psychological class `{}` is not declared", m.class),
            Some(i),
        )),
        Some(c) if c.value_index(&m.value).is_none() => report.errors.push(err(
            ValidationErrorKind::UndeclaredSymbol,
            format!("class `{}` has no value `{}`", m.class, m.value),
            Some(i),
        )),
        _ => {}
    }
}

fn check_action(d: &DomainDescription, i: usize, action: &str, report: &mut ValidationReport) {
    if d.action(action).is_none() {
        report.errors.push(err(
            ValidationErrorKind::UndeclaredSymbol,
            format!("action `{action}` is not declared"),
            Some(i),
        ));
    }
}

fn check_nonempty<T>(items: &[T], what: &str, i: usize, report: &mut ValidationReport) {
    if items.is_empty() {
        report.errors.push(err(
            ValidationErrorKind::EmptyRuleSide,
            format!("{what} must not be empty"),
            Some(i),
        ));
    }
}

fn check_law(d: &DomainDescription, i: usize, law: &CausalLaw, report: &mut ValidationReport) {
    match law {
        CausalLaw::Causes { action, effects, conditions } => {
            check_action(d, i, action, report);
            check_nonempty(effects, "effect list of `causes`", i, report);
            for l in effects.iter().chain(conditions) {
                check_literal(d, i, l, report);
            }
        }
        CausalLaw::Static { effects, conditions } => {
            check_nonempty(effects, "effect list of static law", i, report);
            check_nonempty(conditions, "condition list of static law", i, report);
            for l in effects.iter().chain(conditions) {
                check_literal(d, i, l, report);
            }
        }
        CausalLaw::Triggers { conditions, action }
        | CausalLaw::Allows { conditions, action }
        | CausalLaw::Inhibits { conditions, action } => {
            check_action(d, i, action, report);
            check_nonempty(conditions, "condition list", i, report);
            for l in conditions {
                check_literal(d, i, l, report);
            }
        }
        CausalLaw::NoConcurrency { actions } => {
            check_nonempty(actions, "action list of `noconcurrency`", i, report);
            for a in actions {
                check_action(d, i, a, report);
            }
        }
        CausalLaw::Default { literal } => check_literal(d, i, literal, report),
        CausalLaw::InfluencesDyn { action, effects, conditions } => {
            check_action(d, i, action, report);
            check_nonempty(effects, "effect list of `influences`", i, report);
            for m in effects {
                check_mental(d, i, m, report);
            }
            for l in conditions {
                check_literal(d, i, l, report);
            }
        }
        CausalLaw::InfluencesStatic { conditions, effects } => {
            check_nonempty(effects, "effect list of `influences`", i, report);
            check_nonempty(conditions, "condition list of `influences`", i, report);
            for m in effects {
                check_mental(d, i, m, report);
            }
            for l in conditions {
                check_literal(d, i, l, report);
            }
        }
        CausalLaw::Facilitates { conditions, action } | CausalLaw::Contravenes { conditions, action } => {
            let word = if matches!(law, CausalLaw::Facilitates { .. }) { "facilitates" } else { "contravenes" };
            check_nonempty(conditions, "condition list", i, report);
            for m in conditions {
                check_mental(d, i, m, report);
            }
            match d.action(action) {
                None => check_action(d, i, action, report),
                Some(a) if a.kind != ActionKind::Human => report.errors.push(err(
                    ValidationErrorKind::KindMismatch,
                    format!("`{word}` requires a human action, but `{action}` is declared env"),
                    Some(i),
                )),
                _ => {}
            }
        }
        CausalLaw::ForbidsToCause { left, right, .. } => {
            check_nonempty(left, "left side of `forbids_to_cause`", i, report);
            check_nonempty(right, "right side of `forbids_to_cause`", i, report);
            for m in left.iter().chain(right) {
                check_mental(d, i, m, report);
            }
        }
    }
}

/// Number of mental assignments (Cartesian product of all value domains).
pub fn state_space_count(classes: &[PsychClass]) -> usize {
    classes.iter().map(|c| c.values.len()).product()
}

/// Iterator over the full mental state space, each assignment exactly once,
/// in lexicographic class/value order (last class varies fastest).
pub fn enumerate_state_space(classes: &[PsychClass]) -> StateSpaceIter<'_> {
    StateSpaceIter { classes, odometer: vec![0; classes.len()], done: classes.iter().any(|c| c.values.is_empty()) }
}

pub struct StateSpaceIter<'a> {
    classes: &'a [PsychClass],
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for StateSpaceIter<'_> {
    type Item = BTreeMap<Ident, Ident>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let current: BTreeMap<Ident, Ident> = self
            .classes
            .iter()
            .zip(&self.odometer)
            .map(|(c, &i)| (c.name.clone(), c.values[i].clone()))
            .collect();
        // advance, last class fastest
        self.done = true;
        for i in (0..self.classes.len()).rev() {
            if self.odometer[i] + 1 < self.classes[i].values.len() {
                self.odometer[i] += 1;
                for slot in &mut self.odometer[i + 1..] {
                    *slot = 0;
                }
                self.done = false;
                break;
            }
        }
        if self.classes.is_empty() {
            self.done = true;
        }
        Some(current)
    }
}

/// Checks closure of a candidate total assignment under all static and
/// static-influences laws. Returns the indices of violated laws.
pub fn is_state(d: &DomainDescription, candidate: &State) -> (bool, Vec<usize>) {
    let mut violated = Vec::new();
    for (i, law) in d.laws.iter().enumerate() {
        let closed = match law {
            CausalLaw::Static { effects, conditions } => {
                !candidate.satisfies_all(conditions) || candidate.satisfies_all(effects)
            }
            CausalLaw::InfluencesStatic { conditions, effects } => {
                !candidate.satisfies_all(conditions) || effects.iter().all(|m| candidate.has_mental(m))
            }
            _ => true,
        };
        if !closed {
            violated.push(i);
        }
    }
    (violated.is_empty(), violated)
}
