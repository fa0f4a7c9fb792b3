//! Golden tests for program emission: the built-in listing constraint
//! sections must equal the published integrity-constraint listings modulo
//! whitespace and atom-name normalization, and every encoding template
//! must appear for a domain exercising each law form.

use cmt::aspgen::{emit_program, normalize};
use cmt::dsl::{parse_domain, parse_observations, parse_query};
use cmt::model::ActionTheory;
use cmt::theories::{builtin_theory, Source};

mod common;
use common::{shorten, HER_LISTING, UER_LISTING};

fn constraint_section(theory_name: &str) -> Vec<String> {
    let spec = builtin_theory(theory_name, Source::Listing).unwrap();
    let theory = ActionTheory::default();
    let program = emit_program(&theory, None, 6, Some(&spec));
    normalize(&program.section("theory constraints").join("\n"))
}

#[test]
fn her_constraint_section_matches_published_listing() {
    let expected: Vec<String> = normalize(HER_LISTING).iter().map(|l| shorten(l)).collect();
    assert_eq!(constraint_section("her"), expected);
}

#[test]
fn uer_constraint_section_matches_published_listing() {
    let expected: Vec<String> = normalize(UER_LISTING).iter().map(|l| shorten(l)).collect();
    assert_eq!(constraint_section("uer"), expected);
}

/// One law of every form, plus observations and a query, and the expected
/// instance of each encoding template.
#[test]
fn every_template_has_a_golden_instance() {
    let domain_text = "\
class mood ordered { low, high }
fluent raining;
action rain env;
action retreat human;
action brood human;
law rain causes raining;
law raining if raining;
law raining triggers retreat;
law raining allows retreat;
law neg raining inhibits retreat;
law retreat influences f(mood,low) if raining;
law raining influences f(mood,low);
law f(mood,low) facilitates brood;
law f(mood,high) contravenes brood;
law f(mood,low) forbids_to_cause f(mood,high);
noconcurrency retreat, brood;
default neg raining;
";
    let domain = parse_domain(domain_text, "golden").unwrap();
    let observations =
        parse_observations("observe raining at 0;\nobserve f(mood,high) at 1;\nobserve rain occurs_at 0;", "golden")
            .unwrap();
    let query = parse_query("query goal f(mood,low) horizon 3;", "golden").unwrap();
    let theory = ActionTheory { domain, observations };
    let program = emit_program(&theory, Some(&query), 3, None);
    let text = program.text();

    let expected = [
        // declarations and time axis
        "fluent(raining).",
        "fluent(mental_fluent(mood, low)).",
        "action(retreat).",
        "#const t_max = 3.",
        "time(0..t_max-1).",
        // contradiction, inertia, non-inertial default, completion
        ":- holds(raining,T), holds(neg(raining),T), time(T).",
        "holds(raining,T+1) :- holds(raining,T), not holds(neg(raining),T+1), time(T).",
        "holds(neg(raining),T) :- not holds(raining,T), time(T).",
        "holds(raining,0) :- not holds(neg(raining),0).",
        "holds(neg(raining),0) :- not holds(raining,0).",
        // dynamic and static causal laws
        "holds(raining,T+1) :- holds(occurs(rain),T), time(T).",
        "holds(raining,T) :- holds(raining,T), time(T).",
        // influence laws (dynamic and static)
        "holds(mental_fluent(mood, low),T+1) :- holds(occurs(retreat),T), holds(raining,T), time(T).",
        "holds(mental_fluent(mood, low),T) :- holds(raining,T), time(T).",
        // trigger / allowance / inhibition
        "holds(occurs(retreat),T) :- not holds(ab(occurs(retreat)),T), holds(raining,T), time(T).",
        "holds(allow(occurs(retreat)),T) :- not holds(ab(occurs(retreat)),T), holds(raining,T), time(T).",
        "holds(ab(occurs(retreat)),T) :- holds(neg(raining),T), time(T).",
        // facilitation / contravention
        "holds(occurs(brood),T) :- not holds(ab(occurs(brood)),T), holds(mental_fluent(mood, low),T), time(T).",
        "holds(ab(occurs(brood)),T) :- holds(mental_fluent(mood, high),T), time(T).",
        // forbidding constraint
        ":- holds(mental_fluent(mood, high),T+1), holds(mental_fluent(mood, low),T), time(T).",
        // no-concurrency and free environment actions
        ":- time(T), 2 { holds(occurs(retreat),T); holds(occurs(brood),T) }.",
        "holds(allow(occurs(rain)),T) :- time(T).",
        // mental-value exclusivity
        "holds(neg(mental_fluent(mood, low)),T) :- holds(mental_fluent(mood, high),T), time(T).",
        // observations: fact at 0, constraint later, action occurrence
        "holds(raining,0).",
        ":- not holds(mental_fluent(mood, high),1).",
        "holds(occurs(rain),0).",
        // goal machinery
        "achieved :- holds(mental_fluent(mood, low),t_max).",
        ":- not achieved.",
    ];
    for line in expected {
        assert!(text.contains(line), "missing template instance:\n  {line}\nprogram:\n{text}");
    }
}

#[test]
fn emission_is_byte_stable() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let domain_text = std::fs::read_to_string(dir.join("dialogue.cmt")).unwrap();
    let obs_text = std::fs::read_to_string(dir.join("dialogue.cmto")).unwrap();
    let theory = ActionTheory {
        domain: parse_domain(&domain_text, "dialogue.cmt").unwrap(),
        observations: parse_observations(&obs_text, "dialogue.cmto").unwrap(),
    };
    let spec = builtin_theory("her", Source::Listing).unwrap();
    let first = emit_program(&theory, None, 6, Some(&spec)).text();
    for _ in 0..5 {
        assert_eq!(emit_program(&theory, None, 6, Some(&spec)).text(), first);
    }
}

/// Every `holds(...)` atom in an emitted program refers to a declared
/// fluent or action — the self-containment lint from the module contract.
#[test]
fn emitted_programs_are_self_contained() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let domain_text = std::fs::read_to_string(dir.join("dialogue.cmt")).unwrap();
    let theory = ActionTheory {
        domain: parse_domain(&domain_text, "dialogue.cmt").unwrap(),
        observations: Vec::new(),
    };
    let program = emit_program(&theory, None, 4, None);
    let declared: Vec<String> = program
        .section("declarations")
        .iter()
        .map(|l| {
            l.trim_end_matches(").")
                .trim_start_matches("fluent(")
                .trim_start_matches("action(")
                .to_string()
        })
        .collect();
    let text = program.text();
    // Strip wrappers and check every base atom inside holds(...) appears
    // in the declaration section.
    for piece in text.split("holds(").skip(1) {
        let inner = piece.split(",T").next().unwrap_or("").split(",0").next().unwrap_or("");
        let base = inner
            .trim_start_matches("neg(")
            .trim_start_matches("ab(")
            .trim_start_matches("occurs(")
            .trim_start_matches("allow(")
            .trim_start_matches("occurs(")
            .trim_end_matches(')');
        if base.is_empty() || base.starts_with("mental_fluent") {
            // mental atoms checked by exact declaration line below
            let atom = inner.trim_end_matches(')').trim_start_matches("neg(");
            if atom.starts_with("mental_fluent") {
                assert!(
                    declared.iter().any(|d| d == &format!("{atom})")) || declared.contains(&atom.to_string()),
                    "undeclared mental atom {atom}"
                );
            }
            continue;
        }
        assert!(declared.contains(&base.to_string()), "undeclared atom {base} in {inner}");
    }
}
