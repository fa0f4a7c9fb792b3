//! Shared test support: the published integrity-constraint listings
//! (verbatim) and an independent straight-line oracle for the reference
//! trajectory's verdicts, written directly from the constraint tables
//! rather than through the library's rule machinery.

#![allow(dead_code)]

use cmt::model::State;

/// Hedonic constraint set, verbatim (long class names, wrapped lines).
pub const HER_LISTING: &str = r#"
:- holds(mental_fluent(need_consistency, high), T+1),
   holds(mental_fluent(goal_consistency, low), T), time(T).
:- holds(mental_fluent(need_consistency, high), T+1),
   holds(mental_fluent(goal_consistency, undecided), T), time(T).
:- holds(mental_fluent(need_consistency, undecided), T+1),
   holds(mental_fluent(goal_consistency, low), T), time(T).
:- holds(mental_fluent(need_consistency, undecided), T+1),
   holds(mental_fluent(goal_consistency, undecided), T), time(T).

:- holds(mental_fluent(goal_consistency, low), T+1),
   holds(mental_fluent(goal_consistency, V1), T), V1 != low, time(T).
:- holds(mental_fluent(goal_consistency, undecided), T+1),
   holds(mental_fluent(goal_consistency, V1), T), V1 != undecided, time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(goal_consistency, low), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, low), T),
   holds(mental_fluent(accountability, other), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, undecided), T),
   holds(mental_fluent(accountability, other), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, low), T),
   holds(mental_fluent(accountability, self), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, undecided), T),
   holds(mental_fluent(accountability, self), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, low), T),
   holds(mental_fluent(accountability, undecided), T), time(T).

:- holds(mental_fluent(control_potential, high), T+1),
   holds(mental_fluent(need_consistency, high), T),
   holds(mental_fluent(goal_consistency, undecided), T),
   holds(mental_fluent(accountability, undecided), T), time(T).
"#;

/// Utilitarian constraint set, verbatim.
pub const UER_LISTING: &str = r#"
:- holds(mental_fluent(need_consistency, low), T+1),
    holds(mental_fluent(need_consistency, V1), T), V1 != low, time(T).
:- holds(mental_fluent(need_consistency, undecided), T+1),
    holds(mental_fluent(need_consistency, V1), T), V1 != undecided, time(T).

:- holds(mental_fluent(goal_consistency, low), T+1),
    holds(mental_fluent(need_consistency, low), T), time(T).
:- holds(mental_fluent(goal_consistency, low), T+1),
    holds(mental_fluent(need_consistency, undecided), T), time(T).
:- holds(mental_fluent(goal_consistency, undecided), T+1),
    holds(mental_fluent(need_consistency, low), T), time(T).
:- holds(mental_fluent(goal_consistency, undecided), T+1),
    holds(mental_fluent(need_consistency, undecided), T), time(T).
:- holds(mental_fluent(goal_consistency, high), T+1),
    holds(mental_fluent(need_consistency, undecided), T), time(T).
:- holds(mental_fluent(goal_consistency, high), T+1),
    holds(mental_fluent(need_consistency, high), T), time(T).

:- holds(mental_fluent(accountability, undecided), T+1),
    holds(mental_fluent(accountability, V1), T), V1 != undecided, time(T).
:- holds(mental_fluent(accountability, other), T+1),
    holds(mental_fluent(accountability, V1), T), V1 != other, time(T).
:- holds(mental_fluent(accountability, environment), T+1),
    holds(mental_fluent(control_potential, low), T), time(T).
:- holds(mental_fluent(accountability, environment), T+1),
    holds(mental_fluent(control_potential, undecided), T), time(T).

:- holds(mental_fluent(control_potential, low), T+1),
    holds(mental_fluent(control_potential, V1), T), V1 != low, time(T).
:- holds(mental_fluent(control_potential, undecided), T+1),
    holds(mental_fluent(control_potential, V1), T), V1 != undecided, time(T).
"#;

/// Long class names used by the published listings → short names used by
/// the toolkit.
pub fn shorten(line: &str) -> String {
    line.replace("need_consistency", "ne")
        .replace("goal_consistency", "go")
        .replace("accountability", "ac")
        .replace("control_potential", "co")
}

fn v<'a>(s: &'a State, class: &str) -> &'a str {
    s.mental.get(class).map(String::as_str).unwrap_or("")
}

/// Hedonic listing constraints as literal boolean checks under the
/// as-written/holding reading: condition values in `s`, forbidden value in
/// `s_next`. Returns pass (true) / violate (false).
pub fn oracle_her_listing_holding(s: &State, s_next: &State) -> bool {
    let (ne1, go1, ac1) = (v(s, "ne"), v(s, "go"), v(s, "ac"));
    let (ne2, go2, co2) = (v(s_next, "ne"), v(s_next, "go"), v(s_next, "co"));
    let fired = (ne2 == "high" && go1 == "low")
        || (ne2 == "high" && go1 == "undecided")
        || (ne2 == "undecided" && go1 == "low")
        || (ne2 == "undecided" && go1 == "undecided")
        || (go2 == "low" && go1 != "low")
        || (go2 == "undecided" && go1 != "undecided")
        || (co2 == "high" && go1 == "low")
        || (co2 == "high"
            && ne1 == "high"
            && (go1 == "low" || go1 == "undecided")
            && (ac1 == "other" || ac1 == "self" || ac1 == "undecided"));
    !fired
}

/// Utilitarian listing constraints, same reading.
pub fn oracle_uer_listing_holding(s: &State, s_next: &State) -> bool {
    let (ne1, ac1, co1) = (v(s, "ne"), v(s, "ac"), v(s, "co"));
    let (ne2, go2, ac2, co2) = (v(s_next, "ne"), v(s_next, "go"), v(s_next, "ac"), v(s_next, "co"));
    let fired = (ne2 == "low" && ne1 != "low")
        || (ne2 == "undecided" && ne1 != "undecided")
        || (go2 == "low" && (ne1 == "low" || ne1 == "undecided"))
        || (go2 == "undecided" && (ne1 == "low" || ne1 == "undecided"))
        || (go2 == "high" && (ne1 == "undecided" || ne1 == "high"))
        || (ac2 == "undecided" && ac1 != "undecided")
        || (ac2 == "other" && ac1 != "other")
        || (ac2 == "environment" && (co1 == "low" || co1 == "undecided"))
        || (co2 == "low" && co1 != "low")
        || (co2 == "undecided" && co1 != "undecided");
    !fired
}
