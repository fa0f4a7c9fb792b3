//! Textual syntax for domains (`.cmt`), observations (`.cmto`) and queries
//! (`.cmtq`): lexer, recursive-descent parser with source-span diagnostics,
//! and a canonical printer whose output re-parses to an equal structure.
//!
//! Statements are keyword-led and `;`-terminated; `#` comments run to end
//! of line; identifiers match `[a-z][a-z0-9_]*`. A mental atom is written
//! `f(class,value)`; `neg name` negates an environment fluent. Symbols
//! must be declared before the laws that use them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    validate_domain, ActionKind, ActionSymbol, CausalLaw, DomainDescription, FluentLiteral,
    MentalFluent, Observation, Polarity, PsychClass, Query,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.span.file, self.span.line, self.span.column, self.message
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokKind {
    Ident,
    Int,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    text: String,
    span: SourceSpan,
}

fn lex(text: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    let span = |line: usize, column: usize, length: usize| SourceSpan {
        file: file.to_string(),
        line,
        column,
        length,
    };

    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let start_col = column;
        if c.is_ascii_lowercase() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                    word.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let len = word.len();
            tokens.push(Token { kind: TokKind::Ident, text: word, span: span(line, start_col, len) });
            continue;
        }
        if c.is_ascii_digit() {
            let mut num = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    num.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let len = num.len();
            tokens.push(Token { kind: TokKind::Int, text: num, span: span(line, start_col, len) });
            continue;
        }
        let kind = match c {
            '{' => TokKind::LBrace,
            '}' => TokKind::RBrace,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            ',' => TokKind::Comma,
            ';' => TokKind::Semi,
            other => {
                return Err(Diagnostic {
                    message: format!("unexpected character `{other}`"),
                    span: span(line, start_col, other.len_utf8()),
                })
            }
        };
        chars.next();
        column += 1;
        tokens.push(Token { kind, text: c.to_string(), span: span(line, start_col, 1) });
    }
    tokens.push(Token { kind: TokKind::Eof, text: String::new(), span: span(line, column, 0) });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic { message: message.into(), span: self.peek().span.clone() }
    }

    fn expect_kind(&mut self, kind: TokKind, what: &str) -> Result<Token, Diagnostic> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.error(format!("expected {what}, found `{}`", describe(self.peek()))))
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<Token, Diagnostic> {
        if self.peek().kind == TokKind::Ident && self.peek().text == word {
            Ok(self.next())
        } else {
            Err(self.error(format!("expected `{word}`, found `{}`", describe(self.peek()))))
        }
    }

    fn at_word(&self, word: &str) -> bool {
        self.peek().kind == TokKind::Ident && self.peek().text == word
    }

    fn ident(&mut self, what: &str) -> Result<Token, Diagnostic> {
        self.expect_kind(TokKind::Ident, what)
    }

    fn int(&mut self, what: &str) -> Result<usize, Diagnostic> {
        let t = self.expect_kind(TokKind::Int, what)?;
        t.text.parse().map_err(|_| Diagnostic {
            message: format!("{what} `{}` is out of range", t.text),
            span: t.span,
        })
    }

    /// `f(class,value)` | `neg name` | `name`
    fn literal(&mut self) -> Result<FluentLiteral, Diagnostic> {
        if self.at_word("neg") {
            self.next();
            let name = self.ident("a fluent name after `neg`")?;
            return Ok(FluentLiteral::Env { name: name.text, polarity: Polarity::Neg });
        }
        if self.at_word("f") && self.peek2().kind == TokKind::LParen {
            self.next();
            self.expect_kind(TokKind::LParen, "`(`")?;
            let class = self.ident("a class name")?;
            self.expect_kind(TokKind::Comma, "`,`")?;
            let value = self.ident("a value name")?;
            self.expect_kind(TokKind::RParen, "`)`")?;
            return Ok(FluentLiteral::Mental(MentalFluent::new(&class.text, &value.text)));
        }
        let name = self.ident("a fluent literal")?;
        Ok(FluentLiteral::Env { name: name.text, polarity: Polarity::Pos })
    }

    fn literal_list(&mut self) -> Result<Vec<FluentLiteral>, Diagnostic> {
        let mut out = vec![self.literal()?];
        while self.peek().kind == TokKind::Comma {
            self.next();
            out.push(self.literal()?);
        }
        Ok(out)
    }
}

fn describe(t: &Token) -> String {
    match t.kind {
        TokKind::Eof => "end of input".to_string(),
        _ => t.text.clone(),
    }
}

fn mentals_only(lits: Vec<FluentLiteral>, p: &Parser, role: &str) -> Result<Vec<MentalFluent>, Diagnostic> {
    lits.into_iter()
        .map(|l| match l {
            FluentLiteral::Mental(m) => Ok(m),
            FluentLiteral::Env { name, .. } => Err(Diagnostic {
                message: format!("{role} must be mental fluents, but `{name}` is an environment literal"),
                span: p.tokens[p.pos.saturating_sub(1)].span.clone(),
            }),
        })
        .collect()
}

/// Parses a domain file. The returned description is validated; both
/// syntax and validation problems come back as diagnostics with spans.
pub fn parse_domain(text: &str, file: &str) -> Result<DomainDescription, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0 };
    let mut d = DomainDescription::default();
    let mut law_spans: Vec<SourceSpan> = Vec::new();

    let result: Result<(), Diagnostic> = (|| {
        while p.peek().kind != TokKind::Eof {
            let stmt_span = p.peek().span.clone();
            match p.peek().text.as_str() {
                "class" => {
                    p.next();
                    let name = p.ident("a class name")?.text;
                    let ordered = if p.at_word("ordered") {
                        p.next();
                        true
                    } else {
                        false
                    };
                    p.expect_kind(TokKind::LBrace, "`{`")?;
                    let mut values = vec![p.ident("a value name")?.text];
                    while p.peek().kind == TokKind::Comma {
                        p.next();
                        values.push(p.ident("a value name")?.text);
                    }
                    p.expect_kind(TokKind::RBrace, "`}`")?;
                    d.classes.push(PsychClass { name, values, ordered });
                }
                "fluent" => {
                    p.next();
                    let name = p.ident("a fluent name")?.text;
                    p.expect_kind(TokKind::Semi, "`;`")?;
                    d.env_fluents.push(name);
                }
                "action" => {
                    p.next();
                    let name = p.ident("an action name")?.text;
                    let kind = match p.ident("`env` or `human`")?.text.as_str() {
                        "env" => ActionKind::Env,
                        "human" => ActionKind::Human,
                        other => {
                            return Err(p.error(format!("expected `env` or `human`, found `{other}`")))
                        }
                    };
                    p.expect_kind(TokKind::Semi, "`;`")?;
                    d.actions.push(ActionSymbol { name, kind });
                }
                "noconcurrency" => {
                    p.next();
                    let mut actions = vec![p.ident("an action name")?.text];
                    while p.peek().kind == TokKind::Comma {
                        p.next();
                        actions.push(p.ident("an action name")?.text);
                    }
                    p.expect_kind(TokKind::Semi, "`;`")?;
                    d.laws.push(CausalLaw::NoConcurrency { actions });
                    law_spans.push(stmt_span);
                }
                "default" => {
                    p.next();
                    let literal = p.literal()?;
                    p.expect_kind(TokKind::Semi, "`;`")?;
                    d.laws.push(CausalLaw::Default { literal });
                    law_spans.push(stmt_span);
                }
                "law" => {
                    p.next();
                    let law = parse_law(&mut p, &d)?;
                    p.expect_kind(TokKind::Semi, "`;`")?;
                    d.laws.push(law);
                    law_spans.push(stmt_span);
                }
                _ => {
                    return Err(p.error(format!(
                        "expected a statement (`class`, `fluent`, `action`, `law`, `noconcurrency`, `default`), found `{}`",
                        describe(p.peek())
                    )))
                }
            }
        }
        Ok(())
    })();

    if let Err(diag) = result {
        return Err(vec![diag]);
    }

    d.assign_forbid_ids();
    let report = validate_domain(&d);
    if report.is_valid() {
        Ok(d)
    } else {
        let fallback = SourceSpan { file: file.to_string(), line: 1, column: 1, length: 0 };
        Err(report
            .errors
            .into_iter()
            .map(|e| Diagnostic {
                message: e.message,
                span: e
                    .law_index
                    .and_then(|i| law_spans.get(i).cloned())
                    .unwrap_or_else(|| fallback.clone()),
            })
            .collect())
    }
}

/// A law statement after the `law` keyword. A leading bare identifier that
/// names a declared action starts an action-led law (`causes` /
/// `influences`); otherwise the statement starts with a literal list.
fn parse_law(p: &mut Parser, d: &DomainDescription) -> Result<CausalLaw, Diagnostic> {
    if p.peek().kind == TokKind::Ident
        && p.peek2().kind == TokKind::Ident
        && matches!(p.peek2().text.as_str(), "causes" | "influences")
        && d.action(&p.peek().text).is_some()
    {
        let action = p.next().text;
        let op = p.next().text;
        return match op.as_str() {
            "causes" => {
                let effects = p.literal_list()?;
                let conditions = if p.at_word("if") {
                    p.next();
                    p.literal_list()?
                } else {
                    Vec::new()
                };
                Ok(CausalLaw::Causes { action, effects, conditions })
            }
            _ => {
                let effects = mentals_only(p.literal_list()?, p, "`influences` effects")?;
                let conditions = if p.at_word("if") {
                    p.next();
                    p.literal_list()?
                } else {
                    Vec::new()
                };
                Ok(CausalLaw::InfluencesDyn { action, effects, conditions })
            }
        };
    }

    let lits = p.literal_list()?;
    let op = p.ident("a law operator")?;
    match op.text.as_str() {
        "if" => {
            let conditions = p.literal_list()?;
            Ok(CausalLaw::Static { effects: lits, conditions })
        }
        "triggers" => Ok(CausalLaw::Triggers { conditions: lits, action: p.ident("an action name")?.text }),
        "allows" => Ok(CausalLaw::Allows { conditions: lits, action: p.ident("an action name")?.text }),
        "inhibits" => Ok(CausalLaw::Inhibits { conditions: lits, action: p.ident("an action name")?.text }),
        "influences" => {
            let effects = mentals_only(p.literal_list()?, p, "`influences` effects")?;
            Ok(CausalLaw::InfluencesStatic { conditions: lits, effects })
        }
        "facilitates" => {
            let conditions = mentals_only(lits, p, "`facilitates` conditions")?;
            Ok(CausalLaw::Facilitates { conditions, action: p.ident("an action name")?.text })
        }
        "contravenes" => {
            let conditions = mentals_only(lits, p, "`contravenes` conditions")?;
            Ok(CausalLaw::Contravenes { conditions, action: p.ident("an action name")?.text })
        }
        "forbids_to_cause" => {
            let left = mentals_only(lits, p, "`forbids_to_cause` sides")?;
            let right = mentals_only(p.literal_list()?, p, "`forbids_to_cause` sides")?;
            Ok(CausalLaw::ForbidsToCause { left, right, id: 0 })
        }
        other => Err(Diagnostic {
            message: format!("unknown law operator `{other}`"),
            span: op.span,
        }),
    }
}

/// Parses an observation file: `observe <literal> at N;` and
/// `observe <action> occurs_at N;` statements. An empty file is valid.
pub fn parse_observations(text: &str, file: &str) -> Result<Vec<Observation>, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0 };
    let mut out = Vec::new();
    let result: Result<(), Diagnostic> = (|| {
        while p.peek().kind != TokKind::Eof {
            p.expect_word("observe")?;
            // `name occurs_at N` is an action observation; anything else is
            // a fluent literal followed by `at N`.
            if p.peek().kind == TokKind::Ident
                && p.peek2().kind == TokKind::Ident
                && p.peek2().text == "occurs_at"
            {
                let action = p.next().text;
                p.next();
                let t = p.int("a time point")?;
                p.expect_kind(TokKind::Semi, "`;`")?;
                out.push(Observation::OccursAt { action, t });
            } else {
                let literal = p.literal()?;
                p.expect_word("at")?;
                let t = p.int("a time point")?;
                p.expect_kind(TokKind::Semi, "`;`")?;
                out.push(Observation::FluentAt { literal, t });
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(out),
        Err(d) => Err(vec![d]),
    }
}

/// Parses a query file:
/// `query goal <literals> [with {a,b} occurs_at N, ...] horizon N;`
pub fn parse_query(text: &str, file: &str) -> Result<Query, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0 };
    let result: Result<Query, Diagnostic> = (|| {
        p.expect_word("query")?;
        p.expect_word("goal")?;
        let goal = p.literal_list()?;
        let mut schedule = Vec::new();
        if p.at_word("with") {
            p.next();
            loop {
                p.expect_kind(TokKind::LBrace, "`{`")?;
                let mut actions = vec![p.ident("an action name")?.text];
                while p.peek().kind == TokKind::Comma {
                    p.next();
                    actions.push(p.ident("an action name")?.text);
                }
                p.expect_kind(TokKind::RBrace, "`}`")?;
                p.expect_word("occurs_at")?;
                let t = p.int("a time point")?;
                schedule.push((actions, t));
                if p.peek().kind == TokKind::Comma {
                    p.next();
                } else {
                    break;
                }
            }
        }
        p.expect_word("horizon")?;
        let horizon = p.int("a horizon")?;
        p.expect_kind(TokKind::Semi, "`;`")?;
        if p.peek().kind != TokKind::Eof {
            return Err(p.error("expected end of input after the query"));
        }
        for window in schedule.windows(2) {
            if window[1].1 <= window[0].1 {
                return Err(p.error("schedule times must be strictly increasing"));
            }
        }
        if let Some((_, t)) = schedule.last() {
            if *t >= horizon {
                return Err(p.error(format!("schedule time {t} is beyond horizon {horizon}")));
            }
        }
        Ok(Query { goal, schedule, horizon })
    })();
    result.map_err(|d| vec![d])
}

fn literal_text(l: &FluentLiteral) -> String {
    match l {
        FluentLiteral::Env { name, polarity: Polarity::Pos } => name.clone(),
        FluentLiteral::Env { name, polarity: Polarity::Neg } => format!("neg {name}"),
        FluentLiteral::Mental(m) => format!("f({},{})", m.class, m.value),
    }
}

fn literal_list_text(lits: &[FluentLiteral]) -> String {
    lits.iter().map(literal_text).collect::<Vec<_>>().join(", ")
}

fn mental_list_text(ms: &[MentalFluent]) -> String {
    ms.iter().map(|m| format!("f({},{})", m.class, m.value)).collect::<Vec<_>>().join(", ")
}

/// Canonical text for a domain; `parse_domain(print_domain(d))` equals `d`
/// up to forbid-rule id reassignment. Comments are not preserved.
pub fn print_domain(d: &DomainDescription) -> String {
    let mut out = String::new();
    for c in &d.classes {
        out.push_str(&format!(
            "class {}{} {{ {} }}\n",
            c.name,
            if c.ordered { " ordered" } else { "" },
            c.values.join(", ")
        ));
    }
    for f in &d.env_fluents {
        out.push_str(&format!("fluent {f};\n"));
    }
    for a in &d.actions {
        let kind = match a.kind {
            ActionKind::Env => "env",
            ActionKind::Human => "human",
        };
        out.push_str(&format!("action {} {kind};\n", a.name));
    }
    for law in &d.laws {
        let text = match law {
            CausalLaw::Causes { action, effects, conditions } => {
                let mut s = format!("law {action} causes {}", literal_list_text(effects));
                if !conditions.is_empty() {
                    s.push_str(&format!(" if {}", literal_list_text(conditions)));
                }
                s
            }
            CausalLaw::Static { effects, conditions } => format!(
                "law {} if {}",
                literal_list_text(effects),
                literal_list_text(conditions)
            ),
            CausalLaw::Triggers { conditions, action } => {
                format!("law {} triggers {action}", literal_list_text(conditions))
            }
            CausalLaw::Allows { conditions, action } => {
                format!("law {} allows {action}", literal_list_text(conditions))
            }
            CausalLaw::Inhibits { conditions, action } => {
                format!("law {} inhibits {action}", literal_list_text(conditions))
            }
            CausalLaw::NoConcurrency { actions } => format!("noconcurrency {}", actions.join(", ")),
            CausalLaw::Default { literal } => format!("default {}", literal_text(literal)),
            CausalLaw::InfluencesDyn { action, effects, conditions } => {
                let mut s = format!("law {action} influences {}", mental_list_text(effects));
                if !conditions.is_empty() {
                    s.push_str(&format!(" if {}", literal_list_text(conditions)));
                }
                s
            }
            CausalLaw::InfluencesStatic { conditions, effects } => format!(
                "law {} influences {}",
                literal_list_text(conditions),
                mental_list_text(effects)
            ),
            CausalLaw::Facilitates { conditions, action } => {
                format!("law {} facilitates {action}", mental_list_text(conditions))
            }
            CausalLaw::Contravenes { conditions, action } => {
                format!("law {} contravenes {action}", mental_list_text(conditions))
            }
            CausalLaw::ForbidsToCause { left, right, .. } => format!(
                "law {} forbids_to_cause {}",
                mental_list_text(left),
                mental_list_text(right)
            ),
        };
        out.push_str(&text);
        out.push_str(";\n");
    }
    out
}

pub fn print_observations(observations: &[Observation]) -> String {
    let mut out = String::new();
    for obs in observations {
        match obs {
            Observation::FluentAt { literal, t } => {
                out.push_str(&format!("observe {} at {t};\n", literal_text(literal)));
            }
            Observation::OccursAt { action, t } => {
                out.push_str(&format!("observe {action} occurs_at {t};\n"));
            }
        }
    }
    out
}

pub fn print_query(q: &Query) -> String {
    let mut out = format!("query goal {}", literal_list_text(&q.goal));
    for (i, (actions, t)) in q.schedule.iter().enumerate() {
        out.push_str(if i == 0 { " with " } else { ", " });
        out.push_str(&format!("{{ {} }} occurs_at {t}", actions.join(", ")));
    }
    out.push_str(&format!(" horizon {};\n", q.horizon));
    out
}
