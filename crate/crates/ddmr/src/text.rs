//! Concrete syntax: the theory language, tagged-formula queries and the
//! extension output formats.
//!
//! ```text
//! program := (stmt)* ; stmt := fact | rule | sup ;
//! fact := "fact" lit "." ;
//! rule := LABEL ":" [body] arrow MODE head "." ;
//! arrow := "=>" (defeasible) | "~>" (defeater) ; MODE := "C"|"O"|"P" ;
//! body := item ("," item)* ;
//! item := lit | modlit | rexpr | drexpr ;
//! lit := ["~"] ATOM ; modlit := ["~"] ("O"|"P") "(" lit ")" ;
//! rexpr := ["~"] "(" rule-no-dot ")" ; drexpr := ["~"] ("O"|"P") "[" rexpr "]" ;
//! head := chainelem ("*" chainelem)* ; chainelem := lit | rexpr ;
//! sup := LABEL ">" LABEL "." ;
//! ```
//!
//! `~` is complement everywhere, `*` is the compensation operator and `#`
//! starts a comment that runs to the end of the line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::model::{
    Arrow, DeonticRuleExpr, Element, Extension, Item, Level, Literal, ModalLiteral, Mode, Rule,
    RuleExpr, RuleRef, Sign, Subject, TaggedFormula, Theory,
};

/// A positioned syntax error. Line and column are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub snippet: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.snippet.is_empty() {
            write!(f, "\n  | {}", self.snippet)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Dot,
    Comma,
    Tilde,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Star,
    Gt,
    Defeasible,
    Defeater,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Colon => "`:`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Tilde => "`~`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Star => "`*`",
            Tok::Gt => "`>`",
            Tok::Defeasible => "`=>`",
            Tok::Defeater => "`~>`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Source<'a> {
    lines: Vec<&'a str>,
}

impl Source<'_> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        let snippet = self.lines.get(line.wrapping_sub(1)).copied().unwrap_or("").to_string();
        ParseError { line, column, message: message.into(), snippet }
    }
}

fn lex(src: &str, source: &Source) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '*' => Tok::Star,
            '>' => Tok::Gt,
            '~' => {
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Defeater
                } else {
                    Tok::Tilde
                }
            }
            '=' => {
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Defeasible
                } else {
                    return Err(source.error(l0, c0, "expected `=>`"));
                }
            }
            other => {
                return Err(source.error(l0, c0, format!("unexpected character `{other}`")));
            }
        };
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    source: &'a Source<'a>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        self.source.error(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> PResult<()> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => Err(self.err_here(format!("expected {what}, found {other}"))),
        }
    }

    fn statement(&mut self, t: &mut Theory) -> PResult<()> {
        let first = self.ident("a statement")?;
        match self.peek() {
            Tok::Colon => {
                self.advance();
                let rule = self.rule_rest(first)?;
                self.expect(Tok::Dot, "`.` after rule")?;
                t.rules.push(rule);
            }
            Tok::Gt => {
                self.advance();
                let weaker = self.ident("a rule label")?;
                self.expect(Tok::Dot, "`.` after superiority")?;
                t.superiority.insert((first, weaker));
            }
            _ if first == "fact" => {
                let item = match self.item()? {
                    it @ (Item::Literal(_) | Item::Modal(_)) => it,
                    _ => return Err(self.err_here("a fact must be a literal")),
                };
                self.expect(Tok::Dot, "`.` after fact")?;
                t.facts.insert(item);
            }
            other => {
                return Err(self.err_here(format!("expected `:` or `>` after label, found {other}")))
            }
        }
        Ok(())
    }

    /// Everything after `LABEL ":"` up to, not including, the final dot.
    fn rule_rest(&mut self, label: String) -> PResult<Rule> {
        let mut antecedent = BTreeSet::new();
        if !matches!(self.peek(), Tok::Defeasible | Tok::Defeater) {
            loop {
                antecedent.insert(self.item()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        let arrow = match self.peek() {
            Tok::Defeasible => Arrow::Defeasible,
            Tok::Defeater => Arrow::Defeater,
            other => return Err(self.err_here(format!("expected `=>` or `~>`, found {other}"))),
        };
        self.advance();
        let mode = self.mode()?;
        let chain_at = self.pos;
        let mut consequent = vec![self.element()?];
        while *self.peek() == Tok::Star {
            self.advance();
            consequent.push(self.element()?);
        }
        if consequent.len() > 1 && !(arrow == Arrow::Defeasible && mode == Mode::O) {
            let t = &self.toks[chain_at];
            return Err(self.source.error(t.line, t.column, "chains are only allowed after `=> O`"));
        }
        Ok(Rule { label, antecedent, arrow, mode, consequent })
    }

    fn mode(&mut self) -> PResult<Mode> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let m = match s.as_str() {
                    "C" => Mode::C,
                    "O" => Mode::O,
                    "P" => Mode::P,
                    _ => return Err(self.err_here(format!("unknown mode `{s}`"))),
                };
                self.advance();
                Ok(m)
            }
            other => Err(self.err_here(format!("expected a mode, found {other}"))),
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        let positive = if *self.peek() == Tok::Tilde {
            self.advance();
            false
        } else {
            true
        };
        Ok(Literal { atom: self.ident("an atom")?, positive })
    }

    fn rule_expr(&mut self, positive: bool) -> PResult<RuleExpr> {
        self.expect(Tok::LParen, "`(`")?;
        let label = self.ident("a rule label")?;
        self.expect(Tok::Colon, "`:`")?;
        let rule = self.rule_rest(label)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(RuleExpr { positive, rule: Box::new(rule) })
    }

    fn item(&mut self) -> PResult<Item> {
        let negated = *self.peek() == Tok::Tilde;
        if negated {
            self.advance();
        }
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::LParen, _) => Ok(Item::Rule(self.rule_expr(!negated)?)),
            (Tok::Ident(m), Tok::LParen) if m == "O" || m == "P" => {
                let mode = self.mode()?;
                self.advance();
                let inner = self.literal()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Item::Modal(ModalLiteral { mode, negated, inner }))
            }
            (Tok::Ident(m), Tok::LBrack) if m == "O" || m == "P" => {
                let mode = self.mode()?;
                self.advance();
                let positive = if *self.peek() == Tok::Tilde {
                    self.advance();
                    false
                } else {
                    true
                };
                let expr = self.rule_expr(positive)?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Item::Deontic(DeonticRuleExpr { mode, negated, expr }))
            }
            (Tok::Ident(atom), _) => {
                self.advance();
                Ok(Item::Literal(Literal { atom, positive: !negated }))
            }
            (other, _) => Err(self.err_here(format!("expected an antecedent item, found {other}"))),
        }
    }

    fn element(&mut self) -> PResult<Element> {
        let negated = *self.peek() == Tok::Tilde;
        match self.peek_at(usize::from(negated)) {
            Tok::LParen => {
                if negated {
                    self.advance();
                }
                Ok(Element::Rule(self.rule_expr(!negated)?))
            }
            _ => Ok(Element::Literal(self.literal()?)),
        }
    }

    fn skip_statement(&mut self) {
        loop {
            match self.advance() {
                Tok::Dot | Tok::Eof => return,
                _ => {}
            }
        }
    }
}

/// Parses a theory. Semantic checks are left to [`crate::validate::validate`].
pub fn parse_theory(src: &str) -> Result<Theory, Vec<ParseError>> {
    let source = Source { lines: src.lines().collect() };
    let toks = lex(src, &source).map_err(|e| vec![e])?;
    let mut p = Parser { toks, pos: 0, source: &source };
    let mut theory = Theory::default();
    let mut errors = Vec::new();
    while *p.peek() != Tok::Eof {
        if let Err(e) = p.statement(&mut theory) {
            errors.push(e);
            p.skip_statement();
        }
    }
    if errors.is_empty() {
        Ok(theory)
    } else {
        Err(errors)
    }
}

/// Like [`parse_theory`] but accepts raw bytes, reporting invalid UTF-8 as a
/// positioned error.
pub fn parse_theory_bytes(bytes: &[u8]) -> Result<Theory, Vec<ParseError>> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse_theory(s),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            let column = String::from_utf8_lossy(&valid[start..]).chars().count() + 1;
            Err(vec![ParseError {
                line,
                column,
                message: "invalid UTF-8".into(),
                snippet: String::from_utf8_lossy(&valid[start..]).into_owned(),
            }])
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.atom)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for ModalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.negated { "~" } else { "" };
        write!(f, "{neg}{}({})", self.mode, self.inner)
    }
}

impl fmt::Display for RuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.positive { "" } else { "~" };
        write!(f, "{neg}({})", self.rule)
    }
}

impl fmt::Display for DeonticRuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.negated { "~" } else { "" };
        write!(f, "{neg}{}[{}]", self.mode, self.expr)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Literal(l) => l.fmt(f),
            Element::Rule(r) => r.fmt(f),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Literal(l) => l.fmt(f),
            Item::Modal(m) => m.fmt(f),
            Item::Rule(r) => r.fmt(f),
            Item::Deontic(d) => d.fmt(f),
        }
    }
}

/// The rule without its terminating dot.
impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (i, item) in self.antecedent.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{item}")?;
        }
        let arrow = match self.arrow {
            Arrow::Defeasible => "=>",
            Arrow::Defeater => "~>",
        };
        write!(f, " {arrow} {}", self.mode)?;
        for (i, e) in self.consequent.iter().enumerate() {
            let sep = if i == 0 { " " } else { " * " };
            write!(f, "{sep}{e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for RuleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.label)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Literal(l) => l.fmt(f),
            Subject::Rule(r) => r.fmt(f),
        }
    }
}

impl fmt::Display for TaggedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        let m = if self.level() == Level::Meta { "m" } else { "" };
        write!(f, "{sign}d{m}{} {}", self.mode, self.subject)
    }
}

/// Canonical text: sorted facts, rules in declaration order, sorted
/// superiority pairs.
pub fn render_theory(t: &Theory) -> String {
    let mut out = String::new();
    for fact in &t.facts {
        out.push_str(&format!("fact {fact}.\n"));
    }
    for r in &t.rules {
        out.push_str(&format!("{r}.\n"));
    }
    for (a, b) in &t.superiority {
        out.push_str(&format!("{a} > {b}.\n"));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("malformed tagged formula `{0}`")]
    Malformed(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("malformed subject `{0}`")]
    BadSubject(String),
}

/// Parses `+dC l`, `-dO ~p`, `+dmC alpha`, `-dmP ~alpha`.
pub fn parse_tagged_formula(text: &str) -> Result<TaggedFormula, TagError> {
    let text = text.trim();
    let malformed = || TagError::Malformed(text.to_string());
    let (tag, subject) = text.split_once(char::is_whitespace).ok_or_else(malformed)?;
    let subject = subject.trim();
    let mut cs = tag.chars();
    let sign = match cs.next() {
        Some('+') => Sign::Plus,
        Some('-') => Sign::Minus,
        _ => return Err(malformed()),
    };
    if cs.next() != Some('d') {
        return Err(malformed());
    }
    let rest: String = cs.collect();
    let (meta, mode_text) = match rest.strip_prefix('m') {
        Some(m) if !m.is_empty() => (true, m),
        _ => (false, rest.as_str()),
    };
    let mode = match mode_text {
        "C" => Mode::C,
        "O" => Mode::O,
        "P" => Mode::P,
        other => return Err(TagError::UnknownMode(other.to_string())),
    };
    let (positive, name) = match subject.strip_prefix('~') {
        Some(n) => (false, n),
        None => (true, subject),
    };
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        return Err(TagError::BadSubject(subject.to_string()));
    }
    let subject = if meta {
        Subject::Rule(RuleRef { label: name.to_string(), positive })
    } else {
        Subject::Literal(Literal { atom: name.to_string(), positive })
    };
    Ok(TaggedFormula { sign, mode, subject })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

fn set_key(sign: Sign, level: Level, mode: Mode) -> String {
    let s = if sign == Sign::Plus { '+' } else { '-' };
    let m = if level == Level::Meta { "m" } else { "" };
    format!("{s}d{m}{mode}")
}

fn sorted_names(set: BTreeSet<Subject>) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(ToString::to_string).collect();
    v.sort();
    v
}

/// `C` for literal pairs, `mC` for meta pairs.
fn pair_mode(mode: Mode, s: &Subject) -> String {
    match s.level() {
        Level::Literal => mode.to_string(),
        Level::Meta => format!("m{mode}"),
    }
}

fn undetermined_rows(e: &Extension) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> =
        e.undetermined.iter().map(|(m, s)| (pair_mode(*m, s), s.to_string())).collect();
    rows.sort();
    rows
}

/// Renders an extension; JSON output has sorted keys and sorted arrays.
pub fn render_extension(e: &Extension, format: Format) -> String {
    let mut sets = Vec::new();
    for level in [Level::Literal, Level::Meta] {
        for mode in Mode::ALL {
            for sign in [Sign::Plus, Sign::Minus] {
                sets.push((set_key(sign, level, mode), sorted_names(e.set(sign, level, mode))));
            }
        }
    }
    match format {
        Format::Json => {
            let mut obj: BTreeMap<String, Value> = BTreeMap::new();
            for (k, v) in sets {
                obj.insert(k, json!(v));
            }
            let und: Vec<Value> = undetermined_rows(e)
                .into_iter()
                .map(|(m, s)| json!({ "mode": m, "subject": s }))
                .collect();
            obj.insert("undetermined".into(), Value::Array(und));
            let mut s = serde_json::to_string_pretty(&obj).expect("string keys always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            for (k, v) in sets {
                out.push_str(&format!("{k:<5} {}\n", v.join(", ")));
            }
            let und: Vec<String> =
                undetermined_rows(e).into_iter().map(|(m, s)| format!("{m} {s}")).collect();
            out.push_str(&format!("undetermined {}\n", und.join(", ")));
            out
        }
    }
}
