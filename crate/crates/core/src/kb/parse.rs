use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateRole(String),
    Param(ParamOutOfRange),
    TooManyDiamonds(usize),
    MixedParams(String, String),
    NameClash(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.span)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::DuplicateRole(r) => write!(f, "role {r} declared more than once"),
            ParseErrorKind::Param(e) => {
                write!(f, "{e}: geometric parameters must satisfy 1/2 <= p < 1")
            }
            ParseErrorKind::TooManyDiamonds(d) => {
                write!(f, "{d} diamond atoms; at most 2 are supported")
            }
            ParseErrorKind::MixedParams(a, b) => {
                write!(f, "diamond atoms use different parameters {a} and {b}")
            }
            ParseErrorKind::NameClash(n) => write!(f, "{n} is used both as a concept and a role"),
        }
    }
}

impl ParseError {
    fn syntax(span: Span, msg: impl Into<String>) -> ParseError {
        ParseError { span, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sub,
    Equiv,
    Amp,
    LParen,
    RParen,
    Comma,
    Slash,
    Colon,
    Caret,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sub => f.write_str("`[=`"),
            Tok::Equiv => f.write_str("`==`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "not", "X", "F", "G", "U", "bot", "exists", "inv", "geom", "rigid", "flexible", "role", "tbox",
    "abox",
];

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = Span { line: li + 1, col: i + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), span));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse::<u64>()
                    .map_err(|_| ParseError::syntax(span, format!("integer {s} too large")))?;
                out.push((Tok::Int(n), span));
                continue;
            }
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (tok, width) = match (c, two.as_str()) {
                (_, "[=") => (Tok::Sub, 2),
                (_, "==") => (Tok::Equiv, 2),
                ('&', _) => (Tok::Amp, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('/', _) => (Tok::Slash, 1),
                (':', _) => (Tok::Colon, 1),
                ('^', _) => (Tok::Caret, 1),
                _ => return Err(ParseError::syntax(span, format!("unexpected character {c:?}"))),
            };
            out.push((tok, span));
            i += width;
        }
        let span = Span { line: li + 1, col: chars.len() + 1 };
        out.push((Tok::Newline, span));
    }
    let line = text.lines().count() + 1;
    out.push((Tok::Eof, Span { line, col: 1 }));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Tbox,
    Abox,
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    roles: BTreeSet<String>,
    concepts: BTreeMap<String, Span>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }
    fn span(&self) -> Span {
        self.toks[self.pos].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }
    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("{want}")))
        }
    }
    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::syntax(self.span(), format!("expected {wanted}, found {}", self.peek()))
    }
    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }
    fn int(&mut self) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }
    fn power(&mut self) -> Result<u32, ParseError> {
        if *self.peek() == Tok::Caret {
            self.bump();
            let span = self.span();
            let n = self.int()?;
            u32::try_from(n).map_err(|_| ParseError::syntax(span, "exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn role(&mut self) -> Result<Role, ParseError> {
        if self.is_kw("inv") {
            self.bump();
            self.expect(Tok::LParen)?;
            let r = self.role()?;
            self.expect(Tok::RParen)?;
            Ok(r.inverse())
        } else {
            Ok(Role::new(self.name("a role name")?))
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let lhs = self.until()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.concept()?;
            return Ok(Concept::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Concept, ParseError> {
        let lhs = self.unary()?;
        if self.is_kw("U") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Concept::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.primary();
        };
        match kw.as_str() {
            "not" => {
                self.bump();
                Ok(Concept::not(self.unary()?))
            }
            "X" | "F" | "G" => {
                self.bump();
                let n = self.power()?;
                let c = self.unary()?;
                let wrap: fn(Box<Concept>) -> Concept = match kw.as_str() {
                    "X" => Concept::Next,
                    "F" => Concept::Eventually,
                    _ => Concept::Always,
                };
                Ok((0..n).fold(c, |c, _| wrap(Box::new(c))))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Concept, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let c = self.concept()?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            Tok::Ident(s) if s == "bot" => {
                self.bump();
                Ok(Concept::bottom())
            }
            Tok::Ident(s) if s == "exists" => {
                self.bump();
                Ok(Concept::exists(self.role()?))
            }
            Tok::Ident(_) => {
                let n = self.name("a concept")?;
                if self.roles.contains(&n) {
                    return Err(ParseError { span, kind: ParseErrorKind::NameClash(n) });
                }
                self.concepts.entry(n.clone()).or_insert(span);
                Ok(Concept::atomic(n))
            }
            _ => Err(self.unexpected("a concept")),
        }
    }

    fn inclusion_op(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Tok::Sub => {
                self.bump();
                Ok(false)
            }
            Tok::Equiv => {
                self.bump();
                Ok(true)
            }
            _ => Err(self.unexpected("`[=` or `==`")),
        }
    }

    fn axiom(&mut self, onto: &mut Ontology) -> Result<(), ParseError> {
        let span = self.span();
        let role_axiom = self.is_kw("inv")
            || matches!(self.peek(), Tok::Ident(s) if self.roles.contains(s)
                && matches!(self.peek_at(1), Tok::Sub | Tok::Equiv));
        if role_axiom {
            let lhs = self.role()?;
            let eq = self.inclusion_op()?;
            let rhs = self.role()?;
            if eq {
                onto.role_inclusions.push(RoleInclusion { lhs: lhs.clone(), rhs: rhs.clone(), span });
                onto.role_inclusions.push(RoleInclusion { lhs: rhs, rhs: lhs, span });
            } else {
                onto.role_inclusions.push(RoleInclusion { lhs, rhs, span });
            }
        } else {
            let lhs = self.concept()?;
            let eq = self.inclusion_op()?;
            let rhs = self.concept()?;
            if eq {
                onto.concept_inclusions.push(ConceptInclusion {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                    span,
                });
                onto.concept_inclusions.push(ConceptInclusion { lhs: rhs, rhs: lhs, span });
            } else {
                onto.concept_inclusions.push(ConceptInclusion { lhs, rhs, span });
            }
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<AboxAtom, ParseError> {
        let span = self.span();
        let mut offset: u32 = 0;
        while self.is_kw("X") {
            self.bump();
            let n = self.power()?;
            offset = offset
                .checked_add(n)
                .ok_or_else(|| ParseError::syntax(span, "offset too large"))?;
        }
        let polarity = if self.is_kw("not") {
            self.bump();
            if self.is_kw("geom") {
                return Err(ParseError::syntax(self.span(), "negation cannot apply to a diamond"));
            }
            Polarity::Negative
        } else if self.is_kw("geom") {
            self.bump();
            self.expect(Tok::LParen)?;
            let pspan = self.span();
            let num = self.int()?;
            self.expect(Tok::Slash)?;
            let den = self.int()?;
            self.expect(Tok::RParen)?;
            if den == 0 {
                return Err(ParseError::syntax(pspan, "zero denominator"));
            }
            let p = BigRational::new(BigInt::from(num), BigInt::from(den));
            Polarity::Diamond(
                GeomParam::new(p)
                    .map_err(|e| ParseError { span: pspan, kind: ParseErrorKind::Param(e) })?,
            )
        } else {
            Polarity::Positive
        };
        let pspan = self.span();
        let (pred_role, name) = if self.is_kw("inv") {
            (Some(self.role()?), None)
        } else {
            (None, Some(self.name("a predicate")?))
        };
        self.expect(Tok::LParen)?;
        let mut args = vec![self.name("an individual")?];
        if *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.name("an individual")?);
        }
        self.expect(Tok::RParen)?;
        let predicate = match (pred_role, name, args.len()) {
            (Some(r), _, 2) => Predicate::Role(r),
            (None, Some(n), 2) => Predicate::Role(Role::new(n)),
            (None, Some(n), 1) => {
                if self.roles.contains(&n) {
                    return Err(ParseError { span: pspan, kind: ParseErrorKind::NameClash(n) });
                }
                self.concepts.entry(n.clone()).or_insert(pspan);
                Predicate::Concept(n)
            }
            _ => return Err(ParseError::syntax(pspan, "a role atom needs two individuals")),
        };
        Ok(AboxAtom { offset, polarity, predicate, args, span })
    }
}

/// Names that can only be roles: declared ones, those under `inv`/`exists`,
/// and predicates of binary ABox atoms.
fn prescan_roles(toks: &[(Tok, Span)]) -> BTreeSet<String> {
    let mut roles = BTreeSet::new();
    for w in toks.windows(4) {
        let id = |t: &Tok| match t {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        };
        match (&w[0].0, &w[1].0, &w[2].0, &w[3].0) {
            (Tok::Ident(k), Tok::Ident(r), _, _) if k == "role" || k == "exists" => {
                if let Some(r) = id(&Tok::Ident(r.clone())) {
                    roles.insert(r);
                }
            }
            (Tok::Ident(k), Tok::LParen, r, _) if k == "inv" => {
                if let Some(r) = id(r) {
                    roles.insert(r);
                }
            }
            (p, Tok::LParen, a, Tok::Comma) if id(a).is_some() => {
                if let Some(p) = id(p) {
                    roles.insert(p);
                }
            }
            _ => {}
        }
    }
    roles
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let toks = lex(text)?;
    let roles = prescan_roles(&toks);
    let mut p = Parser { toks, pos: 0, roles, concepts: BTreeMap::new() };
    let mut kb = KnowledgeBase::default();
    let mut section = Section::None;
    let mut declared: BTreeMap<String, Rigidity> = BTreeMap::new();

    loop {
        while *p.peek() == Tok::Newline {
            p.bump();
        }
        if *p.peek() == Tok::Eof {
            break;
        }
        let span = p.span();
        if p.is_kw("rigid") || p.is_kw("flexible") {
            let rig = if p.is_kw("rigid") { Rigidity::Rigid } else { Rigidity::Flexible };
            p.bump();
            if !p.is_kw("role") {
                return Err(p.unexpected("`role`"));
            }
            p.bump();
            let name = p.name("a role name")?;
            if declared.insert(name.clone(), rig).is_some() {
                return Err(ParseError { span, kind: ParseErrorKind::DuplicateRole(name) });
            }
        } else if (p.is_kw("tbox") || p.is_kw("abox")) && *p.peek_at(1) == Tok::Colon {
            section = if p.is_kw("tbox") { Section::Tbox } else { Section::Abox };
            p.bump();
            p.bump();
            continue;
        } else {
            match section {
                Section::None => {
                    return Err(p.unexpected("a role declaration, `tbox:` or `abox:`"));
                }
                Section::Tbox => p.axiom(&mut kb.ontology)?,
                Section::Abox => kb.abox.push(p.atom()?),
            }
        }
        if !matches!(p.peek(), Tok::Newline | Tok::Eof) {
            return Err(p.unexpected("end of line"));
        }
    }

    if let Some((n, span)) = p.concepts.iter().find(|(n, _)| p.roles.contains(*n)) {
        return Err(ParseError { span: *span, kind: ParseErrorKind::NameClash(n.clone()) });
    }
    for r in &p.roles {
        kb.roles.insert(r.clone(), declared.get(r).copied().unwrap_or(Rigidity::Flexible));
    }
    for (r, rig) in declared {
        kb.roles.insert(r, rig);
    }

    let diamonds: Vec<&AboxAtom> = kb.abox.iter().filter(|a| a.is_diamond()).collect();
    if diamonds.len() > 2 {
        return Err(ParseError {
            span: diamonds[2].span,
            kind: ParseErrorKind::TooManyDiamonds(diamonds.len()),
        });
    }
    if let [a, b] = diamonds.as_slice() {
        if let (Polarity::Diamond(pa), Polarity::Diamond(pb)) = (&a.polarity, &b.polarity) {
            if pa != pb {
                return Err(ParseError {
                    span: b.span,
                    kind: ParseErrorKind::MixedParams(pa.to_string(), pb.to_string()),
                });
            }
        }
    }
    Ok(kb)
}
