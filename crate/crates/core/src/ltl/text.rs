//! Conventional infix syntax: `! & | -> X F G U true false`, atoms bare or "quoted".

use super::{Ltl, LtlError};

fn bare(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "X" | "F" | "G" | "U" | "true" | "false")
}

fn prec(f: &Ltl) -> u8 {
    match f {
        Ltl::Or(v) if v.len() > 1 => 0,
        Ltl::And(v) if v.len() > 1 => 1,
        Ltl::Until(..) => 2,
        _ => 3,
    }
}

fn write(out: &mut String, f: &Ltl, min: u8) {
    let paren = prec(f) < min;
    if paren {
        out.push('(');
    }
    let unary = |out: &mut String, op: &str, g: &Ltl| {
        out.push_str(op);
        write(out, g, 3);
    };
    match f {
        Ltl::True => out.push_str("true"),
        Ltl::False => out.push_str("false"),
        Ltl::Prop(a) => {
            let n = a.name();
            if bare(&n) {
                out.push_str(&n);
            } else {
                out.push('"');
                out.push_str(&n);
                out.push('"');
            }
        }
        Ltl::Not(g) => unary(out, "!", g),
        Ltl::Next(g) => unary(out, "X ", g),
        Ltl::Eventually(g) => unary(out, "F ", g),
        Ltl::Always(g) => unary(out, "G ", g),
        Ltl::Until(a, b) => {
            write(out, a, 3);
            out.push_str(" U ");
            write(out, b, 2);
        }
        Ltl::And(v) | Ltl::Or(v) => {
            let conj = matches!(f, Ltl::And(_));
            match v.len() {
                0 => out.push_str(if conj { "true" } else { "false" }),
                1 => write(out, &v[0], min),
                _ => {
                    let (sep, lvl) = if conj { (" & ", 2) } else { (" | ", 1) };
                    for (i, g) in v.iter().enumerate() {
                        if i > 0 {
                            out.push_str(sep);
                        }
                        write(out, g, lvl);
                    }
                }
            }
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn to_text(f: &Ltl) -> String {
    let mut s = String::new();
    write(&mut s, f, 0);
    s
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Word(&'static str),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, LtlError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let start = i;
            i += 1;
            let b = i;
            while i < cs.len() && cs[i] != '"' {
                i += 1;
            }
            if i == cs.len() {
                return Err(LtlError::Syntax(start, "unterminated quote".into()));
            }
            out.push((Tok::Atom(cs[b..i].iter().collect()), start));
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let w: String = cs[start..i].iter().collect();
            let tok = match w.as_str() {
                "X" => Tok::Word("X"),
                "F" => Tok::Word("F"),
                "G" => Tok::Word("G"),
                "U" => Tok::Word("U"),
                "true" => Tok::Word("true"),
                "false" => Tok::Word("false"),
                _ => Tok::Atom(w),
            };
            out.push((tok, start));
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push((Tok::Sym("->"), i));
            i += 2;
        } else {
            let sym = match c {
                '!' => "!",
                '&' => "&",
                '|' => "|",
                '(' => "(",
                ')' => ")",
                _ => return Err(LtlError::Syntax(i, format!("unexpected {c:?}"))),
            };
            out.push((Tok::Sym(sym), i));
            i += 1;
        }
    }
    Ok(out)
}

struct P {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl P {
    fn at(&self, t: &Tok) -> bool {
        self.toks.get(self.pos).map(|x| &x.0) == Some(t)
    }
    fn off(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |x| x.1)
    }
    fn implication(&mut self) -> Result<Ltl, LtlError> {
        let a = self.disj()?;
        if self.at(&Tok::Sym("->")) {
            self.pos += 1;
            let b = self.implication()?;
            return Ok(Ltl::implies(a, b));
        }
        Ok(a)
    }
    fn disj(&mut self) -> Result<Ltl, LtlError> {
        let mut v = vec![self.conj()?];
        while self.at(&Tok::Sym("|")) {
            self.pos += 1;
            v.push(self.conj()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Ltl::Or(v) })
    }
    fn conj(&mut self) -> Result<Ltl, LtlError> {
        let mut v = vec![self.until()?];
        while self.at(&Tok::Sym("&")) {
            self.pos += 1;
            v.push(self.until()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Ltl::And(v) })
    }
    fn until(&mut self) -> Result<Ltl, LtlError> {
        let a = self.unary()?;
        if self.at(&Tok::Word("U")) {
            self.pos += 1;
            let b = self.until()?;
            return Ok(Ltl::until(a, b));
        }
        Ok(a)
    }
    fn unary(&mut self) -> Result<Ltl, LtlError> {
        let off = self.off();
        let Some((t, _)) = self.toks.get(self.pos).cloned() else {
            return Err(LtlError::Syntax(off, "unexpected end of formula".into()));
        };
        self.pos += 1;
        match t {
            Tok::Sym("!") => Ok(Ltl::not(self.unary()?)),
            Tok::Word("X") => Ok(Ltl::next(self.unary()?)),
            Tok::Word("F") => Ok(Ltl::eventually(self.unary()?)),
            Tok::Word("G") => Ok(Ltl::always(self.unary()?)),
            Tok::Word("true") => Ok(Ltl::True),
            Tok::Word("false") => Ok(Ltl::False),
            Tok::Atom(a) => Ok(Ltl::prop(&a)),
            Tok::Sym("(") => {
                let f = self.implication()?;
                if !self.at(&Tok::Sym(")")) {
                    return Err(LtlError::Syntax(self.off(), "expected `)`".into()));
                }
                self.pos += 1;
                Ok(f)
            }
            _ => Err(LtlError::Syntax(off, "expected a formula".into())),
        }
    }
}

pub fn parse_ltl(s: &str) -> Result<Ltl, LtlError> {
    let mut p = P { toks: lex(s)?, pos: 0, end: s.len() };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(LtlError::Syntax(p.off(), "trailing input".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in [
            "a U X b",
            "G (a -> F b)",
            "!(a & b) | X (c U (d U e))",
            "(a U b) U c",
            "\"E.R^-@a\" & X \"A@b\"",
            "true & !false",
        ] {
            let f = parse_ltl(s).unwrap();
            let again = parse_ltl(&to_text(&f)).unwrap();
            assert_eq!(f, again, "{s} -> {}", to_text(&f));
        }
    }

    #[test]
    fn quoting() {
        assert_eq!(to_text(&Ltl::prop("A@a")), "\"A@a\"");
        assert_eq!(to_text(&Ltl::prop("ok_1")), "ok_1");
        assert_eq!(to_text(&Ltl::prop("X")), "\"X\"");
    }

    #[test]
    fn errors() {
        assert!(parse_ltl("a &").is_err());
        assert!(parse_ltl("(a").is_err());
        assert!(parse_ltl("a b").is_err());
        assert!(parse_ltl("\"a").is_err());
    }
}
