//! Line-oriented lexer and recursive-descent parser for knowledge bases.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{Formula, Rule};

use super::{Annotated, Contrary, KnowledgeBaseDoc, Pos, RuleDecl, SettingEntry};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    Not,
    And,
    Or,
    Implies,
    Defeasible,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Eq,
    At,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Defeasible => "`=>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::At => "`@`".into(),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str, line: usize, first_col: usize) -> Result<(Vec<(Tok, Pos)>, Pos)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| Pos {
        line,
        column: first_col + i,
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '@' => Tok::At,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Defeasible
            }
            '=' => Tok::Eq,
            c if c.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                Tok::Nat(
                    s.parse()
                        .map_err(|_| syntax(at(start), format!("number {s} is too large")))?,
                )
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < chars.len()
                    && (chars[i + 1].is_ascii_alphanumeric()
                        || chars[i + 1] == '_'
                        || chars[i + 1] == '\'')
                {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(syntax(at(start), format!("unexpected character `{other}`"))),
        };
        out.push((tok, at(start)));
        i += 1;
    }
    Ok((out, at(chars.len())))
}

struct Cursor<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.i += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(
                self.pos(),
                format!("expected {wanted}, found {}", t.describe()),
            ),
            None => syntax(self.pos(), format!("expected {wanted}, found end of line")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.i += 1;
                Ok((s.clone(), pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn done(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }

    // formula := implication [@ nat]
    fn formula(&mut self) -> Result<Formula> {
        let f = self.implication()?;
        if self.eat(&Tok::At) {
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Nat(v)) => Ok(Formula::labeled(f, *v)),
                _ => Err(syntax(pos, "expected a value after `@`")),
            }
        } else {
            Ok(f)
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        let pos = self.pos();
        match self.peek() {
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.implication()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(s)) => {
                self.i += 1;
                match s.as_str() {
                    "top" => Ok(Formula::Top),
                    "bot" => Ok(Formula::Bottom),
                    "n" if self.peek() == Some(&Tok::LParen) => {
                        self.i += 1;
                        let (id, _) = self.ident("a rule id")?;
                        self.expect(&Tok::RParen)?;
                        Ok(Formula::rule_name(&id))
                    }
                    _ => Ok(Formula::Atom(Arc::from(s.as_str()))),
                }
            }
            _ => Err(syntax(
                pos,
                match self.peek() {
                    Some(t) => format!("expected a formula, found {}", t.describe()),
                    None => "expected a formula, found end of line".to_string(),
                },
            )),
        }
    }

    fn annotation(&mut self) -> Result<Option<u32>> {
        if !self.eat(&Tok::LBracket) {
            return Ok(None);
        }
        let pos = self.pos();
        let v = match self.bump() {
            Some(Tok::Nat(v)) => *v,
            _ => return Err(syntax(pos, "expected a priority value")),
        };
        self.expect(&Tok::RBracket)?;
        Ok(Some(v))
    }

    fn body(&mut self, arrow: &Tok) -> Result<Vec<Formula>> {
        let mut body = Vec::new();
        if self.eat(arrow) {
            return Ok(body);
        }
        loop {
            body.push(self.disjunction()?);
            if self.eat(arrow) {
                return Ok(body);
            }
            if !self.eat(&Tok::Comma) {
                return Err(self.unexpected(&format!("`,` or {}", arrow.describe())));
            }
        }
    }
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let (toks, end) = lex(text, 1, 1)?;
    let mut c = Cursor {
        toks: &toks,
        i: 0,
        end,
    };
    let f = c.formula()?;
    c.done()?;
    Ok(f)
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBaseDoc> {
    let mut doc = KnowledgeBaseDoc::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let kw_pos = Pos {
            line,
            column: indent + 1,
        };
        let rest_offset = indent + keyword.chars().count();
        let rest: String = content.chars().skip(rest_offset).collect();
        if keyword == "setting" {
            doc.setting
                .push(parse_setting(&rest, line, rest_offset + 1)?);
            continue;
        }
        let (toks, end) = lex(&rest, line, rest_offset + 1)?;
        let mut c = Cursor {
            toks: &toks,
            i: 0,
            end,
        };
        match keyword.as_str() {
            "atoms" => {
                while c.peek().is_some() {
                    let (a, pos) = c.ident("an atom name")?;
                    doc.atoms.push((a, pos));
                }
            }
            "premise" => {
                let pos = c.pos();
                let formula = c.formula()?;
                let value = c.annotation()?;
                c.done()?;
                doc.premises.push(Annotated {
                    formula,
                    value,
                    pos,
                });
            }
            "assumption" => {
                let (a, pos) = c.ident("an assumption atom")?;
                let value = c.annotation()?;
                c.done()?;
                doc.assumptions.push(Annotated {
                    formula: Formula::atom(&a),
                    value,
                    pos,
                });
            }
            "contrary" => {
                let pos = c.pos();
                let of = c.formula()?;
                c.expect(&Tok::Eq)?;
                let contrary = c.formula()?;
                c.done()?;
                doc.contraries.push(Contrary { of, contrary, pos });
            }
            "strict" => {
                let (id, pos) = c.ident("a rule id")?;
                c.expect(&Tok::Colon)?;
                let body = c.body(&Tok::Implies)?;
                let head = c.disjunction()?;
                c.done()?;
                doc.strict.push(RuleDecl {
                    rule: Rule::strict(&id, body, head),
                    pos,
                });
            }
            "defeasible" => {
                let (id, pos) = c.ident("a rule id")?;
                let value = c.annotation()?;
                c.expect(&Tok::Colon)?;
                let body = c.body(&Tok::Defeasible)?;
                let head = c.disjunction()?;
                c.done()?;
                doc.defeasible.push(RuleDecl {
                    rule: Rule::defeasible(&id, body, head, value),
                    pos,
                });
            }
            other => return Err(syntax(kw_pos, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(doc)
}

fn parse_setting(rest: &str, line: usize, first_col: usize) -> Result<Vec<SettingEntry>> {
    let mut out = Vec::new();
    let mut col = first_col;
    for piece in rest.split(' ') {
        if !piece.trim().is_empty() {
            let pos = Pos { line, column: col };
            let Some((key, value)) = piece.trim().split_once('=') else {
                return Err(syntax(
                    pos,
                    format!("expected key=value, found `{}`", piece.trim()),
                ));
            };
            out.push(SettingEntry {
                key: key.to_string(),
                value: value.to_string(),
                pos,
            });
        }
        col += piece.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = parse_formula("p | q -> ~p & r").unwrap();
        let want = Formula::implies(
            Formula::or(Formula::atom("p"), Formula::atom("q")),
            Formula::and(Formula::not(Formula::atom("p")), Formula::atom("r")),
        );
        assert_eq!(f, want);
        let g = parse_formula("p -> q -> r").unwrap();
        assert_eq!(g.to_string(), "p -> q -> r");
        assert_eq!(
            parse_formula("(p -> q) -> r").unwrap().to_string(),
            "(p -> q) -> r"
        );
        assert_eq!(
            parse_formula("n(d1) & top").unwrap().to_string(),
            "n(d1) & top"
        );
        assert_eq!(
            parse_formula("p @ 3").unwrap(),
            Formula::labeled(Formula::atom("p"), 3)
        );
    }

    #[test]
    fn missing_operand_points_at_line_end() {
        let err = parse_kb("premise p & ").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 1,
                column: 13,
                message: "expected a formula, found end of line".into()
            }
        );
    }

    #[test]
    fn rules_and_annotations() {
        let doc = parse_kb("defeasible d1 [3]: p, q => r\nstrict s: -> p # comment\n").unwrap();
        assert_eq!(doc.defeasible[0].rule.value, Some(3));
        assert_eq!(doc.defeasible[0].rule.body.len(), 2);
        assert!(doc.strict[0].rule.body.is_empty());
        assert_eq!(doc.strict[0].pos, Pos { line: 2, column: 8 });
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse_kb("").unwrap(), KnowledgeBaseDoc::default());
        assert_eq!(
            parse_kb("# only a comment\n\n").unwrap(),
            KnowledgeBaseDoc::default()
        );
    }

    #[test]
    fn setting_entries_have_columns() {
        let doc = parse_kb("setting core=aspic  mode=ddagger").unwrap();
        let cols: Vec<usize> = doc.setting[0].iter().map(|e| e.pos.column).collect();
        assert_eq!(cols, vec![9, 21]);
        assert!(parse_kb("setting core").is_err());
    }

    #[test]
    fn unknown_keyword() {
        let err = parse_kb("  axiom p").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 1,
                column: 3,
                ..
            }
        ));
    }
}
