use std::collections::HashMap;

use super::{ConjunctiveQuery, VarId};
use crate::{Error, Result};

const RELATION: &str = "R";

/// Parses `R(x,y), R(y,z)`; atoms may be separated by `,` or `&`.
///
/// Offsets in errors are byte offsets into `text`.
pub fn parse_query(text: &str) -> Result<ConjunctiveQuery> {
    let mut p = Parser {
        src: text,
        pos: 0,
        names: Vec::new(),
        ids: HashMap::new(),
    };
    let mut atoms = vec![p.atom()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(',') | Some('&') => {
                p.pos += 1;
                atoms.push(p.atom()?);
            }
            Some(c) => return Err(p.syntax(format!("expected `,` or `&`, found `{c}`"))),
        }
    }
    ConjunctiveQuery::new(p.names, atoms)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: Vec<String>,
    ids: HashMap<String, VarId>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn syntax(&self, message: String) -> Error {
        Error::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.syntax(format!("expected `{want}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> Option<&str> {
        let start = self.pos;
        let rest = &self.src[start..];
        let first = rest.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        Some(&self.src[start..start + len])
    }

    fn atom(&mut self) -> Result<(VarId, VarId)> {
        self.skip_ws();
        let start = self.pos;
        let Some(rel) = self.ident() else {
            return Err(match self.peek() {
                Some(c) => self.syntax(format!("expected relation name, found `{c}`")),
                None => self.syntax("expected relation name, found end of input".into()),
            });
        };
        if rel != RELATION {
            return Err(Error::UnknownRelation {
                name: rel.to_string(),
                offset: start,
            });
        }
        self.expect('(')?;
        let a = self.argument()?;
        self.expect(',')?;
        let b = self.argument()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn argument(&mut self) -> Result<VarId> {
        self.skip_ws();
        let start = self.pos;
        if let Some(name) = self.ident() {
            let name = name.to_string();
            let next = VarId(self.names.len() as u32);
            let id = *self.ids.entry(name.clone()).or_insert(next);
            if id == next {
                self.names.push(name);
            }
            return Ok(id);
        }
        match self.peek() {
            Some(q @ ('"' | '\'')) => {
                let rest = &self.src[start + 1..];
                let len = rest.find(q).map_or(rest.len(), |e| e + 2);
                Err(Error::ConstantArgument {
                    token: self.src[start..(start + len).min(self.src.len())].to_string(),
                    offset: start,
                })
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                let rest = &self.src[start..];
                let len = rest
                    .char_indices()
                    .skip(1)
                    .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '.' || c == '_'))
                    .map_or(rest.len(), |(i, _)| i);
                Err(Error::ConstantArgument {
                    token: rest[..len].to_string(),
                    offset: start,
                })
            }
            Some(c) => Err(self.syntax(format!("expected variable, found `{c}`"))),
            None => Err(self.syntax("expected variable, found end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_atoms_in_order() {
        let q = parse_query("R(x,y), R(y,z)").unwrap();
        assert_eq!(q.atoms(), &[(VarId(0), VarId(1)), (VarId(1), VarId(2))]);
        assert_eq!(q.name(VarId(2)), "z");
    }

    #[test]
    fn self_loop() {
        let q = parse_query("R(x,x)").unwrap();
        assert_eq!(q.atoms(), &[(VarId(0), VarId(0))]);
    }

    #[test]
    fn whitespace_and_ampersand() {
        let q = parse_query("  R ( a_1 , b )&R(b,a_1)  ").unwrap();
        assert_eq!(q.atoms().len(), 2);
        assert_eq!(q.name(VarId(0)), "a_1");
    }

    #[test]
    fn duplicates_retained() {
        let q = parse_query("R(x,y), R(x,y)").unwrap();
        assert_eq!(q.atoms().len(), 2);
    }

    #[test]
    fn unknown_relation() {
        match parse_query("R(x,y) & S(y,z)") {
            Err(Error::UnknownRelation { name, offset }) => {
                assert_eq!(name, "S");
                assert_eq!(offset, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constants_rejected() {
        assert!(matches!(
            parse_query("R(x, 3)"),
            Err(Error::ConstantArgument { ref token, offset: 5 }) if token == "3"
        ));
        assert!(matches!(
            parse_query("R('a', x)"),
            Err(Error::ConstantArgument { ref token, offset: 2 }) if token == "'a'"
        ));
        assert!(matches!(
            parse_query("R(x, \"bob"),
            Err(Error::ConstantArgument { .. })
        ));
    }

    #[test]
    fn syntax_errors_report_position() {
        for (text, offset) in [
            ("", 0),
            ("R(x,y) R(y,z)", 7),
            ("R(x y)", 4),
            ("R(x,y),", 7),
            ("R(x,)", 4),
        ] {
            match parse_query(text) {
                Err(Error::Syntax { offset: got, .. }) => assert_eq!(got, offset, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }
}
