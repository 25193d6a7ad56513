//! First-order rewritings and their concrete syntax.
//!
//! Syntax: `E x.` / `A x.` quantifiers, `~`, `&`, `|`, `->` (right
//! associative), atoms `R(s,t)`, `s = t`, `s != t`, and parentheses.
//! Binding strength from tight to loose is `~`, `&`, `|`, `->`. A quantifier
//! body extends as far to the right as possible.

use std::fmt;

use crate::normalizer::NormalForm;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Rel(String, String),
    Eq(String, String),
    Neq(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    fn rel(a: &str, b: &str) -> Self {
        Formula::Rel(a.to_string(), b.to_string())
    }

    fn exists(v: &str, body: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    fn forall(v: &str, body: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Neq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Variables occurring free, in first-occurrence order.
    pub fn free_variables(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, free: &mut Vec<String>) {
            let mut note = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) && !free.contains(v) {
                    free.push(v.clone());
                }
            };
            match f {
                Formula::Rel(a, b) | Formula::Eq(a, b) | Formula::Neq(a, b) => {
                    note(a, bound);
                    note(b, bound);
                }
                Formula::Not(g) => walk(g, bound, free),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| walk(g, bound, free)),
                Formula::Implies(a, b) => {
                    walk(a, bound, free);
                    walk(b, bound, free);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, free);
                    bound.pop();
                }
            }
        }
        let mut free = Vec::new();
        walk(self, &mut Vec::new(), &mut free);
        free
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8, rightmost: bool) -> fmt::Result {
        const IMPLIES: u8 = 1;
        const OR: u8 = 2;
        const AND: u8 = 3;
        const UNARY: u8 = 4;
        match self {
            Formula::Rel(a, b) => write!(f, "R({a},{b})"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Neq(a, b) => write!(f, "{a} != {b}"),
            Formula::Not(g) => {
                f.write_str("~")?;
                g.write(f, UNARY, rightmost)
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                if !rightmost {
                    f.write_str("(")?;
                }
                let q = if matches!(self, Formula::Exists(..)) {
                    'E'
                } else {
                    'A'
                };
                write!(f, "{q} {v}. ")?;
                match **body {
                    Formula::Exists(..) | Formula::Forall(..) => body.write(f, 0, true)?,
                    Formula::Rel(..) | Formula::Eq(..) | Formula::Neq(..) | Formula::Not(_) => {
                        body.write(f, UNARY, true)?
                    }
                    _ => {
                        f.write_str("(")?;
                        body.write(f, 0, true)?;
                        f.write_str(")")?;
                    }
                }
                if !rightmost {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::And(items) | Formula::Or(items) => {
                let (prec, sep) = if matches!(self, Formula::And(_)) {
                    (AND, " & ")
                } else {
                    (OR, " | ")
                };
                let parens = min_prec > prec;
                let inner_right = parens || rightmost;
                if parens {
                    f.write_str("(")?;
                }
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(sep)?;
                    }
                    item.write(f, prec + 1, inner_right && k + 1 == items.len())?;
                }
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                let parens = min_prec > IMPLIES;
                if parens {
                    f.write_str("(")?;
                }
                a.write(f, OR, false)?;
                f.write_str(" -> ")?;
                b.write(f, IMPLIES, parens || rightmost)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, true)
    }
}

/// A closed first-order sentence over `R`, `=` and `!=`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoSentence {
    pub formula: Formula,
    pub text: String,
    pub quantifier_depth: usize,
}

impl FoSentence {
    pub fn new(formula: Formula) -> Self {
        FoSentence {
            text: formula.to_string(),
            quantifier_depth: formula.quantifier_depth(),
            formula,
        }
    }
}

impl fmt::Display for FoSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// The rewriting for `nf`, or `None` when none exists (cycle collections
/// other than the single self-loop).
pub fn emit_fo_rewriting(nf: &NormalForm) -> Option<FoSentence> {
    match nf {
        NormalForm::Path(n) => Some(psi_path(*n)),
        _ if nf.is_self_loop() => Some(self_loop_sentence()),
        NormalForm::Cycles(_) => None,
    }
}

/// `E x. (R(x,x) & A y. (x != y -> ~R(x,y)))`
pub fn self_loop_sentence() -> FoSentence {
    FoSentence::new(Formula::exists(
        "x",
        Formula::And(vec![
            Formula::rel("x", "x"),
            Formula::forall(
                "y",
                Formula::implies(
                    Formula::Neq("x".into(), "y".into()),
                    Formula::Not(Box::new(Formula::rel("x", "y"))),
                ),
            ),
        ]),
    ))
}

fn var_name(k: usize) -> String {
    match k {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => format!("v{k}"),
    }
}

/// Rewriting of the `n`-edge path query.
///
/// `psi_n = E x. walk(x, n)` where `walk(h, k)` asserts a `k`-edge path out
/// of `h` and that every successor `y` of `h` satisfies `walk(y, k - 1)`;
/// `walk(h, 1)` is just `E y. R(h,y)`. Variable names are reused by depth,
/// so `psi_2` reads
/// `E x. E y. E z. (R(x,y) & R(y,z) & A y. (R(x,y) -> E z. R(y,z)))`.
pub fn psi_path(n: usize) -> FoSentence {
    assert!(n >= 1, "path length must be positive");
    FoSentence::new(Formula::exists(&var_name(0), walk(0, n)))
}

fn walk(head: usize, k: usize) -> Formula {
    let h = var_name(head);
    let next = var_name(head + 1);
    if k == 1 {
        return Formula::exists(&next, Formula::rel(&h, &next));
    }
    let mut conj: Vec<Formula> = (0..k)
        .map(|j| Formula::rel(&var_name(head + j), &var_name(head + j + 1)))
        .collect();
    conj.push(Formula::forall(
        &next,
        Formula::implies(Formula::rel(&h, &next), walk(head + 1, k - 1)),
    ));
    (1..=k).rev().fold(Formula::And(conj), |body, j| {
        Formula::exists(&var_name(head + j), body)
    })
}

/// Parses the concrete syntax printed by [`Formula`]'s `Display`.
pub fn parse_sentence(text: &str) -> Result<Formula> {
    let mut p = FoParser { src: text, pos: 0 };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct FoParser<'a> {
    src: &'a str,
    pos: usize,
}

impl FoParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return Err(self.error("expected variable"));
        }
        let name = &rest[..len];
        if matches!(name, "E" | "A" | "R") {
            return Err(self.error("reserved word used as variable"));
        }
        self.pos += len;
        Ok(name.to_string())
    }

    // `E`, `A` and `R` are keywords only when followed by a non-identifier char.
    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with(kw)
            && !rest[kw.len()..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.eat("|") {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat("&") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("~") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let f = self.implication()?;
            self.expect(")")?;
            return Ok(f);
        }
        for (kw, exists) in [("E", true), ("A", false)] {
            if self.keyword(kw) {
                let v = self.ident()?;
                self.expect(".")?;
                let body = Box::new(self.implication()?);
                return Ok(if exists {
                    Formula::Exists(v, body)
                } else {
                    Formula::Forall(v, body)
                });
            }
        }
        if self.keyword("R") {
            self.expect("(")?;
            let a = self.ident()?;
            self.expect(",")?;
            let b = self.ident()?;
            self.expect(")")?;
            return Ok(Formula::Rel(a, b));
        }
        let a = self.ident()?;
        if self.eat("!=") {
            return Ok(Formula::Neq(a, self.ident()?));
        }
        if self.eat("=") {
            return Ok(Formula::Eq(a, self.ident()?));
        }
        Err(self.error("expected `=` or `!=`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_two_text() {
        let s = psi_path(2);
        assert_eq!(
            s.text,
            "E x. E y. E z. (R(x,y) & R(y,z) & A y. (R(x,y) -> E z. R(y,z)))"
        );
        assert_eq!(s.quantifier_depth, 5);
    }

    #[test]
    fn psi_three_text() {
        assert_eq!(
            psi_path(3).text,
            "E x. E y. E z. E w. (R(x,y) & R(y,z) & R(z,w) & A y. (R(x,y) -> \
             E z. E w. (R(y,z) & R(z,w) & A z. (R(y,z) -> E w. R(z,w)))))"
        );
    }

    #[test]
    fn psi_one_and_self_loop() {
        assert_eq!(psi_path(1).text, "E x. E y. R(x,y)");
        assert_eq!(
            self_loop_sentence().text,
            "E x. (R(x,x) & A y. (x != y -> ~R(x,y)))"
        );
        assert_eq!(self_loop_sentence().quantifier_depth, 2);
    }

    #[test]
    fn emit_by_normal_form() {
        assert_eq!(emit_fo_rewriting(&NormalForm::Path(2)), Some(psi_path(2)));
        assert_eq!(
            emit_fo_rewriting(&NormalForm::cycles([1])),
            Some(self_loop_sentence())
        );
        assert_eq!(emit_fo_rewriting(&NormalForm::cycles([2])), None);
        assert_eq!(emit_fo_rewriting(&NormalForm::cycles([2, 3])), None);
    }

    #[test]
    fn sentences_are_closed_and_reparse() {
        for s in (1..=7).map(psi_path).chain([self_loop_sentence()]) {
            assert!(s.formula.free_variables().is_empty(), "{}", s.text);
            assert_eq!(parse_sentence(&s.text).unwrap(), s.formula);
        }
    }

    #[test]
    fn printer_parenthesizes_where_needed() {
        let f = Formula::And(vec![
            Formula::exists("x", Formula::rel("x", "x")),
            Formula::Or(vec![
                Formula::rel("a", "b"),
                Formula::Eq("a".into(), "b".into()),
            ]),
            Formula::implies(Formula::rel("a", "a"), Formula::rel("b", "b")),
        ]);
        assert_eq!(
            f.to_string(),
            "(E x. R(x,x)) & (R(a,b) | a = b) & (R(a,a) -> R(b,b))"
        );
        assert_eq!(parse_sentence(&f.to_string()).unwrap(), f);

        let g = Formula::implies(
            Formula::implies(Formula::rel("a", "b"), Formula::rel("b", "a")),
            Formula::Not(Box::new(Formula::forall("c", Formula::rel("c", "a")))),
        );
        assert_eq!(g.to_string(), "(R(a,b) -> R(b,a)) -> ~A c. R(c,a)");
        assert_eq!(parse_sentence(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_sentence("E x. R(x,").is_err());
        assert!(parse_sentence("R(x,y) &").is_err());
        assert!(parse_sentence("x").is_err());
        assert!(parse_sentence("E R. R(R,R)").is_err());
        assert!(parse_sentence("R(x,y) R(y,x)").is_err());
    }

    #[test]
    fn keywords_need_a_boundary() {
        let f = parse_sentence("E Ex. A Ab. R(Ex,Ab)").unwrap();
        assert_eq!(f.free_variables(), Vec::<String>::new());
        assert_eq!(
            parse_sentence("Rx = x").unwrap(),
            Formula::Eq("Rx".into(), "x".into())
        );
    }
}
