//! Recursive-descent parser for the text syntax.
//!
//! ```text
//! iff     := implies ( "<->" implies )*
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary | OP<n> unary | quant | atom
//! quant   := ("forall" | "exists") "#"ident "." iff
//! atom    := "true" | ident | "#"ident | "(" iff ")"
//! OP      := "K" | "A" | "X" | "Astar" | "Aprime"
//! ```
//!
//! A quantifier body extends as far right as possible.

use alloc::string::String;

use super::{AgentId, Formula, Prop, SyntaxError, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    True,
    Ident(String),
    Var(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Modal(ModalOp, u32),
    Forall,
    Exists,
    Dot,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ModalOp {
    K,
    A,
    X,
    AStar,
    APrime,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the token and its start offset.
    fn next(&mut self) -> Result<(Tok, usize), SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let simple = |len: usize, tok: Tok, this: &mut Self| {
            this.pos += len;
            Ok((tok, start))
        };
        match c {
            '!' => simple(1, Tok::Not, self),
            '&' => simple(1, Tok::And, self),
            '|' => simple(1, Tok::Or, self),
            '.' => simple(1, Tok::Dot, self),
            '(' => simple(1, Tok::LParen, self),
            ')' => simple(1, Tok::RParen, self),
            '-' if rest.starts_with("->") => simple(2, Tok::Implies, self),
            '<' if rest.starts_with("<->") => simple(3, Tok::Iff, self),
            '#' => {
                let name = ident_prefix(&rest[1..]);
                if name.is_empty() || !name.starts_with(|c: char| c.is_ascii_lowercase()) {
                    return Err(SyntaxError::Unexpected { pos: start, found: "#".into() });
                }
                self.pos += 1 + name.len();
                Ok((Tok::Var(name.into()), start))
            }
            c if c.is_ascii_lowercase() => {
                let name = ident_prefix(rest);
                self.pos += name.len();
                let tok = match name {
                    "true" => Tok::True,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(name.into()),
                };
                Ok((tok, start))
            }
            c if c.is_ascii_uppercase() => {
                let word: &str = {
                    let end = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
                    &rest[..end]
                };
                let op = match word {
                    "K" => ModalOp::K,
                    "A" => ModalOp::A,
                    "X" => ModalOp::X,
                    "Astar" => ModalOp::AStar,
                    "Aprime" => ModalOp::APrime,
                    _ => return Err(SyntaxError::Unexpected { pos: start, found: word.into() }),
                };
                let digits_at = start + word.len();
                let digits: &str = {
                    let r = &self.src[digits_at..];
                    let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                    &r[..end]
                };
                if digits.is_empty() {
                    return Err(SyntaxError::MissingAgent { pos: digits_at });
                }
                let n = digits.parse::<u32>().unwrap_or(u32::MAX);
                self.pos = digits_at + digits.len();
                Ok((Tok::Modal(op, n), start))
            }
            other => Err(SyntaxError::Unexpected { pos: start, found: other.into() }),
        }
    }
}

fn ident_prefix(s: &str) -> &str {
    let end = s
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(s.len());
    &s[..end]
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    agents: u16,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), SyntaxError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn unexpected(&self) -> SyntaxError {
        if self.tok == Tok::End {
            SyntaxError::UnexpectedEnd { pos: self.at }
        } else {
            SyntaxError::Unexpected { pos: self.at, found: describe(&self.tok) }
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if self.tok == tok {
            self.bump()
        } else {
            Err(self.unexpected())
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.implies()?;
        while self.tok == Tok::Iff {
            self.bump()?;
            let rhs = self.implies()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.tok == Tok::Implies {
            self.bump()?;
            let rhs = self.implies()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.tok == Tok::Or {
            self.bump()?;
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::And {
            self.bump()?;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn agent(&self, n: u32, pos: usize) -> Result<AgentId, SyntaxError> {
        match u16::try_from(n).ok().and_then(AgentId::new) {
            Some(a) if a.index() <= self.agents => Ok(a),
            _ => Err(SyntaxError::AgentOutOfRange { pos, index: n, agents: self.agents }),
        }
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.tok.clone() {
            Tok::Not => {
                self.bump()?;
                Ok(self.unary()?.not())
            }
            Tok::Modal(op, n) => {
                let agent = self.agent(n, self.at)?;
                self.bump()?;
                let body = self.unary()?;
                Ok(match op {
                    ModalOp::K => Formula::k(agent, body),
                    ModalOp::A => Formula::a(agent, body),
                    ModalOp::X => Formula::x(agent, body),
                    ModalOp::AStar => Formula::astar(agent, body),
                    ModalOp::APrime => Formula::aprime(agent, body),
                })
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.tok == Tok::Forall;
                self.bump()?;
                let var = match &self.tok {
                    Tok::Var(name) => Var::new(name),
                    _ => return Err(self.unexpected()),
                };
                self.bump()?;
                self.expect(Tok::Dot)?;
                let body = self.iff()?;
                Ok(if universal { Formula::forall(var, body) } else { Formula::exists(var, body) })
            }
            Tok::True => {
                self.bump()?;
                Ok(Formula::Top)
            }
            Tok::Ident(name) => {
                self.bump()?;
                Ok(Formula::Prop(Prop::new(&name)))
            }
            Tok::Var(name) => {
                self.bump()?;
                Ok(Formula::Var(Var::new(&name)))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn describe(tok: &Tok) -> String {
    use alloc::format;
    match tok {
        Tok::True => "true".into(),
        Tok::Ident(s) => s.clone(),
        Tok::Var(s) => format!("#{s}"),
        Tok::Not => "!".into(),
        Tok::And => "&".into(),
        Tok::Or => "|".into(),
        Tok::Implies => "->".into(),
        Tok::Iff => "<->".into(),
        Tok::Modal(op, n) => format!("{op:?}{n}"),
        Tok::Forall => "forall".into(),
        Tok::Exists => "exists".into(),
        Tok::Dot => ".".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses `text` for a language with `agents` agents.
pub fn parse(text: &str, agents: u16) -> Result<Formula, SyntaxError> {
    let mut p = Parser { lexer: Lexer { src: text, pos: 0 }, tok: Tok::End, at: 0, agents };
    p.bump()?;
    let f = p.iff()?;
    if p.tok != Tok::End {
        return Err(p.unexpected());
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u16) -> AgentId {
        AgentId::new(i).unwrap()
    }

    #[test]
    fn knowledge_of_conjunction() {
        let f = parse("K1 (p & !q)", 1).unwrap();
        let expected = Formula::k(a(1), Formula::prop("p").and(Formula::prop("q").not()));
        assert_eq!(f, expected);
    }

    #[test]
    fn quantified_awareness() {
        let f = parse("forall #x . A1 #x", 1).unwrap();
        assert_eq!(f, Formula::forall(Var::new("x"), Formula::a(a(1), Formula::var("x"))));
    }

    #[test]
    fn astar_is_sugar() {
        let f = parse("Astar1 p", 1).unwrap();
        let p = Formula::prop("p");
        let expected = Formula::k(a(1), p.clone().not().and(p.not().not()).not());
        assert_eq!(f, expected);
    }

    #[test]
    fn aprime_is_sugar() {
        let f = parse("Aprime2 p", 2).unwrap();
        let kp = Formula::k(a(2), Formula::prop("p"));
        assert_eq!(f, kp.clone().or(Formula::k(a(2), kp.not())));
    }

    #[test]
    fn precedence_and_associativity() {
        let p = || Formula::prop("p");
        let q = || Formula::prop("q");
        let r = || Formula::prop("r");
        assert_eq!(parse("p & q | r", 1).unwrap(), p().and(q()).or(r()));
        assert_eq!(parse("p -> q -> r", 1).unwrap(), p().implies(q().implies(r())));
        assert_eq!(parse("p | q -> r", 1).unwrap(), p().or(q()).implies(r()));
        assert_eq!(parse("p -> q <-> r", 1).unwrap(), p().implies(q()).iff(r()));
        assert_eq!(parse("!p & q", 1).unwrap(), p().not().and(q()));
        assert_eq!(parse("K1 p & q", 1).unwrap(), Formula::k(a(1), p()).and(q()));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let x = Var::new("x");
        let f = parse("p & forall #x . #x | q", 1).unwrap();
        let expected = Formula::prop("p").and(Formula::forall(x, Formula::var("x").or(Formula::prop("q"))));
        assert_eq!(f, expected);
    }

    #[test]
    fn exists_desugars() {
        let f = parse("exists #y . K1 #y", 1).unwrap();
        assert_eq!(f, Formula::exists(Var::new("y"), Formula::k(a(1), Formula::var("y"))));
    }

    #[test]
    fn shadowing_is_allowed() {
        let f = parse("forall #x . (#x & forall #x . A1 #x)", 1).unwrap();
        assert!(f.is_sentence());
    }

    #[test]
    fn agent_out_of_range() {
        assert_eq!(
            parse("K3 p", 2),
            Err(SyntaxError::AgentOutOfRange { pos: 0, index: 3, agents: 2 })
        );
        assert!(matches!(parse("p & K0 p", 2), Err(SyntaxError::AgentOutOfRange { pos: 4, .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse("p &", 1), Err(SyntaxError::UnexpectedEnd { pos: 3 }));
        assert!(matches!(parse("p q", 1), Err(SyntaxError::Unexpected { pos: 2, .. })));
        assert!(matches!(parse("(p", 1), Err(SyntaxError::UnexpectedEnd { pos: 2 })));
        assert!(matches!(parse("K p", 1), Err(SyntaxError::MissingAgent { pos: 1 })));
        assert!(matches!(parse("forall x . p", 1), Err(SyntaxError::Unexpected { pos: 7, .. })));
        assert!(matches!(parse("Q1 p", 1), Err(SyntaxError::Unexpected { pos: 0, .. })));
        assert!(matches!(parse("p $ q", 1), Err(SyntaxError::Unexpected { pos: 2, .. })));
    }
}
