//! Printing in the text syntax. Disjunction, implication, equivalence and
//! `exists` are recovered from their desugared shapes, so the output reads
//! naturally and parses back to the same tree.

use core::fmt::{self, Write};

use super::Formula;

const IFF: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, IFF, true)
    }
}

/// `ctx` is the loosest operator level allowed without parentheses; `tail`
/// is true when nothing follows this subformula in its enclosing group.
fn write_formula<W: Write>(w: &mut W, f: &Formula, ctx: u8, tail: bool) -> fmt::Result {
    if let Some((l, r)) = f.as_iff() {
        return binary(w, ctx, tail, IFF, " <-> ", (l, IFF), (r, IMPLIES));
    }
    // `!(!a & !b)` is both `a | b` and `!a -> b`; read it as an implication
    // when `!a` is itself sugar.
    if let Some((l, r)) = f.as_or().filter(|(l, _)| !matches!(l, Formula::And(..))) {
        return binary(w, ctx, tail, OR, " | ", (l, OR), (r, AND));
    }
    if let Some((l, r)) = f.as_implies() {
        return binary(w, ctx, tail, IMPLIES, " -> ", (l, OR), (r, IMPLIES));
    }
    if let Some((x, body)) = f.as_exists() {
        return quantifier(w, ctx, tail, "exists", x, body);
    }
    match f {
        Formula::Top => w.write_str("true"),
        Formula::Prop(p) => write!(w, "{p}"),
        Formula::Var(v) => write!(w, "{v}"),
        Formula::Not(a) => {
            w.write_char('!')?;
            write_formula(w, a, UNARY, tail)
        }
        Formula::And(l, r) => binary(w, ctx, tail, AND, " & ", (l, AND), (r, UNARY)),
        Formula::K(i, a) => modal(w, "K", *i, a, tail),
        Formula::A(i, a) => modal(w, "A", *i, a, tail),
        Formula::X(i, a) => modal(w, "X", *i, a, tail),
        Formula::Forall(x, body) => quantifier(w, ctx, tail, "forall", x, body),
    }
}

fn modal<W: Write>(w: &mut W, op: &str, agent: super::AgentId, body: &Formula, tail: bool) -> fmt::Result {
    write!(w, "{op}{agent} ")?;
    write_formula(w, body, UNARY, tail)
}

fn binary<W: Write>(
    w: &mut W,
    ctx: u8,
    tail: bool,
    level: u8,
    op: &str,
    (l, lctx): (&Formula, u8),
    (r, rctx): (&Formula, u8),
) -> fmt::Result {
    let paren = level < ctx;
    if paren {
        w.write_char('(')?;
    }
    write_formula(w, l, lctx, false)?;
    w.write_str(op)?;
    write_formula(w, r, rctx, paren || tail)?;
    if paren {
        w.write_char(')')?;
    }
    Ok(())
}

fn quantifier<W: Write>(
    w: &mut W,
    ctx: u8,
    tail: bool,
    kw: &str,
    x: &super::Var,
    body: &Formula,
) -> fmt::Result {
    let paren = !(tail && ctx == IFF);
    if paren {
        w.write_char('(')?;
    }
    write!(w, "{kw} {x} . ")?;
    write_formula(w, body, IFF, true)?;
    if paren {
        w.write_char(')')?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use alloc::string::ToString;

    fn round(text: &str) -> alloc::string::String {
        parse(text, 3).unwrap().to_string()
    }

    #[test]
    fn prints_sugar_back() {
        assert_eq!(round("p | q"), "p | q");
        assert_eq!(round("p -> q"), "p -> q");
        assert_eq!(round("p <-> q"), "p <-> q");
        assert_eq!(round("exists #x . A1 #x"), "exists #x . A1 #x");
        assert_eq!(round("K1 (p & !q)"), "K1 (p & !q)");
    }

    #[test]
    fn parenthesizes_only_where_needed() {
        assert_eq!(round("(p -> q) -> r"), "(p -> q) -> r");
        assert_eq!(round("p -> (q -> r)"), "p -> q -> r");
        assert_eq!(round("p & (q & r)"), "p & (q & r)");
        assert_eq!(round("(p & q) & r"), "p & q & r");
        assert_eq!(round("X1 (forall #x . A1 #x)"), "X1 (forall #x . A1 #x)");
        assert_eq!(round("(forall #x . #x) & p"), "(forall #x . #x) & p");
        assert_eq!(round("forall #x . #x & p"), "forall #x . #x & p");
    }

    #[test]
    fn top_prints_as_true() {
        assert_eq!(round("true"), "true");
        assert_eq!(round("!true"), "!true");
    }
}
