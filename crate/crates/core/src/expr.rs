//! Text syntax for tautological classes.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT | 'chi' | '(' expr ')'
//!          | 'kappa' '(' mono ')'
//!          | 'psi' '(' mono ',' point ')'
//!          | 'pi' '(' point (',' point)+ ')'
//! mono    := '1' | factor ('*' factor)*
//! factor  := ('e' | 'p' INT) ('^' INT)?
//! point   := INT | '*' | STAR_NAME
//! ```
//!
//! A divisor must evaluate to a nonzero constant, so `3/4*psi(e,1)` and
//! `(kappa(e^2) - 1)/chi` are fine while `1/kappa(e^2)` is rejected.
//! [`print`] emits text that [`parse`] maps back to the same class.

use std::fmt;

use crate::charclass::{make, CharClassMonomial, Generator, RingParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tautmono::{Point, PointSet, TautClass};

/// Where and why parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at position {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// Parse failures: syntax, or a well-formed expression the engine rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    Syntax(ParseError),
    Engine { position: usize, error: Error },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax(e) => write!(f, "syntax error {e}"),
            ExprError::Engine { position, error } => write!(f, "at position {position}: {error}"),
        }
    }
}

impl std::error::Error for ExprError {}

/// Ring, declared point set and the name used for the star point.
#[derive(Clone, Debug)]
pub struct Context {
    pub params: RingParams,
    pub points: PointSet,
    pub star_name: String,
}

impl Context {
    pub fn new(params: RingParams, points: PointSet) -> Self {
        Context {
            params,
            points,
            star_name: "s".to_string(),
        }
    }

    pub fn with_star_name(mut self, name: &str) -> Self {
        self.star_name = name.to_string();
        self
    }

    fn point_name(&self, p: Point) -> String {
        if p.is_star() {
            self.star_name.clone()
        } else {
            p.0.to_string()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse::<u64>().map_err(|_| ParseError {
                position: start,
                expected: "an integer below 2^64".into(),
                found: format!("'{}'", &text[start..i]),
            })?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or(c);
            return Err(ParseError {
                position: i,
                expected: "a number, name, operator or parenthesis".into(),
                found: format!("'{ch}'"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, S> {
    ctx: &'a Context,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    _scalar: std::marker::PhantomData<S>,
}

type PResult<T> = std::result::Result<T, ExprError>;

impl<S: Scalar> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err(ExprError::Syntax(ParseError {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().to_string(),
        }))
    }

    fn engine<T>(&self, position: usize, r: Result<T>) -> PResult<T> {
        r.map_err(|error| ExprError::Engine { position, error })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("'{c}'"))
        }
    }

    fn int(&mut self, what: &str) -> PResult<u64> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => self.fail(what),
        }
    }

    fn small_int(&mut self, what: &str) -> PResult<u32> {
        let at = self.offset();
        let n = self.int(what)?;
        u32::try_from(n).map_err(|_| {
            ExprError::Syntax(ParseError {
                position: at,
                expected: format!("{what} below 2^32"),
                found: format!("'{n}'"),
            })
        })
    }

    fn expr(&mut self) -> PResult<TautClass<S>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<TautClass<S>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == &Tok::Sym('/') {
                let at = self.offset();
                self.bump();
                let divisor = self.unary()?;
                match divisor.as_scalar() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(S::one() / c)),
                    _ => return self.engine(at, Err(Error::BadDivisor)),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<TautClass<S>> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> PResult<TautClass<S>> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.small_int("an exponent")?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> PResult<TautClass<S>> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                match i64::try_from(n) {
                    Ok(v) => Ok(TautClass::scalar(
                        self.ctx.params,
                        self.ctx.points.clone(),
                        S::from_int(v),
                    )),
                    Err(_) => Err(ExprError::Syntax(ParseError {
                        position: at,
                        expected: "an integer below 2^63".into(),
                        found: format!("'{n}'"),
                    })),
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "chi" => {
                    self.bump();
                    Ok(TautClass::chi(self.ctx.params, self.ctx.points.clone()))
                }
                "kappa" => {
                    self.bump();
                    self.expect('(')?;
                    let c = self.mono()?;
                    self.expect(')')?;
                    Ok(TautClass::kappa(self.ctx.params, self.ctx.points.clone(), c))
                }
                "psi" => {
                    self.bump();
                    self.expect('(')?;
                    let c = self.mono()?;
                    self.expect(',')?;
                    let p_at = self.offset();
                    let p = self.point()?;
                    self.expect(')')?;
                    let r = TautClass::psi(self.ctx.params, self.ctx.points.clone(), c, p);
                    self.engine(p_at, r)
                }
                "pi" => {
                    self.bump();
                    self.expect('(')?;
                    let mut subset = vec![self.point()?];
                    while self.eat(',') {
                        subset.push(self.point()?);
                    }
                    self.expect(')')?;
                    let r = TautClass::pi(self.ctx.params, self.ctx.points.clone(), &subset);
                    self.engine(at, r)
                }
                _ => self.fail("a number, 'chi', 'kappa', 'psi', 'pi' or '('"),
            },
            _ => self.fail("a number, 'chi', 'kappa', 'psi', 'pi' or '('"),
        }
    }

    fn point(&mut self) -> PResult<Point> {
        let at = self.offset();
        let p = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                match u32::try_from(n) {
                    Ok(v) if v != u32::MAX => Point(v),
                    _ => return self.engine(at, Err(Error::UnknownPoint(Point::STAR))),
                }
            }
            Tok::Sym('*') => {
                self.bump();
                Point::STAR
            }
            Tok::Ident(name) if name == self.ctx.star_name => {
                self.bump();
                Point::STAR
            }
            _ => return self.fail("a point label"),
        };
        if !self.ctx.points.contains(p) {
            return self.engine(at, Err(Error::UnknownPoint(p)));
        }
        Ok(p)
    }

    fn mono(&mut self) -> PResult<CharClassMonomial> {
        if self.peek() == &Tok::Int(1) {
            self.bump();
            return Ok(CharClassMonomial::unit(&self.ctx.params));
        }
        let mut raw = Vec::new();
        let at = self.offset();
        loop {
            let gen = match self.peek().clone() {
                Tok::Ident(name) if name == "e" => Generator::Euler,
                Tok::Ident(name)
                    if name.len() > 1
                        && name.starts_with('p')
                        && name[1..].bytes().all(|b| b.is_ascii_digit()) =>
                {
                    match name[1..].parse::<u32>() {
                        Ok(i) => Generator::Pontryagin(i),
                        Err(_) => return self.fail("a generator 'e' or 'p<i>'"),
                    }
                }
                _ => return self.fail("a generator 'e' or 'p<i>'"),
            };
            self.bump();
            let k = if self.eat('^') {
                self.small_int("an exponent")?
            } else {
                1
            };
            raw.push((gen, k));
            // '*' continues the monomial only if a generator follows
            let continues = self.peek() == &Tok::Sym('*')
                && matches!(&self.toks[self.pos + 1].1, Tok::Ident(n) if n == "e" || n.starts_with('p'));
            if continues {
                self.bump();
            } else {
                break;
            }
        }
        self.engine(at, make(&self.ctx.params, &raw))
    }
}

fn run_parser<T, S: Scalar>(
    ctx: &Context,
    text: &str,
    f: impl FnOnce(&mut Parser<'_, S>) -> PResult<T>,
) -> PResult<T> {
    let toks = lex(text).map_err(ExprError::Syntax)?;
    let mut parser = Parser {
        ctx,
        toks,
        pos: 0,
        _scalar: std::marker::PhantomData,
    };
    let out = f(&mut parser)?;
    if parser.peek() != &Tok::End {
        return parser.fail("an operator or end of input");
    }
    Ok(out)
}

/// Parses and normalizes an expression on the context's point set.
pub fn parse<S: Scalar>(ctx: &Context, text: &str) -> std::result::Result<TautClass<S>, ExprError> {
    run_parser::<_, S>(ctx, text, |p| p.expr())
}

/// Parses a bare characteristic-class monomial such as `e^2*p1`.
pub fn parse_monomial(params: RingParams, text: &str) -> std::result::Result<CharClassMonomial, ExprError> {
    let ctx = Context::new(params, PointSet::empty());
    run_parser::<_, crate::Q>(&ctx, text, |p| p.mono())
}

/// Canonical text of a class, greatest monomial first.
pub fn print<S: Scalar>(ctx: &Context, a: &TautClass<S>) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in a.terms().iter().rev().enumerate() {
        let text = c.to_string();
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for k in m.kappas() {
            factors.push(format!("kappa({k})"));
        }
        for (p, c) in m.psis() {
            factors.push(format!("psi({c},{})", ctx.point_name(*p)));
        }
        for block in m.blocks() {
            let names: Vec<String> = block.iter().map(|p| ctx.point_name(*p)).collect();
            factors.push(format!("pi({})", names.join(",")));
        }
        if factors.is_empty() {
            out.push_str(&abs);
        } else {
            if abs != "1" {
                out.push_str(&abs);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

/// LaTeX rendering; `kappa_{e^{i+1}}` is written `\kappa_{i}`.
pub fn to_latex<S: Scalar>(a: &TautClass<S>) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let point = |p: Point| {
        if p.is_star() {
            "\\star".to_string()
        } else {
            p.0.to_string()
        }
    };
    let mut out = String::new();
    for (i, (m, c)) in a.terms().iter().rev().enumerate() {
        let text = c.to_string();
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff = match abs.split_once('/') {
            Some((n, d)) => format!("\\frac{{{n}}}{{{d}}}"),
            None => abs,
        };
        let mut body = String::new();
        for k in m.kappas() {
            match k.as_euler_power() {
                Some(j) => body.push_str(&format!("\\kappa_{{{}}}", j - 1)),
                None => body.push_str(&format!("\\kappa_{{{}}}", k.to_latex())),
            }
        }
        for (p, c) in m.psis() {
            body.push_str(&format!("\\psi({})_{{{}}}", c.to_latex(), point(*p)));
        }
        for block in m.blocks() {
            let names: Vec<String> = block.iter().map(|p| point(*p)).collect();
            body.push_str(&format!("\\pi_{{{}}}", names.join("")));
        }
        if body.is_empty() {
            out.push_str(&coeff);
        } else {
            if coeff != "1" {
                out.push_str(&coeff);
            }
            out.push_str(&body);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn ctx(g: u32, d: u32, labels: &[u32], star: bool) -> Context {
        let params = RingParams::new(g, d).unwrap();
        let mut points = PointSet::from_labels(labels.iter().copied());
        if star {
            points = points.with_star();
        }
        Context::new(params, points)
    }

    #[test]
    fn centered_intersection_class() {
        let c = ctx(3, 1, &[1], true);
        let a: TautClass<Q> = parse(&c, "chi*pi(1,s) - psi(e,s)").unwrap();
        assert_eq!(a.len(), 2);
        let b: TautClass<Q> = parse(&c, "-4*pi(1,*) - psi(e, s)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kappa_and_top_pontryagin() {
        let c = ctx(2, 3, &[], false);
        let a: TautClass<Q> = parse(&c, "kappa(e^2)").unwrap();
        let b: TautClass<Q> = parse(&c, "kappa(p3)").unwrap();
        assert_eq!(a, b);
        let low: TautClass<Q> = parse(&c, "kappa(p1) + kappa(e)").unwrap();
        assert_eq!(low.as_scalar(), Some(Q::from_int(-2)));
    }

    #[test]
    fn errors_have_positions() {
        let c = ctx(2, 3, &[1, 2], false);
        match parse::<Q>(&c, "pi(1)") {
            Err(ExprError::Engine { error: Error::InvalidSubset(_), position }) => assert_eq!(position, 0),
            other => panic!("{other:?}"),
        }
        match parse::<Q>(&c, "psi(e, 7)") {
            Err(ExprError::Engine { error: Error::UnknownPoint(Point(7)), position }) => {
                assert_eq!(position, 7)
            }
            other => panic!("{other:?}"),
        }
        match parse::<Q>(&c, "kappa(p4)") {
            Err(ExprError::Engine { error: Error::InvalidGenerator { index: 4, .. }, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse::<Q>(&c, "kappa(e^2) +") {
            Err(ExprError::Syntax(e)) => {
                assert_eq!(e.position, 12);
                assert_eq!(e.found, "end of input");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse::<Q>(&c, "1/kappa(e^2)"),
            Err(ExprError::Engine { error: Error::BadDivisor, .. })
        ));
        assert!(matches!(parse::<Q>(&c, "2 $ 3"), Err(ExprError::Syntax(_))));
    }

    #[test]
    fn print_parse_round_trip() {
        let c = ctx(3, 3, &[1, 2], true);
        let a: TautClass<Q> = parse(
            &c,
            "(chi*pi(1,s) - psi(e,s))^2 + 3/4*kappa(p1*e)*psi(p2,2)*pi(1,2) - 5",
        )
        .unwrap();
        let text = print(&c, &a);
        let b: TautClass<Q> = parse(&c, &text).unwrap();
        assert_eq!(a, b);
        assert_eq!(print(&c, &b), text);
    }

    #[test]
    fn latex_uses_kappa_indices() {
        let c = ctx(2, 1, &[1], false);
        let a: TautClass<Q> = parse(&c, "kappa(e^3) - 1/2*psi(e,1)").unwrap();
        assert_eq!(to_latex(&a), "-\\frac{1}{2}\\psi(e)_{1} + \\kappa_{2}");
    }

    #[test]
    fn bare_monomials() {
        let params = RingParams::new(2, 3).unwrap();
        let m = parse_monomial(params, "e^2*p1").unwrap();
        assert_eq!(m.exponents(), &[2, 1, 0]);
        assert_eq!(parse_monomial(params, "p3").unwrap(), CharClassMonomial::euler_power(&params, 2));
        assert!(parse_monomial(params, "p4").is_err());
        assert!(parse_monomial(params, "e e").is_err());
    }
}
