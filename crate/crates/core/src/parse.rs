//! Text syntax for expressions and forms.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' unary) | ('/' number) | unary)*     juxtaposition multiplies
//! unary   := '-' unary | power
//! power   := primary ('^' (number | primary))*               ^number is a power, else wedge
//! primary := number | name | name '(' sum (',' sum)* ')' | 'd' '(' sum ')' | '(' sum ')'
//! number  := digits ('.' digits)?
//! ```
//!
//! Names are the declared generator names, then `x0`, `x1`, ... by index.
//! Error columns are 0-based character offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Poly, PrimId, Rational, SmoothExpr};
use crate::forms::DifferentialForm;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Name(String),
    Sym(char),
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut value = Rational::from_integer(int.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fstart..i].iter().collect();
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                value += Rational::new(frac.parse::<BigInt>().expect("digits"), scale);
            }
            out.push((Tok::Num(value), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax {
                column: i,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Num(Rational),
    Gen(usize),
    Call(PrimId, Vec<Ast>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Wedge(Box<Ast>, Box<Ast>),
    D(Box<Ast>, usize),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    names: &'a [String],
    nvars: Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.next();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.next();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.next();
                    let Tok::Num(q) = self.peek().clone() else {
                        return self.error("only division by a number is supported");
                    };
                    if q.is_zero() {
                        return self.error("division by zero");
                    }
                    self.next();
                    lhs = match lhs {
                        Ast::Num(p) => Ast::Num(p / q),
                        other => Ast::Mul(Box::new(other), Box::new(Ast::Num(q.recip()))),
                    };
                }
                Tok::Num(_) | Tok::Name(_) | Tok::Sym('(') => {
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if *self.peek() == Tok::Sym('-') {
            self.next();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Sym('^') {
            self.next();
            if let Tok::Num(k) = self.peek().clone() {
                let col = self.column();
                self.next();
                let exp = k
                    .is_integer()
                    .then(|| u32::try_from(k.to_integer()).ok())
                    .flatten()
                    .ok_or(Error::Syntax {
                        column: col,
                        message: "exponent must be a nonnegative integer".into(),
                    })?;
                base = Ast::Pow(Box::new(base), exp);
            } else {
                base = Ast::Wedge(Box::new(base), Box::new(self.primary()?));
            }
        }
        Ok(base)
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i);
        }
        let rest = name.strip_prefix('x')?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let i: usize = rest.parse().ok()?;
        match self.nvars {
            Some(n) if i >= n => None,
            _ => Some(i),
        }
    }

    fn primary(&mut self) -> Result<Ast> {
        let col = self.column();
        match self.next() {
            Tok::Num(q) => Ok(Ast::Num(q)),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Name(name) => {
                if *self.peek() != Tok::Sym('(') {
                    return self
                        .resolve(&name)
                        .map(Ast::Gen)
                        .ok_or(Error::UnknownIdentifier(name));
                }
                self.next();
                let mut args = vec![self.sum()?];
                while *self.peek() == Tok::Sym(',') {
                    self.next();
                    args.push(self.sum()?);
                }
                self.expect(')')?;
                if name == "d" && !self.names.iter().any(|n| n == "d") {
                    if args.len() != 1 {
                        return Err(Error::Syntax {
                            column: col,
                            message: "d takes one argument".into(),
                        });
                    }
                    return Ok(Ast::D(Box::new(args.pop().expect("one")), col));
                }
                let id = PrimId::from_name(&name).ok_or(Error::UnknownPrimitive(name))?;
                if args.len() != id.arity() {
                    return Err(Error::ArityMismatch {
                        what: "primitive arguments",
                        expected: id.arity(),
                        got: args.len(),
                    });
                }
                Ok(Ast::Call(id, args))
            }
            Tok::End => Err(Error::Syntax {
                column: col,
                message: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(Error::Syntax {
                column: col,
                message: format!("unexpected '{c}'"),
            }),
        }
    }
}

fn parse_ast(s: &str, names: &[String], nvars: Option<usize>) -> Result<Ast> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        names,
        nvars,
    };
    let ast = p.sum()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(ast)
}

fn to_expr(ast: &Ast) -> Result<SmoothExpr> {
    Ok(match ast {
        Ast::Num(q) => SmoothExpr::Const(q.clone()),
        Ast::Gen(i) => SmoothExpr::Gen(*i),
        Ast::Call(id, args) => SmoothExpr::Prim(*id, args.iter().map(to_expr).collect::<Result<_>>()?),
        Ast::Neg(a) => SmoothExpr::Product(vec![SmoothExpr::int(-1), to_expr(a)?]),
        Ast::Add(a, b) => SmoothExpr::Sum(vec![to_expr(a)?, to_expr(b)?]),
        Ast::Sub(a, b) => SmoothExpr::Sum(vec![
            to_expr(a)?,
            SmoothExpr::Product(vec![SmoothExpr::int(-1), to_expr(b)?]),
        ]),
        Ast::Mul(a, b) => {
            let mut factors = Vec::new();
            for side in [a, b] {
                match to_expr(side)? {
                    SmoothExpr::Product(fs) if matches!(**side, Ast::Mul(..)) => factors.extend(fs),
                    e => factors.push(e),
                }
            }
            SmoothExpr::Product(factors)
        }
        Ast::Pow(a, k) => SmoothExpr::IntPow(Box::new(to_expr(a)?), *k),
        Ast::Wedge(..) => {
            return Err(Error::Syntax {
                column: 0,
                message: "'^' needs an integer exponent in a function expression".into(),
            })
        }
        Ast::D(_, col) => {
            return Err(Error::Syntax {
                column: *col,
                message: "d(...) is not allowed in a function expression".into(),
            })
        }
    })
}

/// Flattens the binary sums of the parse tree.
fn flatten(e: SmoothExpr) -> SmoothExpr {
    match e {
        SmoothExpr::Sum(xs) => {
            let mut out = Vec::new();
            for x in xs {
                match flatten(x) {
                    SmoothExpr::Sum(ys) => out.extend(ys),
                    y => out.push(y),
                }
            }
            SmoothExpr::Sum(out)
        }
        SmoothExpr::Product(xs) => SmoothExpr::Product(xs.into_iter().map(flatten).collect()),
        SmoothExpr::IntPow(b, k) => SmoothExpr::IntPow(Box::new(flatten(*b)), k),
        SmoothExpr::Prim(id, args) => SmoothExpr::Prim(id, args.into_iter().map(flatten).collect()),
        other => other,
    }
}

/// Parses a function expression over the given generator names; `x<i>` is
/// accepted for any index not shadowed by a name.
pub fn parse_expr(s: &str, names: &[String]) -> Result<SmoothExpr> {
    let nvars = (!names.is_empty()).then_some(names.len());
    Ok(flatten(to_expr(&parse_ast(s, names, nvars)?)?))
}

/// Parses and normalizes a function of the ring's generators.
pub fn parse_poly(s: &str, ring: &Ring) -> Result<Poly> {
    let e = to_expr(&parse_ast(s, ring.names(), Some(ring.n()))?)?;
    let p = Poly::from_expr(&e)?;
    ring.check(&p)?;
    Ok(p)
}

fn to_form(ast: &Ast, ring: &Ring) -> Result<DifferentialForm> {
    let scalar = |a: &Ast| -> Result<DifferentialForm> {
        DifferentialForm::scalar(ring, Poly::from_expr(&to_expr(a)?)?)
    };
    match ast {
        Ast::Num(_) | Ast::Gen(_) | Ast::Call(..) => scalar(ast),
        Ast::Neg(a) => Ok(to_form(a, ring)?.neg()),
        Ast::Add(a, b) => to_form(a, ring)?.add(&to_form(b, ring)?),
        Ast::Sub(a, b) => to_form(a, ring)?.sub(&to_form(b, ring)?),
        Ast::Mul(a, b) | Ast::Wedge(a, b) => to_form(a, ring)?.wedge(&to_form(b, ring)?),
        Ast::Pow(a, k) => {
            let base = to_form(a, ring)?;
            let mut acc = DifferentialForm::scalar(ring, Poly::one())?;
            for _ in 0..*k {
                acc = acc.wedge(&base)?;
            }
            Ok(acc)
        }
        Ast::D(a, _) => to_form(a, ring)?.d(),
    }
}

/// Parses a form and expands it in the coordinate basis.
pub fn parse_form(s: &str, ring: &Ring) -> Result<DifferentialForm> {
    to_form(&parse_ast(s, ring.names(), Some(ring.n()))?, ring)
}

/// Canonical text of an expression: its normal form with the given names.
pub fn serialize_expr(e: &SmoothExpr, names: &[String]) -> Result<String> {
    Ok(Poly::from_expr(e)?.display(names).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{normalize, rat};
    use crate::ring::RingPresentation;
    use SmoothExpr as E;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn expression_examples() {
        assert_eq!(
            parse_expr("x*y + 1/2", &xy()).unwrap(),
            E::Sum(vec![E::Product(vec![E::Gen(0), E::Gen(1)]), E::Const(rat(1, 2))])
        );
        assert_eq!(
            parse_expr("beta0(x^2)", &xy()).unwrap(),
            E::Prim(PrimId::Beta(0), vec![E::IntPow(Box::new(E::Gen(0)), 2)])
        );
        assert_eq!(
            parse_expr("x +", &xy()),
            Err(Error::Syntax {
                column: 3,
                message: "unexpected end of input".into()
            })
        );
    }

    #[test]
    fn identifiers_and_errors() {
        assert_eq!(parse_expr("x1", &[]).unwrap(), E::Gen(1));
        assert_eq!(parse_expr("x1", &xy()).unwrap(), E::Gen(1));
        assert_eq!(parse_expr("z", &xy()), Err(Error::UnknownIdentifier("z".into())));
        assert_eq!(parse_expr("x5", &xy()), Err(Error::UnknownIdentifier("x5".into())));
        assert_eq!(parse_expr("foo(x)", &xy()), Err(Error::UnknownPrimitive("foo".into())));
        assert!(matches!(parse_expr("S(x)", &xy()), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse_expr("x / y", &xy()), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(parse_expr("d(x)", &xy()), Err(Error::Syntax { column: 0, .. })));
        assert!(matches!(parse_expr("x $ y", &xy()), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_expr("(x", &xy()), Err(Error::Syntax { column: 2, .. })));
    }

    #[test]
    fn precedence() {
        let n = |s: &str| normalize(&parse_expr(s, &xy()).unwrap()).unwrap();
        assert_eq!(n("-x^2"), normalize(&(E::int(-1) * E::Gen(0).pow(2))).unwrap());
        assert_eq!(n("2x y"), n("2*x*y"));
        assert_eq!(n("x - y - 1"), n("x - (y + 1)"));
        assert_eq!(n("x/4"), n("1/4*x"));
        assert_eq!(n("0.25"), n("1/4"));
        assert_eq!(n("S(1 - x^2, x^2 - 1/4)"), n("S(1-x*x, x*x-1/4)"));
    }

    #[test]
    fn form_examples() {
        let r = RingPresentation::free_named(xy());
        let dxdy = DifferentialForm::monomial(&r, &[0, 1], Poly::one()).unwrap();
        assert_eq!(parse_form("d(x)^d(y)", &r).unwrap(), dxdy);
        let mixed = parse_form("x*d(y) + d(x)", &r).unwrap();
        assert_eq!(mixed.degrees(), vec![1]);
        assert_eq!(mixed.coefficient(&[1]), Poly::gen(0));
        let leibniz = parse_form("d(x*y)", &r).unwrap();
        assert_eq!(leibniz, parse_form("y d(x) + x d(y)", &r).unwrap());
        let inhom = parse_form("x + d(y)", &r).unwrap();
        assert_eq!(inhom.degrees(), vec![0, 1]);
        let two = parse_form("x^2*d(y)", &r).unwrap().d().unwrap();
        assert_eq!(two.display().to_string(), "2*x d(x)^d(y)");
    }

    #[test]
    fn display_round_trips() {
        let r = RingPresentation::free_named(xy());
        for s in [
            "2*x d(x)^d(y)",
            "-1/3*x^2*y d(y) + S(1 - x^2, x^2 - 1/4) d(x)",
            "x - 3 + beta1(y) d(x)^d(y)",
        ] {
            let a = parse_form(s, &r).unwrap();
            let again = parse_form(&a.display().to_string(), &r).unwrap();
            assert_eq!(a, again, "{s}");
        }
        let e = parse_expr("(x - y)^3 + 1/2*beta2(x*y)", &xy()).unwrap();
        let text = serialize_expr(&e, &xy()).unwrap();
        let back = parse_expr(&text, &xy()).unwrap();
        assert_eq!(normalize(&back).unwrap(), normalize(&e).unwrap());
    }

    #[test]
    fn quotient_forms_reduce_at_parse_time() {
        let r = RingPresentation::quotient(xy(), vec![Poly::gen(0) * Poly::gen(1)]).unwrap();
        assert!(parse_form("d(x*y)", &r).unwrap().is_zero());
    }
}
