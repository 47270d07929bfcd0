use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Spanned, Tok};
use crate::error::{Error, ParseErrorKind, Result};
use crate::exact::{Block, Layout, Poly, Rational, Scalar, Var};

/// Deepest nesting of parentheses and unary minus.
pub const MAX_DEPTH: usize = 256;
/// Largest total degree an expression may expand to.
pub const MAX_DEGREE: u32 = 64;
/// Largest number of term pairs a single product may form while expanding.
const MAX_PRODUCT_WORK: usize = 250_000;

/// Parsed symbol expression, before expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolExpr {
    Rational(Rational),
    I,
    Hbar,
    Tau,
    Var { block: Block, index: Option<usize>, column: usize },
    Neg(Box<SymbolExpr>),
    /// Signed summands; `true` marks subtraction.
    Sum(Vec<(bool, SymbolExpr)>),
    /// Factors with the column of the `*` preceding each (the first has the
    /// column of the product itself).
    Product(Vec<(SymbolExpr, usize)>),
    Pow(Box<SymbolExpr>, u32, usize),
}

fn err(kind: ParseErrorKind, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { kind, position: column, message: message.into() }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn descend(&mut self, column: usize) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(err(ParseErrorKind::Syntax, column, format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<SymbolExpr> {
        let mut parts = vec![(false, self.term()?)];
        loop {
            let negate = match self.peek().tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            parts.push((negate, self.term()?));
        }
        Ok(if parts.len() == 1 && !parts[0].0 {
            parts.pop().expect("one part").1
        } else {
            SymbolExpr::Sum(parts)
        })
    }

    fn term(&mut self) -> Result<SymbolExpr> {
        let start = self.peek().column;
        let mut parts = vec![(self.factor()?, start)];
        while self.peek().tok == Tok::Star {
            let column = self.bump().column;
            parts.push((self.factor()?, column));
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part").0
        } else {
            SymbolExpr::Product(parts)
        })
    }

    fn factor(&mut self) -> Result<SymbolExpr> {
        if self.peek().tok == Tok::Minus {
            let column = self.bump().column;
            self.descend(column)?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(SymbolExpr::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump().column;
        let next = self.bump();
        match next.tok {
            Tok::Int(n) => {
                let k = n.to_u32().filter(|&k| k <= MAX_DEGREE).ok_or_else(|| {
                    err(ParseErrorKind::Exponent, next.column, format!("exponent {n} exceeds {MAX_DEGREE}"))
                })?;
                if self.peek().tok == Tok::Slash {
                    let c = self.peek().column;
                    return Err(err(ParseErrorKind::Exponent, c, "fractional exponent"));
                }
                Ok(SymbolExpr::Pow(Box::new(base), k, caret))
            }
            Tok::Minus => Err(err(
                ParseErrorKind::Syntax,
                caret,
                "unexpected '^-': exponents must be non-negative integers",
            )),
            other => Err(err(
                ParseErrorKind::Syntax,
                next.column,
                format!("expected an integer exponent after '^', found {}", other.describe()),
            )),
        }
    }

    fn atom(&mut self) -> Result<SymbolExpr> {
        let t = self.bump();
        match t.tok {
            Tok::Int(num) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(SymbolExpr::Rational(Rational::from_integer(num)));
                }
                let slash = self.bump().column;
                let d = self.bump();
                match d.tok {
                    Tok::Int(den) if den.is_zero() => {
                        Err(err(ParseErrorKind::Syntax, d.column, "zero denominator"))
                    }
                    Tok::Int(den) => Ok(SymbolExpr::Rational(Rational::new(num, den))),
                    _ => Err(err(ParseErrorKind::Syntax, slash, "'/' must join two integers")),
                }
            }
            Tok::Ident(name) => ident(&name, t.column),
            Tok::LParen => {
                self.descend(t.column)?;
                let inner = self.expr()?;
                self.depth -= 1;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        close.column,
                        format!("expected ')', found {}", close.tok.describe()),
                    ));
                }
                Ok(inner)
            }
            other => Err(err(
                ParseErrorKind::Syntax,
                t.column,
                format!("unexpected {}", other.describe()),
            )),
        }
    }
}

fn ident(name: &str, column: usize) -> Result<SymbolExpr> {
    match name {
        "i" => return Ok(SymbolExpr::I),
        "hbar" => return Ok(SymbolExpr::Hbar),
        "tau" => return Ok(SymbolExpr::Tau),
        _ => {}
    }
    let block = match name.as_bytes()[0] {
        b'x' => Block::X,
        b'y' => Block::Y,
        b'p' => Block::P,
        _ => return Err(err(ParseErrorKind::Lexical, column, format!("unknown identifier '{name}'"))),
    };
    let digits = &name[1..];
    if digits.is_empty() {
        return Ok(SymbolExpr::Var { block, index: None, column });
    }
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(ParseErrorKind::Lexical, column, format!("unknown identifier '{name}'")));
    }
    let index = digits.parse::<usize>().ok().filter(|&k| k >= 1).ok_or_else(|| {
        err(ParseErrorKind::Dimension, column, format!("invalid variable index in '{name}'"))
    })?;
    Ok(SymbolExpr::Var { block, index: Some(index), column })
}

/// Parses `text` into an unexpanded expression tree.
pub fn parse_expr(text: &str) -> Result<SymbolExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, depth: 0 };
    let e = p.expr()?;
    let end = p.peek();
    if end.tok != Tok::End {
        return Err(err(
            ParseErrorKind::Syntax,
            end.column,
            format!("unexpected {}", end.tok.describe()),
        ));
    }
    Ok(e)
}

fn degree_guard<L: Layout>(p: &Poly<L>, column: usize) -> Result<()> {
    if p.degree() > MAX_DEGREE {
        return Err(err(
            ParseErrorKind::Exponent,
            column,
            format!("expression degree exceeds {MAX_DEGREE}"),
        ));
    }
    Ok(())
}

fn checked_mul<L: Layout>(a: &Poly<L>, b: &Poly<L>, column: usize) -> Result<Poly<L>> {
    if a.num_terms().saturating_mul(b.num_terms()) > MAX_PRODUCT_WORK
        || a.degree() + b.degree() > MAX_DEGREE
    {
        return Err(err(ParseErrorKind::Exponent, column, "expression too large to expand"));
    }
    let out = a * b;
    degree_guard(&out, column)?;
    Ok(out)
}

/// Expands an expression into a canonical polynomial of dimension `n`.
pub fn expand<L: Layout>(e: &SymbolExpr, n: usize) -> Result<Poly<L>> {
    Ok(match e {
        SymbolExpr::Rational(r) => Poly::constant(n, Scalar::from_rational(r.clone())),
        SymbolExpr::I => Poly::constant(n, Scalar::i()),
        SymbolExpr::Hbar => Poly::constant(n, Scalar::hbar()),
        SymbolExpr::Tau => Poly::constant(n, Scalar::tau()),
        SymbolExpr::Var { block, index, column } => {
            let index = match index {
                Some(k) => *k,
                None if n == 1 => 1,
                None => {
                    return Err(err(
                        ParseErrorKind::Dimension,
                        *column,
                        format!("bare variable needs an index when the dimension is {n}"),
                    ))
                }
            };
            if index > n {
                return Err(err(
                    ParseErrorKind::Dimension,
                    *column,
                    format!("variable index {index} exceeds dimension {n}"),
                ));
            }
            if !L::BLOCKS.contains(block) {
                return Err(err(
                    ParseErrorKind::Syntax,
                    *column,
                    "variable y is only valid in amplitudes",
                ));
            }
            Poly::var(n, Var { block: *block, index: index - 1 })?
        }
        SymbolExpr::Neg(a) => -expand::<L>(a, n)?,
        SymbolExpr::Sum(parts) => {
            let mut out = Poly::zero(n);
            for (negate, e) in parts {
                let v = expand::<L>(e, n)?;
                out = if *negate { &out - &v } else { &out + &v };
            }
            out
        }
        SymbolExpr::Product(parts) => {
            let mut out = Poly::one(n);
            for (e, column) in parts {
                out = checked_mul(&out, &expand::<L>(e, n)?, *column)?;
            }
            out
        }
        SymbolExpr::Pow(a, k, column) => {
            let base = expand::<L>(a, n)?;
            let mut out = Poly::one(n);
            for _ in 0..*k {
                out = checked_mul(&out, &base, *column)?;
            }
            out
        }
    })
}

/// Parses and expands a symbol `a(x, p)` in dimension `n`.
pub fn parse(text: &str, n: usize) -> Result<crate::exact::SymbolPoly> {
    parse_poly(text, n)
}

/// Parses and expands an amplitude `b(x, y, p)` in dimension `n`.
pub fn parse_amplitude(text: &str, n: usize) -> Result<crate::exact::AmplitudePoly> {
    parse_poly(text, n)
}

fn parse_poly<L: Layout>(text: &str, n: usize) -> Result<Poly<L>> {
    if n == 0 {
        return Err(err(ParseErrorKind::Dimension, 1, "dimension must be positive"));
    }
    expand(&parse_expr(text)?, n)
}
