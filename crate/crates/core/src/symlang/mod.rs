//! Text form of symbols and operators.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ['^' uint]
//! atom   := uint ['/' uint] | 'i' | 'hbar' | 'tau' | var | '(' expr ')'
//! var    := ('x' | 'p' | 'y') [uint]
//! ```
//! `-x^2` is `-(x^2)`. Bare `x`, `p` are allowed only in one dimension; `y`
//! only in amplitudes.

mod format;
mod lexer;
mod parser;

pub use format::{format, format_amplitude, format_op, format_scalar};
pub use parser::{expand, parse, parse_amplitude, parse_expr, SymbolExpr, MAX_DEGREE, MAX_DEPTH};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{Error, ParseErrorKind};
    use crate::exact::{GaussRational, Power, Rational, Scalar, SymbolPoly, Var};
    use crate::ordering::OpPoly;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn monomial() {
        let a = parse("x^2*p^2", 1).unwrap();
        let m = SymbolPoly::monomial(1, &[(Var::x(0), 2), (Var::p(0), 2)], Scalar::one()).unwrap();
        assert_eq!(a, m);
    }

    #[test]
    fn coefficients_and_constants() {
        let a = parse("(1/3)*x*p + i*hbar", 1).unwrap();
        let xp = SymbolPoly::monomial(1, &[(Var::x(0), 1), (Var::p(0), 1)], Scalar::ratio(1, 3)).unwrap();
        assert_eq!(a, &xp + &SymbolPoly::constant(1, Scalar::i_hbar()));
    }

    #[test]
    fn symbols_commute() {
        assert!(parse("x1*p2 - p2*x1", 2).unwrap().is_zero());
    }

    #[test]
    fn negative_exponent_is_a_syntax_error() {
        let e = parse("x^-1", 1).unwrap_err();
        assert!(matches!(e, Error::Parse { kind: ParseErrorKind::Syntax, position: 2, .. }), "{e}");
        assert!(e.to_string().contains("'^-'"));
    }

    #[test]
    fn error_kinds() {
        let kind = |s: &str, n| match parse(s, n).unwrap_err() {
            Error::Parse { kind, .. } => kind,
            other => panic!("{other}"),
        };
        assert_eq!(kind("x $ p", 1), ParseErrorKind::Lexical);
        assert_eq!(kind("q", 1), ParseErrorKind::Lexical);
        assert_eq!(kind("x3", 2), ParseErrorKind::Dimension);
        assert_eq!(kind("x", 2), ParseErrorKind::Dimension);
        assert_eq!(kind("x^1/2", 1), ParseErrorKind::Exponent);
        assert_eq!(kind("x^100", 1), ParseErrorKind::Exponent);
        assert_eq!(kind("x p", 1), ParseErrorKind::Syntax);
        assert_eq!(kind("(x", 1), ParseErrorKind::Syntax);
        assert_eq!(kind("y", 1), ParseErrorKind::Syntax);
        assert_eq!(kind("1/0", 1), ParseErrorKind::Syntax);
        assert_eq!(kind("", 1), ParseErrorKind::Syntax);
    }

    #[test]
    fn precedence() {
        let a = parse("x+p*x^2", 1).unwrap();
        assert_eq!(a, parse("x+(p*(x^2))", 1).unwrap());
        assert_ne!(a, parse("(x+p)*x^2", 1).unwrap());
        assert_eq!(parse("-x^2", 1).unwrap(), -parse("x^2", 1).unwrap());
        assert_eq!(parse("2^3", 1).unwrap(), parse("8", 1).unwrap());
    }

    #[test]
    fn nesting_limit() {
        let deep = format!("{}x{}", "(".repeat(300), ")".repeat(300));
        assert!(matches!(parse(&deep, 1), Err(Error::Parse { kind: ParseErrorKind::Syntax, .. })));
        let ok = format!("{}x{}", "(".repeat(200), ")".repeat(200));
        assert!(parse(&ok, 1).is_ok());
    }

    #[test]
    fn long_flat_sums_do_not_recurse() {
        let text = vec!["x"; 50_000].join("+");
        assert_eq!(parse(&text, 1).unwrap(), parse("50000*x", 1).unwrap());
    }

    #[test]
    fn canonical_strings() {
        let a = parse("x^2*p^2 + hbar^2/6", 1);
        assert!(a.is_err(), "division is only a rational literal");
        let a = parse("x^2*p^2 + (1/6)*hbar^2", 1).unwrap();
        assert_eq!(format(&a), "x^2*p^2 + (1/6)*hbar^2");
        assert_eq!(format(&SymbolPoly::zero(1)), "0");
        assert_eq!(format(&parse("p - x^2 + 3", 1).unwrap()), "-x^2 + p + 3");
        assert_eq!(format(&parse("x1*p2 - 2*i*x2", 2).unwrap()), "x1*p2 - 2*i*x2");
        let c = Scalar::from_gauss(GaussRational::new(Rational::from_integer(1.into()), Rational::from_integer((-2).into())));
        assert_eq!(format_scalar(&c), "(1-2*i)");
        assert_eq!(format_scalar(&Scalar::tau()), "tau");
    }

    #[test]
    fn operator_strings() {
        let half_i_hbar = &Scalar::i_hbar() * &Scalar::ratio(1, 2);
        let a = &OpPoly::monomial(&[1], &[1], Scalar::one()).unwrap() - &OpPoly::constant(1, half_i_hbar);
        assert_eq!(format_op(&a), "xhat*phat - (1/2)*i*hbar");
        let b = OpPoly::monomial(&[2, 0], &[0, 3], Scalar::from_int(-3)).unwrap();
        assert_eq!(format_op(&b), "-3*xhat1^2*phat2^3");
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((0u32..3, 0u32..2, -6i64..=6, 1i64..=5, -3i64..=3), 1..=3).prop_map(
            |parts| {
                let mut s = Scalar::default();
                for (h, t, n, d, im) in parts {
                    let g = GaussRational::new(
                        Rational::new(n.into(), d.into()),
                        Rational::new(im.into(), d.into()),
                    );
                    s += &Scalar::monomial(Power { hbar: h, tau: t }, g);
                }
                s
            },
        )
    }

    fn arb_poly(dim: usize, max_deg: u32) -> impl Strategy<Value = SymbolPoly> {
        let term = (prop::collection::vec(0u32..=max_deg, 2 * dim), arb_scalar());
        prop::collection::vec(term, 0..6).prop_map(move |ts| {
            SymbolPoly::from_terms(
                dim,
                ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn round_trip(a in (1usize..=3).prop_flat_map(|d| arb_poly(d, 8))) {
            let text = format(&a);
            prop_assert_eq!(parse(&text, a.dim()).unwrap(), a);
        }

        #[test]
        fn parse_is_total(bytes in prop::collection::vec(any::<u8>(), 0..40)) {
            let text = String::from_utf8_lossy(&bytes);
            let _ = parse(&text, 2);
        }

        #[test]
        fn parse_is_total_on_grammar_alphabet(
            chars in prop::collection::vec(prop::sample::select(
                vec!['x', 'p', 'y', '1', '2', '0', '+', '-', '*', '^', '/', '(', ')', 'i', ' ']), 0..40)
        ) {
            let text: String = chars.into_iter().collect();
            let _ = parse(&text, 2);
        }
    }
}
