//! Canonical text grammar for scalars and polynomials.
//!
//! Expressions use `+ - * ^` with atoms `t`, `s`, `u`, `v`, `pi`, integers
//! and rationals `p/q`; `u` expands to `4s - t^2` at parse time. Negative
//! exponents are accepted on `pi` only. The printers emit exactly this
//! grammar, with terms ordered lexicographically by `(v, s, t)` exponents
//! descending, so `parse(print(x)) = x`.

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

use crate::Error;
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

/// Renders one monomial's variable part, empty for the constant monomial.
fn vars_text(m: (u32, u32, u32)) -> String {
    let mut parts = Vec::new();
    if m.0 > 0 {
        parts.push(format!("t^{}", m.0));
    }
    if m.1 > 0 {
        parts.push(format!("s^{}", m.1));
    }
    if m.2 > 0 {
        parts.push(format!("v^{}", m.2));
    }
    parts.join(" ")
}

pub fn poly_to_text(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // (v, s, t) descending
    let mut monos: Vec<_> = p.terms().collect();
    monos.sort_by_key(|((a, b, c), _)| {
        (
            std::cmp::Reverse(*c),
            std::cmp::Reverse(*b),
            std::cmp::Reverse(*a),
        )
    });
    let mut out = String::new();
    for (m, coeff) in monos {
        let vars = vars_text(m);
        let single = coeff.single_term().is_some();
        let mut coeff_text = coeff.to_string();
        let mut lead = " + ";
        if single && coeff_text.starts_with('-') {
            lead = " - ";
            coeff_text.remove(0);
        }
        if out.is_empty() {
            lead = if lead == " - " { "-" } else { "" };
        }
        out.push_str(lead);
        if !single {
            out.push_str(&format!("({coeff_text})"));
        } else {
            out.push_str(&coeff_text);
        }
        if !vars.is_empty() {
            out.push_str(" * ");
            out.push_str(&vars);
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_text(self))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Ident(String),
    Number(Rational),
}

fn lex(input: &str) -> Result<Vec<Token>, Error> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
                let mut den = BigInt::from(1);
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(Error::Parse("expected denominator digits after '/'".into()));
                    }
                    den = chars[dstart..i].iter().collect::<String>().parse().unwrap();
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                }
                tokens.push(Token::Number(Rational::new(num, den)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, Error> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, Error> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc *= &self.factor()?;
                }
                // juxtaposition multiplies: "t^2 s^1", "2 pi"
                Some(Token::Ident(_) | Token::Number(_) | Token::LParen) => {
                    acc *= &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, Error> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<i64, Error> {
        let neg = if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Number(r)) => {
                if !r.is_integer() {
                    return Err(Error::Parse("exponent must be an integer".into()));
                }
                let v: i64 = r
                    .numer()
                    .try_into()
                    .map_err(|_| Error::Parse("exponent out of range".into()))?;
                Ok(if neg { -v } else { v })
            }
            other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
        }
    }

    fn power(&mut self) -> Result<Poly, Error> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            // negative exponents only make sense for the pi atom
            if e < 0 {
                if let Some(c) = base_as_pi_monomial(&base) {
                    return Ok(Poly::constant(scale_pi(&c, e)));
                }
                return Err(Error::Parse("negative exponent on a non-pi atom".into()));
            }
            if let Some(c) = base_as_pi_monomial(&base) {
                return Ok(Poly::constant(scale_pi(&c, e)));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly, Error> {
        match self.next() {
            Some(Token::Ident(name)) => match name.as_str() {
                "t" => Ok(Poly::t()),
                "s" => Ok(Poly::s()),
                "u" => Ok(Poly::u()),
                "v" => Ok(Poly::v()),
                "pi" => Ok(Poly::constant(Scalar::pi_pow(1))),
                other => Err(Error::Parse(format!("unknown symbol '{other}'"))),
            },
            Some(Token::Number(r)) => Ok(Poly::constant(Scalar::from_rational(r))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("expected an atom, found {other:?}"))),
        }
    }
}

/// `Some(c)` when the polynomial is the single constant monomial `c = r*pi^e`
/// eligible for arbitrary integer powers.
fn base_as_pi_monomial(p: &Poly) -> Option<Scalar> {
    let mut terms = p.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || m != (0, 0, 0) {
        return None;
    }
    c.single_term().map(|_| c.clone())
}

fn scale_pi(c: &Scalar, e: i64) -> Scalar {
    let (base_e, base_c) = c.single_term().expect("checked single term");
    let mut acc_c = Rational::from(BigInt::from(1));
    let mut acc_e: i64 = 0;
    let steps = e.unsigned_abs();
    for _ in 0..steps {
        acc_c *= base_c;
        acc_e += base_e as i64;
    }
    if e < 0 {
        Scalar::rational_times_pi(acc_c.recip(), (-acc_e) as i32)
    } else {
        Scalar::rational_times_pi(acc_c, acc_e as i32)
    }
}

/// Parses an expression in `t, s, u, v, pi` into a polynomial.
pub fn parse_poly(input: &str) -> Result<Poly, Error> {
    let tokens = lex(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(poly)
}

/// Parses a constant expression (no `t`, `s`, `v`) into a scalar.
pub fn parse_scalar(input: &str) -> Result<Scalar, Error> {
    let poly = parse_poly(input)?;
    let mut out = Scalar::zero();
    for (m, c) in poly.terms() {
        if m != (0, 0, 0) {
            return Err(Error::Parse("expected a constant expression".into()));
        }
        out += c.clone();
    }
    Ok(out)
}

/// Parses a rational given as `p`, `-p` or `p/q`.
pub fn parse_rational(input: &str) -> Result<Rational, Error> {
    let s = parse_scalar(input)?;
    s.as_rational()
        .ok_or_else(|| Error::Parse("expected a rational, found a pi term".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_poly("t").unwrap(), Poly::t());
        assert_eq!(parse_poly("u").unwrap(), Poly::u());
        let p = parse_poly("t^4 - 6*s*t^2 + 6*s^2").unwrap();
        assert_eq!(p.coeff((4, 0, 0)), Scalar::one());
        assert_eq!(p.coeff((2, 1, 0)), Scalar::from_int(-6));
        assert_eq!(p.coeff((0, 2, 0)), Scalar::from_int(6));
        assert_eq!(
            parse_scalar("3/2 * pi^-1").unwrap(),
            Scalar::rational_times_pi(rat(3, 2), -1)
        );
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1").unwrap(), rat(-1, 1));
        assert!(parse_poly("t^-1").is_err());
        assert!(parse_poly("w + 1").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn unary_minus_binds_the_factor() {
        let p = parse_poly("-1/2 * t^3").unwrap();
        assert_eq!(p.coeff((3, 0, 0)), Scalar::from_rational(rat(-1, 2)));
        assert_eq!(parse_poly("-t^2").unwrap(), -Poly::t().pow(2));
    }

    #[test]
    fn pi_powers() {
        assert_eq!(parse_scalar("pi^2").unwrap(), Scalar::pi_pow(2));
        assert_eq!(parse_scalar("pi^-3").unwrap(), Scalar::pi_pow(-3));
        assert_eq!(
            parse_scalar("(2 * pi)^-1").unwrap(),
            Scalar::rational_times_pi(rat(1, 2), -1)
        );
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        proptest::collection::vec((-2i32..=2, -9i64..=9, 1i64..=5), 0..3).prop_map(|v| {
            let mut s = Scalar::zero();
            for (e, n, d) in v {
                s += Scalar::rational_times_pi(rat(n, d), e);
            }
            s
        })
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..4, 0u32..3, 0u32..2), arb_scalar()), 0..5).prop_map(|v| {
            let mut p = Poly::zero();
            for (m, c) in v {
                p.insert_term(m, c);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn scalar_roundtrip(s in arb_scalar()) {
            prop_assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
        }

        #[test]
        fn poly_roundtrip(p in arb_poly()) {
            prop_assert_eq!(parse_poly(&poly_to_text(&p)).unwrap(), p);
        }
    }
}
