//! Text formats for surfaces and curves.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := rational | 'i' | var | 'conj(' expr ')' | 'Re(' expr ')'
//!         | 'Im(' expr ')' | 'abs2(' expr ')' | '(' expr ')'
//! var    := 'z' uint          (surfaces)   |   't'   (curves)
//! ```

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::poly::{Hermitian, Monomial, Poly};
use crate::scalar::Scalar;
use crate::{GaussianRational, HermitianPolynomial, Polynomial};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
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
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                offset: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Surface,
    Curve,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| Error::Syntax {
                        offset: self.toks[self.pos - 1].0,
                        message: "exponent too large".into(),
                    })?;
                    Ok(base.pow_truncated(e, None))
                }
                _ => self.fail("expected an exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn parenthesized(&mut self) -> Result<Polynomial> {
        self.expect('(')?;
        let inner = self.expr()?;
        self.expect(')')?;
        Ok(inner)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let n = self.n;
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(num);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) if !den.is_zero() => {
                            self.pos += 1;
                            value /= BigRational::from_integer(den);
                        }
                        Some(Tok::Int(_)) => return self.fail("zero denominator"),
                        _ => return self.fail("expected a denominator"),
                    }
                }
                Ok(Poly::constant(n, GaussianRational::new(value, BigRational::zero())))
            }
            Some(Tok::Sym('(')) => self.parenthesized(),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "i" => Ok(Poly::constant(n, GaussianRational::imag_unit())),
                    "conj" => {
                        if self.mode == Mode::Curve {
                            return Err(Error::InvalidArgument("curve components must be holomorphic".into()));
                        }
                        Ok(self.parenthesized()?.conj())
                    }
                    "Re" | "Im" | "abs2" if self.mode == Mode::Curve => {
                        Err(Error::InvalidArgument("curve components must be holomorphic".into()))
                    }
                    "Re" => {
                        let u = self.parenthesized()?;
                        Ok((&u + &u.conj()).scale(&GaussianRational::from_ratio(1, 2)))
                    }
                    "Im" => {
                        let u = self.parenthesized()?;
                        // (u - conj u) / (2i) = -i/2 (u - conj u)
                        let c = GaussianRational::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()));
                        Ok((&u - &u.conj()).scale(&c))
                    }
                    "abs2" => {
                        let u = self.parenthesized()?;
                        Ok(&u * &u.conj())
                    }
                    "t" if self.mode == Mode::Curve => Ok(Poly::var(1, 0)),
                    _ => match (self.mode, variable_index(&name)) {
                        (Mode::Surface, Some(j)) if j <= n => Ok(Poly::var(n, j - 1)),
                        _ => Err(Error::UnknownVariable(name)),
                    },
                }
            }
            Some(Tok::Sym(c)) => self.fail(format!("unexpected `{c}`")),
            None => self.fail("unexpected end of input"),
        }
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('z')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&j: &usize| j >= 1)
}

fn parse_with(text: &str, n: usize, mode: Mode) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        n,
        mode,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a polynomial in `z_j, z̄_j`. The dimension is the largest
/// variable index used, raised to `dim` when given.
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> Result<Polynomial> {
    let used = tokenize(text)?
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => variable_index(s),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    if let Some(d) = dim {
        if used > d {
            return Err(Error::UnknownVariable(format!("z{used}")));
        }
    }
    parse_with(text, used.max(dim.unwrap_or(1)), Mode::Surface)
}

/// Parses a real-valued polynomial; rejects expressions that are not real.
pub fn parse_hermitian(text: &str, dim: Option<usize>) -> Result<HermitianPolynomial> {
    Hermitian::new(parse_polynomial(text, dim)?)
}

/// Parses a curve given as `;`-separated polynomials in `t`, e.g.
/// `"0; t^3; t^2"`. The result is an exact polynomial jet.
pub fn parse_curve(text: &str) -> Result<Jet<GaussianRational>> {
    let mut components = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let p = parse_with(part, 1, Mode::Curve).map_err(|e| match e {
            Error::Syntax { offset: o, message } => Error::Syntax {
                offset: offset + o,
                message,
            },
            other => other,
        })?;
        offset += part.chars().count() + 1;
        let degree = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![GaussianRational::zero(); degree + 1];
        for (m, c) in p.terms() {
            coeffs[m.z[0] as usize] = c.clone();
        }
        components.push(coeffs);
    }
    Jet::from_polynomials(&components)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Gaussian rational as `p/q`, `p/q*i` or `(a + b*i)`; parses back to itself.
pub fn format_gaussian(c: &GaussianRational) -> String {
    let (re, im) = (&c.re, &c.im);
    let imag = |v: &BigRational| {
        if v.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(v))
        }
    };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => fmt_rational(re),
        (true, false) if im.is_positive() => imag(im),
        (true, false) => format!("-{}", imag(&-im)),
        (false, false) => {
            let sign = if im.is_negative() { '-' } else { '+' };
            format!("({} {} {})", fmt_rational(re), sign, imag(&im.abs()))
        }
    }
}

fn fmt_monomial(m: &Monomial, curve: bool) -> Vec<String> {
    let mut parts = Vec::new();
    let power = |base: String, e: u32| if e == 1 { base } else { format!("{base}^{e}") };
    for (j, &e) in m.z.iter().enumerate() {
        if e > 0 {
            let name = if curve { "t".to_string() } else { format!("z{}", j + 1) };
            parts.push(power(name, e));
        }
    }
    for (j, &e) in m.zb.iter().enumerate() {
        if e > 0 {
            parts.push(power(format!("conj(z{})", j + 1), e));
        }
    }
    parts
}

fn format_terms(p: &Polynomial, curve: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let negative_real = c.im.is_zero() && c.re.is_negative();
        let shown = if negative_real { -c.clone() } else { c.clone() };
        if k == 0 {
            if negative_real {
                out.push('-');
            }
        } else {
            out.push_str(if negative_real { " - " } else { " + " });
        }
        let mut factors = fmt_monomial(m, curve);
        if !(shown.is_one() && !factors.is_empty()) {
            let mut s = format_gaussian(&shown);
            if s.starts_with('-') {
                s = format!("({s})");
            }
            factors.insert(0, s);
        }
        let _ = write!(out, "{}", factors.join("*"));
    }
    out
}

/// Canonical text of a polynomial, in graded monomial order.
pub fn format_polynomial(p: &Polynomial) -> String {
    format_terms(p, false)
}

/// Canonical text of a curve in the `;`-separated format.
pub fn format_curve(curve: &Jet<GaussianRational>) -> String {
    curve
        .component_polys()
        .iter()
        .map(|p| format_terms(p, true))
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn example_surface_coefficients() {
        let r = parse_hermitian(models::EXAMPLE_SURFACE, None).unwrap();
        assert_eq!(r.dim(), 3);
        let m = |z: [u32; 3], zb: [u32; 3]| r.coeff(&Monomial::new(z.to_vec(), zb.to_vec()));
        assert_eq!(m([1, 0, 0], [0, 0, 0]), g(1, 2));
        assert_eq!(m([0, 0, 0], [1, 0, 0]), g(1, 2));
        assert_eq!(m([0, 3, 0], [0, 1, 0]), g(1, 2));
        assert_eq!(m([0, 1, 0], [0, 3, 0]), g(1, 2));
        assert_eq!(m([0, 1, 3], [0, 1, 0]), g(-1, 2));
        assert_eq!(m([0, 0, 3], [0, 0, 1]), g(1, 2));
        assert_eq!(m([0, 1, 0], [0, 1, 3]), g(-1, 2));
        assert_eq!(m([0, 2, 0], [0, 0, 1]), g(-1, 2));
        assert_eq!(m([0, 0, 1], [0, 2, 0]), g(-1, 2));
        assert_eq!(r.len(), 10);
    }

    #[test]
    fn rewrite_parses_to_the_same_polynomial() {
        let a = parse_hermitian(models::EXAMPLE_SURFACE, None).unwrap();
        let b = parse_hermitian(models::EXAMPLE_SURFACE_REWRITE, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_hermitian("Re(z1", None),
            Err(Error::Syntax {
                offset: 5,
                message: "expected `)`".into()
            })
        );
        assert!(matches!(
            parse_hermitian("z1 + * z2", None),
            Err(Error::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_hermitian("z1 $", None),
            Err(Error::Syntax { offset: 3, .. })
        ));
    }

    #[test]
    fn rejects_non_real_and_unknown() {
        assert_eq!(parse_hermitian("i*abs2(z2)", None), Err(Error::NotRealValued));
        assert_eq!(
            parse_hermitian("Re(w1)", None),
            Err(Error::UnknownVariable("w1".into()))
        );
        assert_eq!(
            parse_hermitian("Re(z4)", Some(3)),
            Err(Error::UnknownVariable("z4".into()))
        );
        assert!(matches!(parse_hermitian("z0", None), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn im_and_unary_minus() {
        let a = parse_hermitian("Im(z1)", None).unwrap();
        let b = parse_hermitian("-1/2*i*z1 + 1/2*i*conj(z1)", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            parse_hermitian("-abs2(z1)", None)
                .unwrap()
                .coeff(&Monomial::new(vec![1], vec![1])),
            g(-1, 1)
        );
    }

    #[test]
    fn curves() {
        let c = parse_curve("0; t^3; t^2").unwrap();
        assert_eq!(c.multiplicity(), 2);
        assert_eq!(c.coeff_vector(0).unwrap(), vec![g(0, 1), g(0, 1), g(1, 1)]);
        assert_eq!(c.coeff_vector(1).unwrap(), vec![g(0, 1), g(1, 1), g(0, 1)]);
        assert_eq!(parse_curve(&format_curve(&c)).unwrap(), c);
        let d = parse_curve("(1+2*i)*t - 1/3*t^2; i*t^4").unwrap();
        assert_eq!(parse_curve(&format_curve(&d)).unwrap(), d);
        assert!(parse_curve("conj(t)").is_err());
        assert!(matches!(
            parse_curve("t; 1 + t"),
            Err(Error::CurveNotThroughOrigin { component: 2 })
        ));
        assert!(matches!(parse_curve("t; t^"), Err(Error::Syntax { offset: 5, .. })));
    }

    #[test]
    fn print_round_trip() {
        for text in [
            models::EXAMPLE_SURFACE,
            "Re(z1) + (2+i)*z2*conj(z3) + (2-i)*z3*conj(z2) - 3/4*abs2(z2)^2",
            "Im(z1^2*conj(z2)) - 1/5*abs2(z3)",
        ] {
            let p = parse_hermitian(text, None).unwrap();
            let printed = format_polynomial(&p);
            assert_eq!(parse_hermitian(&printed, Some(p.dim())).unwrap(), p, "{printed}");
        }
    }

    #[test]
    fn gaussian_formatting() {
        assert_eq!(format_gaussian(&g(-3, 4)), "-3/4");
        assert_eq!(
            format_gaussian(&GaussianRational::new(BigRational::zero(), -BigRational::one())),
            "-i"
        );
        assert_eq!(
            format_gaussian(&GaussianRational::new(
                BigRational::one(),
                BigRational::new((-2).into(), 3.into())
            )),
            "(1 - 2/3*i)"
        );
    }
}
