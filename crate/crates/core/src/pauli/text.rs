//! Line-oriented text form of operators.
//!
//! Exact operators print one line per (string, monomial) pair:
//!
//! ```text
//! -1/4+0/1*i * J1^1 J2^1 : X2 X3
//! 1/8+0/1*i * 1 : Z1
//! ```
//!
//! Lines are emitted in canonical order, so equal operators print
//! byte-identically. Blank lines and lines starting with `#` are skipped when
//! parsing.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::coeff::{Coefficient, GaussianRational, Monomial};
use super::operator::{NumericOperator, PauliLetter, PauliOperator, PauliString};
use crate::{Error, Result};

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (site, letter) in self.letters() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", letter.symbol(), site)?;
        }
        Ok(())
    }
}

impl PauliString {
    /// Parse `X1 Z2 Y3` (whitespace separated, `I` for the identity).
    pub fn parse(text: &str) -> core::result::Result<Self, String> {
        let mut s = PauliString::identity();
        for tok in text.split_whitespace() {
            let (letter, site) = parse_letter_token(tok)?;
            if letter == PauliLetter::I {
                continue;
            }
            if s.letter(site) != PauliLetter::I {
                return Err(format!("site {site} appears twice"));
            }
            s = s.with(site, letter);
        }
        Ok(s)
    }
}

fn parse_letter_token(tok: &str) -> core::result::Result<(PauliLetter, usize), String> {
    let mut chars = tok.chars();
    let letter = chars
        .next()
        .and_then(PauliLetter::from_symbol)
        .ok_or_else(|| format!("bad Pauli letter in `{tok}`"))?;
    let rest = chars.as_str();
    if rest.is_empty() && letter == PauliLetter::I {
        return Ok((letter, 1));
    }
    let site: usize = rest
        .parse()
        .map_err(|_| format!("bad site index in `{tok}`"))?;
    if !(1..=super::operator::MAX_SITES).contains(&site) {
        return Err(format!("site index {site} out of range"));
    }
    Ok((letter, site))
}

impl fmt::Display for PauliOperator<Coefficient> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (string, coeff) in self.terms() {
            for (mono, value) in coeff.terms() {
                writeln!(f, "{value} * {mono} : {string}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for NumericOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (string, c) in self.terms() {
            let sign = if c.im.is_sign_negative() { '-' } else { '+' };
            writeln!(f, "{}{}{}*i : {}", c.re, sign, c.im.abs(), string)?;
        }
        Ok(())
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_rational(text: &str) -> core::result::Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator `{num}`"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator `{den}`"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(BigRational::new(num, den))
}

/// Parse `p/q+r/s*i` (also `p/q-r/s*i`).
pub fn parse_gaussian(text: &str) -> core::result::Result<GaussianRational, String> {
    let text = text.trim();
    let body = text
        .strip_suffix("*i")
        .ok_or_else(|| format!("coefficient `{text}` must end in `*i`"))?;
    // the separator is the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last()
        .ok_or_else(|| format!("coefficient `{text}` has no imaginary part"))?;
    let re = parse_rational(&body[..split])?;
    let mut im = parse_rational(&body[split + 1..])?;
    if body.as_bytes()[split] == b'-' {
        im = -im;
    }
    Ok(GaussianRational::new(re, im))
}

fn parse_monomial(text: &str) -> core::result::Result<Monomial, String> {
    let text = text.trim();
    if text == "1" {
        return Ok(Monomial::constant());
    }
    let mut exps: Vec<u32> = Vec::new();
    for tok in text.split_whitespace() {
        let body = tok
            .strip_prefix('J')
            .ok_or_else(|| format!("bad monomial factor `{tok}`"))?;
        let (idx, pow) = match body.split_once('^') {
            Some((i, p)) => (i, p),
            None => (body, "1"),
        };
        let idx: usize = idx
            .parse()
            .map_err(|_| format!("bad coupling index `{tok}`"))?;
        let pow: u32 = pow.parse().map_err(|_| format!("bad exponent `{tok}`"))?;
        if idx == 0 {
            return Err("couplings are numbered from 1".to_string());
        }
        if exps.len() < idx {
            exps.resize(idx, 0);
        }
        exps[idx - 1] += pow;
    }
    Ok(Monomial::from_exponents(exps))
}

impl PauliOperator<Coefficient> {
    /// Parse the canonical line format back into an `n`-site operator.
    pub fn from_text(n: usize, text: &str) -> Result<Self> {
        let mut op = Self::zero(n);
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = k + 1;
            let (lhs, string) = line
                .split_once(':')
                .ok_or_else(|| parse_error(lineno, "missing `:`"))?;
            let (coeff, mono) = lhs.split_once(" * ").ok_or_else(|| {
                parse_error(lineno, "missing ` * ` between coefficient and monomial")
            })?;
            let value = parse_gaussian(coeff).map_err(|m| parse_error(lineno, m))?;
            let mono = parse_monomial(mono).map_err(|m| parse_error(lineno, m))?;
            let string = PauliString::parse(string).map_err(|m| parse_error(lineno, m))?;
            if string.max_site() > n {
                return Err(parse_error(lineno, format!("site beyond n = {n}")));
            }
            op.add_term(string, Coefficient::from_monomial(mono, value));
        }
        Ok(op)
    }

    /// Parse a human-written sum such as `X1 X2 + Y1 Y2` or
    /// `1/2 Z1 - 1/2 Z2`. Letters are σ-letters; an optional rational
    /// prefix (with an optional `*`) scales each term.
    pub fn parse_expression(n: usize, expr: &str) -> Result<Self> {
        let mut op = Self::zero(n);
        let mut negative = false;
        let mut current = String::new();
        let mut seen_term = false;
        let flush = |op: &mut Self, text: &str, negative: bool| -> Result<()> {
            let text = text.trim();
            if text.is_empty() {
                return Err(parse_error(1, "empty term"));
            }
            let split = text
                .find(|c: char| PauliLetter::from_symbol(c).is_some())
                .ok_or_else(|| parse_error(1, format!("term `{text}` has no Pauli letters")))?;
            let prefix = text[..split].trim().trim_end_matches('*').trim();
            let mut value = if prefix.is_empty() {
                GaussianRational::one()
            } else {
                GaussianRational::new(
                    parse_rational(prefix).map_err(|m| parse_error(1, m))?,
                    BigRational::zero(),
                )
            };
            if negative {
                value = value.neg();
            }
            let string = PauliString::parse(&text[split..]).map_err(|m| parse_error(1, m))?;
            if string.max_site() > n {
                return Err(parse_error(1, format!("site beyond n = {n}")));
            }
            op.add_term(string, Coefficient::constant(value));
            Ok(())
        };
        for c in expr.chars() {
            if c == '+' || c == '-' {
                if current.trim().is_empty() {
                    if seen_term {
                        return Err(parse_error(1, "dangling operator"));
                    }
                    negative ^= c == '-';
                    continue;
                }
                flush(&mut op, &current, negative)?;
                seen_term = true;
                current.clear();
                negative = c == '-';
            } else {
                current.push(c);
            }
        }
        flush(&mut op, &current, negative)?;
        Ok(op)
    }
}

impl Coefficient {
    /// Coefficient of the constant monomial.
    pub fn constant_part(&self) -> GaussianRational {
        self.get(&Monomial::constant())
    }
}

#[cfg(test)]
mod tests {
    use super::PauliLetter::*;
    use super::*;
    use crate::pauli::Scalar;

    #[test]
    fn round_trip_through_text() {
        let mut op = PauliOperator::<Coefficient>::letters(3, &[(1, X), (2, Z), (3, Y)]);
        op.add_term(
            PauliString::from_letters(&[(2, X), (3, X)]),
            Coefficient::coupling(1)
                .mul(&Coefficient::coupling(2))
                .mul(&Coefficient::rational(-1, 4)),
        );
        let text = op.to_string();
        assert_eq!(
            text,
            "1/1+0/1*i * 1 : X1 Z2 Y3\n-1/4+0/1*i * J1^1 J2^1 : X2 X3\n"
        );
        assert_eq!(PauliOperator::from_text(3, &text).unwrap(), op);
    }

    #[test]
    fn parses_negative_imaginary_parts() {
        let g = parse_gaussian("-3/8-1/2*i").unwrap();
        assert_eq!(g.to_string(), "-3/8-1/2*i");
        assert!(parse_gaussian("1/2").is_err());
    }

    #[test]
    fn expressions() {
        let op = PauliOperator::<Coefficient>::parse_expression(4, "X1 X2 + Y1 Y2").unwrap();
        assert_eq!(op.len(), 2);
        let z = PauliOperator::<Coefficient>::parse_expression(2, "1/2 Z1 - 1/2*Z2").unwrap();
        assert_eq!(
            z.coefficient(&PauliString::single(2, Z)).constant_part(),
            GaussianRational::ratio(-1, 2)
        );
        assert!(PauliOperator::<Coefficient>::parse_expression(2, "X3").is_err());
        assert!(PauliOperator::<Coefficient>::parse_expression(2, "X1 +").is_err());
        assert!(PauliOperator::<Coefficient>::parse_expression(2, "X1 X1").is_err());
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err =
            PauliOperator::<Coefficient>::from_text(2, "# c\n1/1+0/1*i * 1 X1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
