use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse a polynomial in one variable with rational coefficients, e.g.
/// `3*x^2 - 1/2*x + 5`, `a^{2} - a`, `-x^54 + 7`. Whitespace is ignored,
/// `*` between coefficient and variable is optional. Returns coefficients
/// from the constant term up.
pub fn parse_rational_poly(input: &str, var: char) -> Result<Vec<BigRational>, ParseError> {
    let chars: Vec<(usize, char)> = input
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let err = |i: usize, msg: &str| ParseError {
        pos: chars.get(i).map_or(input.len(), |c| c.0),
        msg: msg.to_string(),
    };
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut i = 0;
    if chars.is_empty() {
        return Err(err(0, "empty input"));
    }
    let read_int = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < chars.len() && chars[*i].1.is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            return None;
        }
        let s: String = chars[start..*i].iter().map(|c| c.1).collect();
        s.parse().ok()
    };
    let mut first = true;
    while i < chars.len() {
        let mut sign = BigInt::one();
        match chars[i].1 {
            '+' => i += 1,
            '-' => {
                sign = -sign;
                i += 1;
            }
            _ if first => {}
            _ => return Err(err(i, "expected + or -")),
        }
        first = false;
        let mut coef = BigRational::from_integer(sign);
        let mut explicit = false;
        if let Some(n) = read_int(&mut i) {
            explicit = true;
            coef *= BigRational::from_integer(n);
            if i < chars.len() && chars[i].1 == '/' {
                i += 1;
                let d = read_int(&mut i).ok_or_else(|| err(i, "expected denominator"))?;
                if d.is_zero() {
                    return Err(err(i, "zero denominator"));
                }
                coef /= BigRational::from_integer(d);
            }
            if i < chars.len() && chars[i].1 == '*' {
                i += 1;
                if i >= chars.len() || chars[i].1 != var {
                    return Err(err(i, "expected variable after *"));
                }
            }
        }
        let mut exp = 0usize;
        if i < chars.len() && chars[i].1 == var {
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i].1 == '^' {
                i += 1;
                let braced = i < chars.len() && chars[i].1 == '{';
                if braced {
                    i += 1;
                }
                let e = read_int(&mut i).ok_or_else(|| err(i, "expected exponent"))?;
                exp = e.try_into().map_err(|_| err(i, "exponent too large"))?;
                if braced {
                    if i >= chars.len() || chars[i].1 != '}' {
                        return Err(err(i, "expected }"));
                    }
                    i += 1;
                }
            }
            // trailing division, e.g. x/2
            if i < chars.len() && chars[i].1 == '/' {
                i += 1;
                let d = read_int(&mut i).ok_or_else(|| err(i, "expected denominator"))?;
                if d.is_zero() {
                    return Err(err(i, "zero denominator"));
                }
                coef /= BigRational::from_integer(d);
            }
        } else if !explicit {
            return Err(err(i, "expected coefficient or variable"));
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigRational::zero());
        }
        coeffs[exp] += coef;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}
