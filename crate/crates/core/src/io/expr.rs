//! Divisor input: a coordinate list `"1, -1/2"` or a combination of named
//! classes such as `"2*s + 1/2*f"` or `"s + 2f"`. The name `K` denotes the canonical
//! class unless a curve of that name exists; `"0"` is the zero class.

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::surface::SurfaceModel;

fn is_coordinate_list(text: &str) -> bool {
    text.chars()
        .all(|c| c.is_ascii_digit() || matches!(c, ',' | '/' | '-' | '+' | ' ' | '\t'))
}

/// Splits at top-level `+`/`-`, keeping the sign with its term.
fn terms(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut prev = None;
    for c in text.chars() {
        let binary = matches!(c, '+' | '-')
            && !cur.trim().is_empty()
            && !matches!(prev, Some('*' | '/' | '+' | '-'));
        if binary {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    out.push(cur);
    out
}

fn resolve(model: &SurfaceModel, name: &str) -> Result<DivisorClass> {
    if let Some(i) = model.curve_index(name) {
        return Ok(model.curve_class(i).clone());
    }
    if name == "K" {
        return Ok(model.canonical().clone());
    }
    Err(Error::UnknownCurveName(name.to_string()))
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.'))
}

pub fn parse_divisor(model: &SurfaceModel, text: &str) -> Result<DivisorClass> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty divisor".into()));
    }
    if t == "0" {
        return Ok(DivisorClass::zero(model.rank()));
    }
    if is_coordinate_list(t) {
        let coords = t
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != model.rank() {
            return Err(Error::RankMismatch {
                expected: model.rank(),
                found: coords.len(),
            });
        }
        return Ok(DivisorClass::new(coords));
    }
    let mut total = DivisorClass::zero(model.rank());
    for raw in terms(t) {
        let term = raw.trim();
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, term.strip_prefix('+').unwrap_or(term).trim()),
        };
        let (coef, name) = match body.rsplit_once('*') {
            Some((c, n)) => (parse_rational(c)?, n.trim()),
            None => {
                // juxtaposed coefficient, as in `2f` or `1/2 s`
                let split = body
                    .find(|c: char| !(c.is_ascii_digit() || c == '/' || c.is_whitespace()))
                    .unwrap_or(body.len());
                let (c, n) = body.split_at(split);
                if c.trim().is_empty() {
                    (Rational::from_integer(1.into()), body)
                } else {
                    (parse_rational(c.trim())?, n.trim())
                }
            }
        };
        if !is_name(name) {
            return Err(Error::Parse(format!(
                "cannot read term '{term}' in '{text}'"
            )));
        }
        let coef = if negative { -coef } else { coef };
        total = &total + &(&coef * &resolve(model, name)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::surface::tests::f2;

    #[test]
    fn examples() {
        let m = f2();
        assert_eq!(
            parse_divisor(&m, "1,2").unwrap(),
            DivisorClass::from_ints(&[1, 2])
        );
        assert_eq!(
            parse_divisor(&m, "s + 2*f").unwrap(),
            DivisorClass::from_ints(&[2, 1])
        );
        assert_eq!(
            parse_divisor(&m, "1/2*s").unwrap(),
            DivisorClass::new(vec![int(0), ratio(1, 2)])
        );
        assert_eq!(
            parse_divisor(&m, "-s - -1/3*f").unwrap(),
            DivisorClass::new(vec![ratio(1, 3), int(-1)])
        );
        assert_eq!(
            parse_divisor(&m, "K - s").unwrap(),
            DivisorClass::from_ints(&[-4, -3])
        );
        assert_eq!(
            parse_divisor(&m, "s+2f").unwrap(),
            DivisorClass::from_ints(&[2, 1])
        );
        assert_eq!(
            parse_divisor(&m, "1/2 s - 3f").unwrap(),
            DivisorClass::new(vec![int(-3), ratio(1, 2)])
        );
        assert_eq!(parse_divisor(&m, "0").unwrap(), DivisorClass::zero(2));
        assert_eq!(
            parse_divisor(&m, " -1 , 1/2 ").unwrap(),
            DivisorClass::new(vec![int(-1), ratio(1, 2)])
        );
    }

    #[test]
    fn errors() {
        let m = f2();
        assert!(matches!(parse_divisor(&m, "2*g"), Err(Error::UnknownCurveName(n)) if n == "g"));
        assert!(matches!(
            parse_divisor(&m, "1,2,3"),
            Err(Error::RankMismatch { .. })
        ));
        assert!(matches!(parse_divisor(&m, "2*"), Err(Error::Parse(_))));
        assert!(matches!(parse_divisor(&m, "1/0*s"), Err(Error::Parse(_))));
        assert!(matches!(parse_divisor(&m, ""), Err(Error::Parse(_))));
    }
}
