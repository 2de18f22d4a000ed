use std::sync::Arc;

use thiserror::Error;

use crate::formring::{subring_c, ElementSet, FiniteRing, FormRing, FormRingError, RingError};

/// A parsed ring-spec file: the form ring and the central subring `C`.
#[derive(Debug, Clone)]
pub struct RingSpec {
    pub form_ring: Arc<FormRing>,
    pub c: ElementSet,
    pub text: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    FormRing(#[from] FormRingError),
}

enum LambdaSpec {
    Set(ElementSet),
    Max,
    Min,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> SpecError {
    SpecError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses
///
/// ```text
/// ring zmod 4            # or: ring quad 3 0 1 | ring prodswap 2
/// lambda 1
/// Lambda {0,2}           # or: Lambda max | Lambda min
/// C {0,1,2,3}            # optional; defaults to the center
/// ```
///
/// Blank lines and `#` comments are ignored.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec, SpecError> {
    let mut ring: Option<FiniteRing> = None;
    let mut lambda: Option<(usize, u64)> = None;
    let mut form_parameter: Option<(usize, LambdaSpec)> = None;
    let mut cprime: Option<(usize, ElementSet)> = None;
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(body);
        let Some(&(col, keyword)) = tokens.first() else { continue };
        let args = &tokens[1..];
        let int = |idx: usize| -> Result<u64, SpecError> {
            let &(c, t) = args.get(idx).ok_or_else(|| err(line, body.len() + 1, "missing integer"))?;
            t.parse::<u64>()
                .map_err(|_| err(line, c, format!("expected an integer, found `{t}`")))
        };
        let no_more = |n: usize| -> Result<(), SpecError> {
            match args.get(n) {
                Some(&(c, t)) => Err(err(line, c, format!("unexpected `{t}`"))),
                None => Ok(()),
            }
        };
        match keyword {
            "ring" => {
                if ring.is_some() {
                    return Err(err(line, col, "duplicate `ring` declaration"));
                }
                let &(kc, kind) = args.first().ok_or_else(|| err(line, body.len() + 1, "missing ring kind"))?;
                let small = |v: u64, idx: usize| -> Result<usize, SpecError> {
                    usize::try_from(v)
                        .ok()
                        .filter(|&v| v <= 64)
                        .ok_or_else(|| err(line, args[idx].0, "value out of range"))
                };
                let built = match kind {
                    "zmod" => {
                        no_more(2)?;
                        FiniteRing::zmod(small(int(1)?, 1)?)?
                    }
                    "quad" => {
                        no_more(4)?;
                        FiniteRing::quadratic(small(int(1)?, 1)?, small(int(2)?, 2)?, small(int(3)?, 3)?)?
                    }
                    "prodswap" => {
                        no_more(2)?;
                        FiniteRing::product_swap(small(int(1)?, 1)?)?
                    }
                    other => return Err(err(line, kc, format!("unknown ring kind `{other}`"))),
                };
                ring = Some(built);
            }
            "lambda" => {
                if lambda.is_some() {
                    return Err(err(line, col, "duplicate `lambda` declaration"));
                }
                no_more(1)?;
                lambda = Some((line, int(0)?));
            }
            "Lambda" | "C" => {
                let &(c, first) = args.first().ok_or_else(|| err(line, body.len() + 1, "missing value"))?;
                let value = match first {
                    "max" | "min" if keyword == "Lambda" => {
                        no_more(1)?;
                        if first == "max" {
                            LambdaSpec::Max
                        } else {
                            LambdaSpec::Min
                        }
                    }
                    _ => {
                        let start = c - 1;
                        LambdaSpec::Set(parse_set(&body[start..], line, c)?)
                    }
                };
                if keyword == "Lambda" {
                    if form_parameter.is_some() {
                        return Err(err(line, col, "duplicate `Lambda` declaration"));
                    }
                    form_parameter = Some((line, value));
                } else {
                    if cprime.is_some() {
                        return Err(err(line, col, "duplicate `C` declaration"));
                    }
                    let LambdaSpec::Set(s) = value else { unreachable!() };
                    cprime = Some((line, s));
                }
            }
            other => return Err(err(line, col, format!("unknown declaration `{other}`"))),
        }
    }
    let end = last + 1;
    let ring = Arc::new(ring.ok_or_else(|| err(end, 1, "missing `ring` declaration"))?);
    let (lline, lambda) = lambda.ok_or_else(|| err(end, 1, "missing `lambda` declaration"))?;
    let (pline, form_parameter) = form_parameter.ok_or_else(|| err(end, 1, "missing `Lambda` declaration"))?;
    let order = ring.order() as u64;
    if lambda >= order {
        return Err(err(lline, 8, format!("λ = {lambda} is not an element of a ring of order {order}")));
    }
    let lambda = lambda as u8;
    let set = match form_parameter {
        LambdaSpec::Set(s) => {
            if let Some(x) = s.iter().find(|&x| x as u64 >= order) {
                return Err(err(pline, 8, format!("{x} is not an element of a ring of order {order}")));
            }
            s
        }
        LambdaSpec::Max => crate::formring::lambda_max(&ring, lambda)?,
        LambdaSpec::Min => crate::formring::lambda_min(&ring, lambda)?,
    };
    let form_ring = FormRing::new(ring.clone(), lambda, set)?;
    let c = match cprime {
        Some((_, s)) => subring_c(&ring, s)?,
        None => ring.center(),
    };
    Ok(RingSpec {
        form_ring: Arc::new(form_ring),
        c,
        text: text.to_string(),
    })
}

/// Whitespace-separated tokens with 1-based columns; a `{...}` group is one
/// token.
fn tokenize(body: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] == b'{' {
            while i < bytes.len() && bytes[i] != b'}' {
                i += 1;
            }
            i = (i + 1).min(bytes.len());
        } else {
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
        }
        out.push((start + 1, &body[start..i]));
    }
    out
}

fn parse_set(text: &str, line: usize, column: usize) -> Result<ElementSet, SpecError> {
    let text = text.trim_end();
    if !text.starts_with('{') {
        return Err(err(line, column, "expected `{`"));
    }
    let Some(close) = text.find('}') else {
        return Err(err(line, column + text.len(), "expected `}`"));
    };
    if close + 1 != text.len() {
        return Err(err(line, column + close + 1, "unexpected text after `}`"));
    }
    let inner = &text[1..close];
    let mut set = ElementSet::empty();
    if inner.trim().is_empty() {
        return Ok(set);
    }
    let mut offset = 1;
    for part in inner.split(',') {
        let lead = part.len() - part.trim_start().len();
        let t = part.trim();
        let x: u8 = t
            .parse()
            .ok()
            .filter(|&x: &u8| x < 64)
            .ok_or_else(|| err(line, column + offset + lead, format!("expected an element index, found `{t}`")))?;
        set.insert(x);
        offset += part.len() + 1;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit_and_keyword_parameters() {
        let s = parse_ring_spec("ring zmod 4\nlambda 1\nLambda {0,2}").unwrap();
        assert_eq!(s.form_ring.form_parameter(), ElementSet::from([0, 2]));
        assert_eq!(s.c, s.form_ring.ring().all());
        let s = parse_ring_spec("# comment\nring zmod 4\n\nlambda 3\nLambda max\n").unwrap();
        assert_eq!(s.form_ring.form_parameter(), s.form_ring.ring().all());
        let s = parse_ring_spec("ring zmod 4\nlambda 3\nLambda min").unwrap();
        assert_eq!(s.form_ring.form_parameter(), ElementSet::from([0, 2]));
        let s = parse_ring_spec("ring quad 3 0 1\nlambda 1\nLambda min\nC {0,1,2}").unwrap();
        assert_eq!(s.form_ring.ring().order(), 9);
        assert_eq!(s.c, ElementSet::from([0, 1, 2]));
    }

    #[test]
    fn reports_positions() {
        let e = parse_ring_spec("ring zmod 4\nlambda x").unwrap_err();
        assert_eq!(
            e,
            SpecError::Parse {
                line: 2,
                column: 8,
                message: "expected an integer, found `x`".into()
            }
        );
        let e = parse_ring_spec("ring zmod 4\nlambda 1\nLambda {0, z}").unwrap_err();
        assert!(matches!(e, SpecError::Parse { line: 3, column: 12, .. }), "{e}");
        let e = parse_ring_spec("ring cube 4").unwrap_err();
        assert!(matches!(e, SpecError::Parse { line: 1, column: 6, .. }));
        let e = parse_ring_spec("ring zmod 4\nlambda 1").unwrap_err();
        assert!(matches!(e, SpecError::Parse { line: 3, column: 1, .. }));
    }

    #[test]
    fn reports_validation_failures() {
        let e = parse_ring_spec("ring zmod 4\nlambda 2\nLambda {0}").unwrap_err();
        assert!(e.to_string().contains("λλ̄"), "{e}");
        let e = parse_ring_spec("ring zmod 4\nlambda 1\nLambda {0,1}").unwrap_err();
        assert!(matches!(e, SpecError::FormRing(FormRingError::Invalid(_))));
    }
}
