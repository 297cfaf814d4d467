use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{radical_position, AlgNum, Rational, DEGREE};
use crate::error::Error;

fn malformed(s: &str, msg: impl Into<String>) -> Error {
    Error::Malformed { value: s.to_string(), msg: msg.into() }
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| malformed(s, "bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| malformed(s, "bad denominator"))?;
    if d.is_zero() {
        return Err(malformed(s, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn parse_radical(s: &str) -> Option<usize> {
    let r: u32 = s.strip_prefix('r')?.parse().ok()?;
    radical_position(r)
}

fn parse_term(term: &str, whole: &str) -> Result<(usize, Rational), Error> {
    let factors: Vec<&str> = term.split('*').collect();
    let mut coeff = Rational::from_integer(1.into());
    let mut pos = 0;
    let mut seen_radical = false;
    for f in factors {
        if f.is_empty() {
            return Err(malformed(whole, "empty factor"));
        }
        if let Some(p) = parse_radical(f) {
            if seen_radical {
                return Err(malformed(whole, "more than one radical in a term"));
            }
            seen_radical = true;
            pos = p;
        } else if f.starts_with('r') {
            return Err(malformed(whole, format!("unknown radical {f}")));
        } else {
            coeff *= parse_rational(f)?;
        }
    }
    Ok((pos, coeff))
}

impl FromStr for AlgNum {
    type Err = Error;

    /// Parses `a0 + a1*r2 + a2*r3 + ...`; zero terms may be omitted, terms may
    /// be separated by `+` or `-`, and a coefficient of 1 may be dropped.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(malformed(s, "empty"));
        }
        let mut coords: [Rational; DEGREE] = Default::default();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in compact.chars() {
            let after_op = current.ends_with('/') || current.ends_with('*');
            if (ch == '+' || ch == '-') && !after_op {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                    negative = false;
                }
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(malformed(s, "dangling sign"));
        }
        terms.push((negative, current));
        for (neg, term) in terms {
            let (pos, c) = parse_term(&term, s)?;
            coords[pos] += if neg { -c } else { c };
        }
        Ok(AlgNum::from_coords(&coords))
    }
}
