//! Text formats for instances and solutions.
//!
//! Instance:
//!
//! ```text
//! pcsf 1
//! nodes 3
//! edge 1 2 10
//! edge 2 3 0.5
//! pair 1 3 4
//! ```
//!
//! Solution:
//!
//! ```text
//! cost 21/2
//! buy 1 2
//! pay 1 3
//! ```
//!
//! Vertices are 1-based in files. Values are nonnegative decimals with at
//! most nine fractional digits; solution costs may also be written `p/q`.
//! `#` starts a comment and blank lines are ignored.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::instance::{Pair, PcsfInstance};
use crate::solution::Solution;
use crate::{Instance, Rat};

const MAX_FRACTION_DIGITS: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

/// Exact value of a decimal such as `12`, `0.5` or `3.000000001`.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() || !digits(int) || !digits(frac) || frac.len() > MAX_FRACTION_DIGITS {
        return None;
    }
    if s.contains('.') && frac.is_empty() {
        return None;
    }
    let numer: BigInt = format!("{int}{frac}").parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    Some(Rat::new(numer, denom))
}

/// Inverse of [`parse_decimal`], or `None` if the value needs more than nine
/// fractional digits.
pub fn format_decimal(v: &Rat) -> Option<String> {
    if v.is_integer() {
        return Some(v.to_integer().to_string());
    }
    let scale = BigInt::from(10u32).pow(MAX_FRACTION_DIGITS as u32);
    let scaled = v * Rat::from_integer(scale.clone());
    if !scaled.is_integer() {
        return None;
    }
    let scaled = scaled.to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = format!(
        "{:0>width$}",
        (&abs % &scale).to_string(),
        width = MAX_FRACTION_DIGITS
    );
    Some(format!("{sign}{int}.{}", frac.trim_end_matches('0')))
}

fn parse_value(line: usize, what: &str, s: &str) -> Result<Rat, ParseError> {
    if s.starts_with('-') {
        return err(line, format!("negative {what} {s}"));
    }
    match parse_decimal(s) {
        Some(v) => Ok(v),
        None => err(
            line,
            format!("invalid {what} '{s}' (expected a decimal with at most 9 fractional digits)"),
        ),
    }
}

fn parse_vertex(line: usize, s: &str, n: usize) -> Result<usize, ParseError> {
    match s.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        Ok(v) => err(line, format!("vertex {v} out of range 1..={n}")),
        Err(_) => err(line, format!("invalid vertex '{s}'")),
    }
}

fn expect_args(line: usize, words: &[&str], count: usize) -> Result<(), ParseError> {
    if words.len() != count + 1 {
        return err(
            line,
            format!(
                "'{}' takes {count} arguments, got {}",
                words[0],
                words.len() - 1
            ),
        );
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = significant_lines(text);
    match lines.next() {
        Some((_, w)) if w == ["pcsf", "1"] => {}
        Some((line, _)) => return err(line, "expected header 'pcsf 1'"),
        None => return err(1, "empty input, expected header 'pcsf 1'"),
    }
    let n = match lines.next() {
        Some((line, w)) if w[0] == "nodes" => {
            expect_args(line, &w, 1)?;
            w[1].parse::<usize>()
                .or_else(|_| err(line, format!("invalid node count '{}'", w[1])))?
        }
        Some((line, _)) => return err(line, "expected 'nodes <n>'"),
        None => return err(1, "missing 'nodes <n>'"),
    };
    let mut builder = PcsfInstance::builder(n);
    let mut seen_pairs = BTreeSet::new();
    for (line, w) in lines {
        match w[0] {
            "edge" => {
                expect_args(line, &w, 3)?;
                let u = parse_vertex(line, w[1], n)?;
                let v = parse_vertex(line, w[2], n)?;
                if u == v {
                    return err(line, format!("self-loop at vertex {}", u + 1));
                }
                builder = builder.edge(u, v, parse_value(line, "cost", w[3])?);
            }
            "pair" => {
                expect_args(line, &w, 3)?;
                let i = parse_vertex(line, w[1], n)?;
                let j = parse_vertex(line, w[2], n)?;
                let p = match Pair::new(i, j) {
                    Some(p) => p,
                    None => {
                        return err(
                            line,
                            format!("pair endpoints must differ (got {} twice)", i + 1),
                        )
                    }
                };
                if !seen_pairs.insert(p) {
                    return err(
                        line,
                        format!("duplicate pair {} {}", p.lo() + 1, p.hi() + 1),
                    );
                }
                builder = builder.pair(i, j, parse_value(line, "penalty", w[3])?);
            }
            "nodes" => return err(line, "'nodes' given twice"),
            other => return err(line, format!("unknown directive '{other}'")),
        }
    }
    builder.build().or_else(|e| err(0, e.to_string()))
}

/// Canonical text form: one edge line per stored edge in index order, pairs
/// lexicographically.
pub fn serialize_instance(inst: &Instance) -> Result<String, String> {
    let value = |v: &Rat| format_decimal(v).ok_or_else(|| format!("{v} has no short decimal form"));
    let mut out = format!("pcsf 1\nnodes {}\n", inst.n());
    for e in inst.edges() {
        out += &format!("edge {} {} {}\n", e.u + 1, e.v + 1, value(&e.cost)?);
    }
    for (p, pen) in inst.penalties() {
        out += &format!("pair {} {} {}\n", p.lo() + 1, p.hi() + 1, value(pen)?);
    }
    Ok(out)
}

fn parse_cost(line: usize, s: &str) -> Result<Rat, ParseError> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .parse()
            .or_else(|_| err(line, format!("invalid cost '{s}'")))?;
        let q: BigInt = q
            .parse()
            .or_else(|_| err(line, format!("invalid cost '{s}'")))?;
        if q.is_zero() {
            return err(line, "zero denominator");
        }
        let v = Rat::new(p, q);
        if v.is_negative() {
            return err(line, format!("negative cost {s}"));
        }
        return Ok(v);
    }
    parse_value(line, "cost", s)
}

/// Reads a solution for `inst`. The stated cost is kept as written so that a
/// verifier can compare it with the actual cost.
pub fn parse_solution(text: &str, inst: &Instance) -> Result<Solution, ParseError> {
    let n = inst.n();
    let mut cost = None;
    let mut forest = Vec::new();
    let mut penalized = BTreeSet::new();
    for (line, w) in significant_lines(text) {
        match w[0] {
            "cost" => {
                expect_args(line, &w, 1)?;
                if cost.is_some() {
                    return err(line, "'cost' given twice");
                }
                cost = Some(parse_cost(line, w[1])?);
            }
            "buy" => {
                expect_args(line, &w, 2)?;
                let u = parse_vertex(line, w[1], n)?;
                let v = parse_vertex(line, w[2], n)?;
                match inst.find_edge(u, v) {
                    Some(e) => forest.push(e),
                    None => return err(line, format!("no edge between {} and {}", u + 1, v + 1)),
                }
            }
            "pay" => {
                expect_args(line, &w, 2)?;
                let i = parse_vertex(line, w[1], n)?;
                let j = parse_vertex(line, w[2], n)?;
                match Pair::new(i, j) {
                    Some(p) => {
                        penalized.insert(p);
                    }
                    None => {
                        return err(
                            line,
                            format!("pair endpoints must differ (got {} twice)", i + 1),
                        )
                    }
                }
            }
            other => return err(line, format!("unknown directive '{other}'")),
        }
    }
    let cost = match cost {
        Some(c) => c,
        None => return err(1, "missing 'cost' line"),
    };
    Ok(Solution {
        penalized,
        forest,
        cost,
    })
}

pub fn serialize_solution(inst: &Instance, sol: &Solution) -> String {
    let mut out = format!("cost {}\n", sol.cost);
    let mut forest = sol.forest.clone();
    forest.sort_unstable();
    for e in forest {
        let edge = &inst.edges()[e];
        let (a, b) = (edge.u.min(edge.v), edge.u.max(edge.v));
        out += &format!("buy {} {}\n", a + 1, b + 1);
    }
    for p in &sol.penalized {
        out += &format!("pay {} {}\n", p.lo() + 1, p.hi() + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_fraction(n, d)
    }

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance("pcsf 1\nnodes 2\nedge 1 2 10\npair 1 2 4\n").unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.edges()[0].cost, r(10, 1));
        assert_eq!(inst.penalty(Pair::new(0, 1).unwrap()), r(4, 1));
    }

    #[test]
    fn decimal_is_exact() {
        let inst = parse_instance("pcsf 1\nnodes 2\nedge 1 2 0.5").unwrap();
        assert_eq!(inst.edges()[0].cost, r(1, 2));
        assert_eq!(
            parse_decimal("3.000000001"),
            Some(r(3_000_000_001, 1_000_000_000))
        );
        assert_eq!(parse_decimal("0.1234567891"), None);
        assert_eq!(parse_decimal("1."), None);
        assert_eq!(parse_decimal(".5"), None);
    }

    #[test]
    fn rejections_carry_line_numbers() {
        let e = parse_instance("pcsf 1\nnodes 2\nedge 1 1 5\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("self-loop"), "{e}");

        let e = parse_instance("pcsf 1\nnodes 3\npair 1 2 1\n\n# again\npair 2 1 3\n").unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("duplicate"));

        let e = parse_instance("pcsf 1\nnodes 2\nedge 1 2 -1\n").unwrap_err();
        assert!(e.message.contains("negative"));
        assert_eq!(parse_instance("pcsf 2\nnodes 2\n").unwrap_err().line, 1);
        assert_eq!(
            parse_instance("pcsf 1\nnodes 2\nedge 1 3 1\n")
                .unwrap_err()
                .line,
            3
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\npcsf 1   # version\nnodes 3\n\nedge 1 2 1 # cheap\nedge 2 1 0.25\npair 1 3 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.edges().len(), 1);
        assert_eq!(inst.edges()[0].cost, r(1, 4));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&r(21, 2)).unwrap(), "10.5");
        assert_eq!(format_decimal(&r(7, 1)).unwrap(), "7");
        assert_eq!(format_decimal(&r(1, 1_000_000_000)).unwrap(), "0.000000001");
        assert_eq!(format_decimal(&r(1, 3)), None);
    }

    #[test]
    fn solution_round_trip() {
        let inst =
            parse_instance("pcsf 1\nnodes 3\nedge 1 2 1\nedge 2 3 2\npair 1 2 5\npair 1 3 3/1\n");
        assert!(inst.is_err());
        let inst =
            parse_instance("pcsf 1\nnodes 3\nedge 1 2 1\nedge 2 3 2\npair 1 2 5\npair 1 3 1.5\n")
                .unwrap();
        let sol = Solution::new(&inst, [0], [Pair::new(0, 2).unwrap()]).unwrap();
        let text = serialize_solution(&inst, &sol);
        assert_eq!(text, "cost 5/2\nbuy 1 2\npay 1 3\n");
        assert_eq!(parse_solution(&text, &inst).unwrap(), sol);
        assert!(parse_solution("buy 1 3\ncost 1\n", &inst).is_err());
        assert!(parse_solution("pay 1 2\n", &inst).is_err());
    }

    proptest! {
        #[test]
        fn decimal_round_trip(numer in 0i64..10_000_000, scale in 0u32..10) {
            let v = r(numer, 10i64.pow(scale));
            let text = format_decimal(&v).unwrap();
            prop_assert_eq!(parse_decimal(&text), Some(v));
        }
    }
}
