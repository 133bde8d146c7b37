//! JSON and CSV forms of matrices and distributions.
//!
//! Rationals are written as `"p/q"` strings (always with a denominator) so
//! they survive a JSON round trip bit for bit.

use std::fmt::Display;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::chains::{rational_to_f64, StationaryDistribution, TransitionMatrix};
use crate::error::{Error, Result};

pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_err(reason: impl Into<String>) -> Error {
    Error::Parse {
        input: "<json>".into(),
        reason: reason.into(),
    }
}

fn states_from_json<S: FromStr<Err = Error>>(v: &Value) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| parse_err("`states` must be an array"))?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| parse_err("state must be a string"))
                .and_then(S::from_str)
        })
        .collect()
}

fn rationals_from_json(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of rationals"))?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| parse_err("rational must be a \"p/q\" string"))
                .and_then(parse_rational)
        })
        .collect()
}

/// `{states: [..], probs: ["p/q", ..]}`
pub fn distribution_to_json<S: Display>(d: &StationaryDistribution<S>) -> Value {
    json!({
        "states": d.states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "probs": d.probs.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn distribution_from_json<S: FromStr<Err = Error>>(
    v: &Value,
) -> Result<StationaryDistribution<S>> {
    let states = states_from_json(&v["states"])?;
    let probs = rationals_from_json(&v["probs"])?;
    if states.len() != probs.len() {
        return Err(Error::Shape {
            left: states.len(),
            right: probs.len(),
        });
    }
    Ok(StationaryDistribution { states, probs })
}

/// `{states: [..], entries: [["p/q", ..], ..]}`, rows are sources.
pub fn matrix_to_json<S: Display>(m: &TransitionMatrix<S>) -> Value {
    json!({
        "states": m.states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "entries": m
            .entries
            .iter()
            .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json<S: FromStr<Err = Error>>(v: &Value) -> Result<TransitionMatrix<S>> {
    let states = states_from_json(&v["states"])?;
    let entries = v["entries"]
        .as_array()
        .ok_or_else(|| parse_err("`entries` must be an array of rows"))?
        .iter()
        .map(rationals_from_json)
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != states.len() || entries.iter().any(|r| r.len() != states.len()) {
        return Err(Error::Shape {
            left: states.len(),
            right: entries.len(),
        });
    }
    Ok(TransitionMatrix { states, entries })
}

/// `state,exact,decimal` with one row per state.
pub fn distribution_to_csv<S: Display>(d: &StationaryDistribution<S>) -> String {
    let mut out = String::from("state,exact,decimal\n");
    for (s, p) in d.states.iter().zip(&d.probs) {
        out.push_str(&format!(
            "{s},{},{:.12}\n",
            format_rational(p),
            rational_to_f64(p)
        ));
    }
    out
}
