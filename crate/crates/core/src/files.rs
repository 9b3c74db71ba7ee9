//! JSON file formats: games, behaviors, independents, ratios, coins,
//! states, setups, and search problems.
//!
//! Numbers may be JSON numbers or fraction strings like `"7/50"`; fraction
//! strings stay exact in the rational backend. Parsers work on
//! `serde_json::Value` so schema errors can name the offending field.

use crate::behavior::{Behavior, BehaviorError, CoinParameters, IndependentSet, NUM_ENTRIES};
use crate::equilibrium::{EquilibriumError, RatioGame};
use crate::game::{GameError, GeneralThreePlayerGame, PayoffTriple, SymmetricGame};
use crate::payoff::{MixedProfile, PayoffError};
use crate::quantum::{Direction, MeasurementSetup, QuantumError, TripartiteState};
use crate::scalar::Scalar;
use crate::search::{SearchError, SearchProblem};
use num_complex::Complex64;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

fn field_err(field: &str, message: impl Into<String>) -> FileError {
    FileError::Field { field: field.to_string(), message: message.into() }
}

/// Parse one scalar from a JSON number or fraction string.
pub fn scalar_from_value<S: Scalar>(value: &Value, field: &str) -> Result<S, FileError> {
    match value {
        Value::Number(n) => {
            let v = n
                .as_f64()
                .ok_or_else(|| field_err(field, "number out of f64 range"))?;
            if !v.is_finite() {
                return Err(field_err(field, "number must be finite"));
            }
            Ok(S::from_f64_exact(v))
        }
        Value::String(s) => scalar_from_text(s, field),
        other => Err(field_err(field, format!("expected number or fraction string, got {other}"))),
    }
}

fn scalar_from_text<S: Scalar>(text: &str, field: &str) -> Result<S, FileError> {
    let text = text.trim();
    let parse_int = |t: &str| -> Result<i64, FileError> {
        t.parse::<i64>()
            .map_err(|_| field_err(field, format!("cannot parse `{t}` as an integer")))
    };
    if let Some((numer, denom)) = text.split_once('/') {
        let n = parse_int(numer.trim())?;
        let d = parse_int(denom.trim())?;
        if d == 0 {
            return Err(field_err(field, "zero denominator"));
        }
        Ok(S::from_ratio(n, d))
    } else if text.contains('.') || text.contains('e') || text.contains('E') {
        let v: f64 = text
            .parse()
            .map_err(|_| field_err(field, format!("cannot parse `{text}` as a number")))?;
        if !v.is_finite() {
            return Err(field_err(field, "number must be finite"));
        }
        Ok(S::from_f64_exact(v))
    } else {
        Ok(S::from_int(parse_int(text)?))
    }
}

/// Render one scalar: a fraction string in the exact backend, a JSON number
/// otherwise.
pub fn scalar_to_value<S: Scalar>(value: &S) -> Value {
    if S::EXACT {
        Value::String(format!("{value}"))
    } else {
        serde_json::Number::from_f64(value.to_f64_lossy())
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(format!("{value}")))
    }
}

fn as_object<'v>(value: &'v Value, what: &str) -> Result<&'v Map<String, Value>, FileError> {
    value
        .as_object()
        .ok_or_else(|| field_err(what, "expected a JSON object"))
}

fn get<'v>(obj: &'v Map<String, Value>, field: &str) -> Result<&'v Value, FileError> {
    obj.get(field)
        .ok_or_else(|| field_err(field, "missing required field"))
}

fn as_array<'v>(value: &'v Value, field: &str, len: usize) -> Result<&'v Vec<Value>, FileError> {
    let arr = value
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array"))?;
    if arr.len() != len {
        return Err(field_err(field, format!("expected {len} entries, got {}", arr.len())));
    }
    Ok(arr)
}

/// Game file: `{"alpha": .., "beta": .., "delta": .., "epsilon": ..,
/// "theta": .., "omega": ..}` or `{"table": [[a,b,c] x 8]}` in canonical
/// profile order (a table is reduced to symmetric form under
/// `symmetry_tol`).
pub fn parse_game<S: Scalar>(json: &str, symmetry_tol: &S) -> Result<SymmetricGame<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "game")?;
    if let Some(table) = obj.get("table") {
        let rows = as_array(table, "table", 8)?;
        let mut triples = Vec::with_capacity(8);
        for (i, row) in rows.iter().enumerate() {
            let entries = as_array(row, &format!("table[{i}]"), 3)?;
            triples.push(PayoffTriple::new(
                scalar_from_value(&entries[0], &format!("table[{i}][0]"))?,
                scalar_from_value(&entries[1], &format!("table[{i}][1]"))?,
                scalar_from_value(&entries[2], &format!("table[{i}][2]"))?,
            ));
        }
        let table: [PayoffTriple<S>; 8] =
            triples.try_into().expect("length checked above");
        let general = GeneralThreePlayerGame::new(table)?;
        return Ok(crate::game::reduce_to_symmetric(&general, symmetry_tol)?);
    }
    Ok(SymmetricGame::new(
        scalar_from_value(get(obj, "alpha")?, "alpha")?,
        scalar_from_value(get(obj, "beta")?, "beta")?,
        scalar_from_value(get(obj, "delta")?, "delta")?,
        scalar_from_value(get(obj, "epsilon")?, "epsilon")?,
        scalar_from_value(get(obj, "theta")?, "theta")?,
        scalar_from_value(get(obj, "omega")?, "omega")?,
    )?)
}

const INDEPENDENT_KEYS: [&str; 10] =
    ["p1", "p3", "p5", "p6", "p13", "p15", "p18", "p20", "p22", "p27"];

fn independents_from_map<S: Scalar>(
    map: &Map<String, Value>,
) -> Result<IndependentSet<S>, FileError> {
    for key in map.keys() {
        if !INDEPENDENT_KEYS.contains(&key.as_str()) {
            return Err(field_err(key, "not one of the 10 independent probabilities"));
        }
    }
    let mut values = Vec::with_capacity(10);
    for key in INDEPENDENT_KEYS {
        values.push(scalar_from_value(get(map, key)?, key)?);
    }
    Ok(IndependentSet::from_values(
        values.try_into().expect("10 keys"),
    ))
}

/// Independents file: `{"independent": {"p1": .., ..., "p27": ..}}` or the
/// bare inner map.
pub fn parse_independents<S: Scalar>(json: &str) -> Result<IndependentSet<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "independents")?;
    match obj.get("independent") {
        Some(inner) => independents_from_map(as_object(inner, "independent")?),
        None => independents_from_map(obj),
    }
}

/// Behavior file: `{"p": [64 numbers]}` in canonical order, or
/// `{"independent": {...}}` which is completed through the reduced
/// constraint system.
pub fn parse_behavior<S: Scalar>(json: &str) -> Result<Behavior<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "behavior")?;
    if let Some(entries) = obj.get("p") {
        let arr = as_array(entries, "p", NUM_ENTRIES)?;
        let mut out = Vec::with_capacity(NUM_ENTRIES);
        for (i, v) in arr.iter().enumerate() {
            out.push(scalar_from_value(v, &format!("p[{}]", i + 1))?);
        }
        return Ok(Behavior::new(out)?);
    }
    if let Some(inner) = obj.get("independent") {
        let ind = independents_from_map(as_object(inner, "independent")?)?;
        return Ok(crate::behavior::complete_from_independent(&ind)?);
    }
    Err(field_err("behavior", "expected a `p` array or an `independent` map"))
}

/// `{"p": [...]}` rendering of a behavior.
pub fn behavior_to_value<S: Scalar>(behavior: &Behavior<S>) -> Value {
    let entries: Vec<Value> = behavior.entries().iter().map(scalar_to_value).collect();
    let mut obj = Map::new();
    obj.insert("p".to_string(), Value::Array(entries));
    Value::Object(obj)
}

/// Coins file: `{"coins": {"alice": [first, second], "bob": [...],
/// "chris": [...]}}` of head probabilities.
pub fn parse_coins<S: Scalar>(json: &str) -> Result<CoinParameters<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    parse_coins_value(&value)
}

fn parse_coins_value<S: Scalar>(value: &Value) -> Result<CoinParameters<S>, FileError> {
    let obj = as_object(value, "coins")?;
    let inner = as_object(get(obj, "coins")?, "coins")?;
    let pair = |field: &str| -> Result<[S; 2], FileError> {
        let arr = as_array(get(inner, field)?, field, 2)?;
        Ok([
            scalar_from_value(&arr[0], &format!("{field}[0]"))?,
            scalar_from_value(&arr[1], &format!("{field}[1]"))?,
        ])
    };
    let [af, asec] = pair("alice")?;
    let [bf, bsec] = pair("bob")?;
    let [cf, csec] = pair("chris")?;
    Ok(CoinParameters::new(af, asec, bf, bsec, cf, csec)?)
}

/// Either a behavior (possibly in completion form) or a coin file expanded
/// to its factorizable behavior.
pub fn parse_behavior_or_coins<S: Scalar>(json: &str) -> Result<Behavior<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "input")?;
    if obj.contains_key("coins") {
        let coins = parse_coins_value(&value)?;
        return Ok(crate::behavior::expand_factorizable(&coins));
    }
    parse_behavior(json)
}

const RATIO_KEYS: [&str; 5] = [
    "alpha_over_beta",
    "theta_over_beta",
    "delta_over_theta",
    "omega_over_beta",
    "epsilon_over_omega",
];

fn ratios_from_map<S: Scalar>(obj: &Map<String, Value>) -> Result<RatioGame<S>, FileError> {
    let mut values = Vec::with_capacity(5);
    for key in RATIO_KEYS {
        values.push(scalar_from_value(get(obj, key)?, key)?);
    }
    let [ab, tb, dt, ob, eo]: [S; 5] = values.try_into().expect("5 keys");
    Ok(RatioGame::new(ab, tb, dt, ob, eo)?)
}

/// Ratios file: the five ratio fields, either bare or under `"ratios"`.
pub fn parse_ratios<S: Scalar>(json: &str) -> Result<RatioGame<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "ratios")?;
    match obj.get("ratios") {
        Some(inner) => ratios_from_map(as_object(inner, "ratios")?),
        None => ratios_from_map(obj),
    }
}

/// Problem file: `{"ratios": {...}, "margin": .., "require_nonfactorizable":
/// bool, "warm_start": {...}}`; the last two are optional.
pub fn parse_problem<S: Scalar>(json: &str, seed: u64) -> Result<SearchProblem<S>, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "problem")?;
    let ratios = ratios_from_map(as_object(get(obj, "ratios")?, "ratios")?)?;
    let margin = scalar_from_value(get(obj, "margin")?, "margin")?;
    let mut problem = SearchProblem::new(ratios, margin)?;
    if let Some(flag) = obj.get("require_nonfactorizable") {
        problem.require_nonfactorizable = flag
            .as_bool()
            .ok_or_else(|| field_err("require_nonfactorizable", "expected a boolean"))?;
    }
    if let Some(start) = obj.get("warm_start") {
        problem.warm_start = Some(independents_from_map(as_object(start, "warm_start")?)?);
    }
    problem.seed = seed;
    Ok(problem)
}

fn complex_from_value(value: &Value, field: &str) -> Result<Complex64, FileError> {
    let pair = as_array(value, field, 2)?;
    let part = |v: &Value, which: &str| {
        v.as_f64()
            .ok_or_else(|| field_err(field, format!("{which} part must be a number")))
    };
    Ok(Complex64::new(part(&pair[0], "real")?, part(&pair[1], "imaginary")?))
}

/// State file: `{"pure": [[re,im] x 8]}` or `{"density": [[[re,im] x 8] x 8]}`.
pub fn parse_state(json: &str) -> Result<TripartiteState, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "state")?;
    if let Some(pure) = obj.get("pure") {
        let arr = as_array(pure, "pure", 8)?;
        let mut amps = Vec::with_capacity(8);
        for (i, v) in arr.iter().enumerate() {
            amps.push(complex_from_value(v, &format!("pure[{i}]"))?);
        }
        return Ok(TripartiteState::pure(amps)?);
    }
    if let Some(density) = obj.get("density") {
        let rows = as_array(density, "density", 8)?;
        let mut matrix = Vec::with_capacity(8);
        for (i, row) in rows.iter().enumerate() {
            let cols = as_array(row, &format!("density[{i}]"), 8)?;
            let mut out = Vec::with_capacity(8);
            for (j, v) in cols.iter().enumerate() {
                out.push(complex_from_value(v, &format!("density[{i}][{j}]"))?);
            }
            matrix.push(out);
        }
        return Ok(TripartiteState::density(matrix)?);
    }
    Err(field_err("state", "expected a `pure` or `density` field"))
}

/// Setup file: `{"alice": [[x,y,z],[x,y,z]], "bob": ..., "chris": ...}` of
/// unit direction vectors.
pub fn parse_setup(json: &str) -> Result<MeasurementSetup, FileError> {
    let value: Value = serde_json::from_str(json)?;
    let obj = as_object(&value, "setup")?;
    let pair = |field: &str| -> Result<[Direction; 2], FileError> {
        let arr = as_array(get(obj, field)?, field, 2)?;
        let dir = |v: &Value, which: &str| -> Result<Direction, FileError> {
            let xyz = as_array(v, which, 3)?;
            let comp = |k: usize| {
                xyz[k]
                    .as_f64()
                    .ok_or_else(|| field_err(which, "components must be numbers"))
            };
            Ok(Direction::new([comp(0)?, comp(1)?, comp(2)?])?)
        };
        Ok([
            dir(&arr[0], &format!("{field}[0]"))?,
            dir(&arr[1], &format!("{field}[1]"))?,
        ])
    };
    Ok(MeasurementSetup::new(pair("alice")?, pair("bob")?, pair("chris")?))
}

/// Parse a `--profile x,y,z` argument (components may be fractions).
pub fn parse_profile_arg<S: Scalar>(text: &str) -> Result<MixedProfile<S>, FileError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(field_err("profile", "expected three comma-separated probabilities"));
    }
    let x = scalar_from_text(parts[0], "profile.x")?;
    let y = scalar_from_text(parts[1], "profile.y")?;
    let z = scalar_from_text(parts[2], "profile.z")?;
    Ok(MixedProfile::new(x, y, z)?)
}
