//! JSON formats and the `builtin:` registry.
//!
//! Combinatorics: `{"lines": 11, "points": [[1,2], [1,3,5,7], ...]}` with
//! 1-based labels; points sorted ascending, the list sorted lexicographically.
//! Arrangement: `{"field": {"cyclotomic": 10, "root_index": 3},
//! "lines": [["0","0","1"], ...]}` with coefficients in the textual
//! polynomial form of `CycNum`. Character: `{"order": 5, "exponents": [...]}`.
//! Cycle: `{"cycle": [5,6,11]}` or inline `5,6,11`.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use zariski_core::arrangement::{builtin_arrangement, Arrangement, ProjLine};
use zariski_core::character::{Character, TriangleCycle};
use zariski_core::combinatorics::{builtin_combinatorics, Combinatorics};
use zariski_core::cyclotomic::{CycNum, Embedding};
use zariski_core::wiring::{Event, WiringDiagram};

fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(Path::new(path))
        .with_context(|| format!("cannot read {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("{path} is not valid JSON"))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| anyhow!("{what} must be a nonnegative integer"))
}

/// A combinatorics from a JSON file or `builtin:K` / `builtin:K12`.
pub fn load_combinatorics(spec: &str) -> Result<Combinatorics> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_combinatorics(name).map_err(|e| anyhow!("{e}"));
    }
    let v = read_json(spec)?;
    let lines = as_usize(&v["lines"], "\"lines\"")?;
    let points = v["points"]
        .as_array()
        .ok_or_else(|| anyhow!("\"points\" must be an array"))?
        .iter()
        .map(|p| {
            p.as_array()
                .ok_or_else(|| anyhow!("each point must be an array of labels"))?
                .iter()
                .map(|l| as_usize(l, "line label"))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Combinatorics::new(lines, points))
}

pub fn combinatorics_json(c: &Combinatorics) -> Value {
    let mut points: Vec<Vec<usize>> = c
        .points()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    points.sort();
    json!({ "lines": c.n_lines(), "points": points })
}

/// An arrangement from a JSON file or `builtin:NAME` with NAME one of
/// N+, N-, M+, M-, FN+, FN-, FM+, FM-.
pub fn load_arrangement(spec: &str) -> Result<Arrangement> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_arrangement(name).map_err(|e| anyhow!("{e}"));
    }
    let v = read_json(spec)?;
    let n = v["field"]["cyclotomic"]
        .as_u64()
        .ok_or_else(|| anyhow!("\"field.cyclotomic\" must be an integer"))? as u32;
    let k = v["field"]["root_index"]
        .as_u64()
        .ok_or_else(|| anyhow!("\"field.root_index\" must be an integer"))? as u32;
    let embedding = Embedding::new(n, k).map_err(|e| anyhow!("{e}"))?;
    let rows = v["lines"]
        .as_array()
        .ok_or_else(|| anyhow!("\"lines\" must be an array"))?;
    let mut lines = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let coeffs = row
            .as_array()
            .filter(|r| r.len() == 3)
            .ok_or_else(|| anyhow!("line {} must be an array of 3 strings", i + 1))?;
        let mut parsed = Vec::with_capacity(3);
        for c in coeffs {
            let s = c
                .as_str()
                .ok_or_else(|| anyhow!("line {} coefficients must be strings", i + 1))?;
            parsed.push(
                CycNum::parse(s, n)
                    .map_err(|e| anyhow!("line {}: {e}", i + 1))?,
            );
        }
        let [a, b, c2]: [CycNum; 3] = parsed.try_into().unwrap();
        lines.push(ProjLine::new(a, b, c2).map_err(|e| anyhow!("line {}: {e}", i + 1))?);
    }
    Arrangement::new(lines, embedding).map_err(|e| anyhow!("{e}"))
}

pub fn arrangement_json(a: &Arrangement) -> Value {
    let e = a.embedding();
    let lines: Vec<Vec<String>> = a
        .lines()
        .iter()
        .map(|l| l.coeffs().iter().map(|c| c.to_poly_string()).collect())
        .collect();
    json!({
        "field": { "cyclotomic": e.field_order(), "root_index": e.root_index() },
        "lines": lines,
    })
}

pub fn load_character(path: &str) -> Result<Character> {
    let v = read_json(path)?;
    let order = v["order"]
        .as_u64()
        .ok_or_else(|| anyhow!("\"order\" must be an integer"))? as u32;
    let exponents = v["exponents"]
        .as_array()
        .ok_or_else(|| anyhow!("\"exponents\" must be an array"))?
        .iter()
        .map(|e| {
            e.as_u64()
                .map(|x| x as u32)
                .ok_or_else(|| anyhow!("exponents must be nonnegative integers"))
        })
        .collect::<Result<Vec<u32>>>()?;
    Character::new(order, exponents).map_err(|e| anyhow!("{e}"))
}

/// A cycle from an inline list `5,6,11` or a JSON file `{"cycle": [5,6,11]}`.
pub fn load_cycle(spec: &str) -> Result<TriangleCycle> {
    let labels: Vec<usize> = if spec.contains(',') {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad cycle label {s:?}"))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        let v = read_json(spec)?;
        v["cycle"]
            .as_array()
            .ok_or_else(|| anyhow!("\"cycle\" must be an array"))?
            .iter()
            .map(|l| as_usize(l, "cycle label"))
            .collect::<Result<Vec<_>>>()?
    };
    if labels.len() != 3 {
        bail!("a cycle has exactly 3 lines, got {}", labels.len());
    }
    TriangleCycle::new(labels[0], labels[1], labels[2]).map_err(|e| anyhow!("{e}"))
}

pub fn events_json(w: &WiringDiagram) -> Value {
    let events: Vec<Value> = w
        .events
        .iter()
        .map(|e| match e {
            Event::Node { at, wires } => json!({ "node": { "at": at, "wires": wires } }),
            Event::Crossing { at, sign, over, under } => {
                json!({ "cross": { "at": at, "sign": sign, "over": over, "under": under } })
            }
        })
        .collect();
    json!({ "initial_order": w.initial_order, "events": events })
}

/// Pretty-print with a trailing newline; key order is insertion order, which
/// every builder above fixes, so output is byte-stable.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
