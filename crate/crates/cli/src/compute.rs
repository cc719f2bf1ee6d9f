//! Verdict computation with the cache in front and a worker pool behind.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use simplexdet_core::classifier::{
    check_proper, classify, ugly_by_per, ClassifyOptions, Route, SkipProperLookup, Tri, Verdict,
};
use simplexdet_core::weights::{a_d, min_distance};
use simplexdet_core::{Error, Result};

use crate::cache::{Cache, Variant};
use crate::output::{big, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScanMode {
    /// Only the minimum-weight criterion.
    Per,
    /// Only properness.
    Proper,
    /// The full verdict.
    Full,
}

/// Lengths handed to the pool at a time; the deadline is checked between chunks.
const CHUNK: usize = 64;

fn verdict_value(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn tri_str(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "yes",
        Tri::No => "no",
        Tri::Unknown => "unknown",
    }
}

fn proper_value(k: u32, n: u64, skip: bool, opts: &ClassifyOptions) -> Result<Value> {
    let d = check_proper(k, n, skip, opts.route, &opts.budget)?;
    Ok(match d.value {
        Tri::Unknown => Value::Null,
        v => json!(v == Tri::Yes),
    })
}

/// Computes the payload stored under `variant` for `(k, n)`.
pub fn fresh(k: u32, n: u64, variant: Variant, opts: &ClassifyOptions, lookup: Option<&dyn SkipProperLookup>) -> Result<Value> {
    match variant {
        Variant::Primal => classify(k, n, false, opts, lookup).map(|v| verdict_value(&v)),
        Variant::Dual => classify(k, n, true, opts, None).map(|v| verdict_value(&v)),
        Variant::Proper => proper_value(k, n, false, opts),
        Variant::SkipProper => proper_value(k, n, true, opts),
    }
}

/// A payload worth caching: verdicts with every property decided, or a decided flag.
fn cacheable(v: &Value) -> bool {
    match v {
        Value::Null => false,
        Value::Object(m) => ["proper", "good", "satisfactory"].iter().all(|f| m.get(*f) != Some(&json!("unknown"))),
        _ => true,
    }
}

/// One classification through the cache.
pub fn classify_cached(cache: &mut Cache, k: u32, n: u64, dual: bool, opts: &ClassifyOptions) -> Result<Verdict> {
    let variant = if dual { Variant::Dual } else { Variant::Primal };
    let payload = match cache.get(k, n, variant) {
        Some(v) => v,
        None => {
            let v = fresh(k, n, variant, opts, Some(&*cache))?;
            if cacheable(&v) {
                cache.put(k, n, variant, v.clone())?;
            }
            v
        }
    };
    serde_json::from_value(payload).map_err(|e| Error::Invariant(format!("verdict payload: {e}")))
}

fn per_row(k: u32, n: u64) -> Result<Vec<Value>> {
    Ok(vec![json!(n), json!(min_distance(k, n)?), big(&a_d(k, n)?), json!(ugly_by_per(k, n)?)])
}

fn verdict_row(n: u64, v: &Value) -> Vec<Value> {
    let f = |name: &str| v.get(name).cloned().unwrap_or(Value::Null);
    vec![json!(n), f("proper"), f("good"), f("satisfactory"), f("ugly_by_per"), f("ugly_witness_weight"), f("decided_by")]
}

/// Classifies `from..=to` in ascending order. Cached verdicts are reused,
/// new ones computed on the pool and appended in order.
pub fn scan(
    cache: &mut Cache,
    k: u32,
    from: u64,
    to: u64,
    mode: ScanMode,
    opts: &ClassifyOptions,
    deadline: Option<Instant>,
) -> Result<Table> {
    let mut table = match mode {
        ScanMode::Per => Table::new(0, &["n", "d", "a_d", "ugly_by_per"]),
        ScanMode::Proper => Table::new(0, &["n", "proper"]),
        ScanMode::Full => Table::new(0, &["n", "proper", "good", "satisfactory", "ugly_by_per", "ugly_witness_weight", "decided_by"]),
    };
    let ns: Vec<u64> = (from..=to).collect();
    for chunk in ns.chunks(CHUNK) {
        if deadline.is_some_and(|d| Instant::now() > d) {
            table.truncated = Some(format!("time budget reached before n = {}", chunk[0]));
            break;
        }
        if mode == ScanMode::Per {
            let rows: Vec<Result<Vec<Value>>> = chunk.par_iter().map(|&n| per_row(k, n)).collect();
            for r in rows {
                table.push(r?);
            }
            continue;
        }
        let variant = if mode == ScanMode::Full { Variant::Primal } else { Variant::Proper };
        let cached: Vec<Option<Value>> = chunk.iter().map(|&n| cache.get(k, n, variant)).collect();
        let shared: &Cache = cache;
        let computed: Vec<Result<Option<(Value, Option<Value>)>>> = chunk
            .par_iter()
            .zip(&cached)
            .map(|(&n, c)| {
                if c.is_some() {
                    return Ok(None);
                }
                let v = fresh(k, n, variant, opts, Some(shared))?;
                // Proper lengths also record the lifting flag for later scans.
                let skip = if mode == ScanMode::Full && v.get("proper") == Some(&json!("yes")) {
                    Some(fresh(k, n, Variant::SkipProper, opts, None)?)
                } else {
                    None
                };
                Ok(Some((v, skip)))
            })
            .collect();
        for ((&n, c), r) in chunk.iter().zip(cached).zip(computed) {
            let v = match (c, r?) {
                (Some(v), _) => v,
                (None, Some((v, skip))) => {
                    if cacheable(&v) {
                        cache.put(k, n, variant, v.clone())?;
                    }
                    if let Some(s) = skip.filter(cacheable) {
                        cache.put(k, n, Variant::SkipProper, s)?;
                    }
                    v
                }
                (None, None) => unreachable!("every uncached length is computed"),
            };
            match mode {
                ScanMode::Full => table.push(verdict_row(n, &v)),
                _ => table.push(vec![json!(n), json!(match v.as_bool() {
                    Some(b) => tri_str(Tri::from_bool(b)),
                    None => "unknown",
                })]),
            }
        }
    }
    Ok(table)
}

/// Default options with the given route.
pub fn options(route: Route) -> ClassifyOptions {
    ClassifyOptions { route, ..Default::default() }
}
