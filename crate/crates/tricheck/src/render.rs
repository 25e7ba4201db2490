//! Text and JSON renderings of verdicts.

use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value as Json};
use tricheck_core::triples::QueryRecord;
use tricheck_core::{QueryKind, State, Value, Verdict};

pub fn state_json(s: &State) -> Json {
    let map: Map<String, Json> = s
        .iter()
        .map(|(k, v)| {
            let v = match v {
                Value::Int(n) => json!(n),
                Value::Bool(b) => json!(b),
            };
            (k.clone(), v)
        })
        .collect();
    Json::Object(map)
}

fn kind_name(k: QueryKind) -> &'static str {
    match k {
        QueryKind::Sat => "sat",
        QueryKind::Implies => "implies",
        QueryKind::Equiv => "equiv",
    }
}

fn query_line(r: &QueryRecord) -> String {
    let q = &r.query;
    let body = match (&q.kind, &q.right) {
        (QueryKind::Sat, _) | (_, None) => format!("sat({})", q.left),
        (QueryKind::Implies, Some(b)) => format!("{}  ==>  {}", q.left, b),
        (QueryKind::Equiv, Some(b)) => format!("{}  <=>  {}", q.left, b),
    };
    let d = q.domain;
    let mut s = format!(
        "{}: {} [f={}, q={}] = {}",
        r.purpose,
        body,
        d.free_radius(),
        d.quant_radius(),
        r.decision.result
    );
    if let Some(m) = &r.decision.model {
        let _ = write!(s, " at {m}");
    }
    s
}

/// Human-readable verdict, several lines.
pub fn verdict_text(v: &Verdict) -> String {
    let mut s = format!(
        "{}: {}\n",
        v.logic,
        if v.valid { "valid" } else { "invalid" }
    );
    if let Some(w) = &v.witness_pre {
        let _ = writeln!(s, "witness precondition: {w}");
    }
    if let Some(w) = &v.witness_post {
        let _ = writeln!(s, "witness postcondition: {w}");
    }
    if let Some(c) = &v.counterexample {
        let _ = writeln!(s, "counterexample: {c}");
    }
    if let Some(n) = &v.note {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(
        s,
        "domain: free radius {}, quant radius {}",
        v.domain.free_radius(),
        v.domain.quant_radius()
    );
    s.push_str("queries:\n");
    for r in &v.queries {
        let _ = writeln!(s, "  {}", query_line(r));
    }
    s
}

/// One self-contained JSON record.
pub fn verdict_json(v: &Verdict, elapsed: Duration) -> Json {
    let queries: Vec<Json> = v
        .queries
        .iter()
        .map(|r| {
            json!({
                "purpose": r.purpose,
                "kind": kind_name(r.query.kind),
                "left": r.query.left.to_string(),
                "right": r.query.right.as_ref().map(|a| a.to_string()),
                "result": r.decision.result,
                "model": r.decision.model.as_ref().map(state_json),
            })
        })
        .collect();
    json!({
        "logic": v.logic.name(),
        "valid": v.valid,
        "witness_pre": v.witness_pre.as_ref().map(|a| a.to_string()),
        "witness_post": v.witness_post.as_ref().map(|a| a.to_string()),
        "counterexample": v.counterexample.as_ref().map(state_json),
        "note": v.note,
        "queries": queries,
        "domain": {
            "free_radius": v.domain.free_radius(),
            "quant_radius": v.domain.quant_radius(),
        },
        "time_ms": elapsed.as_secs_f64() * 1000.0,
    })
}
