use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use timtin::decomp::{evaluate_map_with, search, time_share, DecompositionResult, SearchOptions, TinObjective};
use timtin::evaluator::evaluate;
use timtin::evaluator::oracle::{finite_p_rate, slope_estimate};
use timtin::json::{
    channel_from_json, map_from_json, map_to_json, parse_document, rational_from_json, rational_to_json,
    rationals_to_json, report_to_json, scheme_from_json, scheme_to_json,
};
use timtin::par::Execution;
use timtin::rational::{parse_rational, Rational};
use timtin::tim::{tim_solve, TimTopology};
use timtin::tin::{tin_feasible, tin_symmetric, ConstraintNode, TinTarget};
use timtin::{ChannelMatrix, Link};

pub type Outcome = Result<Value, String>;

pub fn render(doc: &Value) -> String {
    serde_json::to_string_pretty(doc).expect("values always serialize")
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_channel(path: &Path) -> Result<ChannelMatrix, String> {
    channel_from_json(&read_json(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn rationals(items: &[String]) -> Result<Vec<Rational>, String> {
    items.iter().map(|s| parse_rational(s.trim()).map_err(|e| e.to_string())).collect()
}

fn float(x: f64) -> Value {
    Value::String(format!("{x:.6}"))
}

pub fn eval(topology: &Path, scheme: &Path, with_streams: bool) -> Outcome {
    let channel = read_channel(topology)?;
    let scheme = scheme_from_json(&read_json(scheme)?).map_err(|e| e.to_string())?;
    let report = evaluate(&scheme, &channel).map_err(|e| e.to_string())?;
    Ok(report_to_json(&report, with_streams))
}

pub fn oracle(topology: &Path, scheme: &Path, powers: &[f64], seed: u64) -> Outcome {
    let channel = read_channel(topology)?;
    let scheme = scheme_from_json(&read_json(scheme)?).map_err(|e| e.to_string())?;
    let mut rates = Vec::new();
    for &p in powers {
        let r = finite_p_rate(&scheme, &channel, p, seed).map_err(|e| e.to_string())?;
        rates.push(Value::Array(r.into_iter().map(float).collect()));
    }
    let mut slopes = Vec::new();
    for pair in powers.windows(2) {
        let s = slope_estimate(&scheme, &channel, pair[0], pair[1], seed).map_err(|e| e.to_string())?;
        slopes.push(json!({
            "P_low": format!("{:e}", pair[0]),
            "P_high": format!("{:e}", pair[1]),
            "slopes": s.into_iter().map(float).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "seed": seed,
        "P": powers.iter().map(|p| format!("{p:e}")).collect::<Vec<_>>(),
        "rates": rates,
        "slopes": slopes,
    }))
}

fn node_to_json(node: &ConstraintNode) -> Value {
    match node {
        ConstraintNode::User(k) => json!(k + 1),
        ConstraintNode::Reference => json!("reference"),
    }
}

pub fn tin(topology: &Path, target: Option<&[String]>) -> Outcome {
    let channel = read_channel(topology)?;
    let Some(target) = target else {
        let sym = tin_symmetric(&channel);
        return Ok(json!({
            "d_sym": rational_to_json(&sym.d_sym),
            "r": sym.solution.r.as_deref().map(rationals_to_json),
            "feasible": sym.solution.feasible,
        }));
    };
    let d = rationals(target)?;
    let sol = tin_feasible(&channel, &TinTarget::new(d.clone())).map_err(|e| e.to_string())?;
    let mut doc = Map::new();
    doc.insert("target".into(), rationals_to_json(&d));
    doc.insert("r".into(), sol.r.as_deref().map_or(Value::Null, rationals_to_json));
    doc.insert("feasible".into(), json!(sol.feasible));
    if let Some(cycle) = &sol.negative_cycle {
        doc.insert(
            "certificate".into(),
            json!({
                "cycle": cycle.nodes.iter().map(node_to_json).collect::<Vec<_>>(),
                "weight": rational_to_json(&cycle.weight),
            }),
        );
    }
    Ok(Value::Object(doc))
}

fn tim_doc(topo: &TimTopology) -> Value {
    let sol = tim_solve(topo);
    json!({
        "fractions": rationals_to_json(&sol.fractions),
        "method": sol.method.as_str(),
        "user_methods": sol.user_methods.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
        "n": sol.n,
        "directions": sol.directions.iter().map(|dirs| {
            Value::Array(dirs.iter().map(|v| rationals_to_json(v)).collect())
        }).collect::<Vec<_>>(),
    })
}

pub fn tim_from_file(topology: &Path, threshold: &str) -> Outcome {
    let channel = read_channel(topology)?;
    let threshold = parse_rational(threshold).map_err(|e| e.to_string())?;
    Ok(tim_doc(&TimTopology::from_channel(&channel, &threshold)))
}

fn parse_link(text: &str) -> Result<Link, String> {
    let bad = || format!("link `{text}` is not receiver:transmitter with 1-based indices");
    let (r, t) = text.trim().split_once(':').ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let t: usize = t.trim().parse().map_err(|_| bad())?;
    if r == 0 || t == 0 {
        return Err(bad());
    }
    Ok(Link::new(r - 1, t - 1))
}

pub fn tim_from_links(k: usize, links: &[String]) -> Outcome {
    let links = links.iter().map(|l| parse_link(l)).collect::<Result<Vec<_>, _>>()?;
    let topo = TimTopology::new(k, links).map_err(|e| e.to_string())?;
    Ok(tim_doc(&topo))
}

fn result_doc(r: &DecompositionResult) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("mask".into(), json!(r.map.bitmask()));
    doc.insert("map".into(), map_to_json(&r.map));
    doc.insert("tin_fractions".into(), rationals_to_json(&r.tin_fractions));
    doc.insert("tin_power".into(), rationals_to_json(&r.tin_power));
    doc.insert("tim_fractions".into(), rationals_to_json(&r.tim_fractions));
    doc.insert("tim_method".into(), json!(r.tim_method.as_str()));
    doc.insert("products".into(), rationals_to_json(&r.products));
    doc.insert("verified".into(), rationals_to_json(&r.verified));
    doc.insert("symmetric".into(), rational_to_json(&r.symmetric_value()));
    doc.insert("verdict".into(), json!(r.verdict));
    doc
}

fn emit_scheme(dir: &Path, name: &str, r: &DecompositionResult) -> Result<Value, String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, render(&scheme_to_json(&r.scheme)) + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(json!(path.display().to_string()))
}

pub fn decompose(topology: &Path, cap: usize, sequential: bool, emit: Option<&Path>) -> Outcome {
    let channel = read_channel(topology)?;
    let execution = if sequential { Execution::Sequential } else { Execution::Parallel };
    let report = search(&channel, &SearchOptions { exhaustive_cap: cap, execution }).map_err(|e| e.to_string())?;
    let mut frontier = Vec::new();
    for (rank, &i) in report.frontier.iter().enumerate() {
        let r = &report.results[i];
        let mut doc = result_doc(r);
        if let Some(dir) = emit {
            let name = format!("frontier_{rank:03}_mask_{}.json", r.map.bitmask());
            doc.insert("scheme_file".into(), emit_scheme(dir, &name, r)?);
        }
        frontier.push(Value::Object(doc));
    }
    Ok(json!({
        "exhaustive": report.exhaustive,
        "cross_links": channel.cross_links().iter().map(|l| json!([l.receiver + 1, l.transmitter + 1])).collect::<Vec<_>>(),
        "maps_evaluated": report.results.len(),
        "frontier": frontier,
        "failures": report.failures().map(|r| json!(r.map.bitmask())).collect::<Vec<_>>(),
        "maps": report.results.iter().map(|r| Value::Object(result_doc(r))).collect::<Vec<_>>(),
    }))
}

pub fn decompose_one(topology: &Path, map: &Path, targets: Option<&[String]>, emit: Option<&Path>) -> Outcome {
    let channel = read_channel(topology)?;
    let map = map_from_json(&read_json(map)?).map_err(|e| e.to_string())?;
    let objective = match targets {
        Some(t) => TinObjective::Targets(rationals(t)?),
        None => TinObjective::Symmetric,
    };
    let r = evaluate_map_with(&channel, &map, &objective).map_err(|e| e.to_string())?;
    let mut doc = result_doc(&r);
    if let Some(dir) = emit {
        let name = format!("map_mask_{}.json", r.map.bitmask());
        doc.insert("scheme_file".into(), emit_scheme(dir, &name, &r)?);
    }
    doc.insert("scheme".into(), scheme_to_json(&r.scheme));
    Ok(Value::Object(doc))
}

fn frontier_tuples(doc: &Value) -> Result<Vec<Vec<Rational>>, String> {
    let frontier = doc
        .get("frontier")
        .and_then(Value::as_array)
        .ok_or("report has no `frontier` array")?;
    frontier
        .iter()
        .map(|point| {
            point
                .get("verified")
                .and_then(Value::as_array)
                .ok_or_else(|| "frontier point has no `verified` tuple".to_string())?
                .iter()
                .map(|v| rational_from_json(v).map_err(|e| e.to_string()))
                .collect()
        })
        .collect()
}

pub fn timeshare(weights: &[String], tuples: &[String], from: Option<&Path>) -> Outcome {
    let weights = rationals(weights)?;
    let tuples = match from {
        Some(path) => frontier_tuples(&read_json(path)?)?,
        None => tuples
            .iter()
            .map(|t| rationals(&t.split(',').map(str::to_owned).collect::<Vec<_>>()))
            .collect::<Result<_, _>>()?,
    };
    let gdof = time_share(&tuples, &weights).map_err(|e| e.to_string())?;
    Ok(json!({ "weights": rationals_to_json(&weights), "gdof": rationals_to_json(&gdof) }))
}
