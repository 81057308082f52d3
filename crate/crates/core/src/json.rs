//! JSON file formats for topologies, schemes, decomposition maps and reports.
//!
//! Numbers are read from either JSON numbers or strings, always exactly, and
//! written as strings in the canonical form of [`format_rational`].

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{ChannelMatrix, Component, DecompositionMap, GdofReport, Link, Scheme, Stream};
use crate::rational::{format_rational, parse_rational, Rational};

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rationals_to_json(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rational_to_json).collect())
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => Ok(parse_rational(&n.to_string())?),
        other => Err(Error::Format(format!("expected a number or numeric string, got {other}"))),
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Format(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("`{what}` must be an array")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| Error::Format(format!("`{what}` must be a positive integer")))?;
    if i == 0 {
        return Err(Error::Format(format!("`{what}` is 1-based, got 0")));
    }
    Ok(i as usize - 1)
}

pub fn channel_to_json(ch: &ChannelMatrix) -> Value {
    json!({
        "K": ch.k(),
        "alpha": ch.rows().iter().map(|row| rationals_to_json(row)).collect::<Vec<_>>(),
    })
}

pub fn channel_from_json(v: &Value) -> Result<ChannelMatrix> {
    let k = field(v, "K")?
        .as_u64()
        .ok_or_else(|| Error::Format("`K` must be a positive integer".into()))? as usize;
    let rows = array(field(v, "alpha")?, "alpha")?;
    if rows.len() != k {
        return Err(Error::NonSquare { row: 0, len: rows.len(), expected: k });
    }
    let raw = rows
        .iter()
        .map(|row| array(row, "alpha row")?.iter().map(rational_from_json).collect())
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    ChannelMatrix::new(raw)
}

pub fn scheme_to_json(s: &Scheme) -> Value {
    let streams: Vec<Value> = s
        .streams
        .iter()
        .map(|st| {
            json!({
                "user": st.user + 1,
                "vector": rationals_to_json(&st.vector),
                "power_exp": rational_to_json(&st.power_exp),
            })
        })
        .collect();
    json!({ "n": s.n, "streams": streams })
}

/// Reads a scheme without checking it against a channel; see
/// [`crate::model::validate_scheme`].
pub fn scheme_from_json(v: &Value) -> Result<Scheme> {
    let n = field(v, "n")?
        .as_u64()
        .ok_or_else(|| Error::Format("`n` must be a positive integer".into()))? as usize;
    let streams = array(field(v, "streams")?, "streams")?
        .iter()
        .map(|st| {
            Ok(Stream {
                user: index(field(st, "user")?, "user")?,
                vector: array(field(st, "vector")?, "vector")?
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<_>>()?,
                power_exp: rational_from_json(field(st, "power_exp")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scheme { n, streams })
}

fn links_to_json(links: &[Link]) -> Value {
    Value::Array(
        links
            .iter()
            .map(|l| json!([l.receiver + 1, l.transmitter + 1]))
            .collect(),
    )
}

pub fn links_from_json(v: &Value) -> Result<Vec<Link>> {
    array(v, "links")?
        .iter()
        .map(|pair| {
            let pair = array(pair, "link")?;
            if pair.len() != 2 {
                return Err(Error::Format("a link is a [receiver, transmitter] pair".into()));
            }
            Ok(Link::new(index(&pair[0], "receiver")?, index(&pair[1], "transmitter")?))
        })
        .collect()
}

pub fn map_to_json(m: &DecompositionMap) -> Value {
    json!({
        "tim_links": links_to_json(&m.links(Component::Tim)),
        "tin_links": links_to_json(&m.links(Component::Tin)),
    })
}

pub fn map_from_json(v: &Value) -> Result<DecompositionMap> {
    let mut m = DecompositionMap::new();
    for (key, tag) in [("tim_links", Component::Tim), ("tin_links", Component::Tin)] {
        let links = match v.get(key) {
            Some(list) => links_from_json(list)?,
            None => Vec::new(),
        };
        for l in links {
            if m.get(l).is_some() {
                return Err(Error::MapMismatch(format!(
                    "link ({}, {}) tagged twice",
                    l.receiver + 1,
                    l.transmitter + 1
                )));
            }
            m.set(l, tag);
        }
    }
    Ok(m)
}

/// `{"n", "d_prime", "d_dprime", "gdof"}`, plus `"streams"` when requested.
pub fn report_to_json(r: &GdofReport, with_streams: bool) -> Value {
    let col = |f: fn(&crate::model::UserGdof) -> &Rational| {
        Value::Array(r.users.iter().map(|u| rational_to_json(f(u))).collect())
    };
    let mut obj = Map::new();
    obj.insert("n".into(), json!(r.n));
    obj.insert("d_prime".into(), col(|u| &u.d_prime));
    obj.insert("d_dprime".into(), col(|u| &u.d_dprime));
    obj.insert("gdof".into(), col(|u| &u.gdof));
    if with_streams {
        obj.insert(
            "streams".into(),
            Value::Array(r.users.iter().map(|u| rationals_to_json(&u.streams)).collect()),
        );
    }
    Value::Object(obj)
}

pub fn parse_document(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}
