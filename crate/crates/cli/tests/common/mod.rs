//! Validator for the subset of JSON Schema the files in docs/schemas use.
//! Unknown keywords panic rather than pass silently.
#![allow(dead_code)]

use std::path::PathBuf;

use regex::Regex;
use serde_json::Value;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn load_schema(name: &str) -> Value {
    let path = repo_root().join("docs/schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Errors as `path: message`; empty when the document conforms.
pub fn validate(schema: &Value, doc: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, schema, doc, "$", &mut errors);
    errors
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(root: &Value, schema: &Value, doc: &Value, at: &str, errors: &mut Vec<String>) {
    let obj = schema.as_object().expect("schema nodes are objects");
    for (key, rule) in obj {
        match key.as_str() {
            "$schema" | "title" | "description" | "$defs" => {}
            "$ref" => {
                let name = rule.as_str().unwrap().strip_prefix("#/$defs/").expect("local refs only");
                check(root, &root["$defs"][name], doc, at, errors);
            }
            "type" => {
                if !type_matches(rule.as_str().unwrap(), doc) {
                    errors.push(format!("{at}: expected {rule}, got {doc}"));
                }
            }
            "required" => {
                for field in rule.as_array().unwrap() {
                    if doc.is_object() && doc.get(field.as_str().unwrap()).is_none() {
                        errors.push(format!("{at}: missing {field}"));
                    }
                }
            }
            "properties" => {
                if let Some(fields) = doc.as_object() {
                    for (name, value) in fields {
                        if let Some(sub) = rule.get(name) {
                            check(root, sub, value, &format!("{at}.{name}"), errors);
                        }
                    }
                }
            }
            "additionalProperties" => {
                assert_eq!(rule, &Value::Bool(false), "only `false` is supported");
                if let Some(fields) = doc.as_object() {
                    for name in fields.keys() {
                        if obj.get("properties").and_then(|p| p.get(name)).is_none() {
                            errors.push(format!("{at}: unexpected field {name}"));
                        }
                    }
                }
            }
            "items" => {
                if let Some(items) = doc.as_array() {
                    for (i, item) in items.iter().enumerate() {
                        check(root, rule, item, &format!("{at}[{i}]"), errors);
                    }
                }
            }
            "minItems" | "maxItems" => {
                if let Some(items) = doc.as_array() {
                    let bound = rule.as_u64().unwrap() as usize;
                    let ok = if key == "minItems" { items.len() >= bound } else { items.len() <= bound };
                    if !ok {
                        errors.push(format!("{at}: {key} {bound} violated by {} items", items.len()));
                    }
                }
            }
            "minimum" => {
                if let (Some(x), Some(min)) = (doc.as_f64(), rule.as_f64()) {
                    if x < min {
                        errors.push(format!("{at}: {x} below {min}"));
                    }
                }
            }
            "pattern" => {
                if let Some(s) = doc.as_str() {
                    if !Regex::new(rule.as_str().unwrap()).unwrap().is_match(s) {
                        errors.push(format!("{at}: {s:?} does not match {rule}"));
                    }
                }
            }
            "enum" => {
                if !rule.as_array().unwrap().contains(doc) {
                    errors.push(format!("{at}: {doc} not in {rule}"));
                }
            }
            "const" => {
                if rule != doc {
                    errors.push(format!("{at}: expected {rule}"));
                }
            }
            "oneOf" => {
                let passing = rule
                    .as_array()
                    .unwrap()
                    .iter()
                    .filter(|sub| {
                        let mut e = Vec::new();
                        check(root, sub, doc, at, &mut e);
                        e.is_empty()
                    })
                    .count();
                if passing != 1 {
                    errors.push(format!("{at}: {passing} oneOf branches match"));
                }
            }
            other => panic!("unsupported schema keyword {other}"),
        }
    }
}
