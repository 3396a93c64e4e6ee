//! Canonical JSON text: sorted keys, fixed float formatting, no -0.

use serde_json::Value;

/// Serializes `v` with object keys sorted and every float printed with 17
/// significant digits, so equal values give equal bytes.
pub fn to_canonical(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_float(x: f64, out: &mut String) {
    if !x.is_finite() {
        // JSON has no NaN/inf; null keeps the document parseable
        out.push_str("null");
        return;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    out.push_str(&format!("{x:.16e}"));
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(v: &Value, level: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                write_float(n.as_f64().unwrap_or(f64::NAN), out);
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                indent(level + 1, out);
                write_value(x, level + 1, out);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push(']');
        }
        Value::Object(o) => {
            if o.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = o.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(level + 1, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&o[*k], level + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push('}');
        }
    }
}

/// Float that always serializes as a float, even when integral.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let v = json!({"b": 1, "a": [0.5, -0.0, 3]});
        assert_eq!(
            to_canonical(&v),
            "{\n  \"a\": [\n    5.0000000000000000e-1,\n    0.0000000000000000e0,\n    3\n  ],\n  \"b\": 1\n}\n"
        );
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, std::f64::consts::PI] {
            let text = to_canonical(&float(x));
            let back: f64 = text.trim().parse().unwrap();
            assert_eq!(back, x);
        }
    }
}
