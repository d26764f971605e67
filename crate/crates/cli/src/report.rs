//! JSON and TSV rendering.

use iqp_matroid::clifford::{Dyadic, GaussianInteger};
use iqp_matroid::{BitVector, Complex64};
use serde_json::{json, Value};

use crate::{CliError, OutputFormat};

/// `v` rounded to 12 significant digits; integral values print as integers.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::String(v.to_string());
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float reparses");
    if rounded == rounded.trunc() && rounded.abs() < 9.0e15 {
        return json!(rounded as i64);
    }
    json!(rounded)
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn gaussian(g: GaussianInteger) -> Value {
    json!({ "re": g.re.to_string().parse::<Value>().unwrap(), "im": g.im.to_string().parse::<Value>().unwrap() })
}

pub fn dyadic(d: Dyadic) -> Value {
    json!({
        "numerator": d.numerator.to_string().parse::<Value>().unwrap(),
        "log2_denominator": d.log2_den,
    })
}

pub fn bits(v: &BitVector) -> Value {
    Value::String(v.to_string())
}

pub fn bit_list(vs: &[BitVector]) -> Value {
    Value::Array(vs.iter().map(bits).collect())
}

pub fn error_json(e: &CliError) -> String {
    let v = json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": e.exit_code(),
        }
    });
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(v).unwrap()),
        OutputFormat::Tsv => {
            let mut out = String::new();
            flatten("", v, &mut out);
            out
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, out);
            }
        }
        Value::String(s) => {
            out.push_str(prefix);
            out.push('\t');
            out.push_str(s);
            out.push('\n');
        }
        other => {
            out.push_str(prefix);
            out.push('\t');
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}
