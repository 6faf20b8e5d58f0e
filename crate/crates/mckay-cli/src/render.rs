//! Text rendering of result payloads.
//!
//! Everything here renders from the JSON payload rather than from live
//! engine values, so cached and freshly computed results go through the
//! same code path and produce identical bytes.

use serde_json::Value;

pub fn get<'a>(value: &'a Value, key: &str) -> Result<&'a Value, String> {
    value
        .get(key)
        .ok_or_else(|| format!("malformed payload: missing {key:?}"))
}

fn as_str<'a>(value: &'a Value, what: &str) -> Result<&'a str, String> {
    value
        .as_str()
        .ok_or_else(|| format!("malformed payload: {what} is not a string"))
}

fn as_array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>, String> {
    value
        .as_array()
        .ok_or_else(|| format!("malformed payload: {what} is not an array"))
}

fn monomial(vars: &[String], exponents: &[u64]) -> String {
    exponents
        .iter()
        .zip(vars)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// One term per line, "coefficient * monomial", coefficients right-aligned.
/// Terms arrive sorted by (total degree, lexicographic) from the series JSON.
pub fn series_plain(series: &Value) -> Result<String, String> {
    let vars: Vec<String> = as_array(get(series, "vars")?, "vars")?
        .iter()
        .map(|v| as_str(v, "variable name").map(str::to_string))
        .collect::<Result<_, _>>()?;
    let terms = as_array(get(series, "terms")?, "terms")?;
    let mut rows = Vec::with_capacity(terms.len());
    for term in terms {
        let pair = as_array(term, "term")?;
        if pair.len() != 2 {
            return Err("malformed payload: term is not an [exponent, coefficient] pair".into());
        }
        let exponents: Vec<u64> = as_array(&pair[0], "exponent")?
            .iter()
            .map(|e| {
                e.as_u64()
                    .ok_or_else(|| "malformed payload: exponent entry".to_string())
            })
            .collect::<Result<_, _>>()?;
        let coefficient = as_str(&pair[1], "coefficient")?.to_string();
        rows.push((coefficient, monomial(&vars, &exponents)));
    }
    if rows.is_empty() {
        return Ok("0\n".to_string());
    }
    let width = rows.iter().map(|(c, _)| c.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (coefficient, mono) in rows {
        if mono.is_empty() {
            out.push_str(&format!("{coefficient:>width$}\n"));
        } else {
            out.push_str(&format!("{coefficient:>width$} * {mono}\n"));
        }
    }
    Ok(out)
}

/// The factor list, one factor per line, MacMahon prefactor first.
pub fn factors_plain(payload: &Value) -> Result<String, String> {
    let mut lines: Vec<String> = Vec::new();
    if let Some(prefactor) = payload.get("macmahon").and_then(Value::as_str) {
        lines.push(prefactor.to_string());
    }
    for factor in as_array(get(payload, "factors")?, "factors")? {
        lines.push(as_str(get(factor, "rendered")?, "rendered factor")?.to_string());
    }
    if lines.is_empty() {
        // Empty product: the series is identically 1.
        lines.push("1".to_string());
    }
    Ok(lines.join("\n") + "\n")
}

/// Key-value lines with dotted paths for nested objects; arrays stay inline.
pub fn flatten_plain(value: &Value) -> String {
    fn go(prefix: &str, value: &Value, out: &mut String) {
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    go(&path, v, out);
                }
            }
            Value::String(s) => {
                out.push_str(prefix);
                out.push_str(": ");
                out.push_str(s);
                out.push('\n');
            }
            other => {
                out.push_str(prefix);
                out.push_str(": ");
                out.push_str(&other.to_string());
                out.push('\n');
            }
        }
    }
    let mut out = String::new();
    go("", value, &mut out);
    out
}

pub fn json_pretty(value: &Value) -> String {
    format!("{value:#}\n")
}
