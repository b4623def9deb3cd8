//! Fan documents on disk.
//!
//! ```json
//! {"name": "f2", "dim": 2,
//!  "rays": [[0,-1],[0,1],[-1,1],[1,1]],
//!  "max_cones": [[1,3],[2,3],[2,4],[1,4]],
//!  "curve_basis": [[0,-2,1,1],[1,1,0,0]],
//!  "ample": ["1/2", 1]}
//! ```
//!
//! Ray indices in `max_cones` are 1-based. Rationals are bare integers or
//! `"num/den"` strings.

use mirrorseidel::{format_rational, parse_rational, FanInput, Rational};
use serde_json::{json, Map, Value};

use crate::CliError;

/// Parses a fan document.
pub fn parse_input(text: &str) -> Result<FanInput, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(CliError::from_json)?;
    let obj = doc.as_object().ok_or_else(|| CliError::Schema("document must be an object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "dim" | "rays" | "max_cones" | "curve_basis" | "ample") {
            return Err(CliError::Schema(key.clone()));
        }
    }
    let name = match obj.get("name") {
        None => "unnamed".to_string(),
        Some(v) => v.as_str().ok_or_else(|| CliError::Schema("name".into()))?.to_string(),
    };
    let dimension = required(obj, "dim")?.as_u64().ok_or_else(|| CliError::Schema("dim".into()))? as usize;
    let rays = int_rows(required(obj, "rays")?, "rays")?;
    let max_cones = int_rows(required(obj, "max_cones")?, "max_cones")?
        .into_iter()
        .enumerate()
        .map(|(c, cone)| {
            cone.into_iter()
                .enumerate()
                .map(|(k, i)| match usize::try_from(i) {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(CliError::Schema(format!("max_cones[{c}][{k}]"))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let curve_basis = match obj.get("curve_basis") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            array(v, "curve_basis")?
                .iter()
                .enumerate()
                .map(|(a, row)| rational_row(row, &format!("curve_basis[{a}]")))
                .collect::<Result<_, _>>()?,
        ),
    };
    let ample = match obj.get("ample") {
        None | Some(Value::Null) => None,
        Some(v) => Some(rational_row(v, "ample")?),
    };
    Ok(FanInput { name, dimension, rays, max_cones, curve_basis, ample })
}

/// The document for `input`, in the same schema [`parse_input`] accepts.
pub fn render_input(input: &FanInput) -> String {
    let mut doc = Map::new();
    doc.insert("name".into(), json!(input.name));
    doc.insert("dim".into(), json!(input.dimension));
    doc.insert("rays".into(), json!(input.rays));
    let cones: Vec<Vec<usize>> = input.max_cones.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect();
    doc.insert("max_cones".into(), json!(cones));
    if let Some(basis) = &input.curve_basis {
        let rows: Vec<Vec<Value>> = basis.iter().map(|r| r.iter().map(rational_value).collect()).collect();
        doc.insert("curve_basis".into(), json!(rows));
    }
    if let Some(ample) = &input.ample {
        doc.insert("ample".into(), json!(ample.iter().map(rational_value).collect::<Vec<_>>()));
    }
    serde_json::to_string_pretty(&Value::Object(doc)).expect("plain values serialize")
}

/// Integers stay bare; everything else becomes `"num/den"`.
pub fn rational_value(x: &Rational) -> Value {
    match i64::try_from(x.to_integer()) {
        Ok(n) if x.is_integer() => json!(n),
        _ => json!(format_rational(x)),
    }
}

pub fn parse_rational_value(v: &Value, path: &str) -> Result<Rational, CliError> {
    let parsed = match v {
        Value::Number(n) => n.as_i64().map(mirrorseidel::int),
        Value::String(s) => parse_rational(s),
        _ => None,
    };
    parsed.ok_or_else(|| CliError::Schema(path.to_string()))
}

/// Comma-separated rationals, as given to `--ample`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(i, t)| parse_rational(t).ok_or_else(|| CliError::Schema(format!("ample[{i}]"))))
        .collect()
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| CliError::Schema(key.to_string()))
}

pub(crate) fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::Schema(path.to_string()))
}

fn int_rows(v: &Value, path: &str) -> Result<Vec<Vec<i64>>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(a, row)| {
            array(row, &format!("{path}[{a}]"))?
                .iter()
                .enumerate()
                .map(|(k, x)| x.as_i64().ok_or_else(|| CliError::Schema(format!("{path}[{a}][{k}]"))))
                .collect()
        })
        .collect()
}

fn rational_row(v: &Value, path: &str) -> Result<Vec<Rational>, CliError> {
    array(v, path)?.iter().enumerate().map(|(k, x)| parse_rational_value(x, &format!("{path}[{k}]"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mirrorseidel::{catalog, ratio};

    const F2: &str = r#"{"name": "f2", "dim": 2,
        "rays": [[0,-1],[0,1],[-1,1],[1,1]],
        "max_cones": [[1,3],[2,3],[2,4],[1,4]],
        "curve_basis": [[0,-2,1,1],[1,1,0,0]]}"#;

    #[test]
    fn f2_document_matches_catalog() {
        let parsed = parse_input(F2).unwrap();
        assert_eq!(parsed, catalog::f2_input());
    }

    #[test]
    fn missing_rays_names_the_key() {
        let err = parse_input(r#"{"dim": 2, "max_cones": []}"#).unwrap_err();
        assert_eq!(err, CliError::Schema("rays".into()));
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        match parse_input("{\n  \"dim\": 2,\n  \"rays\": [[1,0],\n}") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_entries_name_their_path() {
        let doc = F2.replace("[1,1,0,0]", "[1,\"x\",0,0]");
        assert_eq!(parse_input(&doc).unwrap_err(), CliError::Schema("curve_basis[1][1]".into()));
        let doc = F2.replace("[1,3]", "[0,3]");
        assert_eq!(parse_input(&doc).unwrap_err(), CliError::Schema("max_cones[0][0]".into()));
    }

    #[test]
    fn rationals_parse_from_text_and_integers() {
        let doc = F2.replace("}", r#", "ample": ["3/2", 1]}"#);
        assert_eq!(parse_input(&doc).unwrap().ample, Some(vec![ratio(3, 2), ratio(1, 1)]));
        assert_eq!(parse_rational_list("1,-1/3").unwrap(), vec![ratio(1, 1), ratio(-1, 3)]);
    }

    #[test]
    fn rational_curve_basis_has_full_rank() {
        let input = catalog::p2_z3_input();
        let back = parse_input(&render_input(&input)).unwrap();
        assert_eq!(back, input);
        assert_eq!(back.curve_basis.unwrap().len(), 7);
    }

    #[test]
    fn catalog_documents_round_trip() {
        for entry in catalog::ENTRIES {
            let input = (entry.input)();
            assert_eq!(parse_input(&render_input(&input)).unwrap(), input);
        }
    }
}
