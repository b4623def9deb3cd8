//! Series documents.
//!
//! A series is `{"terms": [{"exp": [..], "coeff": "num/den"}, ..], "order": N,
//! "coords": "y"|"q"}` with exponents in γ-coordinates. Terms are sorted by
//! degree, then lexicographically by exponent, so equal series render to
//! identical bytes.

use std::fmt::Write as _;
use std::sync::Arc;

use mirrorseidel::series_ring::{Coordinates, DivisorSeries, NovikovSeries};
use mirrorseidel::{format_rational, int, Grading, Rational};
use serde_json::{json, Value};

use crate::input::{array, parse_rational_value, rational_value};
use crate::CliError;

fn sorted(s: &NovikovSeries) -> Vec<(Vec<Rational>, &Rational)> {
    let g = s.grading();
    let mut terms: Vec<(i64, Vec<Rational>, &Rational)> =
        s.terms().map(|(d, c)| (g.scaled_degree(d), g.gamma_coords(d), c)).collect();
    terms.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    terms.into_iter().map(|(_, x, c)| (x, c)).collect()
}

pub fn series_value(s: &NovikovSeries, coords: Coordinates) -> Value {
    let terms: Vec<Value> = sorted(s)
        .into_iter()
        .map(|(x, c)| json!({"exp": x.iter().map(rational_value).collect::<Vec<_>>(), "coeff": format_rational(c)}))
        .collect();
    json!({"terms": terms, "order": s.order(), "coords": coords.as_str()})
}

pub fn divisor_value(d: &DivisorSeries) -> Value {
    Value::Array(d.components.iter().map(|c| series_value(c, d.coords)).collect())
}

pub fn parse_coords(v: &Value, path: &str) -> Result<Coordinates, CliError> {
    match v.as_str() {
        Some("y") => Ok(Coordinates::Y),
        Some("q") => Ok(Coordinates::Q),
        _ => Err(CliError::Schema(path.to_string())),
    }
}

/// Reads one series document in the context of `grading`.
pub fn parse_series(v: &Value, grading: &Arc<Grading>, path: &str) -> Result<(NovikovSeries, Coordinates), CliError> {
    let field = |key: &str| v.get(key).ok_or_else(|| CliError::Schema(format!("{path}.{key}")));
    let order = field("order")?.as_u64().and_then(|n| u32::try_from(n).ok());
    let order = order.ok_or_else(|| CliError::Schema(format!("{path}.order")))?;
    let coords = parse_coords(field("coords")?, &format!("{path}.coords"))?;
    let mut terms = Vec::new();
    for (t, term) in array(field("terms")?, &format!("{path}.terms"))?.iter().enumerate() {
        let here = format!("{path}.terms[{t}]");
        let exp = term.get("exp").ok_or_else(|| CliError::Schema(format!("{here}.exp")))?;
        let x: Vec<Rational> = array(exp, &format!("{here}.exp"))?
            .iter()
            .enumerate()
            .map(|(k, e)| parse_rational_value(e, &format!("{here}.exp[{k}]")))
            .collect::<Result<_, _>>()?;
        if x.len() != grading.rank() {
            return Err(CliError::Schema(format!("{here}.exp")));
        }
        let class = grading.class_from_gamma(&x).ok_or_else(|| CliError::Schema(format!("{here}.exp")))?;
        let coeff = term.get("coeff").ok_or_else(|| CliError::Schema(format!("{here}.coeff")))?;
        terms.push((class, parse_rational_value(coeff, &format!("{here}.coeff"))?));
    }
    let s = NovikovSeries::from_terms(grading, order, terms).map_err(|_| CliError::Schema(format!("{path}.terms")))?;
    Ok((s, coords))
}

pub fn parse_divisor(v: &Value, grading: &Arc<Grading>, path: &str) -> Result<DivisorSeries, CliError> {
    let comps = array(v, path)?;
    if comps.len() != grading.rank() {
        return Err(CliError::Schema(path.to_string()));
    }
    let mut components = Vec::with_capacity(comps.len());
    let mut coords = None;
    for (k, c) in comps.iter().enumerate() {
        let (s, cs) = parse_series(c, grading, &format!("{path}[{k}]"))?;
        if coords.is_some_and(|prev| prev != cs) {
            return Err(CliError::Schema(format!("{path}[{k}].coords")));
        }
        coords = Some(cs);
        components.push(s);
    }
    let coords = coords.unwrap_or(Coordinates::Q);
    Ok(DivisorSeries { components, coords })
}

/// Human form, e.g. `1 - 2 q1 + 3/2 q1^2 q2`, with `y` or `q` as variable.
pub fn render_series(s: &NovikovSeries, coords: Coordinates) -> String {
    let var = coords.as_str();
    let mut out = String::new();
    for (x, c) in sorted(s) {
        let monomial: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != int(0))
            .map(|(a, e)| match e {
                e if *e == int(1) => format!("{var}{}", a + 1),
                e if e.is_integer() => format!("{var}{}^{e}", a + 1),
                e => format!("{var}{}^({e})", a + 1),
            })
            .collect();
        let negative = *c < int(0);
        let magnitude = if negative { -c.clone() } else { c.clone() };
        let sep = match (out.is_empty(), negative) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        out.push_str(sep);
        match (monomial.is_empty(), magnitude == int(1)) {
            (true, _) => write!(out, "{magnitude}").unwrap(),
            (false, true) => out.push_str(&monomial.join(" ")),
            (false, false) => write!(out, "{magnitude} {}", monomial.join(" ")).unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
