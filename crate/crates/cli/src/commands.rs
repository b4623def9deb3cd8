//! Command dispatch and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use mirrorseidel::elements::{batyrev_elements, forward};
use mirrorseidel::mirror_engine::{correction_term_g0, mirror_map};
use mirrorseidel::reconstruct::{reconstruct, roundtrip_verify, FanCombinatorics};
use mirrorseidel::series_ring::{invert_coordinate_change, Coordinates, DivisorSeries, NovikovSeries};
use mirrorseidel::{catalog, fan_polytope_vertices, validate_fan, Rational, ToricData};
use serde_json::{json, Value};

use crate::input::{array, parse_input, parse_rational_list, rational_value, render_input};
use crate::series_io::{divisor_value, parse_divisor, render_series, series_value};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check the fan and print its lattice data.
    Validate,
    /// 1-based indices of the rays that are vertices of the fan polytope.
    Vertices,
    /// Forward mirror map and its inverse.
    MirrorMap,
    /// Correction terms for every ray.
    G0,
    /// Batyrev elements in the mirror coordinates.
    Batyrev,
    /// Seidel elements in the Novikov variables.
    Seidel,
    /// Correction factors and mirror map recovered from Seidel elements.
    Reconstruct,
    /// Forward pass, reconstruction and comparison.
    Roundtrip,
    /// List the built-in fans, or print one as a document.
    Examples,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Path(PathBuf),
    Example(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandSpec {
    pub command: Command,
    pub input: Option<InputSource>,
    /// Truncation order; `reconstruct` takes its order from the Seidel document.
    pub order: u32,
    pub ample_override: Option<Vec<Rational>>,
    pub output_format: OutputFormat,
    pub seidel_path: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "mirrorseidel", version, about = "Mirror maps, Batyrev and Seidel elements of toric varieties")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Fan document (JSON, 1-based ray indices in max_cones).
    #[arg(long, conflicts_with = "example")]
    input: Option<PathBuf>,
    /// Built-in fan; see the `examples` command.
    #[arg(long)]
    example: Option<String>,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Ample class in the nef basis, e.g. `1,1/2`.
    #[arg(long)]
    ample: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Seidel elements document, as written by `seidel --format json`.
    #[arg(long)]
    seidel: Option<PathBuf>,
}

impl CommandSpec {
    /// Parses command-line arguments (the first item is the program name).
    pub fn from_args<I, T>(args: I) -> Result<Result<Self, CliError>, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let a = Args::try_parse_from(args)?;
        let input = match (a.input, a.example) {
            (Some(p), _) => Some(InputSource::Path(p)),
            (None, Some(e)) => Some(InputSource::Example(e)),
            (None, None) => None,
        };
        let ample_override = match a.ample.as_deref().map(parse_rational_list) {
            None => None,
            Some(Ok(v)) => Some(v),
            Some(Err(e)) => return Ok(Err(e)),
        };
        Ok(Ok(CommandSpec {
            command: a.command,
            input,
            order: a.order,
            ample_override,
            output_format: a.format,
            seidel_path: a.seidel,
        }))
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn load(spec: &CommandSpec) -> Result<ToricData, CliError> {
    let input = match &spec.input {
        Some(InputSource::Path(p)) => parse_input(&read(p)?)?,
        Some(InputSource::Example(key)) => {
            catalog::lookup(key).ok_or_else(|| CliError::Usage(format!("unknown example {key:?}")))?
        }
        None => return Err(CliError::Usage("one of --input or --example is required".into())),
    };
    let data = validate_fan(input)?;
    Ok(match &spec.ample_override {
        Some(ample) => data.with_ample(ample.clone())?,
        None => data,
    })
}

/// Runs one command, returning the report to print on success.
pub fn run(spec: &CommandSpec) -> Result<String, CliError> {
    if spec.order == 0 {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    let json = spec.output_format == OutputFormat::Json;
    if spec.command == Command::Examples {
        return examples(spec, json);
    }
    let data = load(spec)?;
    let n = spec.order;
    let out = match spec.command {
        Command::Validate => validate_report(&data, json),
        Command::Vertices => {
            let v: Vec<usize> = fan_polytope_vertices(&data).into_iter().map(|j| j + 1).collect();
            json!(v).to_string()
        }
        Command::MirrorMap => {
            let g = mirror_map(&data, n)?;
            let h = invert_coordinate_change(&g)?;
            if json {
                pretty(json!({
                    "fan": data.name(),
                    "order": n,
                    "forward": g.components().iter().map(|s| series_value(s, Coordinates::Y)).collect::<Vec<_>>(),
                    "inverse": h.components().iter().map(|s| series_value(s, Coordinates::Q)).collect::<Vec<_>>(),
                }))
            } else {
                let mut out = String::new();
                for (k, s) in g.components().iter().enumerate() {
                    writeln!(out, "log q{0} - log y{0} = {1}", k + 1, render_series(s, Coordinates::Y)).unwrap();
                }
                for (k, s) in h.components().iter().enumerate() {
                    writeln!(out, "log y{0} - log q{0} = {1}", k + 1, render_series(s, Coordinates::Q)).unwrap();
                }
                out
            }
        }
        Command::G0 => {
            let terms: Vec<NovikovSeries> = (0..data.num_rays()).map(|j| correction_term_g0(&data, j, n)).collect();
            if json {
                let list: Vec<Value> = terms
                    .iter()
                    .enumerate()
                    .map(|(j, s)| json!({"index": j + 1, "vertex": data.is_vertex(j), "series": series_value(s, Coordinates::Y)}))
                    .collect();
                pretty(json!({"fan": data.name(), "order": n, "corrections": list}))
            } else {
                terms
                    .iter()
                    .enumerate()
                    .map(|(j, s)| format!("g0[{}] = {}\n", j + 1, render_series(s, Coordinates::Y)))
                    .collect()
            }
        }
        Command::Batyrev => elements_report(&data, n, "batyrev", &batyrev_elements(&data, n)?, json),
        Command::Seidel => elements_report(&data, n, "seidel", &forward(&data, n)?.seidel, json),
        Command::Reconstruct => reconstruct_report(spec, &data, json)?,
        Command::Roundtrip => {
            let report = roundtrip_verify(&data, n);
            let rows: Vec<(String, String)> = report
                .stages
                .iter()
                .map(|s| {
                    let status = match (&s.error, s.failures.is_empty()) {
                        (Some(e), _) => format!("error {}: {e}", e.name()),
                        (None, true) => "zero".to_string(),
                        (None, false) => format!(
                            "nonzero at {:?}",
                            s.failures.iter().map(|i| i + 1).collect::<Vec<_>>()
                        ),
                    };
                    (s.stage.to_string(), status)
                })
                .collect();
            let text = if json {
                let stages: Vec<Value> = rows.iter().map(|(s, r)| json!({"stage": s, "residual": r})).collect();
                pretty(json!({"fan": data.name(), "order": n, "stages": stages}))
            } else {
                rows.iter().map(|(s, r)| format!("{s}: {r}\n")).collect()
            };
            if !report.all_zero() {
                return Err(CliError::Residual(text));
            }
            text
        }
        Command::Examples => unreachable!("handled above"),
    };
    Ok(ensure_newline(out))
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("plain values serialize")
}

fn examples(spec: &CommandSpec, json: bool) -> Result<String, CliError> {
    if let Some(InputSource::Example(key)) = &spec.input {
        let input = catalog::lookup(key).ok_or_else(|| CliError::Usage(format!("unknown example {key:?}")))?;
        return Ok(ensure_newline(render_input(&input)));
    }
    let out = if json {
        let list: Vec<Value> =
            catalog::ENTRIES.iter().map(|e| json!({"key": e.key, "title": e.title})).collect();
        pretty(Value::Array(list))
    } else {
        catalog::ENTRIES.iter().map(|e| format!("{:<10} {}\n", e.key, e.title)).collect()
    };
    Ok(ensure_newline(out))
}

fn rational_list(v: &[Rational]) -> Vec<Value> {
    v.iter().map(rational_value).collect()
}

fn validate_report(data: &ToricData, json: bool) -> String {
    let g = data.grading();
    let walls: Vec<Vec<i64>> = data.wall_classes().iter().map(|w| g.pairings(w)).collect();
    let vertices: Vec<usize> = fan_polytope_vertices(data).into_iter().map(|j| j + 1).collect();
    if json {
        return pretty(json!({
            "name": data.name(),
            "dim": data.dimension(),
            "rays": data.rays(),
            "rank": data.rank(),
            "curve_basis": data.curve_basis().iter().map(|r| rational_list(r)).collect::<Vec<_>>(),
            "c1": rational_list(data.c1()),
            "ample": rational_list(data.ample_class()),
            "wall_classes": walls,
            "vertices": vertices,
        }));
    }
    let show = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    writeln!(out, "{}: smooth complete fan, dimension {}, {} rays, rank {}", data.name(), data.dimension(), data.num_rays(), data.rank()).unwrap();
    for (a, row) in data.curve_basis().iter().enumerate() {
        writeln!(out, "gamma{} pairings: {}", a + 1, show(row)).unwrap();
    }
    writeln!(out, "c1 in nef basis: {}", show(data.c1())).unwrap();
    writeln!(out, "ample class: {}", show(data.ample_class())).unwrap();
    for w in &walls {
        writeln!(out, "wall class pairings: {w:?}").unwrap();
    }
    writeln!(out, "vertices: {}", json!(vertices)).unwrap();
    out
}

fn elements_report(data: &ToricData, n: u32, kind: &str, elements: &[DivisorSeries], json: bool) -> String {
    if json {
        let list: Vec<Value> = elements
            .iter()
            .enumerate()
            .map(|(j, e)| json!({"index": j + 1, "components": divisor_value(e)}))
            .collect();
        return pretty(json!({"fan": data.name(), "kind": kind, "order": n, "elements": list}));
    }
    let mut out = String::new();
    for (j, e) in elements.iter().enumerate() {
        writeln!(out, "{kind}[{}]:", j + 1).unwrap();
        for (k, c) in e.components.iter().enumerate() {
            writeln!(out, "  p{}: {}", k + 1, render_series(c, e.coords)).unwrap();
        }
    }
    out
}

fn reconstruct_report(spec: &CommandSpec, data: &ToricData, json: bool) -> Result<String, CliError> {
    let path = spec.seidel_path.as_ref().ok_or_else(|| CliError::Usage("reconstruct needs --seidel PATH".into()))?;
    let doc: Value = serde_json::from_str(&read(path)?).map_err(CliError::from_json)?;
    let list = array(doc.get("elements").ok_or_else(|| CliError::Schema("elements".into()))?, "elements")?;
    if list.len() != data.num_rays() {
        return Err(CliError::Schema("elements".into()));
    }
    let seidel: Vec<DivisorSeries> = list
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let comps = e.get("components").ok_or_else(|| CliError::Schema(format!("elements[{j}].components")))?;
            parse_divisor(comps, data.grading(), &format!("elements[{j}].components"))
        })
        .collect::<Result<_, _>>()?;
    let n = seidel[0].order();
    if seidel.iter().any(|s| s.order() != n || s.coords != Coordinates::Q) {
        return Err(CliError::Schema("elements".into()));
    }
    let rec = reconstruct(&FanCombinatorics::new(data), &seidel, n)?;
    let h = rec.recovered_inverse_map.as_ref().expect("reconstruct integrates the map");
    if json {
        return Ok(pretty(json!({
            "fan": data.name(),
            "order": n,
            "correction_factors": rec.correction_factors.iter().map(|s| series_value(s, Coordinates::Q)).collect::<Vec<_>>(),
            "batyrev": rec.batyrev_in_q.iter().enumerate().map(|(j, e)| json!({"index": j + 1, "components": divisor_value(e)})).collect::<Vec<_>>(),
            "inverse_mirror_map": h.components().iter().map(|s| series_value(s, Coordinates::Q)).collect::<Vec<_>>(),
        })));
    }
    let mut out = String::new();
    for (j, s) in rec.correction_factors.iter().enumerate() {
        writeln!(out, "H[{}] = {}", j + 1, render_series(s, Coordinates::Q)).unwrap();
    }
    for (k, s) in h.components().iter().enumerate() {
        writeln!(out, "log y{0} - log q{0} = {1}", k + 1, render_series(s, Coordinates::Q)).unwrap();
    }
    Ok(out)
}
