//! Problem files, trajectory CSV and JSON dumps.
//!
//! A problem file is a JSON object:
//!
//! ```json
//! {
//!   "d": 1, "m": 1,
//!   "A": [["0"]], "B": [["1"]],
//!   "phi": {"-1": ["1"], "0": ["1"], "1": ["1"]},
//!   "forcing": {"kind": "zero"},
//!   "horizon": 10,
//!   "mode": "rational"
//! }
//! ```
//!
//! Rational entries are `"p/q"` / `"n"` strings or JSON integers; `f64`
//! entries are JSON numbers (fraction strings are also accepted). A vector
//! of a scalar problem may be written as a bare entry. Forcing
//! kinds are `zero`, `constant` (`params.c`), `geometric` (`params.b1`,
//! `params.b2`) and `table` (`params.values`).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::algebra::{json_kind, Matrix, Mode, NormKind, Rational, Scalar, Vector};
use crate::determining::DeterminingTable;
use crate::error::{Error, Result};
use crate::oracle::exp_bound;
use crate::problem::{ForcingSpec, ProblemSpec, Trajectory};
use crate::trig::TrigEvaluator;

/// A problem in whichever scalar mode its file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyProblem {
    Rational(ProblemSpec<Rational>),
    F64(ProblemSpec<f64>),
}

impl AnyProblem {
    pub fn mode(&self) -> Mode {
        match self {
            AnyProblem::Rational(_) => Mode::Rational,
            AnyProblem::F64(_) => Mode::F64,
        }
    }

    /// Convert to `mode`. Floats convert to rationals exactly.
    pub fn into_mode(self, mode: Mode) -> Result<Self> {
        match (self, mode) {
            (AnyProblem::Rational(p), Mode::F64) => Ok(AnyProblem::F64(p.to_f64())),
            (AnyProblem::F64(p), Mode::Rational) => {
                // Parsed floats are finite, so the exact conversion cannot fail.
                Ok(AnyProblem::Rational(p.map(|x| {
                    crate::algebra::rational_from_f64(*x).expect("finite float")
                })))
            }
            (same, _) => Ok(same),
        }
    }

    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Ok(match self {
            AnyProblem::Rational(p) => AnyProblem::Rational(p.with_horizon(horizon)?),
            AnyProblem::F64(p) => AnyProblem::F64(p.with_horizon(horizon)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyProblem::Rational(p) => problem_to_json(p),
            AnyProblem::F64(p) => problem_to_json(p),
        }
    }
}

fn json_error(e: &serde_json::Error) -> Error {
    Error::Format(format!("{e}"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Format(format!("missing key `{key}`")))
}

fn as_count(v: &Value, key: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Format(format!("`{key}` must be a non-negative integer")))
}

fn parse_vector<S: Scalar>(v: &Value, what: &str) -> Result<Vector<S>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be an array, found {}", json_kind(v))))?;
    items
        .iter()
        .map(|x| S::from_json(x).map_err(Error::from))
        .collect::<Result<Vec<_>>>()
        .map(Vector::new)
}

/// Like [`parse_vector`], but a bare scalar is read as a 1-vector.
fn parse_point<S: Scalar>(v: &Value, what: &str) -> Result<Vector<S>> {
    match v {
        Value::Array(_) => parse_vector(v, what),
        other => Ok(Vector::new(vec![S::from_json(other)?])),
    }
}

fn parse_matrix<S: Scalar>(v: &Value, what: &str) -> Result<Matrix<S>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{what} must be a nested array, found {}", json_kind(v))))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector::<S>(r, &format!("{what} row {i}")).map(Vector::into_inner))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

fn parse_forcing<S: Scalar>(v: &Value) -> Result<ForcingSpec<S>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Forcing(format!("expected an object, found {}", json_kind(v))))?;
    let kind = field(obj, "kind")?
        .as_str()
        .ok_or_else(|| Error::Forcing("`kind` must be a string".into()))?;
    let empty = Map::new();
    let params = match obj.get("params") {
        None | Some(Value::Null) => &empty,
        Some(Value::Object(p)) => p,
        Some(other) => {
            return Err(Error::Forcing(format!(
                "`params` must be an object, found {}",
                json_kind(other)
            )))
        }
    };
    let param = |key: &str| {
        params
            .get(key)
            .ok_or_else(|| Error::Forcing(format!("{kind} forcing needs params.{key}")))
    };
    match kind {
        "zero" => Ok(ForcingSpec::Zero),
        "constant" => Ok(ForcingSpec::Constant(parse_point(param("c")?, "params.c")?)),
        "geometric" => Ok(ForcingSpec::Geometric {
            b1: parse_point(param("b1")?, "params.b1")?,
            b2: S::from_json(param("b2")?)?,
        }),
        "table" => {
            let values = param("values")?
                .as_array()
                .ok_or_else(|| Error::Forcing("params.values must be an array".into()))?;
            values
                .iter()
                .enumerate()
                .map(|(t, x)| parse_point(x, &format!("params.values[{t}]")))
                .collect::<Result<Vec<_>>>()
                .map(ForcingSpec::Table)
        }
        other => Err(Error::Forcing(format!("unknown forcing kind `{other}`"))),
    }
}

fn parse_phi<S: Scalar>(v: &Value, m: u64) -> Result<Vec<Vector<S>>> {
    let obj = v.as_object().ok_or_else(|| {
        Error::InitialData(format!("`phi` must be an object keyed by time, found {}", json_kind(v)))
    })?;
    let expected = m.checked_add(2).and_then(|n| usize::try_from(n).ok());
    if expected != Some(obj.len()) {
        return Err(Error::InitialData(format!(
            "expected {} entries for t = -{m}..=1, got {}",
            m as u128 + 2,
            obj.len()
        )));
    }
    let mut by_time = BTreeMap::new();
    for (key, value) in obj {
        let t: i64 = key
            .trim()
            .parse()
            .map_err(|_| Error::InitialData(format!("key `{key}` is not an integer")))?;
        if by_time.insert(t, parse_point::<S>(value, &format!("phi[{key}]"))?).is_some() {
            return Err(Error::InitialData(format!("time {t} given twice")));
        }
    }
    // Exactly m+2 distinct keys; they cover -m..=1 iff the extremes match.
    let m = m as i64;
    let first = *by_time.keys().next().expect("non-empty");
    let last = *by_time.keys().next_back().expect("non-empty");
    if first != -m || last != 1 {
        let missing = (-m..=1).find(|t| !by_time.contains_key(t));
        return Err(Error::InitialData(match missing {
            Some(t) => format!("missing key \"{t}\""),
            None => format!("keys span {first}..={last}"),
        }));
    }
    Ok(by_time.into_values().collect())
}

fn parse_spec<S: Scalar>(obj: &Map<String, Value>) -> Result<ProblemSpec<S>> {
    let d = as_count(field(obj, "d")?, "d")?;
    let m = as_count(field(obj, "m")?, "m")?;
    if m == 0 {
        return Err(Error::InvalidDelay(0));
    }
    let a = parse_matrix::<S>(field(obj, "A")?, "A")?;
    let b = parse_matrix::<S>(field(obj, "B")?, "B")?;
    for (name, mat) in [("A", &a), ("B", &b)] {
        if mat.rows() as u64 != d || mat.cols() as u64 != d {
            return Err(Error::DimensionMismatch {
                op: if name == "A" { "A vs d" } else { "B vs d" },
                left: mat.shape(),
                right: (d as usize, d as usize),
            });
        }
    }
    let phi = parse_phi::<S>(field(obj, "phi")?, m)?;
    let forcing = parse_forcing::<S>(field(obj, "forcing")?)?;
    let horizon = as_count(field(obj, "horizon")?, "horizon")?;
    if horizon == 0 {
        return Err(Error::InvalidHorizon(0));
    }
    let horizon = usize::try_from(horizon).map_err(|_| Error::Format("horizon too large".into()))?;
    ProblemSpec::new(m as usize, a, b, phi, forcing, horizon)
}

const KEYS: [&str; 8] = ["d", "m", "A", "B", "phi", "forcing", "horizon", "mode"];

/// Parse and validate a problem file's contents.
pub fn parse_problem_str(text: &str) -> Result<AnyProblem> {
    let root: Value = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Format(format!("problem must be a JSON object, found {}", json_kind(&root))))?;
    if let Some(extra) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::Format(format!("unknown key `{extra}`")));
    }
    let mode = match obj.get("mode") {
        None => Mode::Rational,
        Some(Value::String(s)) => s.parse::<Mode>().map_err(Error::Format)?,
        Some(other) => return Err(Error::Format(format!("`mode` must be a string, found {}", json_kind(other)))),
    };
    match mode {
        Mode::Rational => parse_spec(obj).map(AnyProblem::Rational),
        Mode::F64 => parse_spec(obj).map(AnyProblem::F64),
    }
}

/// Read and parse a problem file; errors carry the path.
pub fn parse_problem(path: impl AsRef<Path>) -> Result<AnyProblem> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_problem_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn vector_to_json<S: Scalar>(v: &Vector<S>) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(Scalar::to_json).collect()))
            .collect(),
    )
}

fn forcing_to_json<S: Scalar>(f: &ForcingSpec<S>) -> Value {
    match f {
        ForcingSpec::Zero => json!({"kind": "zero"}),
        ForcingSpec::Constant(c) => json!({"kind": "constant", "params": {"c": vector_to_json(c)}}),
        ForcingSpec::Geometric { b1, b2 } => json!({
            "kind": "geometric",
            "params": {"b1": vector_to_json(b1), "b2": b2.to_json()},
        }),
        ForcingSpec::Table(values) => json!({
            "kind": "table",
            "params": {"values": values.iter().map(vector_to_json).collect::<Vec<_>>()},
        }),
    }
}

/// Lossless JSON encoding; [`parse_problem_str`] reads it back unchanged.
pub fn problem_to_json<S: Scalar>(p: &ProblemSpec<S>) -> Value {
    let m = p.delay() as i64;
    let phi: Map<String, Value> = (-m..=1)
        .map(|t| (t.to_string(), vector_to_json(p.phi(t))))
        .collect();
    json!({
        "d": p.dim(),
        "m": p.delay(),
        "A": matrix_to_json(p.a()),
        "B": matrix_to_json(p.b()),
        "phi": phi,
        "forcing": forcing_to_json(p.forcing()),
        "horizon": p.horizon(),
        "mode": S::MODE.as_str(),
    })
}

/// How scalars are written to CSV.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NumberStyle {
    /// `"p/q"` for rationals, shortest round-trip form for floats.
    #[default]
    Exact,
    /// Fixed number of fractional digits.
    Decimal(usize),
}

fn render<S: Scalar>(x: &S, style: NumberStyle) -> String {
    match style {
        NumberStyle::Exact => x.to_literal(),
        NumberStyle::Decimal(n) => x.to_decimal(n),
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

/// Write `t,y1,...,yd` with one row per time step.
pub fn write_trajectory_csv<S: Scalar, W: Write>(
    traj: &Trajectory<S>,
    out: W,
    style: NumberStyle,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = traj.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|k| format!("y{k}")));
    w.write_record(&header).map_err(csv_error)?;
    for (t, y) in traj.iter() {
        let mut row = vec![t.to_string()];
        row.extend(y.iter().map(|x| render(x, style)));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Format(format!("csv: {e}")))
}

pub fn trajectory_to_csv<S: Scalar>(traj: &Trajectory<S>, style: NumberStyle) -> String {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf, style).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// `{"mode", "d", "t_min", "t_max", "rows": [{"t", "y"}]}`. Entries are
/// lossless JSON scalars in exact style and fixed-point strings otherwise.
pub fn trajectory_json<S: Scalar>(traj: &Trajectory<S>, style: NumberStyle) -> Value {
    let rows: Vec<Value> = traj
        .iter()
        .map(|(t, y)| {
            let y: Vec<Value> = y
                .iter()
                .map(|x| match style {
                    NumberStyle::Exact => x.to_json(),
                    NumberStyle::Decimal(_) => Value::String(render(x, style)),
                })
                .collect();
            json!({"t": t, "y": y})
        })
        .collect();
    json!({
        "mode": S::MODE.as_str(),
        "d": traj.dim(),
        "t_min": traj.t_min(),
        "t_max": traj.t_max(),
        "rows": rows,
    })
}

/// Read a trajectory written by [`write_trajectory_csv`] in exact style.
/// Times must be consecutive.
pub fn parse_trajectory_csv<S: Scalar>(text: &str) -> Result<Trajectory<S>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    let d = header.len().saturating_sub(1);
    if header.get(0) != Some("t") || header.iter().skip(1).enumerate().any(|(k, h)| h != format!("y{}", k + 1)) {
        return Err(Error::Format("trajectory header must be t,y1,...,yd".into()));
    }
    let mut t_min = None;
    let mut values = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = row_idx + 2;
        if record.len() != d + 1 {
            return Err(Error::Format(format!("line {line}: expected {} fields, got {}", d + 1, record.len())));
        }
        let t: i64 = record[0]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("line {line}: bad time `{}`", &record[0])))?;
        let start = *t_min.get_or_insert(t);
        if Some(t) != start.checked_add(values.len() as i64) {
            return Err(Error::Format(format!("line {line}: time {t} is not consecutive")));
        }
        let y = record
            .iter()
            .skip(1)
            .map(|s| S::parse_literal(s).map_err(|e| Error::Format(format!("line {line}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        values.push(Vector::new(y));
    }
    let t_min = t_min.ok_or_else(|| Error::Format("trajectory has no rows".into()))?;
    Ok(Trajectory::new(t_min, values))
}

/// Rows `Q(t; 0..t)` for `t = 0..=t_max`.
pub fn qtable_json<S: Scalar>(table: &mut DeterminingTable<S>, t_max: usize) -> Value {
    table.build_to(t_max);
    let rows: Vec<Value> = (0..=t_max)
        .map(|t| {
            let qs: Vec<Value> = (0..t as i64)
                .map(|s| matrix_to_json(table.get(t, s).expect("built")))
                .collect();
            json!({"t": t, "Q": qs})
        })
        .collect();
    json!({
        "mode": S::MODE.as_str(),
        "d": table.dim(),
        "tmax": t_max,
        "A": matrix_to_json(table.a()),
        "B": matrix_to_json(table.b()),
        "rows": rows,
    })
}

pub fn trig_json<S: Scalar>(trig: &mut TrigEvaluator<S>, t_min: i64, t_max: i64) -> Value {
    trig.prepare(t_max);
    let rows: Vec<Value> = (t_min..=t_max)
        .map(|t| {
            json!({
                "t": t,
                "sin": matrix_to_json(trig.sin_ref(t).expect("prepared")),
                "cos": matrix_to_json(trig.cos_ref(t).expect("prepared")),
            })
        })
        .collect();
    json!({"mode": S::MODE.as_str(), "m": trig.delay(), "rows": rows})
}

/// `t,sin_1_1,...,sin_d_d,cos_1_1,...,cos_d_d`, entries row-major.
pub fn trig_csv<S: Scalar>(trig: &mut TrigEvaluator<S>, t_min: i64, t_max: i64, style: NumberStyle) -> String {
    trig.prepare(t_max);
    let d = trig.dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    for name in ["sin", "cos"] {
        for i in 1..=d {
            header.extend((1..=d).map(|j| format!("{name}_{i}_{j}")));
        }
    }
    w.write_record(&header).expect("in-memory write");
    for t in t_min..=t_max {
        let mut row = vec![t.to_string()];
        for mat in [trig.sin_ref(t), trig.cos_ref(t)] {
            row.extend(mat.expect("prepared").entries().iter().map(|x| render(x, style)));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Series of `l_s`, `l_c`, the actual norms, and the exponential majorant
/// when the forcing is geometric.
pub fn bounds_json<S: Scalar>(p: &ProblemSpec<S>, norm: NormKind) -> Result<Value> {
    let horizon = p.horizon() as i64;
    let mut trig = TrigEvaluator::new(p.a().clone(), p.b().clone(), p.delay())?;
    trig.prepare(horizon);
    let rows: Vec<Value> = (0..=horizon)
        .map(|t| {
            json!({
                "t": t,
                "l_s": trig.l_s(t, norm).to_json(),
                "l_c": trig.l_c(t, norm).to_json(),
                "sin_norm": trig.sin_ref(t).expect("prepared").norm(norm).to_json(),
                "cos_norm": trig.cos_ref(t).expect("prepared").norm(norm).to_json(),
            })
        })
        .collect();
    let exp = match p.forcing() {
        ForcingSpec::Geometric { .. } => exp_bound(p, norm)?.to_json(),
        _ => Value::Null,
    };
    Ok(json!({
        "mode": S::MODE.as_str(),
        "norm": match norm { NormKind::Induced1 => "induced-1", NormKind::InducedInf => "induced-inf" },
        "rows": rows,
        "exp_bound": exp,
    }))
}
