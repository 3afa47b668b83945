//! Matrix text files: a JSON object with `field`, `rows`, `cols` and
//! row-major `entries`. Real entries are numbers, complex entries
//! `[re, im]`, quaternion entries `[w, x, y, z]`.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::numeric::{DenseMatrix, Field, Quaternion};
use crate::registry::{FactoredElement, FactorizationSpec};

fn number(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Io(format!("cannot write non-finite entry {x}")));
    }
    serde_json::to_string(&x).map_err(|e| Error::Io(e.to_string()))
}

fn entry(q: Quaternion, field: Field) -> Result<String> {
    Ok(match field {
        Field::R => number(q.w)?,
        Field::C => format!("[{}, {}]", number(q.w)?, number(q.x)?),
        Field::H => format!("[{}, {}, {}, {}]", number(q.w)?, number(q.x)?, number(q.y)?, number(q.z)?),
    })
}

/// Renders `m` in the file format, one matrix row per line. Floats use
/// the shortest representation that reads back to the same binary64.
pub fn format_matrix(m: &DenseMatrix) -> Result<String> {
    let field = m.field();
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"field\": \"{}\",", field.symbol()).unwrap();
    writeln!(out, "  \"rows\": {},", m.rows()).unwrap();
    writeln!(out, "  \"cols\": {},", m.cols()).unwrap();
    write!(out, "  \"entries\": [").unwrap();
    let rows = if m.cols() == 0 { 0 } else { m.rows() };
    for i in 0..rows {
        let row: Vec<String> = (0..m.cols()).map(|j| entry(m.get(i, j), field)).collect::<Result<_>>()?;
        let sep = if i + 1 < rows { "," } else { "" };
        write!(out, "\n    {}{sep}", row.join(", ")).unwrap();
    }
    if rows > 0 {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    Ok(out)
}

fn field_of(v: &Value) -> Result<Field> {
    let s = v.get("field").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing string field \"field\"".into()))?;
    Field::parse(s).ok_or_else(|| Error::Parse(format!("field must be R, C or H, got {s:?}")))
}

fn dimension(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("missing or non-integer \"{key}\"")))
}

fn parse_entry(v: &Value, field: Field, index: usize) -> Result<Quaternion> {
    let bad = |what: String| Error::Parse(format!("entries[{index}]: {what}"));
    let num = |x: &Value| x.as_f64().ok_or_else(|| bad(format!("{x} is not a number")));
    let arity = match field {
        Field::R => 1,
        Field::C => 2,
        Field::H => 4,
    };
    let parts: Vec<f64> = match v {
        Value::Array(xs) => {
            if xs.len() != arity || field == Field::R {
                return Err(bad(format!("expected {} for field {}, got an array of {}", describe(arity), field.symbol(), xs.len())));
            }
            xs.iter().map(num).collect::<Result<_>>()?
        }
        other if field == Field::R => vec![num(other)?],
        other => return Err(bad(format!("expected {} for field {}, got {other}", describe(arity), field.symbol()))),
    };
    let mut q = [0.0; 4];
    q[..parts.len()].copy_from_slice(&parts);
    Ok(Quaternion::new(q[0], q[1], q[2], q[3]))
}

fn describe(arity: usize) -> &'static str {
    match arity {
        1 => "a number",
        2 => "a 2-array [re, im]",
        _ => "a 4-array [w, x, y, z]",
    }
}

/// Parses the file format. Syntax errors report line and column.
pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let field = field_of(&v)?;
    let rows = dimension(&v, "rows")?;
    let cols = dimension(&v, "cols")?;
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing array \"entries\"".into()))?;
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!("expected {rows}x{cols} = {} entries, got {}", rows * cols, entries.len())));
    }
    let data: Vec<Quaternion> = entries.iter().enumerate().map(|(i, e)| parse_entry(e, field, i)).collect::<Result<_>>()?;
    DenseMatrix::from_entries(field, rows, cols, data)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_matrix(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_matrix(m)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes `k1_<i>.mat`, `k2_<i>.mat` and `theta.json` into `dir`.
pub fn write_factors(fe: &FactoredElement, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (side, raw) in [("k1", &fe.k1), ("k2", &fe.k2)] {
        for (i, m) in raw.iter().enumerate() {
            write_matrix(m, dir.join(format!("{side}_{i}.mat")))?;
        }
    }
    let theta: Vec<String> = fe.theta.iter().map(|t| number(*t)).collect::<Result<_>>()?;
    let path = dir.join("theta.json");
    std::fs::write(&path, format!("[{}]\n", theta.join(", "))).map_err(|e| io_err(&path, e))
}

/// Reads factors written by [`write_factors`] for the element `g`.
pub fn read_factors(spec: &FactorizationSpec, g: &DenseMatrix, dir: impl AsRef<Path>) -> Result<FactoredElement> {
    let dir = dir.as_ref();
    let read_side = |side: &str, count: usize| -> Result<Vec<DenseMatrix>> {
        (0..count).map(|i| read_matrix(dir.join(format!("{side}_{i}.mat")))).collect()
    };
    let k1 = read_side("k1", spec.k1.groups.len())?;
    let k2 = read_side("k2", spec.k2.groups.len())?;
    let path = dir.join("theta.json");
    let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let theta: Vec<f64> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    if theta.len() != spec.angle_count() {
        return Err(Error::Parse(format!("{}: expected {} angles, got {}", path.display(), spec.angle_count(), theta.len())));
    }
    Ok(FactoredElement { spec: spec.clone(), k1, theta, k2, g: g.clone() })
}
