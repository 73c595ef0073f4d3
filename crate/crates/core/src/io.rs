//! Set exchange formats.
//!
//! Text form: a `dim=<d>` header line, then one point per line as `d`
//! space-separated signed integers. JSON form: `{"dim": d, "points": [[..],..]}`.
//! Duplicates are tolerated on read and removed on load; written sets are
//! always canonical.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSet, Point};

#[derive(Serialize, Deserialize)]
struct SetJson {
    dim: usize,
    points: Vec<Vec<i64>>,
}

pub fn to_text(set: &LatticeSet) -> String {
    let mut out = format!("dim={}\n", set.dim());
    for p in set.iter() {
        let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(input: &str, origin: &str) -> Result<LatticeSet> {
    let mut lines = input.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse {
        path: origin.to_string(),
        message: "missing dim=<d> header".into(),
    })?;
    let dim: usize = header
        .trim()
        .strip_prefix("dim=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse {
            path: origin.to_string(),
            message: format!("bad header line {header:?}, expected dim=<d>"),
        })?;
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let coords: std::result::Result<Vec<i64>, _> =
            line.split_whitespace().map(str::parse).collect();
        let coords = coords.map_err(|e| Error::Parse {
            path: origin.to_string(),
            message: format!("line {}: {e}", lineno + 2),
        })?;
        if coords.len() != dim {
            return Err(Error::Parse {
                path: origin.to_string(),
                message: format!(
                    "line {}: expected {dim} coordinates, got {}",
                    lineno + 2,
                    coords.len()
                ),
            });
        }
        points.push(Point::new(coords));
    }
    LatticeSet::new(dim, points)
}

pub fn to_json(set: &LatticeSet) -> String {
    let doc = SetJson {
        dim: set.dim(),
        points: set.iter().map(|p| p.coords().to_vec()).collect(),
    };
    serde_json::to_string(&doc).expect("set serialization cannot fail")
}

pub fn from_json(input: &str, origin: &str) -> Result<LatticeSet> {
    let doc: SetJson = serde_json::from_str(input).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    let points = doc.points.into_iter().map(Point::new).collect();
    LatticeSet::new(doc.dim, points)
}

/// Parses either format, sniffing JSON by the leading brace.
pub fn from_str_any(input: &str, origin: &str) -> Result<LatticeSet> {
    if input.trim_start().starts_with('{') {
        from_json(input, origin)
    } else {
        from_text(input, origin)
    }
}

pub fn read_set(path: impl AsRef<Path>) -> Result<LatticeSet> {
    let path = path.as_ref();
    let contents = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_str_any(&contents, &path.display().to_string())
}

/// Writes a set, choosing JSON when the extension is `.json`, text otherwise.
pub fn write_set(path: impl AsRef<Path>, set: &LatticeSet) -> Result<()> {
    let path = path.as_ref();
    let body = if path.extension().is_some_and(|e| e == "json") {
        to_json(set)
    } else {
        to_text(set)
    };
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let set = LatticeSet::from_rows(2, &[&[0, -3], &[17, 4], &[0, 0]]).unwrap();
        let text = to_text(&set);
        assert!(text.starts_with("dim=2\n"));
        assert_eq!(from_text(&text, "test").unwrap(), set);
    }

    #[test]
    fn text_tolerates_duplicates() {
        let parsed = from_text("dim=1\n3\n3\n1\n", "test").unwrap();
        assert_eq!(parsed, LatticeSet::one_dim([1, 3]));
    }

    #[test]
    fn json_round_trip_and_sniffing() {
        let set = LatticeSet::one_dim([-1, 0, 5]);
        let json = to_json(&set);
        assert_eq!(from_str_any(&json, "test").unwrap(), set);
        assert_eq!(from_str_any(&to_text(&set), "test").unwrap(), set);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(from_text("dim=2\n1 2\n3\n", "test").is_err());
    }
}
