//! Point files: CSV with a header of `x,y` (bivariate) or `x` (univariate).

use std::fs::File;
use std::io::Read;
use std::path::Path;

use depthruns::Point2;

#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Univariate(Vec<f64>),
    Bivariate(Vec<Point2>),
}

pub fn read_sample(path: &Path) -> Result<Sample, String> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_sample(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_sample(text: &str) -> Result<Sample, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| format!("line 1: {e}"))?
        .iter()
        .map(str::to_owned)
        .collect();
    let dim = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["x", "y"] => 2,
        ["x"] => 1,
        [""] | [] => return Err("empty file".into()),
        _ => return Err(format!("line 1: expected header \"x,y\" or \"x\", found \"{}\"", header.join(","))),
    };

    let mut coords: Vec<[f64; 2]> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| format!("malformed CSV: {e}"))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != dim {
            return Err(format!("line {line}: expected {dim} field(s), found {}", rec.len()));
        }
        let mut c = [0.0; 2];
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| format!("line {line}: cannot parse \"{field}\" as a number"))?;
            if !v.is_finite() {
                return Err(format!("line {line}: non-finite value \"{field}\""));
            }
            c[k] = v;
        }
        coords.push(c);
    }
    if coords.is_empty() {
        return Err("no observations".into());
    }
    Ok(if dim == 2 {
        Sample::Bivariate(coords.into_iter().map(Point2::from).collect())
    } else {
        Sample::Univariate(coords.into_iter().map(|c| c[0]).collect())
    })
}

/// `"x,y"` or a single `"x"`.
pub fn parse_center(s: &str) -> Result<Vec<f64>, String> {
    let parts: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match parts {
        Ok(v) if (1..=2).contains(&v.len()) && v.iter().all(|c| c.is_finite()) => Ok(v),
        _ => Err(format!("invalid center \"{s}\"; expected x,y")),
    }
}
