//! Dataset CSV: header `y,x1..xk1,z1..zk2`, one observation per row.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::model::Dataset;

/// Column counts `(k1, k2)` implied by a header, or a description of what is
/// wrong with it.
fn parse_header(fields: &[&str]) -> std::result::Result<(usize, usize), String> {
    if fields.first().map(|f| f.trim()) != Some("y") {
        return Err("first column must be `y`".into());
    }
    let mut k1 = 0;
    let mut k2 = 0;
    for (pos, raw) in fields.iter().enumerate().skip(1) {
        let name = raw.trim();
        let (prefix, idx) = name.split_at(name.len().min(1));
        let idx: usize = idx
            .parse()
            .map_err(|_| format!("column {}: unexpected name `{name}`", pos + 1))?;
        match prefix {
            "x" if k2 == 0 && idx == k1 + 1 => k1 += 1,
            "z" if k1 > 0 && idx == k2 + 1 => k2 += 1,
            _ => {
                return Err(format!(
                    "column {}: expected `x{}` or `z{}`, found `{name}`",
                    pos + 1,
                    k1 + 1,
                    k2 + 1
                ))
            }
        }
    }
    if k1 == 0 {
        return Err("at least one `x` column is required".into());
    }
    Ok((k1, k2))
}

/// Parses CSV text; `path` only labels error messages.
pub fn parse_dataset(text: &str, path: &Path) -> Result<Dataset> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let (k1, k2) = parse_header(&names).map_err(|m| parse_err(1, m))?;
    let width = 1 + k1 + k2;

    let mut y = Vec::new();
    let mut cells = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(parse_err(line, format!("expected {width} fields, found {}", rec.len())));
        }
        match rec[0].trim() {
            "0" => y.push(0u8),
            "1" => y.push(1u8),
            other => return Err(parse_err(line, format!("y must be 0 or 1, found `{other}`"))),
        }
        for (j, field) in rec.iter().enumerate().skip(1) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("column `{}`: `{field}` is not a number", names[j])))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("column `{}`: value must be finite", names[j])));
            }
            cells.push(v);
        }
    }
    let n = y.len();
    if n == 0 {
        return Err(parse_err(1, "no observations".into()));
    }
    let mut x = Array2::zeros((n, k1));
    let mut z = Array2::zeros((n, k2));
    for i in 0..n {
        let row = &cells[i * (k1 + k2)..(i + 1) * (k1 + k2)];
        x.row_mut(i).iter_mut().zip(&row[..k1]).for_each(|(a, b)| *a = *b);
        z.row_mut(i).iter_mut().zip(&row[k1..]).for_each(|(a, b)| *a = *b);
    }
    Dataset::new(Array1::from(y), x, z)
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text, path)
}

/// CSV text with every number in plain, round-trip notation.
pub fn dataset_to_csv(d: &Dataset) -> String {
    let mut out = String::from("y");
    for j in 1..=d.k1() {
        write!(out, ",x{j}").unwrap();
    }
    for j in 1..=d.k2() {
        write!(out, ",z{j}").unwrap();
    }
    out.push('\n');
    for i in 0..d.n() {
        write!(out, "{}", d.y()[i]).unwrap();
        for v in d.x_row(i).iter().chain(d.z_row(i).iter()) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: &Path, d: &Dataset) -> Result<()> {
    super::write_file(path, &dataset_to_csv(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn p() -> &'static Path {
        Path::new("t.csv")
    }

    #[test]
    fn round_trips() {
        let d = Dataset::new(
            array![1, 0],
            array![[1.0, 0.1 + 0.2], [1.0, -1e-12]],
            array![[1e300], [0.0]],
        )
        .unwrap();
        let text = dataset_to_csv(&d);
        assert!(!text.contains('e'));
        assert_eq!(parse_dataset(&text, p()).unwrap(), d);
    }

    #[test]
    fn header_infers_dimensions() {
        let d = parse_dataset("y,x1,x2\n1,1,0\n0,1,1\n", p()).unwrap();
        assert_eq!((d.k1(), d.k2(), d.n()), (2, 0, 2));
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_dataset("y,x1,z1\n1,1,0\n2,1,1\n", p()).unwrap_err();
        assert!(e.to_string().contains("t.csv:3:"), "{e}");
        let e = parse_dataset("y,x1,z1\n1,1,0\n1,abc,1\n", p()).unwrap_err();
        assert!(e.to_string().contains("t.csv:3:"), "{e}");
        let e = parse_dataset("y,x1,z1\n1,1\n", p()).unwrap_err();
        assert!(e.to_string().contains("t.csv:2:"), "{e}");
    }

    #[test]
    fn rejects_bad_headers() {
        for h in ["x1,y", "y,z1", "y,x2", "y,x1,z1,x2", "y,x1,w1"] {
            assert!(parse_dataset(&format!("{h}\n"), p()).is_err(), "{h}");
        }
    }
}
