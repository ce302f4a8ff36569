//! Matrix Market and coordinate-tensor text formats.
//!
//! Boolean matrices use the Matrix Market `coordinate pattern` variant and
//! real matrices the `coordinate real` variant. Tensors use a rank-tagged
//! coordinate format: a header line `dims: p1 p2 ... pn` followed by one
//! coordinate tuple per line. All file coordinates are 1-based; the in-
//! memory API is 0-based.

use std::io::{BufRead, Write};

use crate::boolmat::matrix::BoolMatrix;
use crate::boolmat::real::RealMatrix;
use crate::boolmat::tensor::BoolTensor;
use crate::error::{Error, Result};

pub fn write_matrix_market_pattern<W: Write>(m: &BoolMatrix, w: &mut W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate pattern general")?;
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), m.count_ones())?;
    for (r, c) in m.iter() {
        writeln!(w, "{} {}", r + 1, c + 1)?;
    }
    Ok(())
}

pub fn write_matrix_market_real<W: Write>(m: &RealMatrix, w: &mut W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), m.nnz())?;
    for (r, c, v) in m.iter() {
        writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}

struct MmHeader {
    n_rows: usize,
    n_cols: usize,
    nnz: usize,
    pattern: bool,
}

fn parse_mm_header<R: BufRead>(r: &mut R) -> Result<MmHeader> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let mut fields = line.split_whitespace();
    if fields.next() != Some("%%MatrixMarket") {
        return Err(Error::Parse(
            "missing %%MatrixMarket banner on first line".to_string(),
        ));
    }
    if fields.next() != Some("matrix") || fields.next() != Some("coordinate") {
        return Err(Error::Parse(
            "only `matrix coordinate` Matrix Market files are supported".to_string(),
        ));
    }
    let field = fields.next().unwrap_or("");
    let pattern = match field {
        "pattern" => true,
        "real" | "integer" => false,
        other => {
            return Err(Error::Parse(format!(
                "unsupported Matrix Market field type `{other}`"
            )))
        }
    };
    if fields.next() != Some("general") {
        return Err(Error::Parse(
            "only `general` symmetry is supported".to_string(),
        ));
    }
    // Skip comment lines, then read the size line.
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            return Err(Error::Parse("missing size line".to_string()));
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut nums = trimmed.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size token `{t}`")))
        });
        let n_rows = nums.next().ok_or_else(|| Error::Parse("missing rows".into()))??;
        let n_cols = nums.next().ok_or_else(|| Error::Parse("missing cols".into()))??;
        let nnz = nums.next().ok_or_else(|| Error::Parse("missing nnz".into()))??;
        return Ok(MmHeader {
            n_rows,
            n_cols,
            nnz,
            pattern,
        });
    }
}

fn entry_lines<R: BufRead>(r: &mut R) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        out.push(trimmed.split_whitespace().map(str::to_owned).collect());
    }
    Ok(out)
}

pub fn read_matrix_market_pattern<R: BufRead>(r: &mut R) -> Result<BoolMatrix> {
    let header = parse_mm_header(r)?;
    if !header.pattern {
        return Err(Error::Parse(
            "expected a pattern matrix, found a valued one".to_string(),
        ));
    }
    let lines = entry_lines(r)?;
    if lines.len() != header.nnz {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            header.nnz,
            lines.len()
        )));
    }
    let mut entries = Vec::with_capacity(lines.len());
    for fields in lines {
        if fields.len() != 2 {
            return Err(Error::Parse(format!("bad pattern entry {fields:?}")));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad row index `{}`", fields[0])))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad col index `{}`", fields[1])))?;
        if i == 0 || j == 0 {
            return Err(Error::Parse("matrix market indices are 1-based".to_string()));
        }
        entries.push((i - 1, j - 1));
    }
    BoolMatrix::from_entries(header.n_rows, header.n_cols, entries)
}

pub fn read_matrix_market_real<R: BufRead>(r: &mut R) -> Result<RealMatrix> {
    let header = parse_mm_header(r)?;
    if header.pattern {
        return Err(Error::Parse(
            "expected a valued matrix, found a pattern one".to_string(),
        ));
    }
    let lines = entry_lines(r)?;
    if lines.len() != header.nnz {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            header.nnz,
            lines.len()
        )));
    }
    let mut entries = Vec::with_capacity(lines.len());
    for fields in lines {
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad real entry {fields:?}")));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad row index `{}`", fields[0])))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad col index `{}`", fields[1])))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad value `{}`", fields[2])))?;
        if i == 0 || j == 0 {
            return Err(Error::Parse("matrix market indices are 1-based".to_string()));
        }
        entries.push((i - 1, j - 1, v));
    }
    RealMatrix::from_entries(header.n_rows, header.n_cols, entries)
}

pub fn write_tensor_coords<W: Write>(t: &BoolTensor, w: &mut W) -> Result<()> {
    write!(w, "dims:")?;
    for d in t.dims() {
        write!(w, " {d}")?;
    }
    writeln!(w)?;
    for coord in t.iter() {
        let line: Vec<String> = coord.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_tensor_coords<R: BufRead>(r: &mut R) -> Result<BoolTensor> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let rest = header
        .trim()
        .strip_prefix("dims:")
        .ok_or_else(|| Error::Parse("tensor file must start with `dims:`".to_string()))?;
    let dims: Vec<usize> = rest
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dim token `{t}`")))
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for line in r.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let coord: Vec<usize> = trimmed
            .split_whitespace()
            .map(|t| {
                let i: usize = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coordinate token `{t}`")))?;
                if i == 0 {
                    return Err(Error::Parse("tensor coordinates are 1-based".to_string()));
                }
                Ok(i - 1)
            })
            .collect::<Result<_>>()?;
        if coord.len() != dims.len() {
            return Err(Error::Parse(format!(
                "coordinate arity {} does not match rank {}",
                coord.len(),
                dims.len()
            )));
        }
        entries.push(coord);
    }
    BoolTensor::from_entries(&dims, entries)
}
