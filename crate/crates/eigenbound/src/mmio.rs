//! Matrix Market reader and writer for dense square matrices.
//!
//! Reads `array` and `coordinate` files with `real`, `integer` or `complex`
//! fields and `general`, `symmetric`, `hermitian` or `skew-symmetric`
//! symmetry. Writes `array complex general` with 17 significant digits so a
//! round trip is exact.

use std::fs;
use std::io::Write;
use std::path::Path;

use eigenbound_core::{Complex, DenseMatrix};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

impl Symmetry {
    /// Value stored at the mirrored position of `v`.
    fn mirror(self, v: Complex) -> Complex {
        match self {
            Symmetry::General => unreachable!(),
            Symmetry::Symmetric => v,
            Symmetry::Hermitian => v.conj(),
            Symmetry::SkewSymmetric => -v,
        }
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(&text)
}

pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty file"))?;
    let (layout, field, symmetry) = parse_header(header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = body
        .next()
        .ok_or_else(|| Error::parse(1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(size_line, format!("bad size `{t}`")))
        })
        .collect::<Result<_>>()?;
    let expected = match layout {
        Layout::Array => 2,
        Layout::Coordinate => 3,
    };
    if dims.len() != expected {
        return Err(Error::parse(
            size_line,
            format!("expected {expected} size fields, found {}", dims.len()),
        ));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols {
        return Err(Error::parse(
            size_line,
            format!("matrix is {rows}x{cols}, only square matrices are supported"),
        ));
    }
    if rows == 0 {
        return Err(Error::parse(size_line, "matrix dimension must be at least 1"));
    }
    let n = rows;
    let mut data = vec![Complex::new(0.0, 0.0); n * n];
    let mut last_line = size_line;

    match layout {
        Layout::Array => {
            // Column-major; symmetric variants store the lower triangle only,
            // skew-symmetric without the diagonal.
            let positions: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| {
                    let start = match symmetry {
                        Symmetry::General => 0,
                        Symmetry::Symmetric | Symmetry::Hermitian => j,
                        Symmetry::SkewSymmetric => j + 1,
                    };
                    (start..n).map(move |i| (i, j))
                })
                .collect();
            let mut pos = positions.iter();
            for (line, text) in body.by_ref() {
                last_line = line;
                let &(i, j) = pos.next().ok_or_else(|| Error::parse(line, "too many entries"))?;
                let v = parse_value(line, &mut text.split_whitespace(), field)?;
                place(&mut data, n, i, j, v, symmetry, line)?;
            }
            let missing = pos.count();
            if missing > 0 {
                return Err(Error::parse(last_line, format!("{missing} entries missing")));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut seen = 0usize;
            for (line, text) in body.by_ref() {
                last_line = line;
                let mut tokens = text.split_whitespace();
                let mut index = |name: &str| -> Result<usize> {
                    let t = tokens
                        .next()
                        .ok_or_else(|| Error::parse(line, format!("missing {name} index")))?;
                    let k: usize = t
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad {name} index `{t}`")))?;
                    if k == 0 || k > n {
                        return Err(Error::parse(line, format!("{name} index {k} out of range 1..={n}")));
                    }
                    Ok(k - 1)
                };
                let i = index("row")?;
                let j = index("column")?;
                let v = parse_value(line, &mut tokens, field)?;
                seen += 1;
                if seen > nnz {
                    return Err(Error::parse(line, format!("more than {nnz} entries")));
                }
                // Duplicates are summed.
                add(&mut data, n, i, j, v, symmetry, line)?;
            }
            if seen < nnz {
                return Err(Error::parse(
                    last_line,
                    format!("expected {nnz} entries, found {seen}"),
                ));
            }
        }
    }

    Ok(DenseMatrix::from_row_major(n, data)?)
}

fn parse_header(line: &str) -> Result<(Layout, Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(Error::parse(
            1,
            "header must read `%%MatrixMarket matrix <layout> <field> <symmetry>`",
        ));
    }
    if tokens[1] != "matrix" {
        return Err(Error::parse(1, format!("unsupported object `{}`", tokens[1])));
    }
    let layout = match tokens[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(Error::parse(1, format!("unsupported layout `{other}`"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => {
            return Err(Error::parse(1, "`pattern` matrices carry no values"));
        }
        other => return Err(Error::parse(1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(Error::parse(1, format!("unsupported symmetry `{other}`"))),
    };
    Ok((layout, field, symmetry))
}

fn parse_value<'a>(
    line: usize,
    tokens: &mut impl Iterator<Item = &'a str>,
    field: Field,
) -> Result<Complex> {
    let mut number = |what: &str| -> Result<f64> {
        let t = tokens
            .next()
            .ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
        let v: f64 = match field {
            Field::Integer => t
                .parse::<i64>()
                .map(|k| k as f64)
                .map_err(|_| Error::parse(line, format!("bad integer `{t}`")))?,
            _ => t
                .parse()
                .map_err(|_| Error::parse(line, format!("bad number `{t}`")))?,
        };
        if !v.is_finite() {
            return Err(Error::parse(line, format!("non-finite value `{t}`")));
        }
        Ok(v)
    };
    let v = match field {
        Field::Complex => {
            let re = number("real part")?;
            let im = number("imaginary part")?;
            Complex::new(re, im)
        }
        _ => Complex::new(number("value")?, 0.0),
    };
    if let Some(extra) = tokens.next() {
        return Err(Error::parse(line, format!("unexpected token `{extra}`")));
    }
    Ok(v)
}

fn check_diagonal(i: usize, j: usize, v: Complex, symmetry: Symmetry, line: usize) -> Result<()> {
    if i != j {
        return Ok(());
    }
    match symmetry {
        Symmetry::Hermitian if v.im != 0.0 => {
            Err(Error::parse(line, "hermitian diagonal entries must be real"))
        }
        Symmetry::SkewSymmetric if v != Complex::new(0.0, 0.0) => {
            Err(Error::parse(line, "skew-symmetric diagonal entries must be zero"))
        }
        _ => Ok(()),
    }
}

fn place(
    data: &mut [Complex],
    n: usize,
    i: usize,
    j: usize,
    v: Complex,
    symmetry: Symmetry,
    line: usize,
) -> Result<()> {
    check_diagonal(i, j, v, symmetry, line)?;
    data[i * n + j] = v;
    if symmetry != Symmetry::General && i != j {
        data[j * n + i] = symmetry.mirror(v);
    }
    Ok(())
}

fn add(
    data: &mut [Complex],
    n: usize,
    i: usize,
    j: usize,
    v: Complex,
    symmetry: Symmetry,
    line: usize,
) -> Result<()> {
    check_diagonal(i, j, v, symmetry, line)?;
    data[i * n + j] += v;
    if symmetry != Symmetry::General && i != j {
        data[j * n + i] += symmetry.mirror(v);
    }
    Ok(())
}

/// `array complex general` text for `a`.
pub fn format_matrix_market(a: &DenseMatrix) -> String {
    let n = a.n();
    let mut out = String::with_capacity(48 * n * n + 64);
    out.push_str("%%MatrixMarket matrix array complex general\n");
    out.push_str(&format!("{n} {n}\n"));
    for j in 0..n {
        for i in 0..n {
            let z = a.get(i, j);
            out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
        }
    }
    out
}

pub fn write_matrix_market(a: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(format_matrix_market(a).as_bytes())
        .map_err(|e| Error::io(path, e))
}
