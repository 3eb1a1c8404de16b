//! Text format for based complexes over the rationals:
//!
//! ```text
//! complex m=1
//! dim 0 1
//! dim 1 1
//! boundary 1 3          # C_1 -> C_0, row-major
//! homology 0 1 0        # cycle vectors, dim C_i entries each
//! ```

use num_rational::BigRational;

use super::complex::BasedComplex;
use super::matrix::Matrix;
use super::TorsionError;

fn syntax(line: usize, message: impl Into<String>) -> TorsionError {
    TorsionError::Syntax {
        line,
        message: message.into(),
    }
}

fn rational(line: usize, s: &str) -> Result<BigRational, TorsionError> {
    s.parse::<BigRational>()
        .map_err(|_| syntax(line, format!("not a rational number: {s}")))
}

pub fn parse_complex(text: &str) -> Result<BasedComplex<BigRational>, TorsionError> {
    let mut length: Option<usize> = None;
    let mut dims: Vec<Option<usize>> = Vec::new();
    let mut boundaries: Vec<Option<(usize, Vec<BigRational>)>> = Vec::new();
    let mut homology: Vec<(usize, usize, Vec<BigRational>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(keyword) = words.next() else {
            continue;
        };
        let rest: Vec<&str> = words.collect();
        if keyword == "complex" {
            if length.is_some() {
                return Err(syntax(line, "duplicate complex header"));
            }
            let m = match rest.as_slice() {
                [arg] => arg.strip_prefix("m=").and_then(|v| v.parse::<usize>().ok()),
                _ => None,
            }
            .ok_or_else(|| syntax(line, "expected complex m=<length>"))?;
            length = Some(m);
            dims = vec![None; m + 1];
            boundaries = vec![None; m + 1];
            continue;
        }
        let m = length.ok_or_else(|| syntax(line, "missing complex header"))?;
        let degree = rest
            .first()
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&d| d <= m)
            .ok_or_else(|| syntax(line, format!("expected a degree between 0 and {m}")))?;
        let values = &rest[1..];
        match keyword {
            "dim" => {
                let [n] = values else {
                    return Err(syntax(line, "expected dim <i> <n>"));
                };
                let n = n
                    .parse()
                    .map_err(|_| syntax(line, "dimension must be a natural number"))?;
                if dims[degree].replace(n).is_some() {
                    return Err(syntax(line, format!("duplicate dim for degree {degree}")));
                }
            }
            "boundary" => {
                if degree == 0 {
                    return Err(syntax(line, "degree 0 has no boundary map"));
                }
                let entries = values
                    .iter()
                    .map(|s| rational(line, s))
                    .collect::<Result<Vec<_>, _>>()?;
                if boundaries[degree].replace((line, entries)).is_some() {
                    return Err(syntax(
                        line,
                        format!("duplicate boundary for degree {degree}"),
                    ));
                }
            }
            "homology" => {
                let entries = values
                    .iter()
                    .map(|s| rational(line, s))
                    .collect::<Result<Vec<_>, _>>()?;
                homology.push((line, degree, entries));
            }
            other => return Err(syntax(line, format!("unknown keyword {other}"))),
        }
    }

    let m = length.ok_or_else(|| syntax(1, "missing complex header"))?;
    let last = text.lines().count().max(1);
    let dims: Vec<usize> = dims
        .into_iter()
        .enumerate()
        .map(|(i, d)| d.ok_or_else(|| syntax(last, format!("missing dim for degree {i}"))))
        .collect::<Result<_, _>>()?;
    let mut maps = Vec::new();
    for i in 1..=m {
        let (rows, cols) = (dims[i - 1], dims[i]);
        let mat = match boundaries[i].take() {
            None => Matrix::zeros(rows, cols),
            Some((line, entries)) => {
                if entries.len() != rows * cols {
                    return Err(syntax(
                        line,
                        format!(
                            "boundary {i} needs {} entries, got {}",
                            rows * cols,
                            entries.len()
                        ),
                    ));
                }
                let rows_v = entries.chunks(cols.max(1)).map(|c| c.to_vec()).collect();
                if cols == 0 {
                    Matrix::zeros(rows, 0)
                } else {
                    Matrix::from_rows(rows_v, cols)
                }
            }
        };
        maps.push(mat);
    }
    let mut h = vec![Vec::new(); m + 1];
    for (line, degree, entries) in homology {
        let n = dims[degree];
        if n == 0 || entries.len() % n != 0 || entries.is_empty() {
            return Err(syntax(
                line,
                format!("homology vectors in degree {degree} need a multiple of {n} entries"),
            ));
        }
        h[degree].extend(entries.chunks(n).map(|c| c.to_vec()));
    }
    BasedComplex::new(dims, maps, h)
}
