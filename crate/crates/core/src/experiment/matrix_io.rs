//! Plain-text matrices: a first line `m n`, then `m` rows of `n`
//! whitespace-separated entries. Complex entries are written `re+imj`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Mat<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing 'm n' header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse { line, msg: format!("bad header: {e}") })?;
    let &[m, n] = dims.as_slice() else {
        return Err(Error::Parse {
            line,
            msg: format!("header must hold two integers, got {}", dims.len()),
        });
    };
    let mut out = Mat::<T>::zeros(m, n);
    for i in 0..m {
        let (line, row) = lines.next().ok_or(Error::Parse {
            line: line + i + 1,
            msg: format!("expected {m} rows, found {i}"),
        })?;
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("expected {n} entries, found {}", entries.len()),
            });
        }
        for (j, tok) in entries.into_iter().enumerate() {
            out[(i, j)] = T::parse_text(tok).ok_or_else(|| Error::Parse {
                line,
                msg: format!("cannot parse entry '{tok}'"),
            })?;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: "trailing content after matrix rows".into(),
        });
    }
    Ok(out)
}

pub fn format_matrix<T: Scalar>(a: &Mat<T>) -> String {
    let mut out = format!("{} {}\n", a.nrows(), a.ncols());
    for row in a.row_iter() {
        let entries: Vec<String> = row.iter().map(|x| x.format_text()).collect();
        out.push_str(&entries.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix<T: Scalar>(path: &Path) -> Result<Mat<T>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading matrix {}", path.display()), e))?;
    parse_matrix(&text)
}

pub fn write_matrix<T: Scalar>(a: &Mat<T>, path: &Path) -> Result<()> {
    super::write_atomic(path, format_matrix(a).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_matrix, seeded_rng};
    use num_complex::Complex64;

    #[test]
    fn roundtrip_both_fields() {
        let mut rng = seeded_rng(2);
        let a = random_matrix::<f64, _>(3, 4, &mut rng);
        assert_eq!(parse_matrix::<f64>(&format_matrix(&a)).unwrap(), a);
        let c = random_matrix::<Complex64, _>(2, 3, &mut rng);
        assert_eq!(parse_matrix::<Complex64>(&format_matrix(&c)).unwrap(), c);
    }

    #[test]
    fn parses_literal_text() {
        let c = parse_matrix::<Complex64>("2 2\n1+2j -0.5j\n3 4-1e-3j\n").unwrap();
        assert_eq!(c[(0, 0)], Complex64::new(1.0, 2.0));
        assert_eq!(c[(0, 1)], Complex64::new(0.0, -0.5));
        assert_eq!(c[(1, 1)], Complex64::new(4.0, -1e-3));
    }

    #[test]
    fn reports_bad_input_with_line() {
        assert!(matches!(parse_matrix::<f64>(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_matrix::<f64>("2 2\n1 2\n3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_matrix::<f64>("1 1\nx\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_matrix::<f64>("1 1\n1\n2\n").is_err());
    }
}
