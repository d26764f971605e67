//! Matrix files and angle strings.
//!
//! A matrix file holds optional `#` comment lines, a header line `n l`, then
//! `n` rows of exactly `l` characters from `{0, 1}`, character `i` being bit `i`.

use std::fmt::Write as _;
use std::path::Path;

use iqp_matroid::{Angle, BinaryMatrix, BitVector};

use crate::CliError;

pub fn parse_matrix_file(path: &Path) -> Result<BinaryMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<BinaryMatrix, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(CliError::MalformedHeader { line: 1 })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::MalformedHeader { line: header_line })?;
    let [n, l] = dims[..] else {
        return Err(CliError::MalformedHeader { line: header_line });
    };
    let mut m = BinaryMatrix::zeros(0, l);
    for (line, row) in lines.by_ref().take(n) {
        if let Some((column, ch)) = row.chars().enumerate().find(|(_, c)| *c != '0' && *c != '1') {
            return Err(CliError::BadCharacter { line, column: column + 1, found: ch });
        }
        if row.len() != l {
            return Err(CliError::BadRowLength { line, expected: l, found: row.len() });
        }
        let bits = BitVector::from_bits(row.chars().map(|c| c == '1'));
        m.push_row(bits).expect("row width checked");
    }
    // row count disagrees with the header
    if m.nrows() != n || lines.next().is_some() {
        return Err(CliError::MalformedHeader { line: header_line });
    }
    Ok(m)
}

/// The file form of `m`, which [`parse_matrix`] reads back unchanged.
pub fn dump_matrix(m: &BinaryMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", m.nrows(), m.ncols()).unwrap();
    for row in m.rows() {
        writeln!(out, "{row}").unwrap();
    }
    out
}

/// `"a/b"` is `(a/b)·π`; `"rad:v"` is `v` radians. Bare numbers are rejected.
pub fn parse_angle(text: &str) -> Result<Angle, CliError> {
    let bad = || CliError::BadAngle(text.to_string());
    if let Some(v) = text.strip_prefix("rad:") {
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        return Ok(Angle::radians(v));
    }
    let (a, b) = text.split_once('/').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok(Angle::pi_fraction(a, b))
}

pub fn parse_bits(text: &str, len: usize, name: &str) -> Result<BitVector, CliError> {
    let v: BitVector = text
        .parse()
        .map_err(|e: iqp_matroid::Error| CliError::BadArgument(format!("--{name}: {e}")))?;
    if v.len() != len {
        return Err(CliError::BadArgument(format!(
            "--{name} has {} bits but the matrix has {len} columns",
            v.len()
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_file() {
        let m = parse_matrix("# example\n6 4\n1101\n0110\n0000\n0101\n1011\n0101\n").unwrap();
        assert_eq!((m.nrows(), m.ncols()), (6, 4));
        assert_eq!(parse_matrix(&dump_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn empty_matrix() {
        let m = parse_matrix("0 4\n").unwrap();
        assert_eq!((m.nrows(), m.ncols()), (0, 4));
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_matrix("2 4\n1101\n10x1\n"),
            Err(CliError::BadCharacter { line: 3, column: 3, found: 'x' })
        );
        assert_eq!(
            parse_matrix("# c\n1 4\n110\n"),
            Err(CliError::BadRowLength { line: 3, expected: 4, found: 3 })
        );
        assert_eq!(parse_matrix("# c\nfour\n"), Err(CliError::MalformedHeader { line: 2 }));
        assert_eq!(parse_matrix("1 2 3\n"), Err(CliError::MalformedHeader { line: 1 }));
        assert!(parse_matrix("2 2\n11\n").is_err());
        assert!(parse_matrix("1 2\n11\n01\n").is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("1/4").unwrap(), Angle::Exact { num: 1, den: 4 });
        assert!(parse_angle("1/4").unwrap().is_fourth_root());
        assert_eq!(parse_angle("3/8").unwrap(), Angle::Exact { num: 3, den: 8 });
        assert_eq!(parse_angle("rad:0.5").unwrap(), Angle::Radians(0.5));
        assert_eq!(parse_angle("2/8").unwrap(), Angle::Exact { num: 1, den: 4 });
        for bad in ["0.5", "1", "1/0", "rad:x", "a/b", "rad:inf"] {
            assert!(matches!(parse_angle(bad), Err(CliError::BadAngle(_))), "{bad}");
        }
    }
}
