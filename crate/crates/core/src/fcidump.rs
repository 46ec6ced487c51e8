//! FCIDUMP reader.
//!
//! A `&FCI … &END` (or `/`) namelist header carries `NORB`, `NELEC` and
//! `MS2`; records are `value i j k l` with 1-based orbital indices:
//!
//! | indices        | meaning                      |
//! |----------------|------------------------------|
//! | `0 0 0 0`      | core energy                  |
//! | `i j 0 0`      | one-body `h_ij`              |
//! | `i j k l`      | two-body `(ij|kl)`           |
//! | `i 0 0 0`      | orbital energy (ignored)     |
//!
//! Fortran `D` exponents are accepted.

use std::collections::HashMap;
use std::io::BufRead;

use log::warn;
use thiserror::Error;

use crate::fermion::{FermionError, FermionIntegrals};

#[derive(Debug, Error)]
pub enum FcidumpError {
    #[error("malformed FCIDUMP header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("line {line}: orbital index {index} exceeds NORB = {norb}")]
    IndexOutOfRange { line: usize, index: usize, norb: usize },
    #[error(transparent)]
    Integrals(#[from] FermionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_fortran_float(s: &str) -> Option<f64> {
    s.replace(['D', 'd'], "E").parse::<f64>().ok()
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
}

fn parse_header(text: &str) -> Result<Header, FcidumpError> {
    let body = text.trim_start();
    let body = body
        .get(..4)
        .filter(|p| p.eq_ignore_ascii_case("&FCI"))
        .map(|_| &body[4..])
        .ok_or_else(|| FcidumpError::MalformedHeader("expected &FCI".into()))?;
    let mut fields: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for token in body
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim().to_ascii_uppercase();
            if key.is_empty() {
                return Err(FcidumpError::MalformedHeader(format!("dangling '=' in {token:?}")));
            }
            let entry = fields.entry(key.clone()).or_default();
            if !value.is_empty() {
                entry.push(value.to_string());
            }
            current = Some(key);
        } else {
            match &current {
                Some(k) => fields.get_mut(k).expect("key inserted").push(token.to_string()),
                None => return Err(FcidumpError::MalformedHeader(format!("value {token:?} before any key"))),
            }
        }
    }
    let int_field = |key: &str| -> Result<Option<i64>, FcidumpError> {
        match fields.get(key).map(|v| v.as_slice()) {
            None => Ok(None),
            Some([v]) => v
                .parse::<i64>()
                .map(Some)
                .map_err(|_| FcidumpError::MalformedHeader(format!("{key}={v} is not an integer"))),
            Some(other) => Err(FcidumpError::MalformedHeader(format!(
                "{key} expects one value, got {}",
                other.len()
            ))),
        }
    };
    let norb = int_field("NORB")?.ok_or_else(|| FcidumpError::MalformedHeader("missing NORB".into()))?;
    let nelec = int_field("NELEC")?.ok_or_else(|| FcidumpError::MalformedHeader("missing NELEC".into()))?;
    if norb < 1 || nelec < 0 {
        return Err(FcidumpError::MalformedHeader(format!("NORB={norb}, NELEC={nelec}")));
    }
    Ok(Header {
        norb: norb as usize,
        nelec: nelec as usize,
        ms2: int_field("MS2")?.unwrap_or(0),
    })
}

/// Read integrals from an FCIDUMP stream and expand their symmetries.
///
/// A stream without a header is accepted; `NORB` is then the largest index
/// seen and `NELEC` is 0.
pub fn parse_fcidump<R: BufRead>(reader: R) -> Result<FermionIntegrals, FcidumpError> {
    let mut header_text = String::new();
    let mut in_header = false;
    let mut header_done = false;
    let mut records: Vec<(usize, f64, [usize; 4])> = Vec::new();

    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !header_done && (in_header || trimmed.starts_with('&')) {
            if !in_header && !records.is_empty() {
                return Err(FcidumpError::MalformedHeader(format!(
                    "header starts after records at line {lineno}"
                )));
            }
            in_header = true;
            // skip the opening "&FCI" when scanning for the terminator
            let from = if header_text.is_empty() {
                trimmed.len().min(4)
            } else {
                0
            };
            let upper = trimmed.to_ascii_uppercase();
            let end = ["&END", "$END", "/"]
                .iter()
                .filter_map(|m| upper.get(from..)?.find(m).map(|p| p + from))
                .min();
            match end {
                Some(p) => {
                    header_text.push_str(&trimmed[..p]);
                    in_header = false;
                    header_done = true;
                }
                None => header_text.push_str(trimmed),
            }
            header_text.push(' ');
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(FcidumpError::Record {
                line: lineno,
                message: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let value = parse_fortran_float(fields[0]).ok_or_else(|| FcidumpError::Record {
            line: lineno,
            message: format!("non-numeric value {:?}", fields[0]),
        })?;
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| FcidumpError::Record {
                line: lineno,
                message: format!("invalid orbital index {f:?}"),
            })?;
        }
        records.push((lineno, value, idx));
    }
    if in_header {
        return Err(FcidumpError::MalformedHeader("unterminated namelist".into()));
    }

    let header = if header_done {
        parse_header(&header_text)?
    } else {
        Header {
            norb: records.iter().flat_map(|r| r.2).max().unwrap_or(0),
            nelec: 0,
            ms2: 0,
        }
    };
    let mut ints = FermionIntegrals::new(header.norb, header.nelec)?;
    ints.set_ms2(header.ms2);

    let mut saw_core = false;
    for (line, value, [i, j, k, l]) in records {
        if let Some(&bad) = [i, j, k, l].iter().find(|&&x| x > header.norb) {
            return Err(FcidumpError::IndexOutOfRange {
                line,
                index: bad,
                norb: header.norb,
            });
        }
        match (i, j, k, l) {
            (0, 0, 0, 0) => {
                ints.core_energy = value;
                saw_core = true;
            }
            (_, 0, 0, 0) => {}
            (i, j, 0, 0) if i > 0 && j > 0 => ints.set_one_body(i - 1, j - 1, value)?,
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => ints.set_two_body(i - 1, j - 1, k - 1, l - 1, value)?,
            _ => {
                return Err(FcidumpError::Record {
                    line,
                    message: format!("unrecognised index pattern {i} {j} {k} {l}"),
                })
            }
        }
    }
    if !saw_core {
        warn!("FCIDUMP has no core-energy record; using 0");
    }
    Ok(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<FermionIntegrals, FcidumpError> {
        parse_fcidump(s.as_bytes())
    }

    #[test]
    fn core_energy_only() {
        let ints = parse("0.5 0 0 0 0\n").unwrap();
        assert_eq!(ints.core_energy, 0.5);
        assert_eq!(ints.n_orbitals(), 0);
    }

    #[test]
    fn header_and_records() {
        let text = " &FCI NORB=   2,NELEC= 2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n &END\n\
                    0.6D0 1 1 1 1\n 0.1 2 1 1 1\n -1.25 1 1 0 0\n 0.3 2 1 0 0\n 0.7 0 0 0 0\n";
        let ints = parse(text).unwrap();
        assert_eq!(ints.n_orbitals(), 2);
        assert_eq!(ints.n_electrons(), 2);
        assert_eq!(ints.two_body(0, 0, 0, 0), 0.6);
        assert_eq!(ints.two_body(1, 0, 0, 0), 0.1);
        assert_eq!(ints.two_body(0, 0, 0, 1), 0.1);
        assert_eq!(ints.one_body(0, 1), 0.3);
        assert_eq!(ints.one_body(0, 0), -1.25);
        assert_eq!(ints.core_energy, 0.7);
    }

    #[test]
    fn slash_terminated_single_line_header() {
        let ints = parse("&FCI NORB=1, NELEC=1, MS2=1 /\n-0.5 1 1 0 0\n").unwrap();
        assert_eq!(ints.ms2(), 1);
        assert_eq!(ints.one_body(0, 0), -0.5);
    }

    #[test]
    fn missing_core_defaults_to_zero() {
        let ints = parse("&FCI NORB=1,NELEC=0 &END\n-0.5 1 1 0 0\n").unwrap();
        assert_eq!(ints.core_energy, 0.0);
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(
            parse("&FCI NELEC=2 &END\n"),
            Err(FcidumpError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse("&FCI NORB=x,NELEC=2 &END\n"),
            Err(FcidumpError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse("&FCI NORB=2,NELEC=2\n0.1 1 1 1 1\n"),
            Err(FcidumpError::MalformedHeader(_))
        ));
    }

    #[test]
    fn record_errors() {
        let err = parse("&FCI NORB=1,NELEC=0 &END\n0.1 2 1 0 0\n").unwrap_err();
        assert!(matches!(err, FcidumpError::IndexOutOfRange { line: 2, index: 2, .. }));
        let err = parse("&FCI NORB=1,NELEC=0 &END\nabc 1 1 0 0\n").unwrap_err();
        assert!(matches!(err, FcidumpError::Record { line: 2, .. }));
        let err = parse("&FCI NORB=1,NELEC=0 &END\n0.1 1 1 0\n").unwrap_err();
        assert!(matches!(err, FcidumpError::Record { .. }));
        assert!(parse("&FCI NORB=1,NELEC=3 &END\n").is_err());
    }
}
