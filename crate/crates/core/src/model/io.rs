//! Loader for two-column data files.
//!
//! One `abscissa value` pair per line, separated by whitespace or a comma.
//! Blank lines and text after `#` are ignored. A line holding only `jump`
//! declares a discontinuity: the next row must repeat the previous abscissa
//! with the right-limit value.
//!
//! ```text
//! # step moisture
//! -1 0
//! 0  0
//! jump
//! 0  1
//! 1  1
//! ```

use std::path::Path;

use super::{DataFunction, ModelError, Piecewise};

pub fn parse_piecewise(text: &str) -> Result<Piecewise, ModelError> {
    let mut knots: Vec<(f64, f64)> = Vec::new();
    let mut pending_jump: Option<usize> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body.eq_ignore_ascii_case("jump") {
            if knots.is_empty() {
                return Err(ModelError::Parse {
                    line,
                    message: "jump before any data row".into(),
                });
            }
            pending_jump = Some(line);
            continue;
        }
        let cols: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(ModelError::Parse {
                line,
                message: format!("expected two columns, found {}", cols.len()),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| ModelError::Parse {
                line,
                message: format!("bad number {s:?}: {e}"),
            })
        };
        let (x, v) = (num(cols[0])?, num(cols[1])?);
        if let Some(at) = pending_jump.take() {
            let prev = knots[knots.len() - 1].0;
            if x != prev {
                return Err(ModelError::Parse {
                    line,
                    message: format!("row after jump (line {at}) must repeat abscissa {prev}"),
                });
            }
        }
        knots.push((x, v));
    }
    if let Some(at) = pending_jump {
        return Err(ModelError::Parse {
            line: at,
            message: "jump marker at end of file".into(),
        });
    }
    Piecewise::new(knots)
}

pub fn load_data_file(path: &Path) -> Result<DataFunction, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_piecewise(&text).map(DataFunction::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_step_with_jump_marker() {
        let p = parse_piecewise("# step\n-1 0\n0 0\njump\n0 1\n1, 1\n").unwrap();
        assert_eq!(p.jumps(), vec![0.0]);
        assert_eq!(p.value(-0.5), 0.0);
        assert_eq!(p.value(0.5), 1.0);
    }

    #[test]
    fn jump_must_repeat_abscissa() {
        let err = parse_piecewise("0 0\njump\n0.5 1\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(parse_piecewise("0 1 2\n").is_err());
        assert!(parse_piecewise("zero 1\n").is_err());
        assert!(parse_piecewise("jump\n0 1\n").is_err());
        assert!(parse_piecewise("0 1\njump\n").is_err());
        assert!(parse_piecewise("# nothing\n").is_err());
    }
}
