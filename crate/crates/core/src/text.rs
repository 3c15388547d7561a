//! Line-oriented text format for ray sets.
//!
//! One ray per line, components whitespace-separated, each an integer or a
//! rational `p/q`. `#` starts a comment, blank lines are ignored. The
//! dimension is inferred from the first ray line and enforced thereafter.

use std::str::FromStr;

use crate::ray::{Ray, RayError, RaySet, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextFormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {second_line}: duplicate of the ray on line {first_line}")]
    DuplicateRay {
        first_line: usize,
        second_line: usize,
    },
    #[error("line {line}: expected {expected} components, found {found}")]
    MixedDimension {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no rays in input")]
    Empty,
}

/// Parses the text form into a canonicalized, duplicate-checked ray set.
pub fn parse_ray_set(src: &str) -> Result<RaySet, TextFormatError> {
    let mut rays: Vec<Ray> = Vec::new();
    let mut lines_of: Vec<usize> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, raw_line) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if let Some(expected) = dim {
            if tokens.len() != expected {
                return Err(TextFormatError::MixedDimension {
                    line: line_no,
                    expected,
                    found: tokens.len(),
                });
            }
        } else {
            dim = Some(tokens.len());
        }
        let mut components = Vec::with_capacity(tokens.len());
        for tok in &tokens {
            let value = Scalar::from_str(tok).map_err(|e| TextFormatError::Parse {
                line: line_no,
                message: format!("bad component {tok:?}: {e}"),
            })?;
            components.push(value);
        }
        let ray = Ray::new(&components).map_err(|e| match e {
            RayError::ZeroVector => TextFormatError::Parse {
                line: line_no,
                message: "zero ray".to_string(),
            },
            other => TextFormatError::Parse {
                line: line_no,
                message: other.to_string(),
            },
        })?;
        if let Some(pos) = rays.iter().position(|r| *r == ray) {
            return Err(TextFormatError::DuplicateRay {
                first_line: lines_of[pos],
                second_line: line_no,
            });
        }
        rays.push(ray);
        lines_of.push(line_no);
    }
    if rays.is_empty() {
        return Err(TextFormatError::Empty);
    }
    Ok(RaySet::from_rays(rays).expect("duplicates and dimensions already checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_ray() {
        let s = parse_ray_set("1 -1 0 0\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.ray(0), &Ray::from_ints(&[1, -1, 0, 0]).unwrap());
    }

    #[test]
    fn parses_rationals_and_comments() {
        let src = "# header\n\n1/2 -1/2 -1/2 0  # trailing\n0 0 0 2\n";
        let s = parse_ray_set(src).unwrap();
        assert_eq!(s.ray(0), &Ray::from_ints(&[1, -1, -1, 0]).unwrap());
        assert_eq!(s.ray(1), &Ray::from_ints(&[0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn duplicate_reports_both_lines() {
        let err = parse_ray_set("2 -2 0 0\n1 -1 0 0\n").unwrap_err();
        assert_eq!(
            err,
            TextFormatError::DuplicateRay {
                first_line: 1,
                second_line: 2
            }
        );
    }

    #[test]
    fn mixed_dimension_rejected() {
        let err = parse_ray_set("1 0 0\n1 0 0 0\n").unwrap_err();
        assert_eq!(
            err,
            TextFormatError::MixedDimension {
                line: 2,
                expected: 3,
                found: 4
            }
        );
    }

    #[test]
    fn zero_ray_rejected_with_line() {
        match parse_ray_set("1 0\n0 0\n").unwrap_err() {
            TextFormatError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(
            parse_ray_set("# only comments\n"),
            Err(TextFormatError::Empty)
        );
    }

    #[test]
    fn round_trips_text_form() {
        let src = "0 1 -1 0\n1 1 1 1\n";
        let s = parse_ray_set(src).unwrap();
        assert_eq!(s.to_text(), src);
        assert_eq!(parse_ray_set(&s.to_text()).unwrap(), s);
    }
}
