//! Text formats for vertex sets.
//!
//! One vertex per line as a bitstring, `#` comments and blank lines are
//! skipped, and the first meaningful line may be a `n=<dim>` header.

use std::fs;
use std::path::Path;

use crate::cube::{parse_mask, VertexSet};
use crate::error::{Error, Result};

pub fn parse_vertex_set(text: &str) -> Result<VertexSet> {
    let mut dim: Option<usize> = None;
    let mut masks = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if let Some(rest) = line.strip_prefix("n=") {
                let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad dimension header {line:?}"),
                })?;
                dim = Some(n);
                continue;
            }
        }
        let n = *dim.get_or_insert(line.len());
        if line.len() != n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {n} characters, found {}", line.len()),
            });
        }
        let mask = parse_mask(line).map_err(|_| Error::Parse {
            line: line_no,
            message: format!("not a bitstring: {line:?}"),
        })?;
        masks.push(mask);
    }
    let n = dim.ok_or(Error::Parse {
        line: 0,
        message: "no vertices and no n= header".into(),
    })?;
    VertexSet::from_masks(n, masks).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}

pub fn read_vertex_set(path: &Path) -> Result<VertexSet> {
    parse_vertex_set(&fs::read_to_string(path)?)
}

pub fn format_vertex_set(set: &VertexSet) -> String {
    let mut out = format!("n={}\n", set.dim());
    for s in set.to_bitstrings() {
        out.push_str(&s);
        out.push('\n');
    }
    out
}

pub fn write_vertex_set(path: &Path, set: &VertexSet) -> Result<()> {
    fs::write(path, format_vertex_set(set))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_header() {
        let s = parse_vertex_set("# K2\nn=10\n\n0000000000\n1111110000\n").unwrap();
        assert_eq!(s.dim(), 10);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn infers_dimension() {
        let s = parse_vertex_set("0110\n1111\n").unwrap();
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn reports_bad_line_number() {
        match parse_vertex_set("0000\n00x0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_vertex_set("n=4\n000\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_only_is_empty_set() {
        let s = parse_vertex_set("n=6\n").unwrap();
        assert!(s.is_empty());
        assert!(parse_vertex_set("# nothing\n").is_err());
    }

    #[test]
    fn format_round_trips() {
        let s = VertexSet::parse_bitstrings(&["0011", "1000"]).unwrap();
        assert_eq!(parse_vertex_set(&format_vertex_set(&s)).unwrap(), s);
    }
}
