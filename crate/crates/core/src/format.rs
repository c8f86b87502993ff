//! Line-oriented text formats.
//!
//! `tgspace 1`:
//!
//! ```text
//! tgspace 1
//! vertices N
//! edges M
//! u v            (M lines, 0-based, u < v)
//! basepoint b
//! pieces K
//! k v1 .. vk     (K lines, vertex count then sorted ids)
//! ```
//!
//! `tgcolor 1`: the header followed by one `v c` line per vertex, sorted by
//! `v`. Lines starting with `#` are comments in both formats.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{ParseError, SpaceError};
use crate::metric::{Graph, Vertex};
use crate::Color;
use crate::space::Space;

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate().peekable(), last: 0 }
    }

    /// Next non-comment line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next()
            .ok_or_else(|| ParseError::new(self.last + 1, format!("unexpected end of file, expected {what}")))
    }

    fn keyword(&mut self, key: &str) -> Result<(usize, usize), ParseError> {
        let (no, line) = self.expect(key)?;
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(v), None) if k == key => Ok((no, number(no, v)?)),
            _ => Err(ParseError::new(no, format!("expected `{key} <count>`, found `{line}`"))),
        }
    }
}

fn number(line: usize, token: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a non-negative integer")))
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace().map(|t| number(line, t)).collect()
}

fn header(lines: &mut Lines<'_>, magic: &str) -> Result<(), ParseError> {
    let (no, line) = lines.expect("header")?;
    if line.trim_end() != format!("{magic} 1") {
        return Err(ParseError::new(no, format!("expected header `{magic} 1`")));
    }
    Ok(())
}

fn trailing(lines: &mut Lines<'_>) -> Result<(), ParseError> {
    match lines.next() {
        Some((no, line)) if !line.trim().is_empty() => {
            Err(ParseError::new(no, format!("unexpected trailing content `{line}`")))
        }
        Some(_) => trailing(lines),
        None => Ok(()),
    }
}

pub fn parse_space(text: &str) -> Result<Space, ParseError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "tgspace")?;
    let (_, n) = lines.keyword("vertices")?;
    let (_, m) = lines.keyword("edges")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    for _ in 0..m {
        let (no, line) = lines.expect("an edge line")?;
        let ids = numbers(no, line)?;
        let &[u, v] = ids.as_slice() else {
            return Err(ParseError::new(no, "edge line must hold exactly two ids"));
        };
        if u >= n || v >= n {
            return Err(ParseError::new(no, format!("edge {u} {v} has an id outside 0..{n}")));
        }
        if u >= v {
            return Err(ParseError::new(no, format!("edge {u} {v} must satisfy u < v")));
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::new(no, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    let (bno, basepoint) = lines.keyword("basepoint")?;
    if basepoint >= n {
        return Err(ParseError::new(bno, format!("basepoint {basepoint} outside 0..{n}")));
    }
    let (_, k) = lines.keyword("pieces")?;
    let mut pieces = Vec::with_capacity(k);
    for _ in 0..k {
        let (no, line) = lines.expect("a piece line")?;
        let ids = numbers(no, line)?;
        let Some((&count, members)) = ids.split_first() else {
            return Err(ParseError::new(no, "empty piece line"));
        };
        if members.len() != count {
            return Err(ParseError::new(
                no,
                format!("piece declares {count} vertices but lists {}", members.len()),
            ));
        }
        if let Some(&v) = members.iter().find(|&&v| v >= n) {
            return Err(ParseError::new(no, format!("piece vertex {v} outside 0..{n}")));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParseError::new(no, "piece vertices must be strictly increasing"));
        }
        pieces.push(members.to_vec());
    }
    trailing(&mut lines)?;
    let graph = Graph::new(n, &edges).map_err(|e| ParseError::new(0, e.to_string()))?;
    Space::new(graph, pieces, basepoint).map_err(|e: SpaceError| ParseError::new(0, e.to_string()))
}

/// Serializes a space; `meta` pairs are appended as `# key value` lines.
pub fn write_space(space: &Space, meta: &[(String, String)]) -> String {
    let g = space.graph();
    let mut out = String::new();
    out.push_str("tgspace 1\n");
    writeln!(out, "vertices {}", g.vertex_count()).unwrap();
    writeln!(out, "edges {}", g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    writeln!(out, "basepoint {}", space.basepoint()).unwrap();
    writeln!(out, "pieces {}", space.piece_count()).unwrap();
    for piece in space.pieces() {
        write!(out, "{}", piece.len()).unwrap();
        for v in piece {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for (k, v) in meta {
        writeln!(out, "# {k} {v}").unwrap();
    }
    out
}

/// `(vertex, color)` pairs of a coloring file, strictly increasing in vertex.
pub fn parse_coloring(text: &str) -> Result<Vec<(Vertex, Color)>, ParseError> {
    let mut lines = Lines::new(text);
    header(&mut lines, "tgcolor")?;
    let mut out: Vec<(Vertex, Color)> = Vec::new();
    while let Some((no, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let ids = numbers(no, line)?;
        let &[v, c] = ids.as_slice() else {
            return Err(ParseError::new(no, "coloring line must be `vertex color`"));
        };
        if out.last().is_some_and(|&(prev, _)| prev >= v) {
            return Err(ParseError::new(no, "vertices must be strictly increasing"));
        }
        let c = Color::try_from(c).map_err(|_| ParseError::new(no, "color too large"))?;
        out.push((v, c));
    }
    Ok(out)
}

pub fn write_coloring(entries: impl IntoIterator<Item = (Vertex, Color)>) -> String {
    let mut out = String::from("tgcolor 1\n");
    for (v, c) in entries {
        writeln!(out, "{v} {c}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIPOD: &str = "tgspace 1\nvertices 4\nedges 3\n0 1\n0 2\n0 3\nbasepoint 1\npieces 3\n2 0 1\n2 0 2\n2 0 3\n";

    #[test]
    fn space_round_trip_is_bit_exact() {
        let s = parse_space(TRIPOD).unwrap();
        assert_eq!(write_space(&s, &[]), TRIPOD);
        let with_meta = write_space(&s, &[("seed".into(), "7".into())]);
        assert!(with_meta.ends_with("# seed 7\n"));
        assert_eq!(parse_space(&with_meta).unwrap(), s);
    }

    #[test]
    fn rejects_malformed_spaces() {
        let cases = [
            ("tgspace 2\n", 1),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n", 5),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n0 1\nbasepoint 0\npieces 0\n", 5),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n1 3\nbasepoint 0\npieces 0\n", 5),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n2 1\nbasepoint 0\npieces 0\n", 5),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n1 2\nbasepoint 0\npieces 1\n3 0 2 1\n", 8),
            ("tgspace 1\nvertices 3\nedges 2\n0 1\n1 2\nbasepoint 0\npieces 1\n4 0 1 2\n", 8),
            ("tgspace 1\nvertices x\n", 2),
        ];
        for (text, line) in cases {
            let err = parse_space(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
        }
    }

    #[test]
    fn coloring_format() {
        let text = write_coloring([(0, 1), (2, 0)]);
        assert_eq!(text, "tgcolor 1\n0 1\n2 0\n");
        assert_eq!(parse_coloring(&text).unwrap(), vec![(0, 1), (2, 0)]);
        assert!(parse_coloring("tgcolor 1\n2 0\n1 0\n").is_err());
        assert!(parse_coloring("tgcolor 1\n2\n").is_err());
    }
}
