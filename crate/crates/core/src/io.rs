//! Plain-text edge lists: one `u v t` triple per line, with an optional
//! `# n=<N> r=<R>` header before the first edge and `#` comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, MAX_CELLS};

/// A parsed file together with the number of repeated edges dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub graph: TemporalGraph,
    pub duplicates: usize,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads `n=<N> r=<R>` from a comment body, or `None` if it is an ordinary
/// comment.
fn parse_header(body: &str, line: usize) -> Result<Option<(usize, usize)>> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.first().is_none_or(|f| !f.starts_with("n=")) {
        return Ok(None);
    }
    let mut n = None;
    let mut r = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("malformed header field '{field}'")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_error(line, format!("header value '{value}' is not a non-negative integer")))?;
        let slot = match key {
            "n" => &mut n,
            "r" => &mut r,
            _ => return Err(parse_error(line, format!("unknown header key '{key}'"))),
        };
        if slot.replace(value).is_some() {
            return Err(parse_error(line, format!("header repeats '{key}'")));
        }
    }
    match (n, r) {
        (Some(n), Some(r)) => Ok(Some((n, r))),
        _ => Err(parse_error(line, "header must give both n and r")),
    }
}

fn parse_field(token: &str, what: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("{what} '{token}' is not a non-negative integer")))
}

fn check_cells(n: usize, r: usize, line: usize) -> Result<()> {
    if n.saturating_mul(r) > MAX_CELLS {
        return Err(parse_error(line, format!("graph too large: n = {n}, r = {r} exceeds {MAX_CELLS} cells")));
    }
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<Parsed> {
    let mut header: Option<(usize, usize)> = None;
    let mut seen_edge = false;
    let mut triples = Vec::new();
    let (mut max_id, mut max_t) = (0, 0);
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(body) = trimmed.strip_prefix('#') {
            if !seen_edge && header.is_none() {
                if let Some((n, r)) = parse_header(body, line)? {
                    if n == 0 || r == 0 {
                        return Err(parse_error(line, "header n and r must be positive"));
                    }
                    check_cells(n, r, line)?;
                    header = Some((n, r));
                }
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_error(line, format!("expected 'u v t', found {} fields", tokens.len())));
        }
        let u = parse_field(tokens[0], "vertex", line)?;
        let v = parse_field(tokens[1], "vertex", line)?;
        let t = parse_field(tokens[2], "snapshot", line)?;
        if u == v {
            return Err(parse_error(line, format!("self-loop on vertex {u}")));
        }
        if let Some((n, r)) = header {
            if t >= r {
                return Err(parse_error(line, format!("snapshot {t} is not below declared r = {r}")));
            }
            if u.max(v) >= n {
                return Err(parse_error(line, format!("vertex {} is not below declared n = {n}", u.max(v))));
            }
        } else {
            check_cells(u.max(v).saturating_add(1), t.saturating_add(1), line)?;
            check_cells(max_id.max(u).max(v).saturating_add(1), max_t.max(t).saturating_add(1), line)?;
        }
        max_id = max_id.max(u).max(v);
        max_t = max_t.max(t);
        seen_edge = true;
        triples.push((u, v, t));
    }
    let (n, r) = match header {
        Some(declared) => declared,
        None if triples.is_empty() => {
            return Err(Error::Input("edge list has no edges and no '# n=<N> r=<R>' header".into()));
        }
        None => (max_id + 1, max_t + 1),
    };
    let mut snapshots = vec![Vec::new(); r];
    for (u, v, t) in triples {
        snapshots[t].push((u, v));
    }
    let (graph, duplicates) = TemporalGraph::with_dedup(n, snapshots)?;
    Ok(Parsed { graph, duplicates })
}

pub fn load(path: &Path) -> Result<Parsed> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_edge_list(&text)
}

/// Writes the header followed by every edge, snapshot by snapshot.
pub fn save<W: Write>(graph: &TemporalGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# n={} r={}", graph.n(), graph.r())?;
    for t in 0..graph.r() {
        for &(u, v) in graph.edges(t) {
            writeln!(out, "{u} {v} {t}")?;
        }
    }
    out.flush()
}

pub fn save_to_path(graph: &TemporalGraph, path: &Path) -> Result<()> {
    let io_error = |source| Error::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io_error)?;
    save(graph, std::io::BufWriter::new(file)).map_err(io_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn infers_dimensions() {
        let parsed = parse_edge_list("0 1 0\n1 2 0\n0 1 1").unwrap();
        let g = parsed.graph;
        assert_eq!((g.n(), g.r()), (3, 2));
        assert_eq!((g.edge_count(0), g.edge_count(1)), (2, 1));
        assert_eq!(parsed.duplicates, 0);
    }

    #[test]
    fn header_keeps_isolated_vertices() {
        let g = parse_edge_list("# n=5 r=3\n0 1 0\n").unwrap().graph;
        assert_eq!((g.n(), g.r()), (5, 3));
        assert_eq!(g.total_edge_count(), 1);
    }

    #[test]
    fn comments_blank_lines_and_duplicates() {
        let parsed = parse_edge_list("# a comment\n\n0 1 0\n1 0 0\n  # indented\n2 1 0\n").unwrap();
        assert_eq!(parsed.duplicates, 1);
        assert_eq!(parsed.graph.edge_count(0), 2);
        // A header-looking line after the first edge is just a comment.
        let g = parse_edge_list("0 1 0\n# n=9 r=9\n").unwrap().graph;
        assert_eq!((g.n(), g.r()), (2, 1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_edge_list("0 0 0").unwrap_err()), 1);
        assert_eq!(line_of(parse_edge_list("0 1 0\n0 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_edge_list("0 1 0\nx 1 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_edge_list("# n=3 r=1\n0 1 0\n0 2 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_edge_list("# n=3 r=2\n0 3 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_edge_list("# n=3\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_edge_list("0 -1 0").unwrap_err()), 1);
        assert_eq!(line_of(parse_edge_list("0 99999999999 0").unwrap_err()), 1);
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("# n=0 r=1\n").is_err());
    }

    #[test]
    fn save_then_parse() {
        let g = TemporalGraph::new(6, vec![vec![(0, 1), (4, 5)], vec![], vec![(2, 3)]]).unwrap();
        let mut buf = Vec::new();
        save(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# n=6 r=3\n"));
        assert_eq!(parse_edge_list(&text).unwrap().graph, g);
    }
}
