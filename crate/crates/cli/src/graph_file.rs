//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! V E
//! u v [length]
//! ```
//!
//! Vertices are `0..V`. An edge line without a length takes the default
//! length supplied by the caller.

use std::fs;
use std::path::Path;

use qgraph_core::{Graph, GraphError, MetricGraph};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("file has no header line")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header declares {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Edge { line: usize, source: GraphError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub metric: MetricGraph,
    /// Number of edges whose length came from the default.
    pub defaulted_lengths: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| syntax(line, format!("cannot parse {what} from {token:?}")))
}

pub fn parse(text: &str, default_length: f64) -> Result<GraphFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(syntax(header_line, "header must be `V E`"));
    }
    let v: usize = number(fields[0], header_line, "vertex count")?;
    let e: usize = number(fields[1], header_line, "edge count")?;

    let mut edges = Vec::with_capacity(e);
    let mut lengths = Vec::with_capacity(e);
    let mut defaulted_lengths = 0;
    for (line, body) in lines {
        let fields: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(syntax(line, "edge line must be `u v [length]`"));
        }
        let u: usize = number(fields[0], line, "vertex")?;
        let w: usize = number(fields[1], line, "vertex")?;
        let length = match fields.get(2) {
            Some(t) => {
                let l: f64 = number(t, line, "length")?;
                if !(l > 0.0 && l.is_finite()) {
                    return Err(ParseError::Edge {
                        line,
                        source: GraphError::NonpositiveLength { edge: edges.len(), length: l },
                    });
                }
                l
            }
            None => {
                defaulted_lengths += 1;
                default_length
            }
        };
        if u >= v || w >= v {
            return Err(ParseError::Edge {
                line,
                source: GraphError::VertexOutOfRange { u, v: w, vertex_count: v },
            });
        }
        if u == w {
            return Err(ParseError::Edge { line, source: GraphError::SelfLoop(u) });
        }
        let key = (u.min(w), u.max(w));
        if edges.iter().any(|&(a, b): &(usize, usize)| (a.min(b), a.max(b)) == key) {
            return Err(ParseError::Edge { line, source: GraphError::DuplicateEdge(key.0, key.1) });
        }
        edges.push((u, w));
        lengths.push(length);
    }
    if edges.len() != e {
        return Err(ParseError::EdgeCount { expected: e, found: edges.len() });
    }
    let graph = Graph::new(v, &edges)?;
    Ok(GraphFile { metric: MetricGraph::new(graph, lengths)?, defaulted_lengths })
}

pub fn load(path: &Path, default_length: f64) -> Result<GraphFile, ParseError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    parse(&text, default_length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_default_lengths() {
        let text = "# K_{1,2}\n3 2\n0 1 # first\n\n0 2 2.5\n";
        let f = parse(text, 1.5).unwrap();
        assert_eq!(f.metric.lengths(), &[1.5, 2.5]);
        assert_eq!(f.defaulted_lengths, 1);
        assert_eq!(f.metric.graph().edge_count(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("2 1\n\n0 x\n", 1.0).unwrap_err();
        assert!(err.to_string().starts_with("line 3:"), "{err}");
        let err = parse("3 2\n0 1\n1 1\n", 1.0).unwrap_err();
        assert!(matches!(err, ParseError::Edge { line: 3, source: GraphError::SelfLoop(1) }));
        let err = parse("3 2\n0 1\n1 0\n", 1.0).unwrap_err();
        assert!(matches!(err, ParseError::Edge { line: 3, .. }));
        let err = parse("2 1\n0 1 -1\n", 1.0).unwrap_err();
        assert!(matches!(err, ParseError::Edge { line: 2, .. }));
        let err = parse("2 1\n0 5\n", 1.0).unwrap_err();
        assert!(err.to_string().starts_with("line 2:"));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse("# nothing\n", 1.0), Err(ParseError::MissingHeader)));
        assert!(matches!(parse("3 2\n0 1\n", 1.0), Err(ParseError::EdgeCount { expected: 2, found: 1 })));
        assert!(matches!(
            parse("4 2\n0 1\n2 3\n", 1.0),
            Err(ParseError::Graph(GraphError::Disconnected(_)))
        ));
        assert!(matches!(parse("1 0\n", 1.0), Err(ParseError::Graph(GraphError::TooFewVertices(1)))));
    }
}
