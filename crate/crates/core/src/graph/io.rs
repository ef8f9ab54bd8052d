//! Edge-list and JSON graph formats.
//!
//! Edge list: optional `#` comment lines, a header `n m`, then exactly `m`
//! lines `u v`. JSON: `{"n": <int>, "edges": [[u, v], ...]}`.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Vertex};

/// What to do with an edge that was already listed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Duplicates {
    #[default]
    Reject,
    Merge,
}

fn syntax(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_pair(text: &str, line: usize, what: &str) -> Result<(usize, usize), GraphError> {
    let mut fields = text.split_whitespace();
    let mut next = |name: &str| -> Result<usize, GraphError> {
        let tok = fields
            .next()
            .ok_or_else(|| syntax(line, format!("expected {what}, missing {name}")))?;
        tok.parse()
            .map_err(|_| syntax(line, format!("{name} is not a non-negative integer: {tok:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(syntax(line, format!("expected {what}, found extra fields")));
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str, duplicates: Duplicates) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| syntax(1, "missing header \"n m\""))?;
    let (n, m) = parse_pair(header, header_line, "header \"n m\"")?;

    let mut g = Graph::empty(n);
    let mut seen = 0;
    let mut last_line = header_line;
    for (line, text) in lines {
        if seen == m {
            return Err(syntax(line, format!("more than the declared {m} edge lines")));
        }
        let (u, v) = parse_pair(text, line, "edge \"u v\"")?;
        g.add_edge(u, v, Some(line), duplicates)?;
        seen += 1;
        last_line = line;
    }
    if seen < m {
        return Err(syntax(last_line, format!("declared {m} edges but found {seen}")));
    }
    g.finish();
    Ok(g)
}

/// Serialized form of a [`Graph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(json: GraphJson) -> Result<Graph, GraphError> {
        Graph::from_edges(json.n, json.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Graph {
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        parse_edge_list(text, Duplicates::Reject)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let json: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::try_from(json)
    }
}
