use std::io::BufRead;
use std::path::Path;

use super::{normalize_weights, Graph, GraphBuilder, IngestReport};
use crate::error::{Error, Result};

/// Input file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Pajek,
}

impl GraphFormat {
    /// `.net` and `.paj` files are Pajek; everything else is an edge list.
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("net") || ext.eq_ignore_ascii_case("paj") => GraphFormat::Pajek,
            _ => GraphFormat::EdgeList,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_weight(token: &str, line: usize) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid weight `{token}`")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(parse_err(line, format!("weight {w} must be finite and > 0")));
    }
    Ok(w)
}

/// Parses a whitespace-delimited `src dst [weight]` edge list.
///
/// Lines starting with `#` or `%` are comments. With `directed == false`
/// every record becomes two arcs of equal weight. Weights are read from the
/// third column when `has_weights` is set and default to 1.0 otherwise.
pub fn parse_edge_list<R: BufRead>(reader: R, directed: bool, has_weights: bool) -> Result<(Graph, IngestReport)> {
    let mut builder = GraphBuilder::default();
    if !directed {
        builder.mark_symmetrized();
    }
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (src, dst) = match (tokens.next(), tokens.next()) {
            (Some(s), Some(d)) => (s, d),
            _ => return Err(parse_err(lineno, "expected `src dst [weight]`")),
        };
        let weight = match tokens.next() {
            Some(tok) if has_weights => parse_weight(tok, lineno)?,
            _ => 1.0,
        };
        builder.count_record();
        let s = builder.node(src);
        let t = builder.node(dst);
        builder.arc(s, t, weight)?;
        if !directed {
            builder.arc(t, s, weight)?;
        }
    }
    builder.finish()
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Vertices,
    Arcs,
    Edges,
}

/// Parses the `*Vertices` / `*Arcs` / `*Edges` subset of the Pajek format.
///
/// Nodes are labelled by their 1-based Pajek id. `*Edges` entries are
/// symmetrized; `*Arcs` entries stay directed.
pub fn parse_pajek<R: BufRead>(reader: R) -> Result<(Graph, IngestReport)> {
    let mut builder = GraphBuilder::default();
    let mut vertex_count: Option<usize> = None;
    let mut section = Section::None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(header) = line.strip_prefix('*') {
            let mut parts = header.split_whitespace();
            let keyword = parts.next().unwrap_or("").to_ascii_lowercase();
            section = match keyword.as_str() {
                "vertices" => {
                    let count: usize = parts
                        .next()
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| parse_err(lineno, "`*Vertices` needs a count"))?;
                    for id in 1..=count {
                        builder.node(&id.to_string());
                    }
                    vertex_count = Some(count);
                    Section::Vertices
                }
                "arcs" => Section::Arcs,
                "edges" => {
                    builder.mark_symmetrized();
                    Section::Edges
                }
                other => return Err(parse_err(lineno, format!("unsupported section `*{other}`"))),
            };
            if section != Section::Vertices && vertex_count.is_none() {
                return Err(Error::MissingVertices);
            }
            continue;
        }
        match section {
            Section::None => return Err(Error::MissingVertices),
            // Vertex lines carry names and coordinates, which are not used.
            Section::Vertices => {}
            Section::Arcs | Section::Edges => {
                let count = vertex_count.unwrap_or(0);
                let mut tokens = line.split_whitespace();
                let mut endpoint = || -> Result<usize> {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| parse_err(lineno, "expected `src dst [weight]`"))?;
                    let id: i64 = tok
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("invalid vertex id `{tok}`")))?;
                    if id < 1 || id as usize > count {
                        return Err(Error::VertexOutOfRange {
                            line: lineno,
                            id,
                            count,
                        });
                    }
                    Ok(id as usize - 1)
                };
                let s = endpoint()?;
                let t = endpoint()?;
                let weight = match tokens.next() {
                    Some(tok) => parse_weight(tok, lineno)?,
                    None => 1.0,
                };
                builder.count_record();
                builder.arc(s, t, weight)?;
                if section == Section::Edges {
                    builder.arc(t, s, weight)?;
                }
            }
        }
    }
    if vertex_count.is_none() {
        return Err(Error::MissingVertices);
    }
    builder.finish()
}

/// Reads a graph file and optionally max-normalizes its weights.
pub fn read_graph_file(
    path: &Path,
    format: GraphFormat,
    directed: bool,
    normalize: bool,
) -> Result<(Graph, IngestReport)> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let (graph, mut report) = match format {
        GraphFormat::EdgeList => parse_edge_list(reader, directed, true)?,
        GraphFormat::Pajek => parse_pajek(reader)?,
    };
    if normalize {
        let (graph, scale) = normalize_weights(&graph);
        report.weight_scale = scale;
        Ok((graph, report))
    } else {
        Ok((graph, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_edge_list_doubles_arcs() {
        let (g, r) = parse_edge_list("1 2\n2 3\n".as_bytes(), false, true).unwrap();
        assert_eq!((g.node_count(), g.arc_count()), (3, 4));
        assert!(g.arcs().all(|(_, _, w)| w == 1.0));
        assert!(r.was_symmetrized);
        assert_eq!(r.arcs_read, 2);
    }

    #[test]
    fn duplicates_merge_by_sum() {
        let (g, r) = parse_edge_list("1 2 3.0\n1 2 2.0\n".as_bytes(), true, true).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_eq!(g.arcs().next().unwrap().2, 5.0);
        assert_eq!(r.arcs_merged, 1);
    }

    #[test]
    fn self_loops_dropped() {
        let (g, r) = parse_edge_list("1 1 1.0\n1 2 1.0\n".as_bytes(), true, true).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_eq!(r.self_loops_dropped, 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n% other\n\n a  b \t 2\n";
        let (g, _) = parse_edge_list(text.as_bytes(), true, true).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_eq!(g.arcs().next().unwrap().2, 2.0);
    }

    #[test]
    fn weights_ignored_without_flag() {
        let (g, _) = parse_edge_list("a b 5\n".as_bytes(), true, false).unwrap();
        assert_eq!(g.arcs().next().unwrap().2, 1.0);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_edge_list("1 2\n3\n".as_bytes(), true, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("1 2 x\n".as_bytes(), true, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("1 2 -1\n".as_bytes(), true, true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(
            parse_edge_list("# nothing\n".as_bytes(), true, true),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn pajek_edges_symmetrize() {
        let (g, r) = parse_pajek("*Vertices 2\n*Edges\n1 2 2.5\n".as_bytes()).unwrap();
        assert_eq!((g.node_count(), g.arc_count()), (2, 2));
        assert!(g.arcs().all(|(_, _, w)| w == 2.5));
        assert!(r.was_symmetrized);
    }

    #[test]
    fn pajek_isolated_vertex_retained() {
        let (g, _) = parse_pajek("*Vertices 3\n*Arcs\n1 2\n".as_bytes()).unwrap();
        assert_eq!((g.node_count(), g.arc_count()), (3, 1));
        assert!(g.out_arcs(2).is_empty());
    }

    #[test]
    fn pajek_out_of_range() {
        let err = parse_pajek("*Vertices 2\n*Arcs\n1 5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::VertexOutOfRange { id: 5, .. }));
    }

    #[test]
    fn pajek_missing_header() {
        assert!(matches!(
            parse_pajek("*Arcs\n1 2\n".as_bytes()),
            Err(Error::MissingVertices)
        ));
        assert!(matches!(parse_pajek("1 2\n".as_bytes()), Err(Error::MissingVertices)));
    }

    #[test]
    fn pajek_with_vertex_names_and_empty_arcs() {
        let text =
            "*Vertices 3\n1 \"Bethel\" 0.1 0.2 0.5\n2 \"Dillingham\"\n3 \"x\"\n*Arcs\n*Edges\n1 2 0.0436\n2 3 0.1\n";
        let (g, _) = parse_pajek(text.as_bytes()).unwrap();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.label(0), "1");
        assert!(g.is_symmetric());
    }
}
