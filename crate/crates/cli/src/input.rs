use std::fs;
use std::path::Path;

use maghom_core::dsl::{parse_edge_list, parse_graph};
use maghom_core::graph::{Graph, Vertex};

use crate::UsageError;

/// A graph read from the command line.
#[derive(Debug, Clone)]
pub struct GraphInput {
    pub name: String,
    pub graph: Graph,
    /// `# gset: ...` and `# hset: ...` directives of an edge-list file.
    pub gset: Option<Vec<Vertex>>,
    pub hset: Option<Vec<Vertex>>,
}

fn directive(text: &str, key: &str) -> Result<Option<Vec<Vertex>>, UsageError> {
    for line in text.lines() {
        let Some(rest) = line.trim().strip_prefix('#') else {
            continue;
        };
        let Some(value) = rest.trim().strip_prefix(key) else {
            continue;
        };
        let Some(value) = value.trim_start().strip_prefix(':') else {
            continue;
        };
        let set = value
            .split([',', ' '])
            .filter(|s| !s.is_empty())
            .map(|s| s.parse())
            .collect::<Result<Vec<Vertex>, _>>()
            .map_err(|_| UsageError(format!("bad `{key}` directive: `{}`", value.trim())))?;
        return Ok(Some(set));
    }
    Ok(None)
}

/// Reads an edge-list file if `arg` names one, otherwise parses `arg` as
/// an expression.
pub fn resolve_graph(arg: &str) -> Result<GraphInput, UsageError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        let graph = parse_edge_list(&text)
            .map_err(|e| UsageError(format!("{}:{e}", path.display())))?;
        return Ok(GraphInput {
            name: path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| arg.to_string()),
            graph,
            gset: directive(&text, "gset")?,
            hset: directive(&text, "hset")?,
        });
    }
    let graph = parse_graph(arg).map_err(|e| UsageError(format!("in `{arg}`: {e}")))?;
    Ok(GraphInput {
        name: arg.to_string(),
        graph,
        gset: None,
        hset: None,
    })
}
