//! Text formats: edge lists, partition and problem JSON, COO matrices.

use std::io::{BufRead, Write};

use partopt_core::solver::QuadraticProblem;
use partopt_core::{CommMatrix, Graph, Partition};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("JSON syntax at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line { line, message: message.into() }
}

fn field_err(field: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Field { field: field.into(), message: message.to_string() }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// Reads `N M` followed by `M` lines `i j` (0-based). Blank lines and lines
/// starting with `#` are skipped.
pub fn read_edge_list(reader: impl BufRead) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(line_err(line_no, format!("expected two integers, found {} fields", fields.len())));
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|_| line_err(line_no, format!("'{s}' is not a non-negative integer")));
        let (a, b) = (parse(fields[0])?, parse(fields[1])?);
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n || b >= n {
                    return Err(line_err(line_no, format!("endpoint out of range for {n} vertices")));
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| line_err(last_line.max(1), "missing 'N M' header"))?;
    if edges.len() != m {
        return Err(line_err(last_line, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, &edges).map_err(|e| line_err(0, e.to_string()))
}

pub fn write_edge_list(g: &Graph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.num_vertices(), g.num_edges())?;
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub m: usize,
    pub n: usize,
    pub deps: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

impl PartitionFile {
    pub fn from_partition(p: &Partition) -> Self {
        let dims = p.dims().iter().any(|&d| d != 1).then(|| p.dims().to_vec());
        Self { m: p.num_nodes(), n: p.num_vars(), deps: p.all_deps().to_vec(), dims }
    }

    /// Validates field by field so errors name the offending entry.
    pub fn to_partition(&self) -> Result<Partition, FormatError> {
        if self.deps.len() != self.m {
            return Err(field_err("deps", format!("has {} entries but m = {}", self.deps.len(), self.m)));
        }
        for (i, list) in self.deps.iter().enumerate() {
            for (j, &l) in list.iter().enumerate() {
                if l >= self.n {
                    return Err(field_err(format!("deps[{i}][{j}]"), format!("variable {l} out of range (n = {})", self.n)));
                }
            }
        }
        let part = Partition::new(self.m, self.n, self.deps.clone()).map_err(|e| field_err("deps", e))?;
        match &self.dims {
            Some(d) => part.with_dims(d.clone()).map_err(|e| field_err("dims", e)),
            None => Ok(part),
        }
    }
}

pub fn read_partition(text: &str) -> Result<Partition, FormatError> {
    serde_json::from_str::<PartitionFile>(text)?.to_partition()
}

pub fn write_partition(p: &Partition) -> String {
    serde_json::to_string_pretty(&PartitionFile::from_partition(p)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeData {
    /// Rows of `A_i` over the columns of `N_i`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub partition: PartitionFile,
    pub mu: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    pub nodes: Vec<NodeData>,
}

pub fn write_problem(p: &QuadraticProblem) -> String {
    let nodes = (0..p.num_nodes())
        .map(|i| {
            let d = p.local_dim(i);
            NodeData { a: p.a(i).chunks(d.max(1)).take(p.rows(i)).map(<[f64]>::to_vec).collect(), b: p.b(i).to_vec() }
        })
        .collect();
    let file = ProblemFile { partition: PartitionFile::from_partition(p.partition()), mu: p.mu(), seed: p.seed(), nodes };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Reads a problem written by [`write_problem`].
pub fn read_problem(text: &str) -> Result<QuadraticProblem, FormatError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let part = file.partition.to_partition()?;
    if file.nodes.len() != part.num_nodes() {
        return Err(field_err("nodes", format!("has {} entries but m = {}", file.nodes.len(), part.num_nodes())));
    }
    let mut a = Vec::with_capacity(file.nodes.len());
    let mut b = Vec::with_capacity(file.nodes.len());
    for (i, node) in file.nodes.into_iter().enumerate() {
        let d = part.local_dim(i);
        if node.a.len() != node.b.len() {
            return Err(field_err(format!("nodes[{i}]"), format!("{} rows in a, {} entries in b", node.a.len(), node.b.len())));
        }
        let mut flat = Vec::with_capacity(node.a.len() * d);
        for (r, row) in node.a.into_iter().enumerate() {
            if row.len() != d {
                return Err(field_err(format!("nodes[{i}].a[{r}]"), format!("has {} columns, node stores {d}", row.len())));
            }
            flat.extend(row);
        }
        a.push(flat);
        b.push(node.b);
    }
    Ok(QuadraticProblem::new(part, a, b, file.mu).map_err(|e| field_err("problem", e))?.with_seed(file.seed))
}

/// Coordinate format: header `rows cols nnz`, then `row col value` lines
/// (0-based) of the dense-layout matrix.
pub fn write_coo(w: &CommMatrix, mut out: impl Write) -> std::io::Result<()> {
    let t = w.triplets();
    writeln!(out, "{} {} {}", w.dense_len(), w.dense_len(), t.len())?;
    for (r, c, v) in t {
        writeln!(out, "{r} {c} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_diagnostics() {
        let g = read_edge_list("# triangle\n3 3\n0 1\n1 2\n\n0 2\n".as_bytes()).unwrap();
        assert_eq!(g.num_edges(), 3);
        let e = read_edge_list("3 1\n0 x\n".as_bytes()).unwrap_err().to_string();
        assert!(e.starts_with("line 2:"), "{e}");
        let e = read_edge_list("3 2\n0 1\n".as_bytes()).unwrap_err().to_string();
        assert!(e.contains("announces 2 edges"), "{e}");
        assert!(read_edge_list("2 1\n0 5\n".as_bytes()).is_err());
        assert!(read_edge_list("".as_bytes()).is_err());
    }

    #[test]
    fn partition_diagnostics() {
        let e = read_partition(r#"{"m": 2, "n": 1, "deps": [[0], [3]]}"#).unwrap_err().to_string();
        assert!(e.starts_with("deps[1][0]"), "{e}");
        let e = read_partition("{\n\"m\": 2,\n\"n\": 1 \"deps\": []}").unwrap_err();
        assert!(matches!(e, FormatError::Json { line: 3, .. }), "{e}");
        let e = read_partition(r#"{"m": 1, "n": 1, "deps": [[0]], "extra": 1}"#).unwrap_err();
        assert!(e.to_string().contains("unknown field"));
        let e = read_partition(r#"{"m": 1, "n": 2, "deps": [[0, 1]], "dims": [1]}"#).unwrap_err().to_string();
        assert!(e.starts_with("dims"), "{e}");
    }
}
