//! Edge-list files.
//!
//! ```text
//! # comments start with '#'
//! # label 3 Valjean          (optional display label for vertex 3)
//! n m
//! u v                        unit weight
//! u v w                      fixed weight
//! u v l r                    interval
//! u v l r w_true             interval and true weight
//! ```
//!
//! Every edge line must use the same number of columns. Endpoints are
//! 0-indexed integers below `n`; reals may use scientific notation.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::generators::UncertainInstance;
use crate::graph::{Graph, WeightSpace, WeightVector};

/// What the edge columns carried.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeData {
    Unit,
    Weighted(WeightVector),
    Interval(WeightSpace),
    Uncertain {
        space: WeightSpace,
        w_true: WeightVector,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedInstance {
    pub graph: Graph,
    pub data: EdgeData,
    /// Display label per vertex; the decimal id unless a `# label` line
    /// named it.
    pub labels: Vec<String>,
}

impl ParsedInstance {
    /// Column count of the edge lines (2 to 5).
    pub fn columns(&self) -> usize {
        match self.data {
            EdgeData::Unit => 2,
            EdgeData::Weighted(_) => 3,
            EdgeData::Interval(_) => 4,
            EdgeData::Uncertain { .. } => 5,
        }
    }

    /// The weight space, if the file carried intervals.
    pub fn space(&self) -> Option<&WeightSpace> {
        match &self.data {
            EdgeData::Interval(space) | EdgeData::Uncertain { space, .. } => Some(space),
            _ => None,
        }
    }

    pub fn w_true(&self) -> Option<&WeightVector> {
        match &self.data {
            EdgeData::Uncertain { w_true, .. } => Some(w_true),
            _ => None,
        }
    }

    /// Point weights: unit, the given weights, or the true weights.
    /// Interval-only files have no point weights.
    pub fn point_weights(&self) -> Option<WeightVector> {
        match &self.data {
            EdgeData::Unit => Some(WeightVector::unit(self.graph.edge_count())),
            EdgeData::Weighted(w) => Some(w.clone()),
            EdgeData::Interval(_) => None,
            EdgeData::Uncertain { w_true, .. } => Some(w_true.clone()),
        }
    }

    /// Five-column files become an [`UncertainInstance`] tagged `manual`.
    pub fn into_instance(self, seed: u64) -> Result<UncertainInstance> {
        match self.data {
            EdgeData::Uncertain { space, w_true } => UncertainInstance::new(
                self.graph,
                space,
                w_true,
                None,
                crate::generators::ModelTag::Manual,
                seed,
            ),
            _ => Err(Error::precondition(format!(
                "a {}-column edge list carries no true weights",
                self.columns()
            ))),
        }
    }
}

fn parse_real(token: &str, line: usize, what: &str) -> Result<f64> {
    let x: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} '{token}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::parse(line, format!("{what} '{token}' is not finite")));
    }
    if x < 0.0 {
        return Err(Error::parse(line, format!("{what} {x} is negative")));
    }
    Ok(x)
}

fn parse_index(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} '{token}' is not a nonnegative integer")))
}

pub fn parse_instance<R: BufRead>(reader: R) -> Result<ParsedInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut columns = 0usize;
    let mut edges = Vec::new();
    let mut cols: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut seen = std::collections::HashSet::new();
    let mut named: Vec<(usize, String)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let raw = raw?;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("label") {
                if let Some(id) = parts.next().and_then(|t| t.parse::<usize>().ok()) {
                    let name = parts.collect::<Vec<_>>().join(" ");
                    named.push((id, name));
                }
            }
            continue;
        }
        let content = trimmed.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();

        let Some((n, m)) = header else {
            if tokens.len() != 2 {
                return Err(Error::parse(line_no, "expected header 'n m'"));
            }
            let n = parse_index(tokens[0], line_no, "vertex count")?;
            let m = parse_index(tokens[1], line_no, "edge count")?;
            header = Some((n, m));
            continue;
        };

        if edges.len() == m {
            return Err(Error::parse(line_no, format!("more than the {m} declared edges")));
        }
        if !(2..=5).contains(&tokens.len()) {
            return Err(Error::parse(
                line_no,
                format!("expected 2 to 5 columns, found {}", tokens.len()),
            ));
        }
        if columns == 0 {
            columns = tokens.len();
        } else if tokens.len() != columns {
            return Err(Error::parse(
                line_no,
                format!("{} columns where earlier edges have {columns}", tokens.len()),
            ));
        }
        let u = parse_index(tokens[0], line_no, "endpoint")?;
        let v = parse_index(tokens[1], line_no, "endpoint")?;
        if u >= n || v >= n {
            return Err(Error::parse(line_no, format!("endpoint out of range 0..{n}")));
        }
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop on vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line_no, format!("duplicate edge {{{u}, {v}}}")));
        }
        let values = tokens[2..]
            .iter()
            .map(|t| parse_real(t, line_no, "value"))
            .collect::<Result<Vec<_>>>()?;
        if values.len() >= 2 && values[0] > values[1] {
            return Err(Error::parse(
                line_no,
                format!("lower bound {} exceeds upper bound {}", values[0], values[1]),
            ));
        }
        if values.len() == 3 && !(values[0] <= values[2] && values[2] <= values[1]) {
            return Err(Error::parse(
                line_no,
                format!("true weight {} outside [{}, {}]", values[2], values[0], values[1]),
            ));
        }
        for (col, x) in cols.iter_mut().zip(values) {
            col.push(x);
        }
        edges.push((u, v));
    }

    let Some((n, m)) = header else {
        return Err(Error::parse(last_line.max(1), "missing header 'n m'"));
    };
    if edges.len() != m {
        return Err(Error::parse(
            last_line.max(1),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let graph = Graph::new(n, edges)?;
    let [a, b, c] = cols;
    let data = match columns {
        0 | 2 => EdgeData::Unit,
        3 => EdgeData::Weighted(WeightVector::new(a)?),
        4 => EdgeData::Interval(WeightSpace::new(a, b)?),
        _ => EdgeData::Uncertain {
            space: WeightSpace::new(a, b)?,
            w_true: WeightVector::new(c)?,
        },
    };
    let mut labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    for (id, name) in named {
        if id < n && !name.is_empty() {
            labels[id] = name;
        }
    }
    Ok(ParsedInstance {
        graph,
        data,
        labels,
    })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<ParsedInstance> {
    let file = File::open(path)?;
    parse_instance(BufReader::new(file))
}

/// Writes a five-column edge list. Reals use the shortest representation
/// that parses back to the same value.
pub fn write_instance<W: Write>(inst: &UncertainInstance, mut out: W) -> io::Result<()> {
    writeln!(out, "# model {} seed {}", inst.model.as_str(), inst.seed)?;
    if let Some(s) = &inst.planted {
        let ids: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        writeln!(out, "# planted {}", ids.join(" "))?;
    }
    writeln!(out, "{} {}", inst.graph.vertex_count(), inst.graph.edge_count())?;
    for (e, &(u, v)) in inst.graph.edges().iter().enumerate() {
        let (l, r) = inst.space.interval(e);
        writeln!(out, "{u} {v} {l} {r} {}", inst.w_true[e])?;
    }
    Ok(())
}

/// Writes a two- or three-column edge list.
pub fn write_graph<W: Write>(g: &Graph, w: Option<&WeightVector>, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match w {
            Some(w) => writeln!(out, "{u} {v} {}", w[e])?,
            None => writeln!(out, "{u} {v}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ParsedInstance> {
        parse_instance(text.as_bytes())
    }

    fn parse_error_line(text: &str) -> usize {
        match parse(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn two_columns_mean_unit_weights() {
        let p = parse("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.data, EdgeData::Unit);
        assert_eq!(p.point_weights().unwrap(), WeightVector::unit(2));
    }

    #[test]
    fn comments_labels_and_scientific_notation() {
        let p = parse("# a graph\n# label 1 Myriel\n\n3 2 # header\n0 1 2.5e-1\n1 2 1E0\n").unwrap();
        assert_eq!(p.labels, vec!["0", "Myriel", "2"]);
        assert_eq!(p.point_weights().unwrap().as_slice(), &[0.25, 1.0]);
    }

    #[test]
    fn five_columns() {
        let p = parse("2 1\n0 1 0.1 0.9 0.5\n").unwrap();
        assert_eq!(p.space().unwrap().interval(0), (0.1, 0.9));
        assert_eq!(p.w_true().unwrap()[0], 0.5);
        assert!(p.into_instance(0).is_ok());
    }

    #[test]
    fn interval_errors_carry_line_numbers() {
        assert_eq!(parse_error_line("2 1\n0 1 0.5 0.2\n"), 2);
        assert_eq!(parse_error_line("# c\n3 2\n0 1 0.1 0.9 0.5\n1 2 0.1 0.3 0.5\n"), 4);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_error_line("3 1\n1 1\n"), 2);
        assert_eq!(parse_error_line("3 2\n0 1\n1 0\n"), 3);
        assert_eq!(parse_error_line("3 1\n0 3\n"), 2);
        assert_eq!(parse_error_line("3 1\n0 x\n"), 2);
        assert_eq!(parse_error_line("3 2\n0 1\n1 2 0.5\n"), 3);
        assert_eq!(parse_error_line("3 1\n0 1\n1 2\n"), 3);
        assert_eq!(parse_error_line("3 2\n0 1\n"), 2);
        assert_eq!(parse_error_line("3\n"), 1);
        assert_eq!(parse_error_line("2 1\n0 1 -1\n"), 2);
        assert_eq!(parse_error_line("2 1\n0 1 inf\n"), 2);
    }

    #[test]
    fn four_columns_have_no_instance() {
        let p = parse("2 1\n0 1 0.1 0.2\n").unwrap();
        assert!(p.point_weights().is_none());
        assert!(matches!(p.into_instance(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn write_then_parse() {
        let params = crate::generators::PlantedParams { n: 30, p: 0.3, n_prime: 8, alpha: 0.2 };
        let inst = crate::generators::gen_planted(&params, 17).unwrap();
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        let back = parse_instance(buf.as_slice()).unwrap();
        assert_eq!(back.graph, inst.graph);
        assert_eq!(back.space().unwrap(), &inst.space);
        assert_eq!(back.w_true().unwrap(), &inst.w_true);
    }
}
