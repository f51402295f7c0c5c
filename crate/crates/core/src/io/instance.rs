//! Line-oriented instance format. Node ids are 1-based on disk.
//!
//! ```text
//! SSTP <nodes> <edges> <scenarios>
//! E <u> <v> <c0>            (one line per edge)
//! S <probability> <k> <t1> ... <tk>
//! C <cs>                    (one line per edge, after each S line)
//! ```
//!
//! Everything after `#` is a comment; blank lines are ignored.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{CostVector, Graph, NodeId, Scenario, SstpInstance};

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-empty line split into tokens, with its line number.
    fn next_tokens(&mut self) -> Result<Option<(usize, Vec<String>)>> {
        for line in self.inner.by_ref() {
            self.number += 1;
            let line = line?;
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<String> = content.split_whitespace().map(str::to_owned).collect();
            if !tokens.is_empty() {
                return Ok(Some((self.number, tokens)));
            }
        }
        Ok(None)
    }

    fn expect(&mut self, tag: &str) -> Result<(usize, Vec<String>)> {
        match self.next_tokens()? {
            Some((line, tokens)) if tokens[0] == tag => Ok((line, tokens)),
            Some((line, tokens)) => Err(parse_err(line, format!("expected '{tag}' line, found '{}'", tokens[0]))),
            None => Err(parse_err(self.number, format!("unexpected end of input, expected '{tag}' line"))),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tokens: &[String], index: usize, line: usize, what: &str) -> Result<T> {
    let token = tokens
        .get(index)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{token}'")))
}

fn arity(tokens: &[String], expected: usize, line: usize) -> Result<()> {
    if tokens.len() != expected {
        return Err(parse_err(
            line,
            format!("'{}' line takes {} fields, found {}", tokens[0], expected - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

fn node(tokens: &[String], index: usize, line: usize, nodes: usize) -> Result<NodeId> {
    let id: usize = field(tokens, index, line, "node id")?;
    if id == 0 || id > nodes {
        return Err(parse_err(line, format!("node {id} outside 1..={nodes}")));
    }
    Ok(id - 1)
}

fn cost(tokens: &[String], index: usize, line: usize) -> Result<f64> {
    let c: f64 = field(tokens, index, line, "cost")?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(parse_err(line, format!("cost {c} must be finite and >= 0")));
    }
    Ok(c)
}

pub fn parse_instance<R: BufRead>(reader: R) -> Result<SstpInstance> {
    let mut lines = Lines {
        inner: reader.lines(),
        number: 0,
    };
    let (line, header) = lines.expect("SSTP")?;
    arity(&header, 4, line)?;
    let nodes: usize = field(&header, 1, line, "node count")?;
    let edge_count: usize = field(&header, 2, line, "edge count")?;
    let scenario_count: usize = field(&header, 3, line, "scenario count")?;

    let mut edges = Vec::with_capacity(edge_count);
    let mut c0 = Vec::with_capacity(edge_count);
    let mut seen = HashMap::new();
    for _ in 0..edge_count {
        let (line, tokens) = lines.expect("E")?;
        arity(&tokens, 4, line)?;
        let u = node(&tokens, 1, line, nodes)?;
        let v = node(&tokens, 2, line, nodes)?;
        if u == v {
            return Err(parse_err(line, format!("self-loop on node {}", u + 1)));
        }
        if let Some(prev) = seen.insert((u.min(v), u.max(v)), line) {
            return Err(parse_err(line, format!("duplicate edge {} {} (first on line {prev})", u + 1, v + 1)));
        }
        edges.push((u, v));
        c0.push(cost(&tokens, 3, line)?);
    }
    let graph = Graph::new(nodes, edges)?;

    let mut scenarios = Vec::with_capacity(scenario_count);
    for _ in 0..scenario_count {
        let (line, tokens) = lines.expect("S")?;
        let probability: f64 = field(&tokens, 1, line, "probability")?;
        let k: usize = field(&tokens, 2, line, "terminal count")?;
        arity(&tokens, 3 + k, line)?;
        let terminals = (0..k)
            .map(|i| node(&tokens, 3 + i, line, nodes))
            .collect::<Result<Vec<_>>>()?;
        let mut costs = Vec::with_capacity(edge_count);
        for _ in 0..edge_count {
            let (line, tokens) = lines.expect("C")?;
            arity(&tokens, 2, line)?;
            costs.push(cost(&tokens, 1, line)?);
        }
        let scenario = Scenario::new(probability, CostVector::new(costs)?, terminals).map_err(|e| match e {
            Error::Validation(message) => parse_err(line, message),
            other => other,
        })?;
        scenarios.push(scenario);
    }
    if let Some((line, tokens)) = lines.next_tokens()? {
        return Err(parse_err(line, format!("trailing '{}' line", tokens[0])));
    }
    SstpInstance::new(graph, CostVector::new(c0)?, scenarios)
}

pub fn read_instance_file(path: &Path) -> Result<SstpInstance> {
    let file = std::fs::File::open(path)?;
    parse_instance(std::io::BufReader::new(file))
}

/// Writes the canonical form: no comments, single spaces, shortest
/// round-trip number formatting.
pub fn write_instance<W: Write>(instance: &SstpInstance, mut out: W) -> Result<()> {
    let graph = instance.graph();
    writeln!(
        out,
        "SSTP {} {} {}",
        graph.node_count(),
        graph.edge_count(),
        instance.scenario_count()
    )?;
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        writeln!(out, "E {} {} {}", u + 1, v + 1, instance.first_stage_costs()[e])?;
    }
    for scenario in instance.scenarios() {
        write!(out, "S {} {}", scenario.probability(), scenario.terminals().len())?;
        for &t in scenario.terminals() {
            write!(out, " {}", t + 1)?;
        }
        writeln!(out)?;
        for &c in scenario.costs().as_slice() {
            writeln!(out, "C {c}")?;
        }
    }
    Ok(())
}
