//! Solution listing:
//!
//! ```text
//! FIRST_STAGE <k>
//! E <u> <v>                 (k lines, 1-based nodes)
//! SCENARIO <s> <k>          (s is 1-based, one section per scenario)
//! E <u> <v>
//! COST <value with 4 decimals>
//! ```

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::{check_feasible, EdgeSet, SstpInstance, StochasticSolution};

/// Writes `solution`, refusing infeasible ones.
pub fn write_solution<W: Write>(solution: &StochasticSolution, instance: &SstpInstance, mut out: W) -> Result<()> {
    if !check_feasible(instance, solution)? {
        return Err(Error::Validation("refusing to write an infeasible solution".into()));
    }
    let graph = instance.graph();
    let section = |out: &mut W, head: String, set: &EdgeSet| -> Result<()> {
        writeln!(out, "{head} {}", set.len())?;
        for &e in set {
            let (u, v) = graph.endpoints(e);
            writeln!(out, "E {} {}", u + 1, v + 1)?;
        }
        Ok(())
    };
    section(&mut out, "FIRST_STAGE".into(), &solution.first_stage)?;
    for (s, set) in solution.per_scenario.iter().enumerate() {
        section(&mut out, format!("SCENARIO {}", s + 1), set)?;
    }
    writeln!(out, "COST {:.4}", solution.cost + 0.0)?;
    Ok(())
}

/// Reads a listing back. The cost is recomputed from the edge sets and must
/// agree with the printed value.
pub fn read_solution<R: BufRead>(reader: R, instance: &SstpInstance) -> Result<StochasticSolution> {
    let mut tokens = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let words: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
        if !words.is_empty() {
            tokens.push((i + 1, words));
        }
    }
    let mut rows = tokens.into_iter();
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut last = 0;

    let mut read_set = |rows: &mut std::vec::IntoIter<(usize, Vec<String>)>, head: &[&str]| -> Result<EdgeSet> {
        let (line, words) = rows.next().ok_or_else(|| err(last, format!("missing {} section", head[0])))?;
        last = line;
        if words.len() != head.len() + 1 || words.iter().zip(head).any(|(w, h)| w != h) {
            return Err(err(line, format!("expected '{}' header", head.join(" "))));
        }
        let k: usize = words[head.len()]
            .parse()
            .map_err(|_| err(line, format!("invalid edge count '{}'", words[head.len()])))?;
        let mut set = EdgeSet::new();
        for _ in 0..k {
            let (line, words) = rows.next().ok_or_else(|| err(last, "missing edge line".into()))?;
            last = line;
            if words.len() != 3 || words[0] != "E" {
                return Err(err(line, "expected 'E <u> <v>'".into()));
            }
            let node = |w: &str| -> Result<usize> {
                let id: usize = w.parse().map_err(|_| err(line, format!("invalid node '{w}'")))?;
                id.checked_sub(1).ok_or_else(|| err(line, "node ids are 1-based".into()))
            };
            let (u, v) = (node(&words[1])?, node(&words[2])?);
            let e = instance
                .graph()
                .find_edge(u, v)
                .ok_or_else(|| err(line, format!("no edge between {} and {}", u + 1, v + 1)))?;
            if !set.insert(e) {
                return Err(err(line, format!("edge {} {} listed twice", u + 1, v + 1)));
            }
        }
        Ok(set)
    };

    let first_stage = read_set(&mut rows, &["FIRST_STAGE"])?;
    let mut per_scenario = Vec::with_capacity(instance.scenario_count());
    for s in 0..instance.scenario_count() {
        let label = (s + 1).to_string();
        per_scenario.push(read_set(&mut rows, &["SCENARIO", &label])?);
    }
    let (line, words) = rows.next().ok_or_else(|| err(0, "missing COST line".into()))?;
    if words.len() != 2 || words[0] != "COST" {
        return Err(err(line, "expected 'COST <value>'".into()));
    }
    let solution = StochasticSolution::new(instance, first_stage, per_scenario)?;
    if format!("{:.4}", solution.cost + 0.0) != words[1] {
        return Err(err(
            line,
            format!("listed cost {} differs from recomputed {:.4}", words[1], solution.cost),
        ));
    }
    if let Some((line, _)) = rows.next() {
        return Err(err(line, "trailing content".into()));
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CostVector, Graph, Scenario};

    fn toy() -> SstpInstance {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let sc = Scenario::new(1.0, CostVector::new(vec![5.0]).unwrap(), vec![0, 1]).unwrap();
        SstpInstance::new(g, CostVector::new(vec![3.0]).unwrap(), vec![sc]).unwrap()
    }

    #[test]
    fn listing_and_round_trip() {
        let inst = toy();
        let sol = StochasticSolution::new(&inst, EdgeSet::new(), vec![EdgeSet::from([0])]).unwrap();
        let mut out = Vec::new();
        write_solution(&sol, &inst, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "FIRST_STAGE 0\nSCENARIO 1 1\nE 1 2\nCOST 5.0000\n");
        assert_eq!(read_solution(text.as_bytes(), &inst).unwrap(), sol);
    }

    #[test]
    fn infeasible_refused() {
        let inst = toy();
        let sol = StochasticSolution::new(&inst, EdgeSet::new(), vec![EdgeSet::new()]).unwrap();
        assert!(write_solution(&sol, &inst, Vec::new()).is_err());
    }

    #[test]
    fn cost_mismatch_rejected() {
        let inst = toy();
        let text = "FIRST_STAGE 1\nE 1 2\nSCENARIO 1 0\nCOST 5.0000\n";
        assert!(matches!(read_solution(text.as_bytes(), &inst), Err(Error::Parse { line: 4, .. })));
    }
}
