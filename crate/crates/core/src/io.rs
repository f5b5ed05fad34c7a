//! JSON shapes for instances and results.
//!
//! Two input forms are accepted: a scaled form giving the common denominator
//! and integer numerators directly, and a values form giving exact rational
//! or decimal strings that are normalized on the way in.  Indices in files
//! (`sigma`, bipartite edges) are 1-based; everything in memory is 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Counters;
use crate::generators::BipartiteGraph;
use crate::oracle::OracleResult;
use crate::problem::{normalize_strings, DiscrepancyReport, Rounding, ScaledProblem};

#[derive(Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    Scaled {
        denominator: i64,
        numerators: Vec<i64>,
        #[serde(default)]
        floors: Option<Vec<i64>>,
        sigma: Vec<i64>,
    },
    Values {
        values: Vec<String>,
        sigma: Vec<i64>,
    },
}

fn sigma_from_file(sigma: &[i64], n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(sigma.len());
    let mut seen = vec![false; n];
    for &s in sigma {
        if s < 1 || s > n as i64 {
            return Err(Error::NonBijectiveSigma(format!(
                "entry {s} is outside 1..={n}"
            )));
        }
        if std::mem::replace(&mut seen[(s - 1) as usize], true) {
            return Err(Error::NonBijectiveSigma(format!("entry {s} appears twice")));
        }
        out.push((s - 1) as usize);
    }
    Ok(out)
}

/// Parse an instance file in either form.
pub fn parse_instance(text: &str) -> Result<ScaledProblem> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::ParseValue(e.to_string()))?;
    match file {
        InstanceFile::Scaled {
            denominator,
            numerators,
            floors,
            sigma,
        } => {
            let n = numerators.len();
            let sigma = sigma_from_file(&sigma, n)?;
            let floors = floors.unwrap_or_else(|| vec![0; n]);
            ScaledProblem::checked(denominator, numerators, floors, sigma, false)
        }
        InstanceFile::Values { values, sigma } => {
            let sigma = sigma_from_file(&sigma, values.len())?;
            normalize_strings(&values, &sigma)
        }
    }
}

#[derive(Serialize)]
struct InstanceOut<'a> {
    denominator: i64,
    numerators: &'a [i64],
    floors: &'a [i64],
    sigma: Vec<i64>,
}

/// Serialize an instance in the scaled form, `sigma` 1-based.
pub fn instance_json(p: &ScaledProblem) -> String {
    let out = InstanceOut {
        denominator: p.d,
        numerators: &p.y,
        floors: &p.floors,
        sigma: p.sigma.iter().map(|&s| s as i64 + 1).collect(),
    };
    serde_json::to_string_pretty(&out).expect("instance serialization cannot fail")
}

#[derive(Serialize)]
struct SolutionOut {
    xbar: Vec<i64>,
    discrepancy: crate::problem::Fraction,
    optimal: bool,
    threshold: i64,
    counters: Counters,
}

/// Serialize a solve result.  `xbar` folds the floors back in and drops the
/// padding element if normalization appended one.
pub fn solution_json(
    p: &ScaledProblem,
    rounding: &Rounding,
    report: &DiscrepancyReport,
    optimal: bool,
    threshold: i64,
    counters: Counters,
) -> String {
    let mut xbar = rounding.folded(p);
    xbar.truncate(p.original_len());
    let out = SolutionOut {
        xbar,
        discrepancy: report.value,
        optimal,
        threshold,
        counters,
    };
    serde_json::to_string_pretty(&out).expect("solution serialization cannot fail")
}

#[derive(Serialize)]
struct OracleOut<'a> {
    optimum: crate::problem::Fraction,
    valid_count: u64,
    witnesses: Vec<&'a [u8]>,
}

/// Serialize an enumeration result.  Witness bit vectors cover the full
/// instance, padding element included, so distinct witnesses stay distinct.
pub fn oracle_json(res: &OracleResult) -> String {
    let out = OracleOut {
        optimum: res.optimum,
        valid_count: res.valid_count,
        witnesses: res.witnesses.iter().map(|w| w.bits.as_slice()).collect(),
    };
    serde_json::to_string_pretty(&out).expect("oracle serialization cannot fail")
}

#[derive(Deserialize)]
struct BipartiteFile {
    m: usize,
    edges: Vec<(i64, i64)>,
}

/// Parse a bipartite graph file: `{"m": 2, "edges": [[1, 1], [1, 2], ...]}`,
/// vertices 1-based on both sides.
pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let file: BipartiteFile =
        serde_json::from_str(text).map_err(|e| Error::ParseValue(e.to_string()))?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for &(u, v) in &file.edges {
        if u < 1 || v < 1 {
            return Err(Error::ParseValue(format!("edge ({u}, {v}) is not 1-based")));
        }
        edges.push(((u - 1) as usize, (v - 1) as usize));
    }
    BipartiteGraph::new(file.m, edges)
}
