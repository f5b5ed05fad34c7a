//! Brute-force reference answers for small instances.
//!
//! Everything here works by exhaustive enumeration straight off the
//! definition of discrepancy — no flow network, no batches — so it serves as
//! an independent check on the solver.  Costs are exponential, guarded by
//! explicit limits.

use crate::error::{Error, Result};
use crate::generators::BipartiteGraph;
use crate::problem::{Fraction, Rounding, ScaledProblem};

/// Largest instance [`oracle_optimal`] will enumerate (`2^24` candidates).
pub const ORACLE_ELEMENT_LIMIT: usize = 24;

/// Largest part size [`count_perfect_matchings`] will accept.
pub const MATCHING_PART_LIMIT: usize = 10;

/// What exhaustive enumeration found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Smallest attainable discrepancy.
    pub optimum: Fraction,
    /// Every rounding attaining it, in lexicographic order.
    pub witnesses: Vec<Rounding>,
    /// Number of roundings with discrepancy below 1.
    pub valid_count: u64,
}

fn for_each_rounding<F>(p: &ScaledProblem, limit: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&Rounding, Fraction),
{
    let n = p.n();
    if n > limit {
        return Err(Error::EnumerationGuard { actual: n, limit });
    }
    // Zero elements stay at 0; only the rest get a choice.
    let free: Vec<usize> = (0..n).filter(|&k| p.y[k] > 0).collect();
    let f = free.len();
    if f >= 63 {
        return Err(Error::EnumerationGuard { actual: n, limit });
    }
    let mut bits = vec![0u8; n];
    for mask in 0u64..(1u64 << f) {
        // Assign the mask's most significant end to the first free element,
        // so ascending masks visit bit vectors in lexicographic order.
        for (i, &k) in free.iter().enumerate() {
            bits[k] = ((mask >> (f - 1 - i)) & 1) as u8;
        }
        let r = Rounding::new(bits.clone());
        let rep = p.discrepancy(&r)?;
        visit(&r, rep.value);
    }
    Ok(())
}

/// Exhaustive minimum discrepancy with a configurable guard.
pub fn oracle_optimal_limited(p: &ScaledProblem, limit: usize) -> Result<OracleResult> {
    let mut best: Option<Fraction> = None;
    let mut witnesses: Vec<Rounding> = Vec::new();
    let mut valid_count = 0u64;
    for_each_rounding(p, limit, |r, value| {
        if value < Fraction::one() {
            valid_count += 1;
        }
        match &best {
            Some(b) if value > *b => {}
            Some(b) if value == *b => witnesses.push(r.clone()),
            _ => {
                best = Some(value);
                witnesses = vec![r.clone()];
            }
        }
    })?;
    // At least the all-zero candidate is always enumerated.
    let optimum = best.expect("non-empty instance has at least one rounding");
    Ok(OracleResult {
        optimum,
        witnesses,
        valid_count,
    })
}

/// Exhaustive minimum discrepancy under the default guard.
pub fn oracle_optimal(p: &ScaledProblem) -> Result<OracleResult> {
    oracle_optimal_limited(p, ORACLE_ELEMENT_LIMIT)
}

/// Every rounding with discrepancy below 1, in lexicographic order.
pub fn valid_roundings(p: &ScaledProblem, limit: usize) -> Result<Vec<Rounding>> {
    let mut out = Vec::new();
    for_each_rounding(p, limit, |r, value| {
        if value < Fraction::one() {
            out.push(r.clone());
        }
    })?;
    Ok(out)
}

/// Number of perfect matchings of `g`, by direct recursion over the left
/// part.  Exponential; guarded by [`MATCHING_PART_LIMIT`].
pub fn count_perfect_matchings(g: &BipartiteGraph) -> Result<u64> {
    if g.m > MATCHING_PART_LIMIT {
        return Err(Error::EnumerationGuard {
            actual: g.m,
            limit: MATCHING_PART_LIMIT,
        });
    }
    let mut adj = vec![Vec::new(); g.m];
    for &(u, v) in &g.edges {
        adj[u].push(v);
    }
    fn rec(adj: &[Vec<usize>], u: usize, used: u32) -> u64 {
        if u == adj.len() {
            return 1;
        }
        adj[u]
            .iter()
            .filter(|&&v| used & (1 << v) == 0)
            .map(|&v| rec(adj, u + 1, used | (1 << v)))
            .sum()
    }
    Ok(rec(&adj, 0, 0))
}
