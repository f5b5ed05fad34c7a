//! High-level entry points: optimal, feasible, and constrained roundings,
//! plus the relaxed bottleneck-assignment variant.

use crate::error::{Error, Result};
use crate::flow::{
    enumerate_batches, enumerate_batches_from, max_flow_at_threshold, pruning_cutoff, Counters,
    FlowNetwork,
};
use crate::problem::{Fraction, Rounding, ScaledProblem};

/// Knobs for [`solve_optimal_with`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Skip batches that provably cannot be reached before `m` units flow.
    /// On by default; turning it off only costs time.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { prune: true }
    }
}

/// An optimal rounding together with how it was found.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub rounding: Rounding,
    /// Smallest attainable discrepancy, exact.
    pub optimum: Fraction,
    /// Desirability of the last batch the solver had to admit; the optimum
    /// is `(d - threshold) / d`.
    pub critical_threshold: i64,
    pub counters: Counters,
}

/// Minimum-discrepancy rounding with default options.
pub fn solve_optimal(p: &ScaledProblem) -> Result<SolveResult> {
    solve_optimal_with(p, &SolveOptions::default())
}

/// Minimum-discrepancy rounding.
///
/// Batches enter the network in decreasing desirability order, only when the
/// running search cannot otherwise reach the sink; once all `m` units flow,
/// the last admitted batch is critical and determines the optimum.
pub fn solve_optimal_with(p: &ScaledProblem, options: &SolveOptions) -> Result<SolveResult> {
    let sums = p.prefix_sums();
    let min_f = if options.prune { pruning_cutoff(p) } else { 1 };
    let batches = enumerate_batches_from(p, &sums, min_f);
    let mut net = FlowNetwork::new(p.m as usize, p.n());
    let (used, done) = net.incremental_max_flow(&batches)?;
    if !done {
        return Err(Error::Internal(format!(
            "batches exhausted at flow {} of {}",
            net.value(),
            p.m
        )));
    }
    let threshold = if used == 0 {
        p.d
    } else {
        batches[used - 1].desirability
    };
    let optimum = Fraction::new(p.d - threshold, p.d);
    let rounding = Rounding::new(net.middle_bits());
    let report = p.discrepancy(&rounding)?;
    if report.value != optimum {
        return Err(Error::Internal(format!(
            "rounding discrepancy {} disagrees with threshold optimum {}",
            report.value, optimum
        )));
    }
    if optimum >= Fraction::one() {
        return Err(Error::Internal(format!("optimum {optimum} is not below 1")));
    }
    Ok(SolveResult {
        rounding,
        optimum,
        critical_threshold: threshold,
        counters: net.counters,
    })
}

/// Any rounding satisfying the strict-inequality condition, from a max flow
/// over the full network; also reports the work counters.
pub fn solve_feasible_full(p: &ScaledProblem) -> Result<(Rounding, Counters)> {
    let (value, net) = max_flow_at_threshold(p, 1)?;
    if value < p.m {
        return Err(Error::Internal(format!(
            "full network routes {value} of {} units",
            p.m
        )));
    }
    let rounding = Rounding::new(net.middle_bits());
    if p.discrepancy(&rounding)?.value >= Fraction::one() {
        return Err(Error::Internal(
            "feasible rounding fails the strict bound".into(),
        ));
    }
    Ok((rounding, net.counters))
}

/// Any rounding satisfying the strict-inequality condition.
pub fn solve_feasible(p: &ScaledProblem) -> Result<Rounding> {
    solve_feasible_full(p).map(|(r, _)| r)
}

/// A valid rounding with element `k` (0-based) forced to `bit`, found by
/// max flow plus one residual-cycle push; also reports the work counters.
pub fn solve_fixed_full(p: &ScaledProblem, k: usize, bit: u8) -> Result<(Rounding, Counters)> {
    if k >= p.n() || bit > 1 {
        return Err(Error::Internal(format!(
            "fix ({}, {bit}) out of range for {} elements",
            k + 1,
            p.n()
        )));
    }
    if p.y[k] == 0 && bit == 1 {
        return Err(Error::ZeroElement { element: k + 1 });
    }
    let (value, mut net) = max_flow_at_threshold(p, 1)?;
    if value < p.m {
        return Err(Error::Internal(format!(
            "full network routes {value} of {} units",
            p.m
        )));
    }
    net.push_cycle(k, bit).map_err(|e| match e {
        // A valid rounding with the complementary bit exists whenever the
        // element is fractional, so a missing cycle is a solver defect, not
        // an input condition.
        Error::NoResidualCycle { element } => {
            Error::Internal(format!("no residual cycle through element {element}"))
        }
        other => other,
    })?;
    let rounding = Rounding::new(net.middle_bits());
    if rounding.bits[k] != bit {
        return Err(Error::Internal(format!(
            "element {} did not hold its bit",
            k + 1
        )));
    }
    if p.discrepancy(&rounding)?.value >= Fraction::one() {
        return Err(Error::Internal(
            "constrained rounding fails the strict bound".into(),
        ));
    }
    Ok((rounding, net.counters))
}

/// A valid rounding with element `k` (0-based) forced to `bit`.
pub fn solve_fixed(p: &ScaledProblem, k: usize, bit: u8) -> Result<Rounding> {
    solve_fixed_full(p, k, bit).map(|(r, _)| r)
}

/// Result of the relaxed variant in which several units may ride the same
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottleneckResult {
    /// Largest desirability `theta` (as `theta / d`) at which the relaxed
    /// network still routes all `m` units.
    pub value: Fraction,
    /// Block pairing `(left j, right j)` per unit, in left order.
    pub matching: Vec<(usize, usize)>,
    /// The element each unit rides, parallel to `matching`.
    pub vias: Vec<usize>,
}

/// Best bottleneck value over assignments of left blocks to right blocks:
/// middle arcs are relaxed to capacity `m`, and the answer is the largest
/// threshold at which all `m` units still flow.  Unlike a rounding, the
/// witness may put two units on one element.
pub fn bottleneck_assignment(p: &ScaledProblem) -> Result<BottleneckResult> {
    if p.m == 0 {
        return Ok(BottleneckResult {
            value: Fraction::one(),
            matching: Vec::new(),
            vias: Vec::new(),
        });
    }
    let sums = p.prefix_sums();
    let batches = enumerate_batches(p, &sums);
    if batches.is_empty() {
        return Err(Error::Internal(
            "no side arcs on a positive-m instance".into(),
        ));
    }
    let feasible = |prefix: usize| -> Result<Option<FlowNetwork>> {
        let mut net = FlowNetwork::with_middle_cap(p.m as usize, p.n(), p.m);
        for b in &batches[..prefix] {
            net.add_batch(b)?;
        }
        Ok(if net.augment_to_target()? {
            Some(net)
        } else {
            None
        })
    };
    // Smallest batch prefix that routes all m units; its last desirability
    // is the bottleneck value.  Feasibility is monotone in the prefix.
    let mut lo = 1usize; // smallest candidate prefix length
    let mut hi = batches.len(); // known feasible by the existence theorem
    if feasible(hi)?.is_none() {
        return Err(Error::Internal(
            "full relaxed network does not route m units".into(),
        ));
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let net = feasible(lo)?.expect("prefix chosen feasible");
    let theta = batches[lo - 1].desirability;
    let mut matching = Vec::with_capacity(p.m as usize);
    let mut vias = Vec::with_capacity(p.m as usize);
    for (left, right, element) in net.decompose_paths() {
        matching.push((left, right));
        vias.push(element);
    }
    Ok(BottleneckResult {
        value: Fraction::new(theta, p.d),
        matching,
        vias,
    })
}
