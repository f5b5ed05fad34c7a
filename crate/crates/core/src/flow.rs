//! The flow network behind every solver entry point.
//!
//! Layout (0-based ids): source `s = 0`, left sources `a_j`, one pair
//! `u_k -> v_k` per element, right sinks `b_j`, sink `t`.  A unit of flow on
//! the middle arc `u_k -> v_k` means element `k` rounds up.  Source, middle
//! and sink arcs have capacity 1 (capacity `m` on middle arcs in the relaxed
//! variant used for bottleneck values); side arcs `a_j -> u_k` and
//! `v_k -> b_j` are effectively unbounded, represented as capacity `m` since
//! no arc can ever carry more.
//!
//! A side arc connects a block `j` of one ordering with an element whose
//! prefix interval overlaps `[j, j+1)` (in units of whole blocks) with
//! positive integer margin; the margin is the arc's *desirability*.  Side
//! arcs enter the network from [`enumerate_batches`] in strictly decreasing
//! desirability batches, and the optimal solve adds batches only until `m`
//! units fit — the last batch added determines the optimum.
//!
//! Residual arcs live in pairs: the reverse of edge `e` is `e ^ 1`, and the
//! flow on a forward edge equals the residual capacity of its partner.
//! Adjacency lists are kept sorted by head id, so every search is
//! deterministic regardless of insertion order.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{PrefixSums, ScaledProblem};

/// Work counters, cheap enough to keep always-on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Side arcs added to the network.
    pub arcs_added: u64,
    /// Batches of side arcs added.
    pub batches_added: u64,
    /// Residual arcs inspected across all searches.
    pub bfs_arc_visits: u64,
    /// Successful augmenting paths (at most `m`).
    pub augmentations: u64,
}

/// Which side of the network a batch arc lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcSide {
    /// `a_j -> u_k`: block `j` of the given order feeds element `k`.
    Left,
    /// `v_k -> b_j`: element `k` feeds block `j` of the permuted order.
    Right,
}

/// One side arc, identified by its block index and element (both 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchArc {
    pub side: ArcSide,
    /// Block index `j` in `0..m`.
    pub block: usize,
    /// Element index `k` in `0..n`.
    pub element: usize,
}

/// All side arcs sharing one desirability value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Batch {
    pub desirability: i64,
    pub arcs: Vec<BatchArc>,
}

/// Desirability of the left arc between block `j` and element `k` (both
/// 0-based), given the identity-order prefix sums.  The arc exists iff the
/// returned margin is at least 1.
pub fn desirability_left(p: &ScaledProblem, sums: &PrefixSums, j: usize, k: usize) -> i64 {
    let low = sums.identity[k];
    let high = sums.identity[k + 1];
    ((j as i64 + 1) * p.d - low).min(high - j as i64 * p.d)
}

/// Desirability of the right arc between block `j` and the element at
/// *position* `pos` of the permuted order; that arc is
/// `v_{sigma[pos]} -> b_j`.
pub fn desirability_right(p: &ScaledProblem, sums: &PrefixSums, j: usize, pos: usize) -> i64 {
    let low = sums.permuted[pos];
    let high = sums.permuted[pos + 1];
    ((j as i64 + 1) * p.d - low).min(high - j as i64 * p.d)
}

fn each_side_arc<F>(d: i64, m: i64, prefix: &[i64], n: usize, mut emit: F)
where
    F: FnMut(usize, usize, i64),
{
    for k in 0..n {
        let low = prefix[k];
        let high = prefix[k + 1];
        if low == high {
            // Zero element: forced bit 0, no arcs.
            continue;
        }
        let mut j = low / d;
        while j < m && j * d < high {
            let f = ((j + 1) * d - low).min(high - j * d);
            if f >= 1 {
                emit(j as usize, k, f);
            }
            j += 1;
        }
    }
}

/// Every side arc with desirability at least `min_f`, grouped by desirability
/// in strictly decreasing batches.  Within a batch, left arcs come first,
/// each side ordered by element position and then block.
pub fn enumerate_batches_from(p: &ScaledProblem, sums: &PrefixSums, min_f: i64) -> Vec<Batch> {
    let n = p.n();
    let mut flat: Vec<(i64, BatchArc)> = Vec::new();
    each_side_arc(p.d, p.m, &sums.identity, n, |j, k, f| {
        if f >= min_f {
            flat.push((
                f,
                BatchArc {
                    side: ArcSide::Left,
                    block: j,
                    element: k,
                },
            ));
        }
    });
    each_side_arc(p.d, p.m, &sums.permuted, n, |j, pos, f| {
        if f >= min_f {
            flat.push((
                f,
                BatchArc {
                    side: ArcSide::Right,
                    block: j,
                    element: p.sigma[pos],
                },
            ));
        }
    });
    flat.sort_by_key(|&(f, _)| std::cmp::Reverse(f));
    let mut out: Vec<Batch> = Vec::new();
    for (f, arc) in flat {
        match out.last_mut() {
            Some(b) if b.desirability == f => b.arcs.push(arc),
            _ => out.push(Batch {
                desirability: f,
                arcs: vec![arc],
            }),
        }
    }
    out
}

/// All side arcs of the instance ([`enumerate_batches_from`] with `min_f = 1`).
pub fn enumerate_batches(p: &ScaledProblem, sums: &PrefixSums) -> Vec<Batch> {
    enumerate_batches_from(p, sums, 1)
}

/// Smallest desirability a batch can have and still matter for the optimum.
///
/// A valid rounding with deviation at most `1 - 1/c` always exists for
/// `c = min(2m + 2, n)`, so the optimal threshold satisfies `theta >= d / c`
/// and batches below `ceil(d / c)` are never reached.
pub fn pruning_cutoff(p: &ScaledProblem) -> i64 {
    let c = (2 * p.m + 2).min(p.n() as i64).max(1);
    (p.d + c - 1) / c
}

#[derive(Clone, Debug)]
struct Edge {
    head: u32,
    avail: i64,
    cap: i64,
    /// Desirability for side arcs, 0 for source/middle/sink arcs.
    f: i64,
}

/// Residual network with incremental side-arc insertion.  See the module
/// docs for the layout and conventions.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    m: usize,
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<u32>>,
    last_batch: Option<i64>,
    value: i64,
    mark: Vec<u64>,
    parent: Vec<u32>,
    epoch: u64,
    pub counters: Counters,
}

impl FlowNetwork {
    /// Network with unit middle arcs — the standard form.
    pub fn new(m: usize, n: usize) -> Self {
        Self::with_middle_cap(m, n, 1)
    }

    /// Network whose middle arcs carry up to `cap` units; `cap = m` removes
    /// the per-element restriction (the bottleneck-value relaxation).
    pub fn with_middle_cap(m: usize, n: usize, cap: i64) -> Self {
        let nodes = 2 * m + 2 * n + 2;
        let mut net = FlowNetwork {
            m,
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            last_batch: None,
            value: 0,
            mark: vec![0; nodes],
            parent: vec![0; nodes],
            epoch: 0,
            counters: Counters::default(),
        };
        for j in 0..m {
            net.add_edge(net.source(), net.node_a(j), 1, 0);
        }
        for k in 0..n {
            net.add_edge(net.node_u(k), net.node_v(k), cap, 0);
        }
        for j in 0..m {
            net.add_edge(net.node_b(j), net.sink(), 1, 0);
        }
        net
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn node_a(&self, j: usize) -> usize {
        1 + j
    }

    pub fn node_u(&self, k: usize) -> usize {
        1 + self.m + k
    }

    pub fn node_v(&self, k: usize) -> usize {
        1 + self.m + self.n + k
    }

    pub fn node_b(&self, j: usize) -> usize {
        1 + self.m + 2 * self.n + j
    }

    pub fn sink(&self) -> usize {
        1 + 2 * self.m + 2 * self.n
    }

    fn node_name(&self, id: usize) -> String {
        if id == self.source() {
            "s".into()
        } else if id == self.sink() {
            "t".into()
        } else if id < self.node_u(0) {
            format!("a{}", id - self.node_a(0) + 1)
        } else if id < self.node_v(0) {
            format!("u{}", id - self.node_u(0) + 1)
        } else if id < self.node_b(0) {
            format!("v{}", id - self.node_v(0) + 1)
        } else {
            format!("b{}", id - self.node_b(0) + 1)
        }
    }

    fn source_edge(&self, j: usize) -> usize {
        2 * j
    }

    fn middle_edge(&self, k: usize) -> usize {
        2 * (self.m + k)
    }

    fn add_edge(&mut self, tail: usize, head: usize, cap: i64, f: i64) {
        let fwd = self.edges.len() as u32;
        self.edges.push(Edge {
            head: head as u32,
            avail: cap,
            cap,
            f,
        });
        self.edges.push(Edge {
            head: tail as u32,
            avail: 0,
            cap: 0,
            f,
        });
        let pos = self.adj[tail].partition_point(|&e| self.edges[e as usize].head < head as u32);
        self.adj[tail].insert(pos, fwd);
        let pos = self.adj[head].partition_point(|&e| self.edges[e as usize].head < tail as u32);
        self.adj[head].insert(pos, fwd + 1);
    }

    /// Insert a batch of side arcs.  Batches must arrive in strictly
    /// decreasing desirability order; existing flow is untouched.
    pub fn add_batch(&mut self, batch: &Batch) -> Result<()> {
        if let Some(last) = self.last_batch {
            if batch.desirability >= last {
                return Err(Error::BatchOrder {
                    new: batch.desirability,
                    last,
                });
            }
        }
        self.last_batch = Some(batch.desirability);
        let cap = self.m as i64;
        for arc in &batch.arcs {
            let (tail, head) = match arc.side {
                ArcSide::Left => (self.node_a(arc.block), self.node_u(arc.element)),
                ArcSide::Right => (self.node_v(arc.element), self.node_b(arc.block)),
            };
            self.add_edge(tail, head, cap, batch.desirability);
        }
        self.counters.arcs_added += batch.arcs.len() as u64;
        self.counters.batches_added += 1;
        Ok(())
    }

    /// Current flow value from source to sink.
    pub fn value(&self) -> i64 {
        self.value
    }

    /// Flow on the middle arc of element `k`.
    pub fn middle_flow(&self, k: usize) -> i64 {
        let e = self.middle_edge(k);
        self.edges[e ^ 1].avail
    }

    /// One bit per element: whether its middle arc carries flow.  Only
    /// meaningful for unit middle capacity.
    pub fn middle_bits(&self) -> Vec<u8> {
        (0..self.n)
            .map(|k| u8::from(self.middle_flow(k) > 0))
            .collect()
    }

    /// Lowest-numbered left source whose source arc still has spare
    /// capacity, if any.  Augmenting elsewhere can unsaturate an earlier
    /// source (paths may cross `s`), so callers re-query every round.
    pub fn lowest_unsaturated_source(&self) -> Option<usize> {
        (0..self.m).find(|&j| self.edges[self.source_edge(j)].avail > 0)
    }

    /// Breadth-first search in the residual graph; returns the edge ids of a
    /// shortest `from -> to` path.  `s` and `t` are ordinary nodes here, so
    /// paths may pass through either.
    pub fn residual_path(&mut self, from: usize, to: usize) -> Option<Vec<u32>> {
        self.epoch += 1;
        self.mark[from] = self.epoch;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        self.expand(&mut queue, Some(to));
        if self.mark[to] != self.epoch {
            return None;
        }
        Some(self.backtrack(from, to))
    }

    /// Drain `queue`, marking everything reachable in the residual graph at
    /// the current epoch.  Stops early when `until` is reached.
    fn expand(&mut self, queue: &mut VecDeque<usize>, until: Option<usize>) {
        while let Some(node) = queue.pop_front() {
            for i in 0..self.adj[node].len() {
                let e = self.adj[node][i] as usize;
                self.counters.bfs_arc_visits += 1;
                if self.edges[e].avail <= 0 {
                    continue;
                }
                let head = self.edges[e].head as usize;
                if self.mark[head] == self.epoch {
                    continue;
                }
                self.mark[head] = self.epoch;
                self.parent[head] = e as u32;
                if until == Some(head) {
                    return;
                }
                queue.push_back(head);
            }
        }
    }

    fn backtrack(&self, from: usize, to: usize) -> Vec<u32> {
        let mut path = Vec::new();
        let mut node = to;
        while node != from {
            let e = self.parent[node];
            path.push(e);
            node = self.edges[(e ^ 1) as usize].head as usize;
        }
        path.reverse();
        path
    }

    fn push_edge(&mut self, e: usize, amount: i64) {
        self.edges[e].avail -= amount;
        self.edges[e ^ 1].avail += amount;
        debug_assert!(self.edges[e].avail >= 0);
    }

    fn push_along(&mut self, path: &[u32], amount: i64) {
        for &e in path {
            self.push_edge(e as usize, amount);
        }
    }

    fn complete_augmentation(&mut self, j: usize, path: &[u32]) {
        self.push_along(path, 1);
        let e = self.source_edge(j);
        self.push_edge(e, 1);
        self.value += 1;
        self.counters.augmentations += 1;
        debug_assert!(self.check_conservation());
    }

    /// Try to route one more unit from left source `j` to the sink.  On
    /// success the source arc of `j` is charged and the flow value grows by
    /// one; on failure the flow is untouched (and is provably maximum for
    /// the current arc set).
    pub fn augment_from(&mut self, j: usize) -> Result<bool> {
        if self.edges[self.source_edge(j)].avail <= 0 {
            return Err(Error::SourceSaturated { block: j + 1 });
        }
        match self.residual_path(self.node_a(j), self.sink()) {
            Some(path) => {
                self.complete_augmentation(j, &path);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Augment until all `m` units flow or no augmenting path remains in the
    /// current arc set.  Returns whether the target was reached.  Always
    /// picks the lowest unsaturated source first, keeping runs deterministic.
    pub fn augment_to_target(&mut self) -> Result<bool> {
        while let Some(j) = self.lowest_unsaturated_source() {
            if !self.augment_from(j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The optimal-solve driver: route `m` units, drawing batches from
    /// `batches` (strictly decreasing desirability) only when the sink is
    /// unreachable.  A stalled search is not restarted after a batch
    /// insertion — the reached set stays valid under arc insertion, so the
    /// search continues from the new arcs whose tails are already reached.
    ///
    /// Returns the number of batches consumed and whether all `m` units were
    /// routed (`false` means the batch supply ran out).
    pub fn incremental_max_flow(&mut self, batches: &[Batch]) -> Result<(usize, bool)> {
        let mut used = 0usize;
        while let Some(j) = self.lowest_unsaturated_source() {
            let start = self.node_a(j);
            let sink = self.sink();
            self.epoch += 1;
            self.mark[start] = self.epoch;
            let mut queue = VecDeque::new();
            queue.push_back(start);
            let found = loop {
                self.expand(&mut queue, Some(sink));
                if self.mark[sink] == self.epoch {
                    break true;
                }
                if used == batches.len() {
                    break false;
                }
                self.add_batch(&batches[used])?;
                used += 1;
                // Seed the continued search with the arcs just added whose
                // tails are already reached.
                for arc in &batches[used - 1].arcs {
                    let (tail, head) = match arc.side {
                        ArcSide::Left => (self.node_a(arc.block), self.node_u(arc.element)),
                        ArcSide::Right => (self.node_v(arc.element), self.node_b(arc.block)),
                    };
                    if self.mark[tail] == self.epoch && self.mark[head] != self.epoch {
                        let e = self.adj[tail][self.adj[tail]
                            .partition_point(|&e| (self.edges[e as usize].head as usize) < head)];
                        debug_assert_eq!(self.edges[e as usize].head as usize, head);
                        self.mark[head] = self.epoch;
                        self.parent[head] = e;
                        queue.push_back(head);
                    }
                }
            };
            if !found {
                return Ok((used, false));
            }
            let path = self.backtrack(start, sink);
            self.complete_augmentation(j, &path);
        }
        Ok((used, true))
    }

    /// Force the middle arc of element `k` to carry (`want = 1`) or not
    /// carry (`want = 0`) flow by pushing one unit around a residual cycle
    /// through that arc.  The flow value is unchanged.  No-op when the arc
    /// already agrees.
    pub fn push_cycle(&mut self, k: usize, want: u8) -> Result<()> {
        let e = self.middle_edge(k);
        let carries = self.edges[e ^ 1].avail > 0;
        if (want == 1) == carries {
            return Ok(());
        }
        let no_cycle = || Error::NoResidualCycle { element: k + 1 };
        if want == 1 {
            // Close the cycle v_k -> ... -> u_k, then send the unit through
            // the middle arc.
            let path = self
                .residual_path(self.node_v(k), self.node_u(k))
                .ok_or_else(no_cycle)?;
            self.push_along(&path, 1);
            self.push_edge(e, 1);
        } else {
            // Reroute the unit along a residual u_k -> ... -> v_k detour
            // (the saturated middle arc itself is not available), then
            // cancel the middle arc.
            let path = self
                .residual_path(self.node_u(k), self.node_v(k))
                .ok_or_else(no_cycle)?;
            self.push_along(&path, 1);
            self.push_edge(e ^ 1, 1);
        }
        debug_assert!(self.check_conservation());
        Ok(())
    }

    /// Decompose the current flow into one source-to-sink path per unit and
    /// report each as (left block, right block, element).  Walks forward
    /// flow arcs greedily by smallest head id, so the result is
    /// deterministic; paths come out in left-block order.
    pub fn decompose_paths(&self) -> Vec<(usize, usize, usize)> {
        let mut remaining: Vec<i64> = (0..self.edges.len())
            .map(|e| {
                if e % 2 == 0 {
                    self.edges[e ^ 1].avail
                } else {
                    0
                }
            })
            .collect();
        let mut out = Vec::new();
        for j in 0..self.m {
            let se = self.source_edge(j);
            while remaining[se] > 0 {
                remaining[se] -= 1;
                let mut node = self.node_a(j);
                let mut element = usize::MAX;
                let mut right = usize::MAX;
                while node != self.sink() {
                    let e = self.adj[node]
                        .iter()
                        .map(|&e| e as usize)
                        .find(|&e| e % 2 == 0 && remaining[e] > 0)
                        .expect("flow conservation gives every unit a forward continuation");
                    remaining[e] -= 1;
                    node = self.edges[e].head as usize;
                    if node >= self.node_v(0) && node < self.node_b(0) {
                        element = node - self.node_v(0);
                    } else if node >= self.node_b(0) && node < self.sink() {
                        right = node - self.node_b(0);
                    }
                }
                out.push((j, right, element));
            }
        }
        out
    }

    /// Verify capacity bounds and conservation at every internal node.
    pub fn check_conservation(&self) -> bool {
        let mut balance = vec![0i64; self.adj.len()];
        for e in (0..self.edges.len()).step_by(2) {
            let flow = self.edges[e ^ 1].avail;
            if flow < 0
                || flow > self.edges[e].cap
                || self.edges[e].avail + flow != self.edges[e].cap
            {
                return false;
            }
            let tail = self.edges[e ^ 1].head as usize;
            let head = self.edges[e].head as usize;
            balance[tail] -= flow;
            balance[head] += flow;
        }
        for (node, &net) in balance.iter().enumerate() {
            let expect = if node == self.source() {
                -self.value
            } else if node == self.sink() {
                self.value
            } else {
                0
            };
            if net != expect {
                return false;
            }
        }
        true
    }

    /// Arc listing with kind, endpoints, desirability, and flow, one arc per
    /// line in insertion order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in (0..self.edges.len()).step_by(2) {
            let tail = self.edges[e ^ 1].head as usize;
            let head = self.edges[e].head as usize;
            let kind = if tail == self.source() {
                "source"
            } else if head == self.sink() {
                "sink"
            } else if tail < self.node_u(0) {
                "left"
            } else if tail < self.node_v(0) {
                "middle"
            } else {
                "right"
            };
            let flow = self.edges[e ^ 1].avail;
            out.push_str(&format!(
                "{} {} -> {} F={} flow={}/{}\n",
                kind,
                self.node_name(tail),
                self.node_name(head),
                self.edges[e].f,
                flow,
                self.edges[e].cap
            ));
        }
        out
    }
}

/// Build the network containing exactly the side arcs of desirability at
/// least `theta` and push as much flow as it supports.
pub fn max_flow_at_threshold(p: &ScaledProblem, theta: i64) -> Result<(i64, FlowNetwork)> {
    let sums = p.prefix_sums();
    let mut net = FlowNetwork::new(p.m as usize, p.n());
    for batch in enumerate_batches_from(p, &sums, theta) {
        net.add_batch(&batch)?;
    }
    net.augment_to_target()?;
    Ok((net.value(), net))
}
