//! Shortest-path kernels shared by the geodesic and pseudo-distance code.
//!
//! Graphs are given as adjacency closures so callers can build edge weights
//! lazily. Missing edges and `+∞` weights are equivalent.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::num::Ordered;

/// Dijkstra from `source` over nonnegative weights.
///
/// With `potential = Some(p)` the reduced weights `w + p[a] - p[b]` are used
/// (Johnson reweighting) and the returned distances are corrected back, so
/// negative weights are fine as long as the reduced ones are not.
pub fn dijkstra<'a, I, F>(
    n: usize,
    source: usize,
    potential: Option<&[f64]>,
    neighbors: F,
) -> Vec<f64>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = (usize, f64)> + 'a,
{
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((Ordered(0.0), source)));
    while let Some(Reverse((Ordered(d), a))) = heap.pop() {
        if done[a] {
            continue;
        }
        done[a] = true;
        for (b, w) in neighbors(a) {
            if !w.is_finite() || done[b] {
                continue;
            }
            let reduced = match potential {
                Some(p) => (w + p[a] - p[b]).max(0.0),
                None => w,
            };
            let nd = d + reduced;
            if nd < dist[b] {
                dist[b] = nd;
                heap.push(Reverse((Ordered(nd), b)));
            }
        }
    }
    if let Some(p) = potential {
        for (v, d) in dist.iter_mut().enumerate() {
            if d.is_finite() {
                *d += p[v] - p[source];
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativeCycle;

/// Label-correcting (FIFO Bellman-Ford) single-source shortest paths.
///
/// `sources` lists the nodes whose label starts at zero; passing every node
/// gives the potential used for Johnson reweighting.
pub fn bellman_ford<I, F>(
    n: usize,
    sources: &[usize],
    neighbors: F,
) -> Result<Vec<f64>, NegativeCycle>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = (usize, f64)>,
{
    let mut dist = vec![f64::INFINITY; n];
    let mut queued = vec![false; n];
    let mut relaxed = vec![0usize; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0.0;
        queued[s] = true;
        queue.push_back(s);
    }
    while let Some(a) = queue.pop_front() {
        queued[a] = false;
        let da = dist[a];
        for (b, w) in neighbors(a) {
            if !w.is_finite() {
                continue;
            }
            let nd = da + w;
            // relative slack keeps round-off from re-queueing forever
            if nd < dist[b] - 1e-13 * (1.0 + nd.abs()) {
                dist[b] = nd;
                relaxed[b] += 1;
                if relaxed[b] > n + 1 {
                    return Err(NegativeCycle);
                }
                if !queued[b] {
                    queued[b] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(dist)
}

/// Nodes reachable from `source` along finite-weight edges.
pub fn reachable<I, F>(n: usize, source: usize, neighbors: F) -> Vec<bool>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = (usize, f64)>,
{
    let mut seen = vec![false; n];
    let mut stack = vec![source];
    seen[source] = true;
    while let Some(a) = stack.pop() {
        for (b, w) in neighbors(a) {
            if w.is_finite() && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}
