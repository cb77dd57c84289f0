//! Explicit Harnack constants on finite connected windows, the minimum
//! principle, and two-sided pointwise bounds for normalized super-solutions.
//!
//! A non-negative super-solution at `E` satisfies, along every edge `x ~ y`,
//!
//! ```text
//! w(y) <= (b(x) + c(x) - m(x) E) / b(x, y) * w(x)
//! ```
//!
//! so `C_W(E)` is the largest, over ordered pairs in `W`, of the cheapest
//! product of these edge factors along a simple path inside `W`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::forms::FormContext;
use crate::graph::{GraphFunction, VertexSubset, WeightedGraph};
use crate::spectral::ground_energy;

/// Largest window handled by exact simple-path enumeration.
pub const EXACT_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnackMethod {
    ExactEnumeration,
    DijkstraFastPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnackReport {
    pub constant: f64,
    pub worst_pair: (usize, usize),
    /// Simple path inside the window from `worst_pair.0` to `worst_pair.1`
    /// whose factor product equals `constant`.
    pub witness_path: Vec<usize>,
    pub method: HarnackMethod,
}

/// `b(x) + c(x) - m(x) E`, the numerator shared by every step leaving `x`.
fn step_numerator(g: &WeightedGraph, energy: f64, x: usize) -> f64 {
    g.weighted_degree(x) + g.potential()[x] - g.measure()[x] * energy
}

/// Multiplicative cost `(b(x) + c(x) - m(x) E) / b(x, y)` of the step `x -> y`.
pub fn edge_factor(g: &WeightedGraph, energy: f64, x: usize, y: usize) -> Result<f64> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let b = g.weight(x, y);
    if b == 0.0 {
        return Err(Error::NotAdjacent(x, y));
    }
    let factor = step_numerator(g, energy, x) / b;
    if factor <= 0.0 {
        return Err(Error::EnergyTooHigh {
            vertex: x,
            energy,
            factor,
        });
    }
    Ok(factor)
}

/// Product of edge factors along `path`.
pub fn path_product(g: &WeightedGraph, energy: f64, path: &[usize]) -> Result<f64> {
    path.windows(2)
        .try_fold(1.0, |acc, s| Ok(acc * edge_factor(g, energy, s[0], s[1])?))
}

struct Window {
    /// Global vertex of each local index.
    vertices: Vec<usize>,
    /// Local adjacency with step factors.
    steps: Vec<Vec<(usize, f64)>>,
}

fn build_window(g: &WeightedGraph, w: &VertexSubset, energy: f64) -> Result<Window> {
    let vertices = w.members().to_vec();
    let local = |x: usize| vertices.binary_search(&x).ok();
    let mut steps = Vec::with_capacity(vertices.len());
    for &x in &vertices {
        let mut out = Vec::new();
        for (y, _) in g.neighbors(x) {
            if let Some(j) = local(y) {
                out.push((j, edge_factor(g, energy, x, y)?));
            }
        }
        steps.push(out);
    }
    Ok(Window { vertices, steps })
}

#[derive(Debug, PartialEq)]
struct Entry {
    cost: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cheapest products from `source` when every factor is at least one. With
/// non-negative log-costs, multiplicative Dijkstra is exact and its tree paths
/// are simple.
fn dijkstra(win: &Window, source: usize) -> (Vec<f64>, Vec<usize>) {
    let k = win.vertices.len();
    let mut cost = vec![f64::INFINITY; k];
    let mut parent = vec![usize::MAX; k];
    cost[source] = 1.0;
    parent[source] = source;
    let mut heap = BinaryHeap::from([Entry {
        cost: 1.0,
        vertex: source,
    }]);
    while let Some(Entry { cost: c, vertex: u }) = heap.pop() {
        if c > cost[u] {
            continue;
        }
        for &(v, f) in &win.steps[u] {
            let next = c * f;
            if next < cost[v] {
                cost[v] = next;
                parent[v] = u;
                heap.push(Entry {
                    cost: next,
                    vertex: v,
                });
            }
        }
    }
    (cost, parent)
}

/// Cheapest products over simple paths from `source`, by dynamic programming
/// over visited sets. Returns the costs and, per target, the visited mask and
/// the parent table needed to rebuild the optimal path.
fn exact_simple_paths(win: &Window, source: usize) -> (Vec<f64>, Vec<Vec<usize>>) {
    let k = win.vertices.len();
    let states = 1usize << k;
    let mut best = vec![f64::INFINITY; states * k];
    let mut parent = vec![u8::MAX; states * k];
    let start = 1usize << source;
    best[start * k + source] = 1.0;
    for mask in 0..states {
        if mask & start == 0 {
            continue;
        }
        for u in 0..k {
            let c = best[mask * k + u];
            if !c.is_finite() {
                continue;
            }
            for &(v, f) in &win.steps[u] {
                if mask & (1 << v) != 0 {
                    continue;
                }
                let next_mask = mask | (1 << v);
                let slot = next_mask * k + v;
                let next = c * f;
                if next < best[slot] {
                    best[slot] = next;
                    parent[slot] = u as u8;
                }
            }
        }
    }
    let mut cost = vec![f64::INFINITY; k];
    let mut paths = vec![Vec::new(); k];
    for t in 0..k {
        let mut arg = None;
        for mask in 0..states {
            let c = best[mask * k + t];
            if c < cost[t] {
                cost[t] = c;
                arg = Some(mask);
            }
        }
        if let Some(mut mask) = arg {
            let mut path = vec![t];
            let mut cur = t;
            while cur != source {
                let p = parent[mask * k + cur] as usize;
                mask &= !(1 << cur);
                path.push(p);
                cur = p;
            }
            path.reverse();
            paths[t] = path;
        }
    }
    (cost, paths)
}

/// `C_W(E)`, the smallest constant with `max_W w <= C_W(E) min_W w` for every
/// non-negative super-solution at `E` on `W`, computed by the explicit
/// max-over-pairs, min-over-simple-paths product.
pub fn harnack_constant(g: &WeightedGraph, w: &VertexSubset, energy: f64) -> Result<HarnackReport> {
    harnack_constant_by(g, w, energy, None)
}

/// [`harnack_constant`] with a forced method. Forcing the fast path on a
/// window with a factor below one is an `InvalidArgument`, since Dijkstra
/// could then undercut the simple-path minimum.
pub fn harnack_constant_by(
    g: &WeightedGraph,
    w: &VertexSubset,
    energy: f64,
    forced: Option<HarnackMethod>,
) -> Result<HarnackReport> {
    g.check_subset(w)?;
    if w.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if !g.is_connected_within(w) {
        return Err(Error::WindowDisconnected);
    }
    if w.len() == 1 {
        let x = w.members()[0];
        return Ok(HarnackReport {
            constant: 1.0,
            worst_pair: (x, x),
            witness_path: vec![x],
            method: HarnackMethod::DijkstraFastPath,
        });
    }
    let win = build_window(g, w, energy)?;
    let k = win.vertices.len();
    let all_expanding = win.steps.iter().flatten().all(|&(_, f)| f >= 1.0);
    let method = match forced {
        Some(HarnackMethod::DijkstraFastPath) if !all_expanding => {
            return Err(Error::InvalidArgument(
                "fast path needs every edge factor to be at least one".into(),
            ))
        }
        Some(m) => m,
        None if all_expanding => HarnackMethod::DijkstraFastPath,
        None => HarnackMethod::ExactEnumeration,
    };
    if method == HarnackMethod::ExactEnumeration && k > EXACT_LIMIT {
        return Err(Error::WindowTooLarge {
            size: k,
            limit: EXACT_LIMIT,
        });
    }

    let mut worst: Option<(f64, usize, Vec<usize>)> = None;
    for s in 0..k {
        let (cost, paths): (Vec<f64>, Vec<Vec<usize>>) = match method {
            HarnackMethod::DijkstraFastPath => {
                let (cost, parent) = dijkstra(&win, s);
                let paths = (0..k).map(|t| unwind(&parent, s, t)).collect();
                (cost, paths)
            }
            HarnackMethod::ExactEnumeration => exact_simple_paths(&win, s),
        };
        for t in 0..k {
            if t == s {
                continue;
            }
            if worst.as_ref().is_none_or(|(c, _, _)| cost[t] > *c) {
                worst = Some((cost[t], s, paths[t].clone()));
            }
        }
    }
    let (_, s, local_path) = worst.expect("window has at least two vertices");
    let witness_path: Vec<usize> = local_path.iter().map(|&i| win.vertices[i]).collect();
    let constant = path_product(g, energy, &witness_path)?;
    let t = *witness_path.last().unwrap();
    Ok(HarnackReport {
        constant,
        worst_pair: (win.vertices[s], t),
        witness_path,
        method,
    })
}

fn unwind(parent: &[usize], source: usize, target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut cur = target;
    while cur != source {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn check_nonnegative(w: &GraphFunction) -> Result<()> {
    match w.iter().enumerate().find(|(_, &v)| v < 0.0) {
        Some((vertex, &value)) => Err(Error::NegativeEntry { vertex, value }),
        None => Ok(()),
    }
}

fn check_supersolution_on(
    g: &WeightedGraph,
    window: &VertexSubset,
    w: &GraphFunction,
    energy: f64,
    tol: f64,
) -> Result<()> {
    let r = FormContext::new(g).apply_shifted(w, energy)?;
    match window.iter().find(|&x| r[x] < -tol) {
        Some(vertex) => Err(Error::NotSupersolution {
            vertex,
            slack: r[vertex],
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnackCheck {
    pub holds: bool,
    pub max: f64,
    pub min: f64,
    pub constant: f64,
}

impl HarnackCheck {
    /// `max / min`, infinite when `min = 0 < max`.
    pub fn ratio(&self) -> f64 {
        if self.max == 0.0 {
            1.0
        } else {
            self.max / self.min
        }
    }
}

/// Checks `max_W w <= C_W(E) min_W w` for a non-negative super-solution.
/// Negative entries and super-solution failures are precondition errors.
pub fn harnack_verify(
    g: &WeightedGraph,
    window: &VertexSubset,
    energy: f64,
    w: &GraphFunction,
    tol: f64,
) -> Result<HarnackCheck> {
    g.check_subset(window)?;
    g.check_function(w)?;
    check_nonnegative(w)?;
    check_supersolution_on(g, window, w, energy, tol)?;
    let report = harnack_constant(g, window, energy)?;
    let max = window
        .iter()
        .map(|x| w[x])
        .fold(f64::NEG_INFINITY, f64::max);
    let min = window.iter().map(|x| w[x]).fold(f64::INFINITY, f64::min);
    let holds = max <= report.constant * min * (1.0 + 1e-12) + tol;
    Ok(HarnackCheck {
        holds,
        max,
        min,
        constant: report.constant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimumPrinciple {
    AllPositive,
    AllZero,
    /// Some zero and some positive entries; impossible for valid input.
    Violation,
}

/// Classifies a non-negative super-solution on a connected window.
pub fn minimum_principle_check(
    g: &WeightedGraph,
    window: &VertexSubset,
    w: &GraphFunction,
    energy: f64,
    tol: f64,
) -> Result<MinimumPrinciple> {
    g.check_subset(window)?;
    g.check_function(w)?;
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if !g.is_connected_within(window) {
        return Err(Error::WindowDisconnected);
    }
    check_nonnegative(w)?;
    check_supersolution_on(g, window, w, energy, tol)?;
    let zeros = window.iter().filter(|&x| w[x] == 0.0).count();
    Ok(match zeros {
        0 => MinimumPrinciple::AllPositive,
        z if z == window.len() => MinimumPrinciple::AllZero,
        _ => MinimumPrinciple::Violation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexBound {
    /// `C_x`: every super-solution with `w(x0) = 1` at an energy in the
    /// interval satisfies `1/C_x <= w(x) <= C_x`.
    pub constant: f64,
    pub path: Vec<usize>,
}

/// `C_x = C_P(inf I)` for a shortest hop path `P` from `x0` to `x`; requires
/// `sup I <= E0`.
pub fn vertex_bound(
    g: &WeightedGraph,
    x0: usize,
    x: usize,
    interval: (f64, f64),
) -> Result<VertexBound> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "bad energy interval [{lo}, {hi}]"
        )));
    }
    let path = g.shortest_path(x0, x)?.ok_or(Error::Disconnected)?;
    let ground = ground_energy(g, 1e-11)?;
    if hi > ground.e0 + 1e-9 * (1.0 + ground.e0.abs()) {
        return Err(Error::EnergyNotBelowGround {
            energy: hi,
            e0: ground.e0,
            margin: 0.0,
        });
    }
    let window = VertexSubset::new(g.vertex_count(), path.iter().copied())?;
    let report = harnack_constant(g, &window, lo)?;
    Ok(VertexBound {
        constant: report.constant,
        path,
    })
}
