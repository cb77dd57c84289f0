//! Finite weighted graphs `(V, b, c, m)` and the combinatorics on top of them:
//! connectivity, the hop metric, balls, inner boundaries and exhausting balls.
//!
//! Vertices are dense indices `0..n`. Each undirected edge is stored exactly
//! once, and both adjacency lists point at that single record, so
//! `b(x, y) == b(y, x)` holds structurally.
//!
//! On a finite graph every function satisfies `sum_y b(x, y) |w(y)| < inf`,
//! so membership in the space where the formal operator acts is automatic and
//! never checked at runtime.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Index;

use crate::error::{Error, GraphError, Result};

/// Smallest accepted edge weight; `1/b` enters the Harnack constant.
pub const MIN_EDGE_WEIGHT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    measure: Vec<f64>,
    potential: Vec<f64>,
    edges: Vec<Edge>,
    /// Per vertex: `(neighbour, edge index)` sorted by neighbour.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    /// Builds a graph with labels `"0".."n-1"`.
    pub fn new(
        measure: Vec<f64>,
        potential: Vec<f64>,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let labels = (0..measure.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, measure, potential, edges)
    }

    pub fn with_labels(
        labels: Vec<String>,
        measure: Vec<f64>,
        potential: Vec<f64>,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = measure.len();
        if n == 0 {
            return Err(GraphError::Empty.into());
        }
        if potential.len() != n || labels.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: if potential.len() != n {
                    potential.len()
                } else {
                    labels.len()
                },
            });
        }
        for x in 0..n {
            check_vertex_data(&labels[x], measure[x], potential[x])?;
        }
        let mut g = WeightedGraph {
            labels,
            measure,
            potential,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        };
        for (u, v, w) in edges {
            g.push_edge(u, v, w)?;
        }
        g.sort_adjacency();
        Ok(g)
    }

    fn push_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        let n = self.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(Error::InvalidVertex {
                    vertex: x,
                    count: n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.labels[u].clone()).into());
        }
        if !weight.is_finite() {
            return Err(GraphError::NonFinite(weight).into());
        }
        if weight < MIN_EDGE_WEIGHT {
            return Err(GraphError::NonPositiveWeight(
                self.labels[u].clone(),
                self.labels[v].clone(),
                weight,
            )
            .into());
        }
        if self.adjacency[u].iter().any(|&(y, _)| y == v) {
            return Err(
                GraphError::DuplicateEdge(self.labels[u].clone(), self.labels[v].clone()).into(),
            );
        }
        let id = self.edges.len();
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.push(Edge { u: a, v: b, weight });
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        Ok(())
    }

    fn sort_adjacency(&mut self) {
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// v <label> <m> <c>
    /// e <label1> <label2> <b>
    /// ```
    pub fn parse(source: &str) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut measure = Vec::new();
        let mut potential = Vec::new();
        let mut edges: Vec<(usize, (usize, usize, f64))> = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();

        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let at = |kind: GraphError| Error::Load { line, kind };
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            match fields.as_slice() {
                ["v", label, m, c] => {
                    let m = parse_real(m).map_err(at)?;
                    let c = parse_real(c).map_err(at)?;
                    check_vertex_data(label, m, c).map_err(at)?;
                    if index.contains_key(*label) {
                        return Err(at(GraphError::DuplicateVertex(label.to_string())));
                    }
                    index.insert(label.to_string(), labels.len());
                    labels.push(label.to_string());
                    measure.push(m);
                    potential.push(c);
                }
                ["e", a, b, w] => {
                    let lookup = |l: &str| {
                        index
                            .get(l)
                            .copied()
                            .ok_or_else(|| at(GraphError::UndeclaredVertex(l.to_string())))
                    };
                    let u = lookup(a)?;
                    let v = lookup(b)?;
                    let w = parse_real(w).map_err(at)?;
                    if u == v {
                        return Err(at(GraphError::SelfLoop(a.to_string())));
                    }
                    if !(w >= MIN_EDGE_WEIGHT) {
                        return Err(at(GraphError::NonPositiveWeight(
                            a.to_string(),
                            b.to_string(),
                            w,
                        )));
                    }
                    let key = (u.min(v), u.max(v));
                    if seen.insert(key, line).is_some() {
                        return Err(at(GraphError::DuplicateEdge(a.to_string(), b.to_string())));
                    }
                    edges.push((line, (u, v, w)));
                }
                _ => return Err(at(GraphError::Syntax(text.to_string()))),
            }
        }
        if labels.is_empty() {
            return Err(GraphError::Empty.into());
        }
        let n = labels.len();
        let mut g = WeightedGraph {
            labels,
            measure,
            potential,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        };
        for (line, (u, v, w)) in edges {
            g.push_edge(u, v, w).map_err(|e| match e {
                Error::Graph(kind) => Error::Load { line, kind },
                other => other,
            })?;
        }
        g.sort_adjacency();
        Ok(g)
    }

    /// Serializes back into the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in 0..self.vertex_count() {
            out.push_str(&format!(
                "v {} {:?} {:?}\n",
                self.labels[x], self.measure[x], self.potential[x]
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "e {} {} {:?}\n",
                self.labels[e.u], self.labels[e.v], e.weight
            ));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.measure.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Neighbours of `x` with edge weights, sorted by neighbour index.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[x]
            .iter()
            .map(move |&(y, id)| (y, self.edges[id].weight))
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    /// `b(x, y)`, zero for non-adjacent pairs.
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.adjacency[x]
            .binary_search_by_key(&y, |&(z, _)| z)
            .map(|i| self.edges[self.adjacency[x][i].1].weight)
            .unwrap_or(0.0)
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.weight(x, y) > 0.0
    }

    /// `b(x) = sum_y b(x, y)`.
    pub fn weighted_degree(&self, x: usize) -> f64 {
        self.neighbors(x).map(|(_, w)| w).sum()
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: x,
                count: self.vertex_count(),
            })
        }
    }

    /// Same vertices and edges with a different measure.
    pub fn with_measure(&self, measure: Vec<f64>) -> Result<Self> {
        Self::with_labels(
            self.labels.clone(),
            measure,
            self.potential.clone(),
            self.edge_triples(),
        )
    }

    /// Same vertices and edges with a different potential.
    pub fn with_potential(&self, potential: Vec<f64>) -> Result<Self> {
        Self::with_labels(
            self.labels.clone(),
            self.measure.clone(),
            potential,
            self.edge_triples(),
        )
    }

    /// Same vertex data, edge weights replaced by `f(u, v, b(u, v))`.
    pub fn map_weights(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Result<Self> {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, f(e.u, e.v, e.weight)))
            .collect();
        Self::with_labels(
            self.labels.clone(),
            self.measure.clone(),
            self.potential.clone(),
            edges,
        )
    }

    fn edge_triples(&self) -> Vec<(usize, usize, f64)> {
        self.edges.iter().map(|e| (e.u, e.v, e.weight)).collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for (y, _) in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for (y, _) in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Graph metric `d(x, y)`; `None` stands for infinity.
    pub fn distance(&self, x: usize, y: usize) -> Result<Option<usize>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.distances_from(x)[y])
    }

    /// A shortest hop path from `x` to `y`, preferring smaller vertex indices.
    pub fn shortest_path(&self, x: usize, y: usize) -> Result<Option<Vec<usize>>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let n = self.vertex_count();
        let mut parent = vec![usize::MAX; n];
        parent[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            if u == y {
                break;
            }
            for (v, _) in self.neighbors(u) {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[y] == usize::MAX {
            return Ok(None);
        }
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(Some(path))
    }

    /// `{x : d(x0, x) <= r}`.
    pub fn ball(&self, x0: usize, r: usize) -> Result<VertexSubset> {
        self.check_vertex(x0)?;
        let dist = self.distances_from(x0);
        let members = dist
            .iter()
            .enumerate()
            .filter(|(_, d)| matches!(d, Some(d) if *d <= r))
            .map(|(x, _)| x);
        Ok(VertexSubset::from_sorted_unchecked(
            self.vertex_count(),
            members,
        ))
    }

    /// Largest finite distance from `x0`.
    pub fn eccentricity(&self, x0: usize) -> Result<usize> {
        self.check_vertex(x0)?;
        Ok(self
            .distances_from(x0)
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0))
    }

    /// Inner boundaries `(dA, dA^c)`: vertices of `A`, resp. `A^c`, with a
    /// neighbour on the other side.
    pub fn boundary(&self, a: &VertexSubset) -> Result<(VertexSubset, VertexSubset)> {
        self.check_subset(a)?;
        let n = self.vertex_count();
        let mut inner = Vec::new();
        let mut outer = Vec::new();
        for x in 0..n {
            let inside = a.contains(x);
            if self.neighbors(x).any(|(y, _)| a.contains(y) != inside) {
                if inside {
                    inner.push(x);
                } else {
                    outer.push(x);
                }
            }
        }
        Ok((
            VertexSubset::from_sorted_unchecked(n, inner),
            VertexSubset::from_sorted_unchecked(n, outer),
        ))
    }

    /// Strictly increasing balls around `x0`, ending at `V`.
    pub fn exhausting_balls(&self, x0: usize) -> Result<Vec<VertexSubset>> {
        self.check_vertex(x0)?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let ecc = self.eccentricity(x0)?;
        let mut out: Vec<VertexSubset> = Vec::with_capacity(ecc + 1);
        for r in 0..=ecc {
            let b = self.ball(x0, r)?;
            if out.last().is_none_or(|prev| prev.len() < b.len()) {
                out.push(b);
            }
        }
        Ok(out)
    }

    /// Whether `w` is connected as an induced subgraph.
    pub fn is_connected_within(&self, w: &VertexSubset) -> bool {
        let Some(&start) = w.members().first() else {
            return true;
        };
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut count = 1;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (y, _) in self.neighbors(x) {
                if w.contains(y) && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == w.len()
    }

    pub fn check_subset(&self, a: &VertexSubset) -> Result<()> {
        if a.universe() != self.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.vertex_count(),
                got: a.universe(),
            });
        }
        Ok(())
    }

    pub fn check_function(&self, w: &GraphFunction) -> Result<()> {
        if w.len() != self.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.vertex_count(),
                got: w.len(),
            });
        }
        if let Some(x) = w.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { vertex: x });
        }
        Ok(())
    }

    /// `sum_x m(x)` over the subset.
    pub fn volume(&self, a: &VertexSubset) -> f64 {
        a.iter().map(|x| self.measure[x]).sum()
    }
}

fn check_vertex_data(label: &str, m: f64, c: f64) -> std::result::Result<(), GraphError> {
    if !m.is_finite() {
        return Err(GraphError::NonFinite(m));
    }
    if !c.is_finite() {
        return Err(GraphError::NonFinite(c));
    }
    if m <= 0.0 {
        return Err(GraphError::NonPositiveMeasure {
            vertex: label.to_string(),
            value: m,
        });
    }
    if c < 0.0 {
        return Err(GraphError::NegativePotential {
            vertex: label.to_string(),
            value: c,
        });
    }
    Ok(())
}

fn parse_real(s: &str) -> std::result::Result<f64, GraphError> {
    let v: f64 = s
        .parse()
        .map_err(|_| GraphError::Syntax(format!("not a number: {s}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GraphError::NonFinite(v))
    }
}

/// A real-valued function on the vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    values: Vec<f64>,
}

impl GraphFunction {
    pub fn new(values: Vec<f64>) -> Self {
        GraphFunction { values }
    }

    pub fn zeros(n: usize) -> Self {
        GraphFunction {
            values: vec![0.0; n],
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        GraphFunction {
            values: vec![value; n],
        }
    }

    pub fn indicator(a: &VertexSubset) -> Self {
        GraphFunction {
            values: a
                .mask()
                .iter()
                .map(|&b| if b { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Self {
        GraphFunction {
            values: (0..n).map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    pub fn scaled(&self, s: f64) -> Self {
        GraphFunction {
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `w * 1_A`.
    pub fn restricted(&self, a: &VertexSubset) -> Self {
        GraphFunction {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(x, &v)| if a.contains(x) { v } else { 0.0 })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl Index<usize> for GraphFunction {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.values[x]
    }
}

impl From<Vec<f64>> for GraphFunction {
    fn from(values: Vec<f64>) -> Self {
        GraphFunction::new(values)
    }
}

/// A subset of `{0, .., n-1}`, kept both as a mask and as a sorted list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for x in members {
            if x >= universe {
                return Err(Error::InvalidVertex {
                    vertex: x,
                    count: universe,
                });
            }
            set.insert(x);
        }
        Ok(Self::from_sorted_unchecked(universe, set))
    }

    fn from_sorted_unchecked(universe: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let members: Vec<usize> = members.into_iter().collect();
        let mut mask = vec![false; universe];
        for &x in &members {
            mask[x] = true;
        }
        VertexSubset { mask, members }
    }

    pub fn empty(universe: usize) -> Self {
        VertexSubset {
            mask: vec![false; universe],
            members: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSubset {
            mask: vec![true; universe],
            members: (0..universe).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> Self {
        Self::from_sorted_unchecked(
            self.universe(),
            (0..self.universe()).filter(|&x| !self.mask[x]),
        )
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_sorted_unchecked(
            self.universe(),
            (0..self.universe()).filter(|&x| self.mask[x] || other.contains(x)),
        )
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}
