//! The formal operator `L`, the Dirichlet form `Q`, the `m`-weighted inner
//! product and the ground-state transformed form `Q_w`.
//!
//! On a finite graph the form domain is every function, so the maximal form,
//! the closure of compactly supported functions and their regularity all
//! coincide; none of that has a runtime representation here.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::graph::{GraphFunction, WeightedGraph};

/// Relative factor of the identity-check tolerance `1e-9 * (1 + scale)`.
pub const IDENTITY_RTOL: f64 = 1e-9;

/// Absolute tolerance for identities whose largest intermediate term has
/// magnitude `scale`.
pub fn identity_tolerance(scale: f64) -> f64 {
    IDENTITY_RTOL * (1.0 + scale.abs())
}

/// A graph together with its cached weighted degrees `b(x)`.
#[derive(Debug, Clone)]
pub struct FormContext<'g> {
    graph: Cow<'g, WeightedGraph>,
    degrees: Vec<f64>,
}

/// The pieces of `Q(u) - Q_w(u) - E ||u||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsrTerms {
    pub q: f64,
    pub qw: f64,
    pub energy_term: f64,
    pub defect: f64,
}

impl GsrTerms {
    pub fn scale(&self) -> f64 {
        self.q.abs().max(self.qw.abs()).max(self.energy_term.abs())
    }
}

impl<'g> FormContext<'g> {
    pub fn new(graph: &'g WeightedGraph) -> Self {
        Self::from_cow(Cow::Borrowed(graph))
    }

    pub fn owned(graph: WeightedGraph) -> FormContext<'static> {
        FormContext::from_cow(Cow::Owned(graph))
    }

    fn from_cow(graph: Cow<'g, WeightedGraph>) -> Self {
        let degrees = (0..graph.vertex_count())
            .map(|x| graph.weighted_degree(x))
            .collect();
        FormContext { graph, degrees }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    fn check(&self, u: &GraphFunction) -> Result<()> {
        self.graph.check_function(u)
    }

    /// `L w(x) = (1/m(x)) [ sum_y b(x,y) (w(x) - w(y)) + c(x) w(x) ]`.
    pub fn apply_l(&self, w: &GraphFunction) -> Result<GraphFunction> {
        self.apply_shifted(w, 0.0)
    }

    /// `(L - E) w`.
    pub fn apply_shifted(&self, w: &GraphFunction, energy: f64) -> Result<GraphFunction> {
        self.check(w)?;
        let mut out = vec![0.0; w.len()];
        self.apply_shifted_into(w.values(), energy, &mut out);
        Ok(GraphFunction::new(out))
    }

    /// Unchecked kernel shared with the iterative solvers.
    pub(crate) fn apply_shifted_into(&self, w: &[f64], energy: f64, out: &mut [f64]) {
        let g = &*self.graph;
        let m = g.measure();
        let c = g.potential();
        for x in 0..w.len() {
            let mut acc = (self.degrees[x] + c[x]) * w[x];
            for (y, b) in g.neighbors(x) {
                acc -= b * w[y];
            }
            out[x] = acc / m[x] - energy * w[x];
        }
    }

    /// `Q(u, v) = 1/2 sum_{x,y} b(x,y)(u(x)-u(y))(v(x)-v(y)) + sum_x c(x) u(x) v(x)`.
    pub fn form_q(&self, u: &GraphFunction, v: &GraphFunction) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        let g = &*self.graph;
        let kinetic: f64 = g
            .edges()
            .iter()
            .map(|e| e.weight * (u[e.u] - u[e.v]) * (v[e.u] - v[e.v]))
            .sum();
        let potential: f64 = g
            .potential()
            .iter()
            .enumerate()
            .map(|(x, c)| c * u[x] * v[x])
            .sum();
        Ok(kinetic + potential)
    }

    pub fn energy(&self, u: &GraphFunction) -> Result<f64> {
        self.form_q(u, u)
    }

    /// `<u, v>_m = sum_x u(x) v(x) m(x)`.
    pub fn inner_m(&self, u: &GraphFunction, v: &GraphFunction) -> Result<f64> {
        self.check(u)?;
        self.check(v)?;
        Ok(inner_m_raw(self.graph.measure(), u.values(), v.values()))
    }

    pub fn norm_m(&self, u: &GraphFunction) -> Result<f64> {
        Ok(self.inner_m(u, u)?.sqrt())
    }

    /// The context over `(V, b_w, 0, m)` with `b_w(x,y) = b(x,y) w(x) w(y)`.
    pub fn gs_transform(&self, w: &GraphFunction) -> Result<FormContext<'static>> {
        self.check_positive(w)?;
        let g = &*self.graph;
        let transformed = g
            .map_weights(|x, y, b| b * w[x] * w[y])?
            .with_potential(vec![0.0; g.vertex_count()])?;
        Ok(FormContext::owned(transformed))
    }

    fn check_positive(&self, w: &GraphFunction) -> Result<()> {
        self.check(w)?;
        match w.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            Some((vertex, &value)) => Err(Error::NonPositiveWeightFunction { vertex, value }),
            None => Ok(()),
        }
    }

    /// `Q_w(u) = 1/2 sum_{x,y} b(x,y) w(x) w(y) (u(x)/w(x) - u(y)/w(y))^2`.
    pub fn form_qw(&self, w: &GraphFunction, u: &GraphFunction) -> Result<f64> {
        self.check_positive(w)?;
        self.check(u)?;
        Ok(self
            .graph
            .edges()
            .iter()
            .map(|e| {
                let d = u[e.u] / w[e.u] - u[e.v] / w[e.v];
                e.weight * w[e.u] * w[e.v] * d * d
            })
            .sum())
    }

    pub fn gsr_terms(&self, w: &GraphFunction, energy: f64, u: &GraphFunction) -> Result<GsrTerms> {
        let qw = self.form_qw(w, u)?;
        let q = self.energy(u)?;
        let energy_term = energy * self.inner_m(u, u)?;
        Ok(GsrTerms {
            q,
            qw,
            energy_term,
            defect: q - qw - energy_term,
        })
    }

    /// `Q(u) - Q_w(u) - E ||u||^2`: zero when `(L - E) w = 0`, non-negative
    /// when `(L - E) w >= 0`.
    pub fn gsr_defect(&self, w: &GraphFunction, energy: f64, u: &GraphFunction) -> Result<f64> {
        Ok(self.gsr_terms(w, energy, u)?.defect)
    }

    /// `(|<Lw, v> - <w, Lv>|, |<Lw, v> - Q(w, v)|)`.
    pub fn pairing_residual(&self, w: &GraphFunction, v: &GraphFunction) -> Result<(f64, f64)> {
        let lw = self.apply_l(w)?;
        let lv = self.apply_l(v)?;
        let left = self.inner_m(&lw, v)?;
        let right = self.inner_m(w, &lv)?;
        let q = self.form_q(w, v)?;
        Ok(((left - right).abs(), (left - q).abs()))
    }

    /// Rough magnitude of `<Lw, v>_m`, for tolerances.
    pub fn pairing_scale(&self, w: &GraphFunction, v: &GraphFunction) -> f64 {
        let g = &*self.graph;
        let total: f64 = self
            .degrees
            .iter()
            .zip(g.potential())
            .map(|(b, c)| b + c)
            .sum();
        total * w.max_abs() * v.max_abs()
    }
}

pub(crate) fn inner_m_raw(m: &[f64], u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).zip(m).map(|((a, b), w)| a * b * w).sum()
}
