//! Boundary measures and norms, the defect of restricted solutions, Shnol
//! quotients along balls, the Cheeger-type comparison for unweighted graphs
//! and the subexponential-growth machinery for bounded Laplacians.
//!
//! For `A` a set of vertices, `w_A = w 1_A`. If `(L - E) w = 0` on `A`, then
//!
//! ```text
//! (L - E) w_A (x) =  (1/m(x)) sum_{y in A^c} b(x,y) w(y)   for x in A,
//! (L - E) w_A (x) = -(1/m(x)) sum_{y in A}   b(x,y) w(y)   for x in A^c,
//! ```
//!
//! and both `||(L - E) w_A||_m <= p(w, A)` and
//! `sum |(L - E) w_A v| m <= q(w, A) ||v||_m` follow by Cauchy-Schwarz.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{identity_tolerance, FormContext};
use crate::graph::{GraphFunction, VertexSubset, WeightedGraph};
use crate::linalg::DENSE_LIMIT;
use crate::rng::Lcg64;
use crate::spectral::{max_residual_on, spectrum_distance};

/// `mu` and `nu` for `A` on `∂A` and for `A^c` on `∂A^c`, keyed by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    pub set: VertexSubset,
    pub mu_on_da: BTreeMap<usize, f64>,
    pub mu_on_dac: BTreeMap<usize, f64>,
    pub nu_on_da: BTreeMap<usize, f64>,
    pub nu_on_dac: BTreeMap<usize, f64>,
}

/// `mu_A(x) = sum_{y ~ x, y in A^c} b(y,x)/m(y) sum_{z ~ y, z in A} b(y,z)`.
fn mu(g: &WeightedGraph, a: &VertexSubset, x: usize) -> f64 {
    let m = g.measure();
    g.neighbors(x)
        .filter(|&(y, _)| !a.contains(y))
        .map(|(y, byx)| {
            let back: f64 = g
                .neighbors(y)
                .filter(|&(z, _)| a.contains(z))
                .map(|(_, b)| b)
                .sum();
            byx / m[y] * back
        })
        .sum()
}

/// `nu_A(x) = (sum_{y ~ x, y in A^c} b(x,y)^2 / m(y))^{1/2}`.
fn nu(g: &WeightedGraph, a: &VertexSubset, x: usize) -> f64 {
    let m = g.measure();
    g.neighbors(x)
        .filter(|&(y, _)| !a.contains(y))
        .map(|(y, b)| b * b / m[y])
        .sum::<f64>()
        .sqrt()
}

pub fn boundary_measures(g: &WeightedGraph, a: &VertexSubset) -> Result<BoundaryReport> {
    let (da, dac) = g.boundary(a)?;
    let ac = a.complement();
    Ok(BoundaryReport {
        set: a.clone(),
        mu_on_da: da.iter().map(|x| (x, mu(g, a, x))).collect(),
        mu_on_dac: dac.iter().map(|x| (x, mu(g, &ac, x))).collect(),
        nu_on_da: da.iter().map(|x| (x, nu(g, a, x))).collect(),
        nu_on_dac: dac.iter().map(|x| (x, nu(g, &ac, x))).collect(),
    })
}

/// `(p(w, A), q(w, A))`.
pub fn boundary_norms(
    g: &WeightedGraph,
    a: &VertexSubset,
    w: &GraphFunction,
) -> Result<(f64, f64)> {
    g.check_function(w)?;
    let r = boundary_measures(g, a)?;
    let p2: f64 = r
        .mu_on_da
        .iter()
        .chain(&r.mu_on_dac)
        .map(|(&x, mu)| w[x] * w[x] * mu)
        .sum();
    let q: f64 = r
        .nu_on_da
        .iter()
        .chain(&r.nu_on_dac)
        .map(|(&x, nu)| w[x].abs() * nu)
        .sum();
    Ok((p2.sqrt(), q))
}

/// `(L - E) w_A` by the two-case boundary formula and by direct evaluation.
/// Requires `w` to solve the equation on `A`, up to
/// [`solution_tolerance`](crate::spectral::solution_tolerance).
pub fn restricted_defect(
    g: &WeightedGraph,
    energy: f64,
    w: &GraphFunction,
    a: &VertexSubset,
) -> Result<(GraphFunction, GraphFunction)> {
    g.check_subset(a)?;
    g.check_function(w)?;
    let residual = max_residual_on(g, w, energy, a)?;
    let tol = crate::spectral::solution_tolerance(g, w, energy);
    if residual > tol {
        return Err(Error::NotSolution { residual, tol });
    }
    let m = g.measure();
    let via = GraphFunction::from_fn(g.vertex_count(), |x| {
        let inside = a.contains(x);
        let s: f64 = g
            .neighbors(x)
            .filter(|&(y, _)| a.contains(y) != inside)
            .map(|(y, b)| b * w[y])
            .sum();
        if inside {
            s / m[x]
        } else {
            -s / m[x]
        }
    });
    let direct = FormContext::new(g).apply_shifted(&w.restricted(a), energy)?;
    Ok((via, direct))
}

fn sup_difference(a: &GraphFunction, b: &GraphFunction) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectBoundReport {
    pub p: f64,
    pub q: f64,
    /// `||(L - E) w_A||_m`.
    pub defect_norm: f64,
    /// `sup |formula - direct|`.
    pub formula_gap: f64,
    /// `defect_norm / p`, zero when both vanish.
    pub l2_ratio: f64,
    /// Largest `sum |(L - E) w_A v| m / (min(p, q) ||v||_m)` over the trials.
    pub max_pairing_ratio: f64,
    pub holds: bool,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Checks `||(L - E) w_A||_m <= p(w, A)` and, for `trials` random `v`
/// supported on radius-3 balls around uniform centers, the pairing bound
/// against `min(p, q) ||v||_m`.
pub fn defect_bound_check(
    g: &WeightedGraph,
    energy: f64,
    w: &GraphFunction,
    a: &VertexSubset,
    trials: usize,
    seed: u64,
) -> Result<DefectBoundReport> {
    let (via, direct) = restricted_defect(g, energy, w, a)?;
    let (p, q) = boundary_norms(g, a, w)?;
    let ctx = FormContext::new(g);
    let defect_norm = ctx.norm_m(&direct)?;
    let tol = identity_tolerance(p.max(q));
    let mut holds = defect_norm <= p + tol;
    let bound = p.min(q);
    let mut rng = Lcg64::new(seed);
    let mut max_pairing_ratio: f64 = 0.0;
    for _ in 0..trials {
        let center = rng.below(g.vertex_count());
        let support = g.ball(center, 3)?;
        let mut v = GraphFunction::zeros(g.vertex_count());
        for x in support.iter() {
            v.values_mut()[x] = rng.uniform(-1.0, 1.0);
        }
        let m = g.measure();
        let pairing: f64 = (0..g.vertex_count())
            .map(|x| (direct[x] * v[x]).abs() * m[x])
            .sum();
        let vn = ctx.norm_m(&v)?;
        holds &= pairing <= bound * vn + tol * (1.0 + vn);
        max_pairing_ratio = max_pairing_ratio.max(ratio(pairing, bound * vn));
    }
    Ok(DefectBoundReport {
        p,
        q,
        defect_norm,
        formula_gap: sup_difference(&via, &direct),
        l2_ratio: ratio(defect_norm, p),
        max_pairing_ratio,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShnolRow {
    pub n: usize,
    /// `||w_n||_m` with `w_n = w 1_{B_n}`.
    pub norm: f64,
    pub p: f64,
    pub q: f64,
    /// `p / norm`; infinite when `w_n = 0`.
    pub quot_p: f64,
    pub quot_q: f64,
    /// `||(L - E) w_n||_m / ||w_n||_m`; infinite when `w_n = 0`.
    pub weyl: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShnolReport {
    pub energy: f64,
    pub rows: Vec<ShnolRow>,
    /// `max |(L - E) w|` over `B_{max_radius + 1}`.
    pub interior_residual: f64,
    /// Distance from `E` to the spectrum of the finite graph, when the dense
    /// oracle applies.
    pub oracle_distance: Option<f64>,
}

impl ShnolReport {
    /// Last `quot_p` over the largest finite `quot_p`; small values indicate
    /// decaying quotients.
    pub fn quotient_decay(&self) -> f64 {
        let finite = self.rows.iter().map(|r| r.quot_p).filter(|q| q.is_finite());
        let peak = finite.fold(0.0, f64::max);
        match self.rows.last() {
            Some(last) if peak > 0.0 && last.quot_p.is_finite() => last.quot_p / peak,
            _ => 1.0,
        }
    }

    /// Whether the quotients at least halve between their peak and the last
    /// radius.
    pub fn spectral_evidence(&self) -> bool {
        self.quotient_decay() < 0.5
    }

    pub fn min_weyl(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.weyl)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks that `w` solves the equation on `B_{radius}` up to `tol` relative to
/// the largest term there; returns the residual.
fn interior_residual(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    x0: usize,
    radius: usize,
    tol: f64,
) -> Result<f64> {
    let ball = g.ball(x0, radius)?;
    let residual = max_residual_on(g, w, energy, &ball)?;
    let scale = ball
        .iter()
        .map(|x| {
            (g.weighted_degree(x) + g.potential()[x] + g.measure()[x] * energy.abs()) * w[x].abs()
                / g.measure()[x]
        })
        .fold(0.0, f64::max);
    let allowed = tol * (1.0 + scale);
    if residual > allowed {
        return Err(Error::NotSolution {
            residual,
            tol: allowed,
        });
    }
    Ok(residual)
}

/// Shnol quotients along `B_n = ball(x0, n)`, `n = 0..=max_radius`.
///
/// `w` must solve the equation on `B_{max_radius + 1}`, which holds every
/// vertex entering the boundary norms; on a truncation this keeps the balls
/// two steps away from the rim.
pub fn shnol_sequence(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    x0: usize,
    max_radius: usize,
    tol: f64,
) -> Result<ShnolReport> {
    g.check_function(w)?;
    g.check_vertex(x0)?;
    let residual = interior_residual(g, w, energy, x0, max_radius + 1, tol)?;
    let ctx = FormContext::new(g);
    let mut rows = Vec::with_capacity(max_radius + 1);
    for n in 0..=max_radius {
        let ball = g.ball(x0, n)?;
        let wn = w.restricted(&ball);
        let norm = ctx.norm_m(&wn)?;
        let (p, q) = boundary_norms(g, &ball, w)?;
        let (quot_p, quot_q, weyl) = if norm == 0.0 {
            (f64::INFINITY, f64::INFINITY, f64::INFINITY)
        } else {
            (
                p / norm,
                q / norm,
                ctx.norm_m(&ctx.apply_shifted(&wn, energy)?)? / norm,
            )
        };
        rows.push(ShnolRow {
            n,
            norm,
            p,
            q,
            quot_p,
            quot_q,
            weyl,
        });
    }
    if rows.iter().all(|r| r.norm == 0.0) {
        return Err(Error::ZeroFunction);
    }
    let oracle_distance = if g.vertex_count() <= DENSE_LIMIT {
        Some(spectrum_distance(g, energy)?)
    } else {
        None
    };
    Ok(ShnolReport {
        energy,
        rows,
        interior_residual: residual,
        oracle_distance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheegerReport {
    /// `q(1_A, A)`.
    pub q1: f64,
    /// `Q(1_A)`.
    pub form: f64,
    /// `p(1_A, A)^2`.
    pub p1_sq: f64,
    /// `deg_A(∂A)`: largest number of neighbours in `A^c` of a vertex of `∂A`.
    pub deg_da: usize,
    /// `deg_A(∂A^c)`: largest number of neighbours in `A` of a vertex of `∂A^c`.
    pub deg_dac: usize,
    /// `q1 <= form <= p1_sq`.
    pub forward: bool,
    /// `p1_sq / deg_dac <= form <= deg_da q1`.
    pub reverse: bool,
}

/// Compares `Q(1_A)` with the boundary norms of `1_A` on an unweighted graph
/// (`b` in `{0, 1}`, `m = 1`, `c = 0`).
pub fn cheeger_compare(g: &WeightedGraph, a: &VertexSubset) -> Result<CheegerReport> {
    let unweighted = g.edges().iter().all(|e| e.weight == 1.0)
        && g.measure().iter().all(|&m| m == 1.0)
        && g.potential().iter().all(|&c| c == 0.0);
    if !unweighted {
        return Err(Error::NotUnweighted);
    }
    let (da, dac) = g.boundary(a)?;
    let one = GraphFunction::indicator(a);
    let (p, q1) = boundary_norms(g, a, &one)?;
    let p1_sq = p * p;
    let form = FormContext::new(g).energy(&one)?;
    let across = |x: usize| {
        g.neighbors(x)
            .filter(|&(y, _)| a.contains(y) != a.contains(x))
            .count()
    };
    let deg_da = da.iter().map(across).max().unwrap_or(0);
    let deg_dac = dac.iter().map(across).max().unwrap_or(0);
    let slack = |v: f64| identity_tolerance(v);
    let forward = q1 <= form + slack(form) && form <= p1_sq + slack(p1_sq);
    let reverse =
        p1_sq <= deg_dac as f64 * form + slack(p1_sq) && form <= deg_da as f64 * q1 + slack(form);
    Ok(CheegerReport {
        q1,
        form,
        p1_sq,
        deg_da,
        deg_dac,
        forward,
        reverse,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbBound {
    /// `max_x b(x) / m(x)`.
    pub c_b: f64,
    pub attained_at: usize,
}

pub fn laplace_bound(g: &WeightedGraph) -> CbBound {
    let mut best = CbBound {
        c_b: f64::NEG_INFINITY,
        attained_at: 0,
    };
    for x in 0..g.vertex_count() {
        let v = g.weighted_degree(x) / g.measure()[x];
        if v > best.c_b {
            best = CbBound {
                c_b: v,
                attained_at: x,
            };
        }
    }
    best
}

/// Smallest `r` with `J(r + step) <= e^delta J(r)` inside the data, or `None`.
/// A missing radius only says the finite window shows none.
pub fn subexp_radius(j: &[f64], step: usize, delta: f64) -> Result<Option<usize>> {
    if j.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    if step == 0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if let Some(v) = j.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "sequence entry {v} is not a finite non-negative number"
        )));
    }
    let factor = delta.exp();
    Ok((0..j.len().saturating_sub(step)).find(|&r| j[r + step] <= factor * j[r]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNorm {
    pub alpha: f64,
    /// `||e^{-alpha d(., x0)} w||_m` over the whole graph.
    pub norm: f64,
    /// Share of the squared norm carried by vertices farther than half the
    /// eccentricity of `x0`; close to one when the weighted function does not
    /// decay.
    pub tail_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketRow {
    pub n: usize,
    /// `p(w, B_n)^2`.
    pub p_sq: f64,
    /// `C_b^2 (J(n+1) - J(n-1))` with `J(-1) = 0`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalEntry {
    pub delta: f64,
    /// `n_k = r + 1` where `r = subexp_radius(J, 2, delta)`.
    pub radius: Option<usize>,
    /// `C_b^2 (e^delta - 1)`, the bound on `(p(w, B_n) / ||w_n||)^2` at `n_k`.
    pub bound: f64,
    /// `(p(w, B_{n_k}) / ||w_{n_k}||)^2`.
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundedShnolReport {
    pub c_b: CbBound,
    pub weighted_norms: Vec<WeightedNorm>,
    pub brackets: Vec<BracketRow>,
    /// `J(n) = ||w_n||_m^2` for `n = 0..=max_radius + 1`.
    pub j: Vec<f64>,
    pub diagonal: Vec<DiagonalEntry>,
    /// Every requested `delta` found a radius.
    pub subexponential: bool,
}

/// Runs the bounded-Laplacian argument on a finite truncation: weighted norms
/// for each `alpha`, the bracketing inequality for `n = 0..=max_radius`, and
/// the radii `n_k` for each `delta`.
pub fn bounded_shnol_run(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    x0: usize,
    max_radius: usize,
    alphas: &[f64],
    deltas: &[f64],
    tol: f64,
) -> Result<BoundedShnolReport> {
    g.check_function(w)?;
    g.check_vertex(x0)?;
    interior_residual(g, w, energy, x0, max_radius + 1, tol)?;
    let c_b = laplace_bound(g);
    let dist = g.distances_from(x0);
    let m = g.measure();
    let ecc = g.eccentricity(x0)?;

    let weighted_norms = alphas
        .iter()
        .map(|&alpha| {
            let mut total = 0.0;
            let mut tail = 0.0;
            for x in 0..g.vertex_count() {
                let Some(d) = dist[x] else { continue };
                let v = (-alpha * d as f64).exp() * w[x];
                let contrib = v * v * m[x];
                total += contrib;
                if 2 * d > ecc {
                    tail += contrib;
                }
            }
            WeightedNorm {
                alpha,
                norm: total.sqrt(),
                tail_fraction: ratio(tail, total),
            }
        })
        .collect();

    let mut j = vec![0.0; max_radius + 2];
    for x in 0..g.vertex_count() {
        if let Some(d) = dist[x] {
            for jn in j.iter_mut().skip(d) {
                *jn += w[x] * w[x] * m[x];
            }
        }
    }

    let cb2 = c_b.c_b * c_b.c_b;
    let mut p_sq = Vec::with_capacity(max_radius + 1);
    let mut brackets = Vec::with_capacity(max_radius + 1);
    for n in 0..=max_radius {
        let (p, _) = boundary_norms(g, &g.ball(x0, n)?, w)?;
        let below = if n == 0 { 0.0 } else { j[n - 1] };
        let bound = cb2 * (j[n + 1] - below);
        let holds = p * p <= bound + identity_tolerance(bound);
        p_sq.push(p * p);
        brackets.push(BracketRow {
            n,
            p_sq: p * p,
            bound,
            holds,
        });
    }

    let mut diagonal = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let radius = subexp_radius(&j, 2, delta)?.map(|r| r + 1);
        let observed = radius.map(|n| ratio(p_sq[n], j[n]));
        diagonal.push(DiagonalEntry {
            delta,
            radius,
            bound: cb2 * delta.exp_m1(),
            observed,
        });
    }
    let subexponential = diagonal.iter().all(|d| d.radius.is_some());
    Ok(BoundedShnolReport {
        c_b,
        weighted_norms,
        brackets,
        j,
        diagonal,
        subexponential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(n: usize, xs: &[usize]) -> VertexSubset {
        VertexSubset::new(n, xs.iter().copied()).unwrap()
    }

    fn cos_on_segment(radius: usize, theta: f64) -> GraphFunction {
        GraphFunction::from_fn(2 * radius + 1, |v| {
            (theta * fixtures::z_coordinate(radius, v) as f64).cos()
        })
    }

    #[test]
    fn measures_on_p3() {
        let g = fixtures::path(3);
        let r = boundary_measures(&g, &set(3, &[0, 1])).unwrap();
        assert_eq!(r.mu_on_da, BTreeMap::from([(1, 1.0)]));
        assert_eq!(r.mu_on_dac, BTreeMap::from([(2, 1.0)]));
        assert_eq!(r.nu_on_da, BTreeMap::from([(1, 1.0)]));
        assert_eq!(r.nu_on_dac, BTreeMap::from([(2, 1.0)]));
        let full = boundary_measures(&g, &VertexSubset::full(3)).unwrap();
        assert!(full.mu_on_da.is_empty() && full.nu_on_dac.is_empty());
    }

    #[test]
    fn measures_on_weighted_k2() {
        let g = WeightedGraph::new(vec![1.0, 4.0], vec![0.0; 2], [(0, 1, 2.0)]).unwrap();
        let r = boundary_measures(&g, &set(2, &[0])).unwrap();
        assert_eq!(r.nu_on_da[&0], 1.0);
        assert_eq!(r.mu_on_da[&0], 1.0);
    }

    #[test]
    fn norms_on_p3() {
        let g = fixtures::path(3);
        let a = set(3, &[0, 1]);
        let (p, q) = boundary_norms(&g, &a, &GraphFunction::constant(3, 1.0)).unwrap();
        assert!((p - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(q, 2.0);
        assert_eq!(
            boundary_norms(&g, &a, &GraphFunction::zeros(3)).unwrap(),
            (0.0, 0.0)
        );
        let ones = GraphFunction::constant(3, 1.0);
        assert_eq!(
            boundary_norms(&g, &VertexSubset::full(3), &ones).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn restricted_defect_on_p3() {
        let g = fixtures::path(3);
        let ones = GraphFunction::constant(3, 1.0);
        let (via, direct) = restricted_defect(&g, 0.0, &ones, &set(3, &[0, 1])).unwrap();
        assert_eq!(via.values(), &[0.0, 1.0, -1.0]);
        assert_eq!(direct.values(), &[0.0, 1.0, -1.0]);
        let (via, direct) = restricted_defect(&g, 0.0, &ones, &VertexSubset::full(3)).unwrap();
        assert_eq!(via.max_abs(), 0.0);
        assert_eq!(direct.max_abs(), 0.0);
        assert!(matches!(
            restricted_defect(&g, 0.5, &ones, &VertexSubset::full(3)),
            Err(Error::NotSolution { .. })
        ));
    }

    #[test]
    fn defect_bound_equality_case() {
        let g = fixtures::path(3);
        let ones = GraphFunction::constant(3, 1.0);
        let r = defect_bound_check(&g, 0.0, &ones, &set(3, &[0, 1]), 20, 1).unwrap();
        assert!(r.holds);
        assert!((r.defect_norm - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.l2_ratio - 1.0).abs() < 1e-15);
        let zero =
            defect_bound_check(&g, 0.0, &GraphFunction::zeros(3), &set(3, &[0]), 5, 1).unwrap();
        assert_eq!(
            (zero.p, zero.q, zero.defect_norm, zero.max_pairing_ratio),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn defect_bound_on_z_cos() {
        let g = fixtures::z_segment(30);
        let w = cos_on_segment(30, std::f64::consts::FRAC_PI_3);
        let a = g.ball(30, 10).unwrap();
        let r = defect_bound_check(&g, 1.0, &w, &a, 50, 3).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.l2_ratio <= 1.0 + 1e-12 && r.max_pairing_ratio <= 1.0 + 1e-12);
        assert!(r.formula_gap < 1e-12);
    }

    #[test]
    fn shnol_ground_state_without_boundary() {
        let g = fixtures::path(5);
        let w = GraphFunction::constant(5, 1.0);
        let r = shnol_sequence(&g, &w, 0.0, 2, 2, 1e-12).unwrap();
        let last = r.rows.last().unwrap();
        assert_eq!((last.p, last.q, last.weyl), (0.0, 0.0, 0.0));
        assert!(r.oracle_distance.unwrap() < 1e-12);
    }

    #[test]
    fn shnol_geometric_solution_stays_away() {
        let g = fixtures::z_segment(30);
        let w = GraphFunction::from_fn(61, |v| 2f64.powi(fixtures::z_coordinate(30, v) as i32));
        let r = shnol_sequence(&g, &w, -0.5, 30, 20, 1e-9).unwrap();
        assert!(r.min_weyl() > 0.3);
        assert!(!r.spectral_evidence());
    }

    #[test]
    fn shnol_rejects_mismatched_energy_and_rim() {
        let g = fixtures::z_segment(20);
        let w = cos_on_segment(20, 1.0);
        assert!(matches!(
            shnol_sequence(&g, &w, 0.3, 20, 10, 1e-9),
            Err(Error::NotSolution { .. })
        ));
        let w = cos_on_segment(20, std::f64::consts::FRAC_PI_3);
        assert!(shnol_sequence(&g, &w, 1.0, 20, 18, 1e-9).is_ok());
        assert!(matches!(
            shnol_sequence(&g, &w, 1.0, 20, 19, 1e-9),
            Err(Error::NotSolution { .. })
        ));
    }

    #[test]
    fn cheeger_examples() {
        let g = fixtures::path(3);
        let r = cheeger_compare(&g, &set(3, &[0, 1])).unwrap();
        assert_eq!((r.q1, r.form, r.p1_sq), (1.0, 1.0, 1.0));
        assert!(r.forward && r.reverse);

        let s = fixtures::star(3);
        let r = cheeger_compare(&s, &set(4, &[0])).unwrap();
        assert!((r.q1 - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!((r.form, r.deg_da, r.deg_dac), (3.0, 3, 1));
        assert!((r.p1_sq - 3.0).abs() < 1e-14);
        assert!(r.forward && r.reverse);

        let r = cheeger_compare(&g, &VertexSubset::full(3)).unwrap();
        assert_eq!((r.q1, r.form, r.p1_sq), (0.0, 0.0, 0.0));

        let weighted = fixtures::weighted_star(&[2.0, 1.0]);
        assert!(matches!(
            cheeger_compare(&weighted, &set(3, &[0])),
            Err(Error::NotUnweighted)
        ));
    }

    #[test]
    fn laplace_bound_examples() {
        assert_eq!(
            laplace_bound(&fixtures::path(3)),
            CbBound {
                c_b: 2.0,
                attained_at: 1
            }
        );
        let k2 = WeightedGraph::new(vec![2.0, 2.0], vec![0.0; 2], [(0, 1, 1.0)]).unwrap();
        assert_eq!(laplace_bound(&k2).c_b, 0.5);
    }

    #[test]
    fn subexp_radius_examples() {
        let squares: Vec<f64> = (0..100).map(|r| (r * r) as f64).collect();
        assert_eq!(subexp_radius(&squares, 1, 0.1).unwrap(), Some(20));
        let exps: Vec<f64> = (0..50).map(|r| (r as f64).exp()).collect();
        assert_eq!(subexp_radius(&exps, 1, 0.5).unwrap(), None);
        assert_eq!(subexp_radius(&[3.0; 5], 1, 0.1).unwrap(), Some(0));
        assert!(subexp_radius(&[], 1, 0.1).is_err());
        assert!(subexp_radius(&[1.0], 0, 0.1).is_err());
        assert!(subexp_radius(&[1.0], 1, 0.0).is_err());
    }

    #[test]
    fn bounded_run_on_constant_and_cos() {
        let g = fixtures::z_segment(80);
        let ones = GraphFunction::constant(161, 1.0);
        let r = bounded_shnol_run(&g, &ones, 0.0, 80, 78, &[0.1], &[0.5, 0.2, 0.1], 1e-12).unwrap();
        assert!(r.subexponential);
        assert!(r.brackets.iter().all(|b| b.holds));
        assert_eq!(r.j[10], 21.0);

        let w = cos_on_segment(80, std::f64::consts::FRAC_PI_3);
        let deltas = [0.4, 0.2, 0.1, 0.05];
        let r = bounded_shnol_run(&g, &w, 1.0, 80, 78, &[0.05], &deltas, 1e-9).unwrap();
        assert!(r.brackets.iter().all(|b| b.holds));
        assert!(r.subexponential);
        for d in &r.diagonal {
            assert!(d.observed.unwrap() <= d.bound + 1e-12, "{d:?}");
        }
        assert!(r.diagonal.windows(2).all(|p| p[1].bound < p[0].bound));
    }

    #[test]
    fn bounded_run_flags_geometric_growth() {
        let g = fixtures::z_segment(30);
        let w = GraphFunction::from_fn(61, |v| 2f64.powi(fixtures::z_coordinate(30, v) as i32));
        let r = bounded_shnol_run(&g, &w, -0.5, 30, 28, &[0.2], &[0.5, 0.1], 1e-9).unwrap();
        assert!(!r.subexponential);
        assert!(r.weighted_norms[0].tail_fraction > 0.9);
        assert!(r.brackets.iter().all(|b| b.holds));
    }
}
