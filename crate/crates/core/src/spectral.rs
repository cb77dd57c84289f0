//! Ground state energy, resolvent solves and resolvent-built positive
//! super-solutions.
//!
//! The eigensolver is shifted inverse iteration whose shift is refreshed every
//! step from the Collatz-Wielandt bound: for a positive iterate `x`,
//! `min_v (L x)(v) / x(v)` never exceeds `E0`, because `x` is then a positive
//! super-solution at that energy. The shift therefore stays strictly below
//! `E0`, every inner solve is symmetric positive definite, and the Rayleigh
//! quotient closes the bracket from above.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{identity_tolerance, inner_m_raw, FormContext};
use crate::graph::{GraphFunction, VertexSubset, WeightedGraph};
use crate::linalg::{cg_shifted, dense_spectrum};
use crate::rng::Lcg64;

const MAX_OUTER: usize = 500;
const MAX_DEFLATED: usize = 20_000;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub e0: f64,
    /// `m`-normalized, positive on connected graphs.
    pub ground_state: GraphFunction,
    /// `||L w - E0 w||_m`.
    pub residual: f64,
    pub iterations: usize,
    /// Collatz-Wielandt lower bound certified along the way.
    pub lower_bound: f64,
}

fn cg_budget(n: usize) -> usize {
    20 * n + 200
}

fn normalize(m: &[f64], x: &mut [f64]) -> f64 {
    let norm = inner_m_raw(m, x, x).sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
    norm
}

/// `(rho, ||L x - rho x||_m, L x)` for an `m`-unit vector `x`.
fn rayleigh(ctx: &FormContext<'_>, x: &[f64]) -> (f64, f64, Vec<f64>) {
    let m = ctx.graph().measure();
    let mut lx = vec![0.0; x.len()];
    ctx.apply_shifted_into(x, 0.0, &mut lx);
    let rho = inner_m_raw(m, x, &lx);
    let r: Vec<f64> = lx.iter().zip(x).map(|(a, b)| a - rho * b).collect();
    (rho, inner_m_raw(m, &r, &r).sqrt(), lx)
}

/// Largest diagonal entry of `L`, used as the operator scale.
pub fn operator_scale(g: &WeightedGraph) -> f64 {
    (0..g.vertex_count())
        .map(|x| (g.weighted_degree(x) + g.potential()[x]) / g.measure()[x])
        .fold(0.0, f64::max)
}

/// `E0 = inf Q(u) / ||u||^2` with a positive ground state.
pub fn ground_energy(g: &WeightedGraph, tol: f64) -> Result<SpectralResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let m = g.measure();
    let ctx = FormContext::new(g);
    let scale = operator_scale(g).max(f64::MIN_POSITIVE);
    let mut x: Vec<f64> = vec![1.0; n];
    normalize(m, &mut x);
    let mut lower = (0..n)
        .map(|v| g.potential()[v] / m[v])
        .fold(f64::INFINITY, f64::min);

    for it in 0..MAX_OUTER {
        let (rho, residual, lx) = rayleigh(&ctx, &x);
        if x.iter().all(|&v| v > 0.0) {
            let cw = lx
                .iter()
                .zip(&x)
                .map(|(a, b)| a / b)
                .fold(f64::INFINITY, f64::min);
            lower = lower.max(cw);
        }
        if residual <= tol {
            return finish(x, rho, residual, it, lower);
        }
        let gap = (rho - lower).max(1e-13 * scale);
        let shift = lower - gap;
        let solve = cg_shifted(&ctx, shift, &x, 1e-14, cg_budget(n), None)?;
        x = solve.solution;
        normalize(m, &mut x);
    }
    let (_, residual, _) = rayleigh(&ctx, &x);
    Err(Error::NonConvergence {
        what: "ground state iteration",
        iterations: MAX_OUTER,
        residual,
    })
}

fn finish(
    mut x: Vec<f64>,
    rho: f64,
    residual: f64,
    iterations: usize,
    lower: f64,
) -> Result<SpectralResult> {
    if x[0] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    if let Some((vertex, &value)) = x.iter().enumerate().find(|(_, &v)| v <= 0.0) {
        return Err(Error::PositivityLost { vertex, value });
    }
    Ok(SpectralResult {
        e0: rho,
        ground_state: GraphFunction::new(x),
        residual,
        iterations,
        lower_bound: lower.min(rho),
    })
}

/// Second-smallest eigenvalue by inverse iteration on the `m`-orthogonal
/// complement of the ground state.
pub fn second_energy(
    g: &WeightedGraph,
    ground: &SpectralResult,
    tol: f64,
) -> Result<(f64, GraphFunction)> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a single vertex has no second eigenvalue".into(),
        ));
    }
    let m = g.measure();
    let ctx = FormContext::new(g);
    let q = ground.ground_state.values();
    let orth = |v: &mut [f64]| {
        let c = inner_m_raw(m, v, q);
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= c * qi;
        }
    };
    let mut rng = Lcg64::new(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    orth(&mut x);
    normalize(m, &mut x);
    let shift = ground.e0 - tol;
    for _ in 0..MAX_DEFLATED {
        let (rho, residual, _) = rayleigh(&ctx, &x);
        if residual <= tol {
            return Ok((rho, GraphFunction::new(x)));
        }
        let solve = cg_shifted(&ctx, shift, &x, 1e-14, cg_budget(n), Some(q))?;
        x = solve.solution;
        orth(&mut x);
        normalize(m, &mut x);
    }
    let (_, residual, _) = rayleigh(&ctx, &x);
    Err(Error::NonConvergence {
        what: "deflated iteration",
        iterations: MAX_DEFLATED,
        residual,
    })
}

/// Margin by which an energy must sit below `E0` for a resolvent solve.
pub fn resolvent_margin(tol: f64) -> f64 {
    tol.max(1e-8)
}

/// Resolvent solves `(L - E)^{-1}` below the ground energy of a fixed graph.
#[derive(Debug, Clone)]
pub struct Resolvent<'g> {
    ctx: FormContext<'g>,
    ground: SpectralResult,
    tol: f64,
}

/// A positive super-solution normalized at `x0`, together with its slack.
#[derive(Debug, Clone)]
pub struct SupersolutionCertificate {
    pub w: GraphFunction,
    pub energy: f64,
    pub window: VertexSubset,
    /// `((L - E) w)(x)` for `x` in the window, in window order.
    pub slack: Vec<f64>,
    pub x0: usize,
}

impl SupersolutionCertificate {
    pub fn min_slack(&self) -> f64 {
        self.slack.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_slack(&self) -> f64 {
        self.slack.iter().fold(0.0, |a, s| a.max(s.abs()))
    }
}

impl<'g> Resolvent<'g> {
    pub fn new(g: &'g WeightedGraph, tol: f64) -> Result<Self> {
        let ground = ground_energy(g, tol.min(1e-10))?;
        Ok(Resolvent {
            ctx: FormContext::new(g),
            ground,
            tol,
        })
    }

    pub fn ground(&self) -> &SpectralResult {
        &self.ground
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.ctx.graph()
    }

    fn check_energy(&self, energy: f64) -> Result<()> {
        let margin = resolvent_margin(self.tol);
        if !(energy <= self.ground.e0 - margin) {
            return Err(Error::EnergyNotBelowGround {
                energy,
                e0: self.ground.e0,
                margin,
            });
        }
        Ok(())
    }

    /// `u = (L - E)^{-1} phi` with `||(L - E) u - phi||_m <= tol ||phi||_m`;
    /// `phi >= 0`, `phi != 0`, and the result is checked to be positive.
    pub fn solve(&self, energy: f64, phi: &GraphFunction) -> Result<GraphFunction> {
        self.check_energy(energy)?;
        let g = self.ctx.graph();
        g.check_function(phi)?;
        if let Some((vertex, &value)) = phi.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::NegativeEntry { vertex, value });
        }
        if phi.iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroFunction);
        }
        let n = g.vertex_count();
        let inner_tol = (self.tol * 1e-3).max(1e-15);
        let out = cg_shifted(
            &self.ctx,
            energy,
            phi.values(),
            inner_tol,
            cg_budget(n),
            None,
        )?;
        if out.relative_residual > self.tol {
            return Err(Error::NonConvergence {
                what: "resolvent conjugate gradients",
                iterations: out.iterations,
                residual: out.relative_residual,
            });
        }
        if let Some((vertex, &value)) = out.solution.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::PositivityLost { vertex, value });
        }
        Ok(GraphFunction::new(out.solution))
    }

    /// `w = (L - E)^{-1} 1_{V \ W}` normalized so that `w(x0) = 1`.
    pub fn supersolution(
        &self,
        energy: f64,
        x0: usize,
        window: &VertexSubset,
    ) -> Result<SupersolutionCertificate> {
        let g = self.ctx.graph();
        g.check_vertex(x0)?;
        g.check_subset(window)?;
        if !window.contains(x0) {
            return Err(Error::NotInWindow { vertex: x0 });
        }
        if window.len() == g.vertex_count() {
            return Err(Error::WindowIsWholeGraph);
        }
        let phi = GraphFunction::indicator(&window.complement());
        let u = self.solve(energy, &phi)?;
        let w = u.scaled(1.0 / u[x0]);
        let full = self.ctx.apply_shifted(&w, energy)?;
        let slack = window.iter().map(|x| full[x]).collect();
        Ok(SupersolutionCertificate {
            w,
            energy,
            window: window.clone(),
            slack,
            x0,
        })
    }
}

pub fn resolvent_solve(
    g: &WeightedGraph,
    energy: f64,
    phi: &GraphFunction,
    tol: f64,
) -> Result<GraphFunction> {
    Resolvent::new(g, tol)?.solve(energy, phi)
}

pub fn construct_supersolution(
    g: &WeightedGraph,
    energy: f64,
    x0: usize,
    window: &VertexSubset,
    tol: f64,
) -> Result<SupersolutionCertificate> {
    Resolvent::new(g, tol)?.supersolution(energy, x0, window)
}

/// `max_W |(L - E) w| <= tol`.
pub fn is_solution(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    window: &VertexSubset,
    tol: f64,
) -> Result<bool> {
    Ok(max_residual_on(g, w, energy, window)? <= tol)
}

/// `min_W (L - E) w >= -tol`.
pub fn is_supersolution(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    window: &VertexSubset,
    tol: f64,
) -> Result<bool> {
    g.check_subset(window)?;
    let r = FormContext::new(g).apply_shifted(w, energy)?;
    Ok(window.iter().all(|x| r[x] >= -tol))
}

/// `max_{x in W} |((L - E) w)(x)|`, zero on an empty window.
pub fn max_residual_on(
    g: &WeightedGraph,
    w: &GraphFunction,
    energy: f64,
    window: &VertexSubset,
) -> Result<f64> {
    g.check_subset(window)?;
    let r = FormContext::new(g).apply_shifted(w, energy)?;
    Ok(window.iter().map(|x| r[x].abs()).fold(0.0, f64::max))
}

/// Default solution tolerance: the identity tolerance at the scale of the
/// largest term `(b(x) + c(x) + m(x)|E|) |w(x)| / m(x)`.
pub fn solution_tolerance(g: &WeightedGraph, w: &GraphFunction, energy: f64) -> f64 {
    let scale = (0..g.vertex_count())
        .map(|x| {
            (g.weighted_degree(x) + g.potential()[x] + g.measure()[x] * energy.abs()) * w[x].abs()
                / g.measure()[x]
        })
        .fold(0.0, f64::max);
    identity_tolerance(scale)
}

/// `||(L - E) u||_m / ||u||_m`, an upper bound for the distance from `E` to
/// the spectrum.
pub fn weyl_residual(g: &WeightedGraph, energy: f64, u: &GraphFunction) -> Result<f64> {
    let ctx = FormContext::new(g);
    let norm = ctx.norm_m(u)?;
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let r = ctx.apply_shifted(u, energy)?;
    Ok(ctx.norm_m(&r)? / norm)
}

/// Distance from `E` to the spectrum, via the dense oracle.
pub fn spectrum_distance(g: &WeightedGraph, energy: f64) -> Result<f64> {
    Ok(dense_spectrum(g)?.distance_to(energy))
}

/// Whether `(L - E) w = 0` has a non-negative, non-trivial solution.
///
/// Solutions only exist in the eigenspace at `E`. For `E > E0` that eigenspace
/// is `m`-orthogonal to the positive ground state, so it holds no non-negative
/// non-trivial function; at `E = E0` the ground state itself qualifies. Uses
/// the dense oracle; `tol` decides which eigenvalues count as equal to `E`.
pub fn admits_nonnegative_solution(g: &WeightedGraph, energy: f64, tol: f64) -> Result<bool> {
    let spec = dense_spectrum(g)?;
    let basis: Vec<&Vec<f64>> = spec
        .values
        .iter()
        .zip(&spec.vectors)
        .filter(|(l, _)| (*l - energy).abs() <= tol)
        .map(|(_, v)| v)
        .collect();
    if basis.is_empty() {
        return Ok(false);
    }
    let comps = g.components();
    // A component's Perron vector (positive on it, zero elsewhere) in the span
    // certifies existence; otherwise every basis vector is orthogonal to all
    // of them and no non-negative combination survives.
    for comp in &comps {
        let sub = VertexSubset::new(g.vertex_count(), comp.iter().copied())?;
        let perron = component_ground_state(g, &sub)?;
        let overlap: f64 = basis
            .iter()
            .map(|v| inner_m_raw(g.measure(), v, perron.values()).powi(2))
            .sum::<f64>()
            .sqrt();
        if overlap > 1.0 - 1e-8 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn component_ground_state(g: &WeightedGraph, comp: &VertexSubset) -> Result<GraphFunction> {
    let local: Vec<usize> = comp.members().to_vec();
    let index: BTreeMap<usize, usize> = local.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut edges = Vec::new();
    for e in g.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) {
            edges.push((a, b, e.weight));
        }
    }
    let sub = WeightedGraph::new(
        local.iter().map(|&x| g.measure()[x]).collect(),
        local.iter().map(|&x| g.potential()[x]).collect(),
        edges,
    )?;
    let spec = dense_spectrum(&sub)?;
    let mut out = vec![0.0; g.vertex_count()];
    let sign = if spec.vectors[0].iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    for (i, &x) in local.iter().enumerate() {
        out[x] = sign * spec.vectors[0][i];
    }
    Ok(GraphFunction::new(out))
}

/// One member of an exhaustion run.
#[derive(Debug, Clone)]
pub struct ExhaustionRow {
    pub size: usize,
    pub vertex_count: usize,
    pub e0: f64,
    /// Values of the normalized super-solution on the core window, by label.
    pub core_values: BTreeMap<String, f64>,
    /// Sup-difference to the previous row over their common labels.
    pub sup_difference: Option<f64>,
    pub min_slack: f64,
}

#[derive(Debug, Clone)]
pub struct ExhaustionTable {
    pub energy: f64,
    pub rows: Vec<ExhaustionRow>,
}

impl ExhaustionTable {
    pub fn sup_differences(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.sup_difference).collect()
    }
}

/// For each truncation produced by `family(size)`, builds the resolvent
/// super-solution with source on the outermost sphere around the vertex
/// labelled `x0_label` and records its values on `ball(x0, core_radius)`.
pub fn exhaustion_diagnostic<F>(
    family: F,
    energy: f64,
    x0_label: &str,
    sizes: &[usize],
    core_radius: usize,
    tol: f64,
) -> Result<ExhaustionTable>
where
    F: Fn(usize) -> Result<WeightedGraph>,
{
    let mut rows: Vec<ExhaustionRow> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let g = family(size)?;
        let x0 = g
            .vertex_by_label(x0_label)
            .ok_or_else(|| Error::InvalidArgument(format!("no vertex labelled `{x0_label}`")))?;
        let ecc = g.eccentricity(x0)?;
        if ecc == 0 {
            return Err(Error::WindowIsWholeGraph);
        }
        let window = g.ball(x0, ecc - 1)?;
        let res = Resolvent::new(&g, tol)?;
        let cert = res.supersolution(energy, x0, &window)?;
        let core = g.ball(x0, core_radius)?;
        let core_values: BTreeMap<String, f64> = core
            .iter()
            .map(|x| (g.label(x).to_string(), cert.w[x]))
            .collect();
        let sup_difference = rows.last().map(|prev| {
            core_values
                .iter()
                .filter_map(|(k, v)| prev.core_values.get(k).map(|p| (v - p).abs()))
                .fold(0.0, f64::max)
        });
        rows.push(ExhaustionRow {
            size,
            vertex_count: g.vertex_count(),
            e0: res.ground().e0,
            core_values,
            sup_difference,
            min_slack: cert.min_slack(),
        });
    }
    Ok(ExhaustionTable { energy, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn path3_ground_state_is_constant() {
        let g = fixtures::path(3);
        let r = ground_energy(&g, 1e-12).unwrap();
        assert!(r.e0.abs() < 1e-12);
        for &v in r.ground_state.values() {
            assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn path3_second_eigenvalue_is_one() {
        let g = fixtures::path(3);
        let r = ground_energy(&g, 1e-12).unwrap();
        let (l1, _) = second_energy(&g, &r, 1e-10).unwrap();
        assert!((l1 - 1.0).abs() < 1e-9, "{l1}");
    }

    #[test]
    fn star3_ground_and_second() {
        let g = fixtures::star(3);
        let r = ground_energy(&g, 1e-12).unwrap();
        assert!(r.e0.abs() < 1e-12);
        let (l1, _) = second_energy(&g, &r, 1e-10).unwrap();
        assert!((l1 - 1.0).abs() < 1e-9, "{l1}");
    }

    #[test]
    fn potential_shifts_ground_energy() {
        // Constant potential 0.7 with unit measure shifts the spectrum by 0.7.
        let g = fixtures::cycle(7).with_potential(vec![0.7; 7]).unwrap();
        let r = ground_energy(&g, 1e-12).unwrap();
        assert!((r.e0 - 0.7).abs() < 1e-12);
        assert!(r.lower_bound <= r.e0);
    }

    #[test]
    fn disconnected_is_refused() {
        let g = WeightedGraph::new(vec![1.0; 4], vec![0.0; 4], [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(ground_energy(&g, 1e-10), Err(Error::Disconnected)));
    }

    #[test]
    fn resolvent_path3() {
        let g = fixtures::path(3);
        let u = resolvent_solve(&g, -1.0, &GraphFunction::new(vec![1.0, 0.0, 0.0]), 1e-12).unwrap();
        for (got, want) in u.iter().zip([5.0 / 8.0, 0.25, 0.125]) {
            assert!((got - want).abs() < 1e-11);
        }
    }

    #[test]
    fn resolvent_reproduces_constructed_rhs() {
        let g = fixtures::random_connected(12, 0.3, 5);
        let ones = GraphFunction::constant(12, 1.0);
        let phi = FormContext::new(&g).apply_shifted(&ones, -1.0).unwrap();
        let u = resolvent_solve(&g, -1.0, &phi, 1e-12).unwrap();
        for &v in u.values() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn resolvent_refuses_energy_at_or_above_e0() {
        let g = fixtures::path(3);
        let phi = GraphFunction::new(vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            resolvent_solve(&g, 0.0, &phi, 1e-10),
            Err(Error::EnergyNotBelowGround { .. })
        ));
        assert!(matches!(
            resolvent_solve(&g, 2.0, &phi, 1e-10),
            Err(Error::EnergyNotBelowGround { .. })
        ));
    }

    #[test]
    fn supersolution_on_p5() {
        let g = fixtures::path(5);
        let window = g.ball(2, 1).unwrap();
        let cert = construct_supersolution(&g, -0.5, 2, &window, 1e-10).unwrap();
        assert_eq!(cert.w[2], 1.0);
        assert!(cert.min_slack() >= -1e-8);
        assert!(cert.w.iter().all(|&v| v > 0.0));
        let all = VertexSubset::full(5);
        assert!(is_supersolution(&g, &cert.w, -0.5, &all, 1e-8).unwrap());
        assert!(is_solution(&g, &cert.w, -0.5, &window, 1e-8).unwrap());
    }

    #[test]
    fn supersolution_on_k2() {
        let g = fixtures::path(2);
        let window = VertexSubset::new(2, [0]).unwrap();
        let cert = construct_supersolution(&g, -1.0, 0, &window, 1e-12).unwrap();
        assert_eq!(cert.w[0], 1.0);
        // (L + 1) u = e_1: u = (1/3, 2/3), so w = (1, 2).
        assert!((cert.w[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn supersolution_refuses_bad_input() {
        let g = fixtures::path(5);
        let window = g.ball(2, 1).unwrap();
        assert!(matches!(
            construct_supersolution(&g, 0.0, 2, &window, 1e-10),
            Err(Error::EnergyNotBelowGround { .. })
        ));
        assert!(matches!(
            construct_supersolution(&g, -1.0, 2, &VertexSubset::full(5), 1e-10),
            Err(Error::WindowIsWholeGraph)
        ));
        assert!(matches!(
            construct_supersolution(&g, -1.0, 0, &window, 1e-10),
            Err(Error::NotInWindow { .. })
        ));
    }

    #[test]
    fn solution_predicates() {
        let g = fixtures::path(3);
        let all = VertexSubset::full(3);
        assert!(is_solution(&g, &GraphFunction::constant(3, 1.0), 0.0, &all, 1e-12).unwrap());
        assert!(!is_solution(
            &g,
            &GraphFunction::new(vec![1.0, 2.0, 3.0]),
            0.0,
            &all,
            1e-12
        )
        .unwrap());
        let star = fixtures::star(3);
        let top = GraphFunction::new(vec![1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]);
        assert!(is_solution(&star, &top, 4.0, &VertexSubset::full(4), 1e-12).unwrap());
    }

    #[test]
    fn weyl_residual_examples() {
        let g = fixtures::path(3);
        assert_eq!(
            weyl_residual(&g, 0.0, &GraphFunction::constant(3, 1.0)).unwrap(),
            0.0
        );
        let r = weyl_residual(&g, 0.0, &GraphFunction::new(vec![1.0, 0.0, 0.0])).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            weyl_residual(&g, 0.0, &GraphFunction::zeros(3)),
            Err(Error::ZeroFunction)
        ));
        let gs = ground_energy(&g, 1e-12).unwrap();
        assert!(weyl_residual(&g, gs.e0, &gs.ground_state).unwrap() <= 1e-12);
    }

    #[test]
    fn nonnegative_solutions_only_at_e0() {
        let g = fixtures::star(3);
        assert!(admits_nonnegative_solution(&g, 0.0, 1e-9).unwrap());
        assert!(!admits_nonnegative_solution(&g, 1.0, 1e-9).unwrap());
        assert!(!admits_nonnegative_solution(&g, 4.0, 1e-9).unwrap());
        assert!(!admits_nonnegative_solution(&g, 2.5, 1e-9).unwrap());
    }

    #[test]
    fn exhaustion_on_constant_family_has_zero_differences() {
        let t = exhaustion_diagnostic(|_| Ok(fixtures::path(9)), -0.3, "4", &[1, 2, 3], 2, 1e-12)
            .unwrap();
        for d in t.sup_differences() {
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn exhaustion_on_stars_matches_hand_solution() {
        // Source on all leaves at E = -1: w(leaf) = (N + 1) / N.
        let sizes = [2, 4, 8, 16];
        let t =
            exhaustion_diagnostic(|n| Ok(fixtures::star(n)), -1.0, "0", &sizes, 1, 1e-12).unwrap();
        for (row, &n) in t.rows.iter().zip(&sizes) {
            let leaf = row.core_values["1"];
            assert!((leaf - (n as f64 + 1.0) / n as f64).abs() < 1e-9);
        }
        let leaves: Vec<f64> = t.rows.iter().map(|r| r.core_values["1"]).collect();
        assert!(leaves.windows(2).all(|w| w[1] < w[0]));
    }
}
