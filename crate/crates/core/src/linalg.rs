//! Conjugate gradients in the `m`-weighted inner product and a dense cyclic
//! Jacobi eigensolver.

use crate::error::{Error, Result};
use crate::forms::{inner_m_raw, FormContext};
use crate::graph::WeightedGraph;

/// Vertex-count limit of the dense oracle.
pub const DENSE_LIMIT: usize = 256;

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `||rhs - A x||_m / ||rhs||_m` at exit.
    pub relative_residual: f64,
}

/// Solves `(L - shift) x = rhs` by conjugate gradients in `<., .>_m`, where
/// `L - shift` is self-adjoint. With `project`, the iteration runs on the
/// `m`-orthogonal complement of that unit vector.
///
/// Returns `Indefinite` when a search direction has non-positive curvature.
pub(crate) fn cg_shifted(
    ctx: &FormContext<'_>,
    shift: f64,
    rhs: &[f64],
    rtol: f64,
    max_iter: usize,
    project: Option<&[f64]>,
) -> Result<CgOutcome> {
    let n = rhs.len();
    let m = ctx.graph().measure();
    let orth = |v: &mut [f64]| {
        if let Some(q) = project {
            let c = inner_m_raw(m, v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    };
    let mut b = rhs.to_vec();
    orth(&mut b);
    let b_norm = inner_m_raw(m, &b, &b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            solution: x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = inner_m_raw(m, &r, &r);
    let target = rtol * b_norm;
    let mut best = (f64::INFINITY, x.clone());
    for it in 0..max_iter {
        ctx.apply_shifted_into(&p, shift, &mut ap);
        orth(&mut ap);
        let curvature = inner_m_raw(m, &p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::Indefinite { energy: shift });
        }
        let alpha = rr / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        // Recompute the true residual now and then to avoid drift.
        if (it + 1) % 50 == 0 {
            ctx.apply_shifted_into(&x, shift, &mut r);
            for i in 0..n {
                r[i] = b[i] - r[i];
            }
            orth(&mut r);
        }
        let rr_new = inner_m_raw(m, &r, &r);
        let res = rr_new.sqrt();
        if res < best.0 {
            best = (res, x.clone());
        }
        if res <= target {
            return Ok(CgOutcome {
                solution: x,
                iterations: it + 1,
                relative_residual: res / b_norm,
            });
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    Ok(CgOutcome {
        solution: best.1,
        iterations: max_iter,
        relative_residual: best.0 / b_norm,
    })
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi rotations.
/// Returns ascending eigenvalues and the matching orthonormal eigenvectors
/// (as columns: `vectors[k]` is the `k`-th eigenvector).
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i][k]).collect())
        .collect();
    (values, vectors)
}

/// Full spectrum of `L` on a small graph.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenfunctions of `L`, orthonormal in `<., .>_m`.
    pub vectors: Vec<Vec<f64>>,
}

impl DenseSpectrum {
    /// `min_k |E - lambda_k|`.
    pub fn distance_to(&self, energy: f64) -> f64 {
        self.values
            .iter()
            .map(|l| (energy - l).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// The symmetric matrix `M^{-1/2} K M^{-1/2}` similar to `L`.
pub fn symmetric_operator_matrix(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let m = g.measure();
    let mut a = vec![vec![0.0; n]; n];
    for x in 0..n {
        a[x][x] = (g.weighted_degree(x) + g.potential()[x]) / m[x];
        for (y, b) in g.neighbors(x) {
            a[x][y] = -b / (m[x] * m[y]).sqrt();
        }
    }
    a
}

/// Dense spectrum of `L` by Jacobi rotations; limited to [`DENSE_LIMIT`] vertices.
pub fn dense_spectrum(g: &WeightedGraph) -> Result<DenseSpectrum> {
    let n = g.vertex_count();
    if n > DENSE_LIMIT {
        return Err(Error::OracleTooLarge {
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    let (values, ys) = symmetric_eigen(&symmetric_operator_matrix(g));
    let m = g.measure();
    let vectors = ys
        .into_iter()
        .map(|y| y.iter().zip(m).map(|(yi, mi)| yi / mi.sqrt()).collect())
        .collect();
    Ok(DenseSpectrum { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFunction;

    #[test]
    fn jacobi_on_known_matrix() {
        // Path Laplacian on 3 vertices: eigenvalues 0, 1, 3.
        let a = vec![
            vec![1.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 1.0],
        ];
        let (vals, vecs) = symmetric_eigen(&a);
        for (got, want) in vals.iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-13, "{vals:?}");
        }
        for (k, v) in vecs.iter().enumerate() {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * v[j]).sum();
                assert!((av - vals[k] * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_vectors_are_m_orthonormal_eigenfunctions() {
        let g = WeightedGraph::new(
            vec![1.0, 2.0, 0.5],
            vec![0.0, 1.0, 0.2],
            [(0, 1, 1.0), (1, 2, 3.0), (0, 2, 0.5)],
        )
        .unwrap();
        let s = dense_spectrum(&g).unwrap();
        let ctx = FormContext::new(&g);
        for (k, v) in s.vectors.iter().enumerate() {
            let f = GraphFunction::new(v.clone());
            let lv = ctx.apply_l(&f).unwrap();
            for x in 0..3 {
                assert!((lv[x] - s.values[k] * v[x]).abs() < 1e-12);
            }
            for (j, u) in s.vectors.iter().enumerate() {
                let ip = inner_m_raw(g.measure(), u, v);
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cg_solves_spd_system() {
        let g = WeightedGraph::new(vec![1.0; 3], vec![0.0; 3], [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let ctx = FormContext::new(&g);
        let out = cg_shifted(&ctx, -1.0, &[1.0, 0.0, 0.0], 1e-14, 100, None).unwrap();
        for (got, want) in out.solution.iter().zip([5.0 / 8.0, 0.25, 0.125]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn cg_reports_indefinite_shift() {
        let g = WeightedGraph::new(vec![1.0; 2], vec![0.0; 2], [(0, 1, 1.0)]).unwrap();
        let ctx = FormContext::new(&g);
        assert!(matches!(
            cg_shifted(&ctx, 1.0, &[1.0, 1.0], 1e-12, 10, None),
            Err(Error::Indefinite { .. })
        ));
    }
}
