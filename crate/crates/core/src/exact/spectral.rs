//! Lazy-walk spectrum, relaxation time and the lazyconv search.

use nalgebra::DMatrix;

use crate::error::{CrwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::walk::TransitionMatrix;

pub const SPECTRAL_MAX_N: usize = 2000;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectralReport {
    /// Second largest eigenvalue of the lazy walk.
    pub lambda2: f64,
    /// `1 / (1 − λ₂)`.
    pub t_rel: f64,
    /// Stationary distribution of the SRW (degree / 2m).
    pub pi: Vec<f64>,
}

impl SpectralReport {
    pub fn pi_of(&self, set: &VertexSet) -> f64 {
        set.iter().map(|v| self.pi[v]).sum()
    }
}

/// Eigenvalues of `D^{-1/2} A D^{-1/2}` (similar to the SRW matrix), mapped
/// through `(1 + μ) / 2` for the lazy walk.
pub fn spectral(g: &Graph) -> Result<SpectralReport> {
    let n = g.n();
    if n > SPECTRAL_MAX_N {
        return Err(CrwError::SizeGuard(format!(
            "dense eigensolve limited to n <= {SPECTRAL_MAX_N}, got {n}"
        )));
    }
    g.require_connected()?;
    if n < 2 {
        return Err(CrwError::param("spectrum needs at least two vertices"));
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut sym = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        let x = inv_sqrt[u] * inv_sqrt[v];
        sym[(u, v)] = x;
        sym[(v, u)] = x;
    }
    let mut mu: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    let lambda2 = ((1.0 + mu[1]) / 2.0).clamp(0.0, 1.0);
    if lambda2 >= 1.0 {
        return Err(CrwError::Disconnected);
    }
    let two_m = 2.0 * g.edge_count() as f64;
    Ok(SpectralReport {
        lambda2,
        t_rel: 1.0 / (1.0 - lambda2),
        pi: (0..n).map(|v| g.degree(v) as f64 / two_m).collect(),
    })
}

/// Horizon `ceil(4 · t_rel · ln n)` scanned by [`lazyconv_search`].
pub fn lazyconv_horizon(report: &SpectralReport) -> usize {
    let n = report.pi.len() as f64;
    (4.0 * report.t_rel * n.ln()).ceil().max(1.0) as usize
}

/// First `t` in `1..=ceil(4 t_rel ln n)` with `P_x(X_t ∈ S) ≥ π(S)/3` for the SRW.
pub fn lazyconv_search(g: &Graph, report: &SpectralReport, x: usize, set: &VertexSet) -> Result<(usize, f64)> {
    g.check_vertex(x)?;
    if set.is_empty() {
        return Err(CrwError::param("target set is empty"));
    }
    let p = TransitionMatrix::srw(g);
    let threshold = report.pi_of(set) / 3.0;
    let horizon = lazyconv_horizon(report);
    let mut mu = vec![0.0; g.n()];
    mu[x] = 1.0;
    for t in 1..=horizon {
        mu = p.advance(&mu);
        let mass: f64 = set.iter().map(|v| mu[v]).sum();
        if mass >= threshold {
            return Ok((t, mass));
        }
    }
    Err(CrwError::LazyconvNotFound { horizon })
}
