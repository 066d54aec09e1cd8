//! Averages over a distribution of rf amplitude errors.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    /// Normal distribution of ε with standard deviation σ.
    Gaussian { sigma: f64 },
    /// ε uniform on [−w, w].
    Uniform { half_width: f64 },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        let w = match *self {
            Distribution::Gaussian { sigma } => sigma,
            Distribution::Uniform { half_width } => half_width,
        };
        if !(w > 0.0) || !w.is_finite() {
            return Err(invalid(format!("distribution width must be > 0, got {w}")));
        }
        Ok(())
    }
}

/// Gauss quadrature for the distribution (Hermite for Gaussian, Legendre for
/// uniform) via the Golub–Welsch eigenvalue method. Weights sum to one.
pub fn quadrature_nodes(dist: &Distribution, n_points: usize) -> Result<Vec<(f64, f64)>> {
    dist.validate()?;
    if n_points == 0 {
        return Err(invalid("quadrature needs at least one node"));
    }
    let (offdiag, scale): (Box<dyn Fn(usize) -> f64>, f64) = match *dist {
        // probabilists' Hermite: b_k = √k
        Distribution::Gaussian { sigma } => (Box::new(|k| (k as f64).sqrt()), sigma),
        Distribution::Uniform { half_width } => (
            Box::new(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            }),
            half_width,
        ),
    };
    let mut jacobi = DMatrix::<f64>::zeros(n_points, n_points);
    for k in 1..n_points {
        let b = offdiag(k);
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::try_new(jacobi, 1e-15, 10_000).ok_or(Error::Eigen)?;
    let mut nodes: Vec<(f64, f64)> = (0..n_points)
        .map(|i| (eig.eigenvalues[i] * scale, eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = nodes.iter().map(|n| n.1).sum();
    for n in &mut nodes {
        n.1 /= total;
    }
    Ok(nodes)
}

/// ∫ curve(ε) p(ε) dε by `n_points`-node Gauss quadrature.
pub fn rf_inhomogeneity_average(curve: impl Fn(f64) -> f64, dist: &Distribution, n_points: usize) -> Result<f64> {
    Ok(quadrature_nodes(dist, n_points)?.into_iter().map(|(x, w)| w * curve(x)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_distribution_samples_the_centre() {
        let curve = |e: f64| (1.0 + e).cos();
        let g = rf_inhomogeneity_average(curve, &Distribution::Gaussian { sigma: 1e-9 }, 16).unwrap();
        assert!((g - 1f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn constant_curve() {
        for d in [Distribution::Gaussian { sigma: 0.3 }, Distribution::Uniform { half_width: 0.5 }] {
            let v = rf_inhomogeneity_average(|_| 0.7, &d, 9).unwrap();
            assert!((v - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_moments() {
        let d = Distribution::Gaussian { sigma: 0.1 };
        let m2 = rf_inhomogeneity_average(|e| e * e, &d, 8).unwrap();
        let m4 = rf_inhomogeneity_average(|e| e.powi(4), &d, 8).unwrap();
        assert!((m2 - 0.01).abs() < 1e-15);
        assert!((m4 - 3e-4).abs() < 1e-16);
    }

    #[test]
    fn uniform_moments() {
        let d = Distribution::Uniform { half_width: 0.5 };
        let m2 = rf_inhomogeneity_average(|e| e * e, &d, 5).unwrap();
        assert!((m2 - 0.25 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_widths() {
        assert!(quadrature_nodes(&Distribution::Gaussian { sigma: 0.0 }, 5).is_err());
        assert!(quadrature_nodes(&Distribution::Uniform { half_width: -1.0 }, 5).is_err());
        assert!(quadrature_nodes(&Distribution::Uniform { half_width: 1.0 }, 0).is_err());
    }
}
