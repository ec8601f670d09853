//! Random walk kernels on the direct product graph.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Direct (tensor) product of two index-labelled graphs. Product vertex
/// `(v, v')` has index `v * n' + v'`, and `A_x = A kron A'`.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    n1: usize,
    n2: usize,
    adjacency: DMatrix<f64>,
}

impl ProductGraph {
    pub fn new(x: &Graph, x2: &Graph) -> ProductGraph {
        let a = adjacency_matrix(x);
        let b = adjacency_matrix(x2);
        ProductGraph {
            n1: x.n(),
            n2: x2.n(),
            adjacency: a.kronecker(&b),
        }
    }

    pub fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn index(&self, v: usize, v2: usize) -> usize {
        v * self.n2 + v2
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }
}

pub(crate) fn adjacency_matrix(x: &Graph) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(x.n(), x.n());
    for (i, j) in x.edges() {
        a[(i, j)] = 1.0;
        a[(j, i)] = 1.0;
    }
    a
}

/// Sufficient condition `lambda * maxdeg(x) * maxdeg(x') < 1` for the
/// geometric series to converge.
pub(crate) fn check_convergence(lambda: f64, max_deg_a: usize, max_deg_b: usize) -> Result<()> {
    let bound = lambda * max_deg_a as f64 * max_deg_b as f64;
    if bound >= 1.0 {
        return Err(Error::DivergentKernel { bound });
    }
    Ok(())
}

/// `1^T (sum_t lambda_t A_x^t) 1` with `lambda_0 = 1` and `lambda_t = lambda`
/// for `t >= 1`. Uses `(A kron A') vec(V) = vec(A V A')`, so each step is a
/// pair of small matrix products rather than a product-graph matvec.
pub fn k_step_random_walk(x: &Graph, x2: &Graph, steps: usize, lambda: f64) -> f64 {
    let weights: Vec<f64> = (0..=steps).map(|t| if t == 0 { 1.0 } else { lambda }).collect();
    weighted_walk_sum(x, x2, &weights)
}

/// `1^T (sum_t weights[t] A_x^t) 1`.
pub fn weighted_walk_sum(x: &Graph, x2: &Graph, weights: &[f64]) -> f64 {
    let a = adjacency_matrix(x);
    let b = adjacency_matrix(x2);
    let mut v = DMatrix::from_element(x.n(), x2.n(), 1.0);
    let mut total = 0.0;
    for (t, w) in weights.iter().enumerate() {
        if t > 0 {
            v = &a * v * &b;
        }
        total += w * v.sum();
    }
    total
}

/// `1^T (I - lambda A_x)^-1 1` by one dense LU solve on the product graph.
pub fn geometric_random_walk(x: &Graph, x2: &Graph, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidKernel(format!("GRW lambda must be positive, got {lambda}")));
    }
    check_convergence(lambda, x.max_degree(), x2.max_degree())?;
    let product = ProductGraph::new(x, x2);
    let dim = product.dim();
    if dim == 0 {
        return Ok(0.0);
    }
    let system = DMatrix::identity(dim, dim) - product.adjacency() * lambda;
    let ones = DVector::from_element(dim, 1.0);
    let solution = system.lu().solve(&ones).ok_or(Error::SingularKernel)?;
    Ok(solution.sum())
}

/// Eigen-decomposition of one adjacency matrix, reduced to what walk
/// kernels need: eigenvalues and squared projections of the all-ones vector.
///
/// With `A = U diag(l) U^T`, `1^T f(A kron A') 1 = sum_{a,b} w_a w'_b f(l_a l'_b)`
/// where `w = (U^T 1)^2`, so a pair costs `O(n n')` once each graph is
/// decomposed.
#[derive(Debug, Clone)]
pub(crate) struct WalkSpectrum {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
    max_degree: usize,
}

impl WalkSpectrum {
    pub(crate) fn new(x: &Graph) -> WalkSpectrum {
        let n = x.n();
        if n == 0 {
            return WalkSpectrum {
                eigenvalues: Vec::new(),
                weights: Vec::new(),
                max_degree: 0,
            };
        }
        let eig = SymmetricEigen::new(adjacency_matrix(x));
        let ones = DVector::from_element(n, 1.0);
        let proj = eig.eigenvectors.tr_mul(&ones);
        WalkSpectrum {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            weights: proj.iter().map(|p| p * p).collect(),
            max_degree: x.max_degree(),
        }
    }

    pub(crate) fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn fold(&self, other: &WalkSpectrum, f: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for (la, wa) in self.eigenvalues.iter().zip(&self.weights) {
            let mut row = 0.0;
            for (lb, wb) in other.eigenvalues.iter().zip(&other.weights) {
                row += wb * f(la * lb);
            }
            total += wa * row;
        }
        total
    }

    pub(crate) fn geometric(&self, other: &WalkSpectrum, lambda: f64) -> f64 {
        self.fold(other, |prod| 1.0 / (1.0 - lambda * prod))
    }

    pub(crate) fn k_step(&self, other: &WalkSpectrum, steps: usize, lambda: f64) -> f64 {
        self.fold(other, |prod| {
            let mut acc = 1.0;
            let mut power = 1.0;
            for _ in 0..steps {
                power *= prod;
                acc += lambda * power;
            }
            acc
        })
    }
}
