//! Linear-Gaussian structural equations over alternative ADMGs.
//!
//! Every node is `A = β_A · Pa(A) + ε_A`. Errors are jointly Gaussian with
//! covariance `Λ`, and the precision `Λ⁻¹` vanishes on every pair of error
//! nodes that the magnified graph does not join by an undirected edge.
//!
//! In a magnified graph over `2n` nodes the error node of `i` is `n + i`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphError, MixedGraph};
use crate::nodeset::{NodeId, NodeSet};
use crate::separation::{route_reachable, SepError};

/// Absolute tolerance for the precision zero pattern and symmetry checks.
pub const STRUCTURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SemError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separation(#[from] SepError),
    #[error("conditioning set contains error node {0}")]
    ErrorNodeInZ(NodeId),
    #[error("coefficients must cover exactly the arrows of the graph")]
    BetaMismatch,
    #[error("error covariance must be {expected}x{expected}")]
    DimensionMismatch { expected: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("precision entry ({a},{b}) = {value:e} but the error nodes are not adjacent")]
    PrecisionPattern { a: NodeId, b: NodeId, value: f64 },
    #[error("singular submatrix in partial correlation")]
    SingularSubmatrix,
    #[error("x and y must differ and lie outside z")]
    MalformedCiQuery,
}

/// `G'`: keeps the arrows, adds `ε_i -> i` for every node and moves each
/// line `a - b` to `ε_a - ε_b`.
pub fn magnify(g: &MixedGraph) -> Result<MixedGraph, GraphError> {
    g.require_alternative()?;
    let n = g.n();
    let mut out = MixedGraph::try_new(2 * n)?;
    for (t, h) in g.arrows() {
        out.add_arrow(t, h)?;
    }
    for v in g.nodes() {
        out.add_arrow(error_node(n, v), v)?;
    }
    for (a, b) in g.line_pairs() {
        out.add_line(error_node(n, a), error_node(n, b))?;
    }
    if let Some(labels) = g.labels() {
        let mut l = labels.to_vec();
        l.extend(labels.iter().map(|s| format!("eps_{s}")));
        out.set_labels(Some(l));
    }
    Ok(out)
}

#[inline]
pub fn error_node(n: usize, v: NodeId) -> NodeId {
    NodeId(n + v.0)
}

/// `Dt(Z)` in a magnified graph: the least set containing `z`, every
/// original node whose parents are all determined, and every `ε_A` whose
/// node `A` and other parents of `A` are determined.
pub fn determined_closure(magnified: &MixedGraph, z: NodeSet) -> Result<NodeSet, SemError> {
    let n = magnified.n() / 2;
    magnified.check_set(z)?;
    if let Some(e) = z.difference(NodeSet::full(n)).min() {
        return Err(SemError::ErrorNodeInZ(e));
    }
    let mut dt = z;
    loop {
        let mut next = dt;
        for a in NodeSet::full(n) {
            let pa = magnified.pa(a);
            let eps = error_node(n, a);
            if pa.is_subset(dt) {
                next.insert(a);
            }
            if dt.contains(a) && pa.without(eps).is_subset(dt) {
                next.insert(eps);
            }
        }
        if next == dt {
            return Ok(dt);
        }
        dt = next;
    }
}

/// A symmetric positive definite covariance over the original nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, SemError> {
        check_spd(&m)?;
        Ok(CovarianceMatrix(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

fn check_spd(m: &DMatrix<f64>) -> Result<(), SemError> {
    if !m.is_square() {
        return Err(SemError::NotSymmetric);
    }
    let scale = m.amax().max(1.0);
    if (m - m.transpose()).amax() > STRUCTURE_TOL * scale {
        return Err(SemError::NotSymmetric);
    }
    if m.clone().cholesky().is_none() {
        return Err(SemError::NotPositiveDefinite);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSem {
    graph: MixedGraph,
    beta: BTreeMap<(NodeId, NodeId), f64>,
    lambda: DMatrix<f64>,
}

impl LinearSem {
    /// Checks that `beta` has one coefficient per arrow `(tail, head)`, that
    /// `lambda` is symmetric positive definite, and that its inverse is zero
    /// (to [`STRUCTURE_TOL`]) on every non-adjacent error pair.
    pub fn new(
        graph: MixedGraph,
        beta: BTreeMap<(NodeId, NodeId), f64>,
        lambda: DMatrix<f64>,
    ) -> Result<Self, SemError> {
        graph.validate()?;
        graph.require_alternative()?;
        let n = graph.n();
        if !beta.keys().copied().eq(graph.arrows()) {
            return Err(SemError::BetaMismatch);
        }
        if lambda.nrows() != n || lambda.ncols() != n {
            return Err(SemError::DimensionMismatch { expected: n });
        }
        check_spd(&lambda)?;
        let precision = lambda
            .clone()
            .cholesky()
            .ok_or(SemError::NotPositiveDefinite)?
            .inverse();
        for a in graph.nodes() {
            for b in graph.nodes().iter().filter(|&b| b > a) {
                let value = precision[(a.0 - 1, b.0 - 1)];
                if !graph.has_line(a, b) && value.abs() > STRUCTURE_TOL {
                    return Err(SemError::PrecisionPattern { a, b, value });
                }
            }
        }
        Ok(LinearSem {
            graph,
            beta,
            lambda,
        })
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    pub fn beta(&self) -> &BTreeMap<(NodeId, NodeId), f64> {
        &self.beta
    }

    pub fn lambda(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    /// `δ = (I - B)⁻¹` with `B[h, t] = β(t -> h)`, so that `V = δ ε`.
    pub fn mixing_matrix(&self) -> DMatrix<f64> {
        let n = self.graph.n();
        let mut m = DMatrix::<f64>::identity(n, n);
        for (&(t, h), &b) in &self.beta {
            m[(h.0 - 1, t.0 - 1)] -= b;
        }
        // unit triangular under a topological order, hence invertible
        m.try_inverse().expect("I - B is invertible for acyclic arrows")
    }

    /// `Σ = δ Λ δᵀ`.
    pub fn implied_covariance(&self) -> CovarianceMatrix {
        let d = self.mixing_matrix();
        let s = &d * &self.lambda * d.transpose();
        let s = (&s + s.transpose()) * 0.5;
        CovarianceMatrix(s)
    }
}

pub fn implied_covariance(sem: &LinearSem) -> CovarianceMatrix {
    sem.implied_covariance()
}

/// Draws a random SEM over `g`, deterministic in `seed`.
///
/// Coefficients are uniform on `[-1, -0.3] ∪ [0.3, 1]`. The error precision
/// has off-diagonals uniform on `[-0.3, 0.3]` for each line and a diagonal
/// of row absolute sum plus one, so it is strictly diagonally dominant.
pub fn random_sem(g: &MixedGraph, seed: u64) -> Result<LinearSem, SemError> {
    g.validate()?;
    g.require_alternative()?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = BTreeMap::new();
    for arrow in g.arrows() {
        let mag: f64 = rng.random_range(0.3..=1.0);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        beta.insert(arrow, sign * mag);
    }
    let mut precision = DMatrix::<f64>::zeros(n, n);
    for (a, b) in g.line_pairs() {
        let w: f64 = rng.random_range(-0.3..=0.3);
        precision[(a.0 - 1, b.0 - 1)] = w;
        precision[(b.0 - 1, a.0 - 1)] = w;
    }
    for i in 0..n {
        let off: f64 = precision.row(i).iter().map(|v| v.abs()).sum();
        precision[(i, i)] = off + 1.0;
    }
    let lambda = precision
        .cholesky()
        .ok_or(SemError::NotPositiveDefinite)?
        .inverse();
    let lambda = (&lambda + lambda.transpose()) * 0.5;
    LinearSem::new(g.clone(), beta, lambda)
}

/// Partial correlation of `x` and `y` given `z`, from the inverse of the
/// `(x, y, z)` principal submatrix.
pub fn partial_correlation(
    sigma: &CovarianceMatrix,
    x: NodeId,
    y: NodeId,
    z: NodeSet,
) -> Result<f64, SemError> {
    let dim = sigma.dim();
    for v in [x, y].into_iter().chain(z) {
        if v.0 == 0 || v.0 > dim {
            return Err(GraphError::NodeOutOfRange { node: v.0, n: dim }.into());
        }
    }
    if x == y || z.contains(x) || z.contains(y) {
        return Err(SemError::MalformedCiQuery);
    }
    let idx: Vec<usize> = [x, y].into_iter().chain(z).map(|v| v.0 - 1).collect();
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |i, j| sigma.0[(idx[i], idx[j])]);
    let p = sub
        .cholesky()
        .ok_or(SemError::SingularSubmatrix)?
        .inverse();
    let denom = (p[(0, 0)] * p[(1, 1)]).sqrt();
    if !denom.is_finite() || denom <= 0.0 {
        return Err(SemError::SingularSubmatrix);
    }
    Ok(-p[(0, 1)] / denom)
}

/// True iff `|ρ(x, y | z)| < tol`.
pub fn ci_test(
    sigma: &CovarianceMatrix,
    x: NodeId,
    y: NodeId,
    z: NodeSet,
    tol: f64,
) -> Result<bool, SemError> {
    Ok(partial_correlation(sigma, x, y, z)?.abs() < tol)
}

/// Set-valued Gaussian independence: every cross pair has vanishing partial
/// correlation given `z`.
pub fn ci_test_sets(
    sigma: &CovarianceMatrix,
    x: NodeSet,
    y: NodeSet,
    z: NodeSet,
    tol: f64,
) -> Result<bool, SemError> {
    for a in x {
        for b in y {
            if !ci_test(sigma, a, b, z, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovCheckRow {
    pub x: NodeId,
    pub y: NodeId,
    pub z: NodeSet,
    pub partial_correlation: f64,
    pub holds: bool,
}

/// Every pairwise criterion-2 separation `x ⊥ y | z` of the SEM's graph
/// (with `x < y`), paired with its partial correlation under the implied
/// covariance.
pub fn global_markov_rows(sem: &LinearSem, tol: f64) -> Result<Vec<MarkovCheckRow>, SemError> {
    let g = sem.graph();
    let sigma = sem.implied_covariance();
    let mut rows = Vec::new();
    for x in g.nodes() {
        for y in g.nodes().iter().filter(|&y| y > x) {
            for z in g.nodes().without(x).without(y).subsets() {
                if route_reachable(g, NodeSet::singleton(x), z).contains(y) {
                    continue;
                }
                let r = partial_correlation(&sigma, x, y, z)?;
                rows.push(MarkovCheckRow {
                    x,
                    y,
                    z,
                    partial_correlation: r,
                    holds: r.abs() < tol,
                });
            }
        }
    }
    Ok(rows)
}
