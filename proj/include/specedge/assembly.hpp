#pragma once

#include <Eigen/Dense>

#include "specedge/discretization.hpp"
#include "specedge/operator_spec.hpp"

namespace specedge {

/// Matrix of the Bloch fiber Op0(theta) = sum (-1)^a (d+i theta)^a A[a][b] (d+i theta)^b
/// acting on periodic node values of one cell.  Hermitian with respect to the
/// uniform quadrature inner product (hence plainly Hermitian).
///
/// fourier_spectral assembles the Galerkin matrix on the span of the N grid
/// harmonics (exact integrals, free operator exactly diagonal); finite
/// differences use symmetric stencils of the stated order with the quasi-
/// momentum entering as a per-displacement phase factor.
Eigen::MatrixXcd assemble_bloch(const PeriodicOperatorSpec& op, const Discretization& disc,
                                double theta);

/// Matrix of exp(-i theta0 x) L exp(i theta0 x) on the cell grid (operator
/// convention: rows map node values to node values, quadrature weights appear
/// only inside integral kernels).
Eigen::MatrixXcd assemble_perturbation(const PerturbationOp& p, const Discretization& disc,
                                       double theta0);

/// Assembled L(t) = t L1 + t^2 L2 + t^3 (L3a + t L3b), conjugated by theta0.
/// Throws EpsOutOfRange for |t| > t_max.
Eigen::MatrixXcd assemble_family(const PerturbationFamily& fam, const Discretization& disc,
                                 double theta0, double t);

/// Spectral norm of the assembled L(t) (largest |eigenvalue|; the matrices are
/// Hermitian so this equals the largest singular value).
double operator_norm_estimate(const PerturbationFamily& fam, const Discretization& disc,
                              double theta0, double t);

/// max |M - M^H| relative to max(1, max |M|); assembly invariant helper.
double hermiticity_defect(const Eigen::MatrixXcd& M);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending, vectors
/// Euclidean-orthonormal.  Falls back to the real symmetric solver when the
/// imaginary part is at rounding level.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

EigenSystem eigensolve_hermitian(const Eigen::MatrixXcd& M, bool with_vectors = true);

/// Eigenvalues only (ascending).
Eigen::VectorXd eigenvalues_hermitian(const Eigen::MatrixXcd& M);

} // namespace specedge
