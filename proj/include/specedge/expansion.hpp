#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specedge/bands.hpp"

namespace specedge {

/// Cubic polynomial Lambda3(t) = c0 + c1 t + c2 t^2 + c3 t^3 collecting every
/// third-and-higher-order contribution of the trial-function expansion.
struct Lambda3Poly {
    std::array<double, 4> c{};

    double operator()(double t) const {
        return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    }
};

/// First-order rates and the rotated ground basis that diagonalizes the
/// leading perturbation inside the ground eigenspace.
struct EigenspaceDiagonalization {
    Eigen::VectorXd d;                ///< ascending first-order rates
    std::vector<GridFunction> basis;  ///< quadrature-orthonormal, phase-fixed
};

struct MinimizingTriple {
    int i0 = 0;
    double s_star = 0.0;
    double Lambda1 = 0.0; ///< the rate d[i0]; the minimized slope is s_star * Lambda1
};

/// Everything needed to evaluate the spectral-edge upper bound.
struct EdgeExpansion {
    Discretization disc;
    double theta0 = 0.0;
    double Lambda0 = 0.0;
    int multiplicity = 1;
    Eigen::VectorXd d;
    int i0 = 0;
    double s_minus = 0.0;
    double s_plus = 0.0;
    double s_star = 0.0;
    double Lambda1 = 0.0; ///< first-order rate d[i0] (coefficient of t = eps*s_star)
    double Lambda2 = 0.0;
    Lambda3Poly Lambda3;
    GridFunction psi0;
    GridFunction psi1;
    double psi1_norm_sq = 0.0;
    double rhs_ground_norm = 0.0; ///< ground-space component removed from the rhs
    double gap_at_theta0 = 0.0;
    double t_max = 0.0;
};

struct SolvedCorrector {
    GridFunction psi1;
    double rhs_ground_norm = 0.0;
};

struct Corollary1Report {
    bool preconditions_met = false;
    std::string detail;      ///< why preconditions failed, empty otherwise
    double margin = 0.0;     ///< -Lambda2 - gap * ||psi1||^2, >= 0 when the bound holds
    bool bound_holds = false;
};

/// Diagonalizes the conjugated first-order perturbation L1c restricted to the
/// ground eigenspace of `band`.  Rates come back ascending with matching
/// rotated basis vectors.
EigenspaceDiagonalization diagonalize_in_eigenspace(const BandData& band,
                                                    const Eigen::MatrixXcd& L1c);

/// Picks (i0, s_star) minimizing s*d_i over i and s in {s_minus, s_plus}.
/// Tie-breaks in order: smaller s^2 * Lambda2(i) (lazily evaluated), smaller
/// index i, then s = s_plus.
MinimizingTriple select_minimizing_triple(const Eigen::VectorXd& d, double s_minus,
                                          double s_plus,
                                          const std::function<double(int)>& lambda2_of);

/// First-order corrector: the unique solution of
///   (Op0(theta0) - Lambda0) psi1 = -(L1c - Lambda1) psi0
/// orthogonal to the ground eigenspace, computed in the eigenbasis cached on
/// `band`.  Throws IllConditionedSolve when the spectral gap cannot support
/// the inversion.
SolvedCorrector solve_psi1(const BandData& band, const GridFunction& psi0,
                           const Eigen::MatrixXcd& L1c, double Lambda1);

/// Lambda2 = Re (L1c psi1, psi0) + Re (L2c psi0, psi0).  Throws
/// NonRealCoefficient if the imaginary part is above rounding level.
double second_order_coefficient(const Eigen::MatrixXcd& L1c, const Eigen::MatrixXcd& L2c,
                                const GridFunction& psi0, const GridFunction& psi1);

/// Collects the residual cubic so that for phi = psi0 + t psi1 the Rayleigh
/// quotient of Op0 + L(t) equals
///   Lambda0 + t Lambda1 + t^2 Lambda2 + t^3 Lambda3(t) / (1 + t^2 ||psi1||^2).
Lambda3Poly third_order_polynomial(const Eigen::MatrixXcd& L1c, const Eigen::MatrixXcd& L2c,
                                   const Eigen::MatrixXcd& L3ac, const Eigen::MatrixXcd& L3bc,
                                   const GridFunction& psi0, const GridFunction& psi1,
                                   double Lambda1, double Lambda2, double psi1_norm_sq);

/// Full expansion pipeline at the band minimum for disorder amplitudes
/// supported in [s_minus, s_plus].
EdgeExpansion build_edge_expansion(const BandData& band, const PerturbationFamily& fam,
                                   double s_minus, double s_plus);

/// Upper bound on inf spec(Op0 + eps * s_star * ... ) at disorder strength eps:
///   Lambda0 + t L1 + t^2 L2 + t^3 Lambda3(t)/(1 + t^2 ||psi1||^2), t = eps*s_star.
double upper_bound(const EdgeExpansion& e, double eps);

/// Rayleigh quotient of the trial function psi0 + eps*s_star*psi1 for the
/// assembled fiber plus perturbation family, evaluated through the cached
/// spectral decomposition with extended-precision accumulation.  Must agree
/// with upper_bound(e, eps) to rounding; this is the structural identity that
/// validates the expansion coefficients.
double rayleigh_cross_check(const BandData& band, const EdgeExpansion& e,
                            const PerturbationFamily& fam, double eps);

/// Negativity certificate for Lambda2: under Lambda1 = 0 and L2 <= 0,
/// Lambda2 <= -gap * ||psi1||^2 must hold.  Violated preconditions are
/// reported, not thrown.
Corollary1Report corollary1_check(const EdgeExpansion& e, const Eigen::MatrixXcd& L2c);

} // namespace specedge
